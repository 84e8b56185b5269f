//! Data behind the eight plots: closed and oracle series side by side.

use rayon::prelude::*;

use crate::channels::{evolved_closed_form, evolved_oracle, unit_grid, ChannelKind, Quantifier};
use crate::discord::{discord_ghz, discord_symmetric_numeric};
use crate::error::{Error, Result};
use crate::lqu::{lqu_bell, lqu_ghz, lqu_numeric};
use crate::negativity::{negativity_bell, negativity_ghz, tripartite_negativity};
use crate::output::{fmt_sig, FigureRow};
use crate::xstate::{make_bell_type, make_ghz_mixed, BellTypeFamily, GhzMixedFamily};

/// Mixedness values drawn in the channel figures.
pub const CHANNEL_FIGURE_P: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FigureSpec {
    pub id: u8,
    /// Points along the horizontal axis.
    pub steps: usize,
}

impl FigureSpec {
    pub fn new(id: u8, steps: usize) -> Result<Self> {
        if !(1..=8).contains(&id) {
            return Err(Error::Domain { name: "figure", value: id as f64, domain: "1..=8" });
        }
        if steps < 2 {
            return Err(Error::Domain { name: "steps", value: steps as f64, domain: ">= 2" });
        }
        Ok(Self { id, steps })
    }

    /// Channel and quantifiers of figures 3 to 8.
    pub fn channel_setup(&self) -> Option<(ChannelKind, &'static [Quantifier])> {
        const LQU_DISCORD: &[Quantifier] = &[Quantifier::Lqu, Quantifier::Discord];
        const NEG: &[Quantifier] = &[Quantifier::Negativity];
        match self.id {
            3 => Some((ChannelKind::Dephasing, LQU_DISCORD)),
            4 => Some((ChannelKind::Dephasing, NEG)),
            5 => Some((ChannelKind::Depolarizing, LQU_DISCORD)),
            6 => Some((ChannelKind::Depolarizing, NEG)),
            7 => Some((ChannelKind::PhaseReversal, LQU_DISCORD)),
            8 => Some((ChannelKind::PhaseReversal, NEG)),
            _ => None,
        }
    }
}

fn nan_on_domain(v: Result<f64>) -> Result<f64> {
    match v {
        Err(Error::NumericalDomain(_)) => Ok(f64::NAN),
        other => other,
    }
}

/// Series name for a channel curve, e.g. `lqu_closed_p=0.3`.
pub fn channel_series(quant: Quantifier, kind: &str, p: f64) -> String {
    format!("{}_{kind}_p={}", quant.name(), fmt_sig(p))
}

/// Rows grouped by series, each series ordered by x.
pub fn figure_rows(spec: FigureSpec) -> Result<Vec<FigureRow>> {
    match spec.id {
        1 => figure_bell(spec.steps),
        2 => figure_ghz(spec.steps),
        _ => {
            let (channel, quants) = spec.channel_setup().expect("ids 3..=8 carry a channel");
            figure_channel(channel, quants, spec.steps)
        }
    }
}

fn push_series(rows: &mut Vec<FigureRow>, name: &str, xs: &[f64], values: &[f64]) {
    rows.extend(xs.iter().zip(values).map(|(&x, &value)| FigureRow { series: name.to_string(), x, value }));
}

fn figure_bell(steps: usize) -> Result<Vec<FigureRow>> {
    let top = 1.0 / 3f64.sqrt();
    let cs: Vec<f64> = unit_grid(steps).into_iter().map(|t| t * top).collect();
    let vals: Vec<[f64; 4]> = cs
        .par_iter()
        .map(|&cc| {
            let fam = BellTypeFamily::new(cc, cc, cc)?;
            let dense = make_bell_type(fam).to_dense();
            let neg = negativity_bell(fam).expect("equal coefficients");
            Ok([lqu_bell(fam), lqu_numeric(&dense)?, neg, tripartite_negativity(&dense)?.tripartite])
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (k, name) in ["lqu_closed", "lqu_oracle", "negativity_closed", "negativity_oracle"].iter().enumerate() {
        let col: Vec<f64> = vals.iter().map(|v| v[k]).collect();
        push_series(&mut rows, name, &cs, &col);
    }
    Ok(rows)
}

fn figure_ghz(steps: usize) -> Result<Vec<FigureRow>> {
    let ps = unit_grid(steps);
    let vals: Vec<[f64; 6]> = ps
        .par_iter()
        .map(|&p| {
            let fam = GhzMixedFamily::new(p)?;
            let dense = make_ghz_mixed(fam).to_dense();
            Ok([
                lqu_ghz(fam),
                lqu_numeric(&dense)?,
                negativity_ghz(fam),
                tripartite_negativity(&dense)?.tripartite,
                discord_ghz(fam),
                discord_symmetric_numeric(&dense)?,
            ])
        })
        .collect::<Result<_>>()?;
    let names = ["lqu_closed", "lqu_oracle", "negativity_closed", "negativity_oracle", "discord_closed", "discord_oracle"];
    let mut rows = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let col: Vec<f64> = vals.iter().map(|v| v[k]).collect();
        push_series(&mut rows, name, &ps, &col);
    }
    Ok(rows)
}

fn figure_channel(channel: ChannelKind, quants: &[Quantifier], steps: usize) -> Result<Vec<FigureRow>> {
    let qs = unit_grid(steps);
    let mut rows = Vec::new();
    for &quant in quants {
        for p in CHANNEL_FIGURE_P {
            let pairs: Vec<(f64, f64)> = qs
                .par_iter()
                .map(|&q| Ok((nan_on_domain(evolved_closed_form(channel, quant, p, q))?, evolved_oracle(channel, quant, p, q)?)))
                .collect::<Result<_>>()?;
            let closed: Vec<f64> = pairs.iter().map(|v| v.0).collect();
            let oracle: Vec<f64> = pairs.iter().map(|v| v.1).collect();
            push_series(&mut rows, &channel_series(quant, "closed", p), &qs, &closed);
            push_series(&mut rows, &channel_series(quant, "oracle", p), &qs, &oracle);
        }
    }
    Ok(rows)
}

/// Values of one series in x order.
pub fn series<'a>(rows: &'a [FigureRow], name: &str) -> Vec<&'a FigureRow> {
    rows.iter().filter(|r| r.series == name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_ids() {
        assert!(FigureSpec::new(0, 51).is_err());
        assert!(FigureSpec::new(9, 51).is_err());
        assert!(FigureSpec::new(3, 1).is_err());
    }

    #[test]
    fn bell_figure_endpoint() {
        let rows = figure_rows(FigureSpec::new(1, 11).unwrap()).unwrap();
        let lqu = series(&rows, "lqu_closed");
        let last = lqu.last().unwrap();
        assert!((last.x - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((last.value - 2.0 / 3.0).abs() < 1e-12);
        assert!(series(&rows, "negativity_oracle").iter().all(|r| r.value.abs() < 1e-10));
    }

    #[test]
    fn negativity_figure_matches_oracle_away_from_domain_gaps() {
        let rows = figure_rows(FigureSpec::new(4, 11).unwrap()).unwrap();
        let closed = series(&rows, "negativity_closed_p=0.5");
        let oracle = series(&rows, "negativity_oracle_p=0.5");
        for (a, b) in closed.iter().zip(&oracle) {
            assert!((a.value - b.value).abs() < 1e-10, "q = {}", a.x);
        }
    }
}
