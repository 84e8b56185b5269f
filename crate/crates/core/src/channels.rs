//! Identical single-qubit noise on all three qubits, and the evolved GHZ-mixture
//! expressions as printed, evaluated verbatim.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::discord::discord_symmetric_numeric;
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigenvalues, local_operator, pauli, ComplexMatrix, EIGEN_CLAMP};
use crate::lqu::lqu_numeric;
use crate::negativity::tripartite_negativity;
use crate::output::SweepRecord;
use crate::xstate::{make_ghz_mixed, GhzMixedFamily, XState};

/// Arguments of a square root or logarithm below `-ARG_TOL` make a printed form undefined.
pub const ARG_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelKind {
    Dephasing,
    Depolarizing,
    PhaseReversal,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] = [ChannelKind::Dephasing, ChannelKind::Depolarizing, ChannelKind::PhaseReversal];

    pub fn name(&self) -> &'static str {
        match self {
            ChannelKind::Dephasing => "dephasing",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::PhaseReversal => "phase-reversal",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dephasing" => Ok(ChannelKind::Dephasing),
            "depolarizing" => Ok(ChannelKind::Depolarizing),
            "phase-reversal" | "phase_reversal" => Ok(ChannelKind::PhaseReversal),
            other => Err(format!("unknown channel '{other}' (dephasing, depolarizing, phase-reversal)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Lqu,
    Negativity,
    Discord,
}

impl Quantifier {
    pub const ALL: [Quantifier; 3] = [Quantifier::Lqu, Quantifier::Negativity, Quantifier::Discord];

    pub fn name(&self) -> &'static str {
        match self {
            Quantifier::Lqu => "lqu",
            Quantifier::Negativity => "negativity",
            Quantifier::Discord => "discord",
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantifier {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lqu" => Ok(Quantifier::Lqu),
            "negativity" => Ok(Quantifier::Negativity),
            "discord" => Ok(Quantifier::Discord),
            other => Err(format!("unknown quantifier '{other}' (lqu, negativity, discord)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KrausSet {
    pub kind: ChannelKind,
    pub q: f64,
    pub operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    /// max |sum K^dagger K - 1|
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2);
        for k in &self.operators {
            sum = &sum + &(&k.dagger() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Domain { name, value, domain: "[0, 1]" });
    }
    Ok(())
}

pub fn kraus(kind: ChannelKind, q: f64) -> Result<KrausSet> {
    check_unit("q", q)?;
    let z = c(0.0, 0.0);
    let operators = match kind {
        ChannelKind::Dephasing => vec![
            ComplexMatrix::from_rows(&[c(1.0, 0.0), z, z, c((1.0 - q).sqrt(), 0.0)]),
            ComplexMatrix::from_rows(&[z, z, z, c(q.sqrt(), 0.0)]),
        ],
        ChannelKind::Depolarizing => {
            let mut ops = vec![pauli(0).scale_real((1.0 - 0.75 * q).sqrt())];
            ops.extend((1..=3).map(|i| pauli(i).scale_real(0.5 * q.sqrt())));
            ops
        }
        ChannelKind::PhaseReversal => {
            vec![pauli(0).scale_real((1.0 - q).sqrt()), pauli(3).scale_real(q.sqrt())]
        }
    };
    Ok(KrausSet { kind, q, operators })
}

/// sum_{ijk} (K_i (x) K_j (x) K_k) rho (K_i (x) K_j (x) K_k)^dagger
pub fn apply_product_channel(rho: &ComplexMatrix, ks: &KrausSet) -> Result<ComplexMatrix> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, got: rho.dim() });
    }
    let min = hermitian_eigenvalues(rho)?.last().copied().unwrap_or(0.0);
    if min < -EIGEN_CLAMP {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let mut out = ComplexMatrix::zeros(8);
    for a in &ks.operators {
        for b in &ks.operators {
            for g in &ks.operators {
                let k = local_operator(a, b, g);
                out = &out + &rho.conjugate_by(&k);
            }
        }
    }
    Ok(out)
}

pub fn evolve_x_state(x: &XState, ks: &KrausSet) -> Result<XState> {
    XState::from_dense(&apply_product_channel(&x.to_dense(), ks)?)
}

/// Evolved dense GHZ mixture.
pub fn evolved_ghz(channel: ChannelKind, p: f64, q: f64) -> Result<ComplexMatrix> {
    let x = make_ghz_mixed(GhzMixedFamily::new(p)?);
    apply_product_channel(&x.to_dense(), &kraus(channel, q)?)
}

/// Printed factor multiplying every off-diagonal entry under phase reversal.
pub fn phase_reversal_factor_printed(q: f64) -> f64 {
    1.0 + 10.0 * q * q - 6.0 * q * (1.0 + q * q)
}

/// The same factor implied by the phase-reversal Kraus operators.
pub fn phase_reversal_factor_kraus(q: f64) -> f64 {
    (1.0 - 2.0 * q).powi(3)
}

/// Printed evolved entries (rho'11, rho'22, rho'18) of the depolarized GHZ mixture.
pub fn depolarized_ghz_entries(p: f64, q: f64) -> (f64, f64, f64) {
    let keep = 1.0 - 1.5 * q + 0.75 * q * q;
    let flip = 0.5 * q - 0.25 * q * q;
    let r11 = (4.0 - 3.0 * p) / 8.0 * keep + 3.0 * p / 8.0 * flip;
    let r22 = p / 8.0 * keep + (4.0 - p) / 8.0 * flip;
    let r18 = (1.0 - p) * (1.0 - q).powi(3) / 2.0;
    (r11, r22, r18)
}

fn root(arg: f64, what: &str) -> Result<f64> {
    if arg < -ARG_TOL {
        return Err(Error::NumericalDomain(format!("square root of negative {what} ({arg:.6e})")));
    }
    Ok(arg.max(0.0).sqrt())
}

/// `coef * log2(arg)` with a vanishing argument contributing zero.
fn weighted_log(coef: f64, arg: f64) -> Result<f64> {
    if arg < -ARG_TOL {
        return Err(Error::NumericalDomain(format!("logarithm of negative argument ({arg:.6e})")));
    }
    if arg <= 0.0 || coef == 0.0 {
        return Ok(0.0);
    }
    Ok(coef * arg.log2())
}

fn xlog(arg: f64) -> Result<f64> {
    weighted_log(arg, arg)
}

/// Printed LQU for a coherence weight `k` under a diagonal-preserving channel: the
/// numerator carries `32 k - 1` and the radical `16 (1-p)^2 k_root`.
fn lqu_diagonal_preserving(p: f64, k_num: f64, k_root: f64) -> Result<f64> {
    let a = 4.0 - 3.0 * p;
    let r = root(a * a - 16.0 * (1.0 - p).powi(2) * k_root, "radical")?;
    Ok((1.0 - p).powi(2) * (32.0 * k_num - 1.0) / (8.0 * (a + r)))
}

/// Printed negativity for coherence amplitude `f` on an otherwise unchanged GHZ mixture.
fn negativity_diagonal_preserving(p: f64, f: f64) -> f64 {
    (p / 2.0).abs() + ((4.0 - 3.0 * p) / 4.0).abs() + ((p - 4.0 * (1.0 - p) * f) / 8.0).abs()
        + ((p + 4.0 * (1.0 - p) * f) / 8.0).abs()
        - 1.0
}

fn discord_diagonal_preserving(p: f64, f: f64) -> Result<f64> {
    let a = 4.0 - 3.0 * p;
    Ok((3.0 * p - 4.0) / 4.0 * a.log2() + xlog(a - 4.0 * (1.0 - p) * f)? / 8.0 + xlog(a + 4.0 * (1.0 - p) * f)? / 8.0)
}

/// Printed closed form of `quant` for the GHZ mixture after `channel`.
pub fn evolved_closed_form(channel: ChannelKind, quant: Quantifier, p: f64, q: f64) -> Result<f64> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    match channel {
        ChannelKind::Dephasing => {
            let k = (1.0 - q).powi(3);
            let f = (1.0 - q).powf(1.5);
            match quant {
                Quantifier::Lqu => lqu_diagonal_preserving(p, k, k),
                Quantifier::Negativity => Ok(negativity_diagonal_preserving(p, f)),
                Quantifier::Discord => discord_diagonal_preserving(p, f),
            }
        }
        ChannelKind::PhaseReversal => {
            let f = phase_reversal_factor_printed(q);
            match quant {
                Quantifier::Lqu => lqu_diagonal_preserving(p, f, f),
                Quantifier::Negativity => Ok(negativity_diagonal_preserving(p, f)),
                Quantifier::Discord => discord_diagonal_preserving(p, f),
            }
        }
        ChannelKind::Depolarizing => depolarizing_closed(quant, p, q),
    }
}

fn depolarizing_closed(quant: Quantifier, p: f64, q: f64) -> Result<f64> {
    let u = (1.0 - q).powi(3);
    match quant {
        Quantifier::Lqu => {
            let x = 4.0 - 3.0 * p + 3.0 * q * (1.0 - p) * (q - 2.0);
            let r = root(x * x - 16.0 * (1.0 - p).powi(2) * (1.0 - q).powi(6), "radical")?;
            let first = (1.0 - p).powi(2) * (1.0 - q).powi(2) * (16.0 * (1.0 - q).powi(4) - 1.0) / (8.0 * (x + r));
            let second = (4.0 - 3.0 * p - 3.0 * q * (1.0 - p) * (2.0 - q) - r) / 8.0;
            Ok(first + second)
        }
        Quantifier::Negativity => {
            let a = p - 2.0 * p * q + p * q * q + 2.0 * q - q * q;
            let b = 4.0 - 6.0 * q + 3.0 * q * q - 3.0 * p + 6.0 * p * q - 3.0 * p * q * q;
            Ok(0.5 * a.abs() + 0.25 * b.abs() - 1.0 + (a + 4.0 * (1.0 - p) * u).abs() / 8.0
                + (a - 4.0 * (1.0 - p) * u).abs() / 8.0)
        }
        Quantifier::Discord => {
            let a = (4.0 - 3.0 * p) * (1.0 - 1.5 * q + 0.75 * q * q) + 3.0 * p * (0.5 * q - 0.25 * q * q);
            let (bp, bm) = beta_pm(p, q);
            Ok(-xlog(a)? / 4.0 + xlog(bp)? / 8.0 + xlog(bm)? / 8.0)
        }
    }
}

/// The two arguments `beta_+`, `beta_-` of the depolarized discord.
pub fn beta_pm(p: f64, q: f64) -> (f64, f64) {
    let a = (4.0 - 3.0 * p) * (1.0 - 1.5 * q + 0.75 * q * q) + 3.0 * p * (0.5 * q - 0.25 * q * q);
    let d = 4.0 * (1.0 - p) * (1.0 - q).powi(3);
    (a + d, a - d)
}

/// `1 - w33` for the phase-reversed mixture with the printed w33, whose radical
/// carries `32 f - 1` where the printed LQU carries `f`.
pub fn phase_reversal_lqu_from_w33(p: f64, q: f64) -> Result<f64> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    let f = phase_reversal_factor_printed(q);
    let a = 4.0 - 3.0 * p;
    let k = 32.0 * f - 1.0;
    let r = root(a * a - 16.0 * (1.0 - p).powi(2) * k, "radical")?;
    let w33 = (32.0 * (1.0 - p) * (1.0 + (p - 1.0) * k) + (1.0 + p).powi(2)) / (8.0 * (a + r)) + (p + 2.0 * r) / (2.0 * (a + r));
    Ok(1.0 - w33)
}

/// Numerical value of `quant` on the evolved dense state.
pub fn evolved_oracle(channel: ChannelKind, quant: Quantifier, p: f64, q: f64) -> Result<f64> {
    let rho = evolved_ghz(channel, p, q)?;
    quantifier_numeric(quant, &rho)
}

pub fn quantifier_numeric(quant: Quantifier, rho: &ComplexMatrix) -> Result<f64> {
    match quant {
        Quantifier::Lqu => lqu_numeric(rho),
        Quantifier::Negativity => Ok(tripartite_negativity(rho)?.tripartite),
        Quantifier::Discord => discord_symmetric_numeric(rho),
    }
}

/// `n` evenly spaced points on [0, 1].
pub fn unit_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// One record per (p, q), p-major then q.
pub fn sweep_evolved(channel: ChannelKind, quant: Quantifier, p_list: &[f64], q_list: &[f64]) -> Result<Vec<SweepRecord>> {
    for &p in p_list {
        check_unit("p", p)?;
    }
    for &q in q_list {
        check_unit("q", q)?;
    }
    let points: Vec<(f64, f64)> = p_list.iter().flat_map(|&p| q_list.iter().map(move |&q| (p, q))).collect();
    points
        .par_iter()
        .map(|&(p, q)| {
            let closed = match evolved_closed_form(channel, quant, p, q) {
                Ok(v) => v,
                Err(Error::NumericalDomain(_)) => f64::NAN,
                Err(e) => return Err(e),
            };
            let oracle = evolved_oracle(channel, quant, p, q)?;
            Ok(SweepRecord::new("ghz", channel.name(), quant.name(), p, q, closed, oracle))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lqu::lqu_ghz;
    use crate::negativity::negativity_ghz;
    use crate::discord::discord_ghz;

    #[test]
    fn kraus_sets_are_complete() {
        for kind in ChannelKind::ALL {
            for q in [0.0, 0.3, 1.0] {
                let ks = kraus(kind, q).unwrap();
                assert!(ks.completeness_residual() < 1e-12);
            }
        }
        assert_eq!(kraus(ChannelKind::Depolarizing, 0.2).unwrap().operators.len(), 4);
        assert!(kraus(ChannelKind::Dephasing, 1.5).is_err());
    }

    #[test]
    fn dephasing_scales_coherence() {
        let q = 0.36;
        let x = make_ghz_mixed(GhzMixedFamily::new(0.2).unwrap());
        let y = evolve_x_state(&x, &kraus(ChannelKind::Dephasing, q).unwrap()).unwrap();
        assert!((y.anti()[0].re - x.anti()[0].re * (1.0 - q).powf(1.5)).abs() < 1e-14);
        for i in 0..8 {
            assert!((y.diag()[i] - x.diag()[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn depolarized_entries_match_printed() {
        let (p, q) = (0.3, 0.4);
        let x = make_ghz_mixed(GhzMixedFamily::new(p).unwrap());
        let y = evolve_x_state(&x, &kraus(ChannelKind::Depolarizing, q).unwrap()).unwrap();
        let (r11, r22, r18) = depolarized_ghz_entries(p, q);
        assert!((y.diag()[0] - r11).abs() < 1e-14);
        assert!((y.diag()[1] - r22).abs() < 1e-14);
        assert!((y.anti()[0].re - r18).abs() < 1e-14);
    }

    #[test]
    fn phase_reversal_coherence_factor() {
        for q in [0.0, 0.2, 0.5, 0.8, 1.0] {
            let x = make_ghz_mixed(GhzMixedFamily::new(0.4).unwrap());
            let y = evolve_x_state(&x, &kraus(ChannelKind::PhaseReversal, q).unwrap()).unwrap();
            let ratio = y.anti()[0].re / x.anti()[0].re;
            assert!((ratio - phase_reversal_factor_kraus(q)).abs() < 1e-13);
        }
        assert!((phase_reversal_factor_printed(0.5) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn q_zero_recovers_static_forms() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let fam = GhzMixedFamily::new(p).unwrap();
            for ch in ChannelKind::ALL {
                let l = evolved_closed_form(ch, Quantifier::Lqu, p, 0.0).unwrap();
                assert!((l - lqu_ghz(fam)).abs() < 1e-12, "{ch} p = {p}");
                let n = evolved_closed_form(ch, Quantifier::Negativity, p, 0.0).unwrap();
                assert!((n - negativity_ghz(fam)).abs() < 1e-12);
                let d = evolved_closed_form(ch, Quantifier::Discord, p, 0.0).unwrap();
                assert!((d - discord_ghz(fam)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn printed_dephasing_lqu_goes_negative() {
        let v = evolved_closed_form(ChannelKind::Dephasing, Quantifier::Lqu, 0.0, 0.75).unwrap();
        assert!((v + 0.5 / (8.0 * (4.0 + 15.75f64.sqrt()))).abs() < 1e-15);
    }

    #[test]
    fn sweep_is_p_major() {
        let recs = sweep_evolved(ChannelKind::Dephasing, Quantifier::Negativity, &[0.1, 0.5], &unit_grid(3)).unwrap();
        let pq: Vec<(f64, f64)> = recs.iter().map(|r| (r.p, r.q)).collect();
        assert_eq!(pq, vec![(0.1, 0.0), (0.1, 0.5), (0.1, 1.0), (0.5, 0.0), (0.5, 0.5), (0.5, 1.0)]);
    }
}
