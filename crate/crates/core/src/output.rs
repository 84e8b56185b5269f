//! CSV rows and number formatting shared by sweeps, figures and the ledger.

use std::io::Write;

/// `%.12g`-style rendering: 12 significant digits, trailing zeros dropped,
/// `nan` for undefined values.
pub fn fmt_sig(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { s }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub family: String,
    pub channel: String,
    pub quantifier: String,
    pub p: f64,
    pub q: f64,
    /// NaN where the printed form is undefined.
    pub value_closed: f64,
    pub value_oracle: f64,
    pub diff: f64,
}

impl SweepRecord {
    pub fn new(family: &str, channel: &str, quantifier: &str, p: f64, q: f64, closed: f64, oracle: f64) -> Self {
        Self {
            family: family.into(),
            channel: channel.into(),
            quantifier: quantifier.into(),
            p,
            q,
            value_closed: closed,
            value_oracle: oracle,
            diff: (closed - oracle).abs(),
        }
    }

    pub const HEADER: [&'static str; 8] = ["family", "channel", "quantifier", "p", "q", "value_closed", "value_oracle", "diff"];

    fn fields(&self) -> [String; 8] {
        [
            self.family.clone(),
            self.channel.clone(),
            self.quantifier.clone(),
            fmt_sig(self.p),
            fmt_sig(self.q),
            fmt_sig(self.value_closed),
            fmt_sig(self.value_oracle),
            fmt_sig(self.diff),
        ]
    }
}

pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SweepRecord::HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureRow {
    pub series: String,
    pub x: f64,
    pub value: f64,
}

pub fn write_figure_csv<W: Write>(out: W, rows: &[FigureRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["series", "x", "value"])?;
    for r in rows {
        w.write_record([r.series.clone(), fmt_sig(r.x), fmt_sig(r.value)])?;
    }
    w.flush()?;
    Ok(())
}
