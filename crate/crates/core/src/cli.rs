//! Command-line surface.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::channels::{apply_product_channel, evolved_closed_form, kraus, quantifier_numeric, sweep_evolved, unit_grid, ChannelKind, Quantifier};
use crate::discord::{discord_ghz, discord_x_closed};
use crate::figures::{figure_rows, FigureSpec};
use crate::lqu::{lqu, lqu_bell, lqu_ghz};
use crate::negativity::{negativity_bell, negativity_ghz};
use crate::oracles::{has_blocking_failure, summarize, verify_suite_with, Suite, VerifyConfig};
use crate::output::{write_figure_csv, write_sweep_csv};
use crate::xstate::{make_bell_type, make_ghz_mixed, BellTypeFamily, GhzMixedFamily, XState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Parser, Debug)]
#[command(name = "xcorr", version, about = "Correlations of three-qubit X states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print closed-form and oracle values for one state.
    Eval(EvalArgs),
    /// Write a (p, q) table for the GHZ mixture under a channel.
    Sweep(SweepArgs),
    /// Write the data of figure 1 to 8.
    Figure(FigureArgs),
    /// Run verification suites and write the discrepancy ledger.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ghz,
    Bell,
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, num_args = 3, value_names = ["C1", "C2", "C3"], allow_negative_numbers = true)]
    pub c: Option<Vec<f64>>,
    #[arg(long, value_name = "PATH", conflicts_with_all = ["family", "p", "c"])]
    pub state_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_parser = parse_quant)]
    pub quant: Vec<Quantifier>,
    #[arg(long, value_parser = parse_channel, requires = "q")]
    pub channel: Option<ChannelKind>,
    /// Channel strength.
    #[arg(long, requires = "channel")]
    pub q: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "ghz")]
    pub family: Family,
    #[arg(long, value_parser = parse_channel)]
    pub channel: ChannelKind,
    #[arg(long, value_parser = parse_quant)]
    pub quant: Vec<Quantifier>,
    /// Fixed mixedness; otherwise a grid of `--p-steps` points.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 51)]
    pub p_steps: usize,
    #[arg(long, default_value_t = 51)]
    pub q_steps: usize,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    pub id: String,
    /// Points along c (figure 1) or p (figure 2).
    #[arg(long, default_value_t = 51)]
    pub p_steps: usize,
    /// Points along q (figures 3 to 8).
    #[arg(long, default_value_t = 51)]
    pub q_steps: usize,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// One suite; all of them when absent.
    #[arg(long, value_parser = parse_suite)]
    pub suite: Vec<Suite>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = parse_seed, default_value = "0x5EED")]
    pub seed: u64,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, default_value_t = 51)]
    pub q_steps: usize,
}

fn parse_quant(s: &str) -> Result<Quantifier, String> {
    s.parse()
}

fn parse_channel(s: &str) -> Result<ChannelKind, String> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("seed '{s}' is not hexadecimal: {e}"))
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Figure(a) => cmd_figure(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    }
}

enum Source {
    Ghz(GhzMixedFamily),
    Bell(BellTypeFamily),
    File(XState),
}

fn resolve_state(a: &StateArgs) -> Result<Source, CliError> {
    if let Some(path) = &a.state_file {
        let text = std::fs::read_to_string(path)?;
        return Ok(Source::File(XState::parse_record(&text)?));
    }
    match a.family {
        Some(Family::Ghz) => {
            if a.c.is_some() {
                return Err(CliError::Usage("--c applies to --family bell".into()));
            }
            let p = a.p.ok_or_else(|| CliError::Usage("--family ghz needs --p".into()))?;
            Ok(Source::Ghz(GhzMixedFamily::new(p)?))
        }
        Some(Family::Bell) => {
            if a.p.is_some() {
                return Err(CliError::Usage("--p applies to --family ghz".into()));
            }
            let c = a.c.as_ref().ok_or_else(|| CliError::Usage("--family bell needs --c C1 C2 C3".into()))?;
            Ok(Source::Bell(BellTypeFamily::new(c[0], c[1], c[2])?))
        }
        None => Err(CliError::Usage("give --family or --state-file".into())),
    }
}

fn quant_list(q: &[Quantifier]) -> Vec<Quantifier> {
    if q.is_empty() { Quantifier::ALL.to_vec() } else { q.to_vec() }
}

fn fmt6(v: Option<f64>) -> String {
    match v {
        Some(v) if v.is_finite() => format!("{:.6}", if v.abs() < 5e-7 { 0.0 } else { v }),
        _ => "n/a".into(),
    }
}

fn static_closed(src: &Source, quant: Quantifier) -> Option<f64> {
    match (src, quant) {
        (Source::Ghz(f), Quantifier::Lqu) => Some(lqu_ghz(*f)),
        (Source::Ghz(f), Quantifier::Negativity) => Some(negativity_ghz(*f)),
        (Source::Ghz(f), Quantifier::Discord) => Some(discord_ghz(*f)),
        (Source::Bell(f), Quantifier::Lqu) => Some(lqu_bell(*f)),
        (Source::Bell(f), Quantifier::Negativity) => negativity_bell(*f),
        (Source::Bell(f), Quantifier::Discord) => discord_x_closed(&make_bell_type(*f)).ok().map(|d| d.discord),
        (Source::File(x), Quantifier::Lqu) => Some(lqu(x)),
        (Source::File(_), Quantifier::Negativity) => None,
        (Source::File(x), Quantifier::Discord) => discord_x_closed(x).ok().map(|d| d.discord),
    }
}

fn cmd_eval<W: Write>(a: &EvalArgs, out: &mut W) -> Result<i32, CliError> {
    let src = resolve_state(&a.state)?;
    let x = match &src {
        Source::Ghz(f) => make_ghz_mixed(*f),
        Source::Bell(f) => make_bell_type(*f),
        Source::File(x) => x.clone(),
    };
    let rho = match (a.channel, a.q) {
        (Some(ch), Some(q)) => apply_product_channel(&x.to_dense(), &kraus(ch, q)?)?,
        _ => x.to_dense(),
    };
    for quant in quant_list(&a.quant) {
        let closed = match (a.channel, a.q, &src) {
            (Some(ch), Some(q), Source::Ghz(f)) => evolved_closed_form(ch, quant, f.p(), q).ok(),
            (Some(_), _, _) => None,
            _ => static_closed(&src, quant),
        };
        let oracle = quantifier_numeric(quant, &rho);
        let note = oracle.as_ref().err().map(|e| format!(" ({e})")).unwrap_or_default();
        writeln!(out, "{} closed={} oracle={}{note}", quant.name(), fmt6(closed), fmt6(oracle.ok()))?;
    }
    Ok(EXIT_OK)
}

fn check_steps(name: &str, n: usize) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("{name} must be at least 2")));
    }
    Ok(())
}

fn open_out(path: &Option<PathBuf>) -> Result<Option<BufWriter<File>>, CliError> {
    Ok(match path {
        Some(p) => Some(BufWriter::new(File::create(p)?)),
        None => None,
    })
}

fn cmd_sweep<W: Write>(a: &SweepArgs, out: &mut W) -> Result<i32, CliError> {
    if a.family != Family::Ghz {
        return Err(CliError::Usage("channel closed forms exist for --family ghz only".into()));
    }
    check_steps("--q-steps", a.q_steps)?;
    let ps = match a.p {
        Some(p) => vec![p],
        None => {
            check_steps("--p-steps", a.p_steps)?;
            unit_grid(a.p_steps)
        }
    };
    let qs = unit_grid(a.q_steps);
    let mut records = Vec::new();
    for quant in quant_list(&a.quant) {
        records.extend(sweep_evolved(a.channel, quant, &ps, &qs)?);
    }
    match open_out(&a.out)? {
        Some(mut f) => {
            write_sweep_csv(&mut f, &records)?;
            f.flush()?;
        }
        None => write_sweep_csv(&mut *out, &records)?,
    }
    Ok(EXIT_OK)
}

fn cmd_figure<W: Write>(a: &FigureArgs, out: &mut W) -> Result<i32, CliError> {
    let id: u8 = a
        .id
        .trim_start_matches("fig")
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown figure '{}' (1 to 8)", a.id)))?;
    let steps = if id <= 2 { a.p_steps } else { a.q_steps };
    let spec = FigureSpec::new(id, steps).map_err(|e| CliError::Usage(e.to_string()))?;
    let rows = figure_rows(spec)?;
    match open_out(&a.out)? {
        Some(mut f) => {
            write_figure_csv(&mut f, &rows)?;
            f.flush()?;
        }
        None => write_figure_csv(&mut *out, &rows)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify<W: Write>(a: &VerifyArgs, out: &mut W) -> Result<i32, CliError> {
    check_steps("--q-steps", a.q_steps)?;
    let cfg = VerifyConfig { seed: a.seed, tolerance: a.tolerance, grid: a.q_steps, ..VerifyConfig::default() };
    let suites = if a.suite.is_empty() { Suite::ALL.to_vec() } else { a.suite.clone() };
    let mut cases = Vec::new();
    for suite in suites {
        cases.extend(verify_suite_with(suite, &cfg));
    }
    let summary = summarize(&cases);
    match open_out(&a.out)? {
        Some(mut f) => {
            crate::oracles::write_ledger_csv(&mut f, &cases)?;
            f.flush()?;
            write!(out, "{summary}")?;
        }
        None => {
            crate::oracles::write_ledger_csv(&mut *out, &cases)?;
            eprint!("{summary}");
        }
    }
    Ok(if has_blocking_failure(&cases) { EXIT_VERIFY_FAILED } else { EXIT_OK })
}
