//! Verification suites: every closed form paired with an independent numeric
//! computation, collected into a discrepancy ledger.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channels::{
    depolarized_ghz_entries, evolve_x_state, evolved_closed_form, evolved_ghz, kraus, phase_reversal_factor_kraus,
    phase_reversal_factor_printed, phase_reversal_lqu_from_w33, quantifier_numeric, unit_grid, ChannelKind,
    Quantifier,
};
use crate::discord::{discord_ghz, discord_symmetric_numeric, discord_x_closed};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigenvalues, matrix_sqrt_psd, ComplexMatrix};
use crate::lqu::{
    bell_w_diagonal, ghz_w_printed, lqu, lqu_bell, lqu_ghz, lqu_numeric, lqu_pure, qubit1_observable,
    skew_information, w_matrix_closed, w_matrix_numeric,
};
use crate::monogamy::{lqu_2q, lqu_2q_audit, monogamy_check, reduce_pair, w_matrix_2q, Pair};
use crate::negativity::{negativity_bell, negativity_ghz, tripartite_negativity};
use crate::output::fmt_sig;
use crate::sampling::{random_pure_state, random_x_states, seeded_rng, DEFAULT_SEED};
use crate::xstate::{make_bell_type, make_ghz_mixed, BellTypeFamily, GhzMixedFamily, PauliTensor, XState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Static,
    Dephasing,
    Depolarizing,
    PhaseReversal,
    Monogamy,
    Appendix,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Static, Suite::Dephasing, Suite::Depolarizing, Suite::PhaseReversal, Suite::Monogamy, Suite::Appendix];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Static => "static",
            Suite::Dephasing => "dephasing",
            Suite::Depolarizing => "depolarizing",
            Suite::PhaseReversal => "phase_reversal",
            Suite::Monogamy => "monogamy",
            Suite::Appendix => "appendix",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s || (s == "phase-reversal" && *suite == Suite::PhaseReversal))
            .ok_or_else(|| {
                format!("unknown suite '{s}' (static, dephasing, depolarizing, phase_reversal, monogamy, appendix)")
            })
    }
}

/// Closed forms and the suite that checks each of them.
pub const REGISTRY: &[(&str, Suite)] = &[
    ("eigenvalues_closed", Suite::Appendix),
    ("sqrt_closed", Suite::Appendix),
    ("w_matrix_closed", Suite::Appendix),
    ("fano_bloch_r", Suite::Appendix),
    ("fano_bloch_t", Suite::Appendix),
    ("lqu", Suite::Appendix),
    ("make_ghz_mixed", Suite::Static),
    ("make_bell_type", Suite::Static),
    ("skew_information", Suite::Static),
    ("lqu_pure", Suite::Static),
    ("lqu_ghz", Suite::Static),
    ("ghz_w11_printed", Suite::Static),
    ("ghz_w33_printed", Suite::Static),
    ("bell_w_diagonal", Suite::Static),
    ("lqu_bell", Suite::Static),
    ("negativity_ghz", Suite::Static),
    ("negativity_bell", Suite::Static),
    ("discord_ghz", Suite::Static),
    ("discord_x_closed", Suite::Static),
    ("dephasing/coherence_factor", Suite::Dephasing),
    ("dephasing/lqu", Suite::Dephasing),
    ("dephasing/negativity", Suite::Dephasing),
    ("dephasing/discord", Suite::Dephasing),
    ("depolarizing/entries", Suite::Depolarizing),
    ("depolarizing/lqu_q0", Suite::Depolarizing),
    ("depolarizing/lqu", Suite::Depolarizing),
    ("depolarizing/negativity", Suite::Depolarizing),
    ("depolarizing/discord", Suite::Depolarizing),
    ("phase_reversal/coherence_factor_kraus", Suite::PhaseReversal),
    ("phase_reversal/coherence_factor_printed", Suite::PhaseReversal),
    ("phase_reversal/lqu", Suite::PhaseReversal),
    ("phase_reversal/lqu_w33", Suite::PhaseReversal),
    ("phase_reversal/negativity", Suite::PhaseReversal),
    ("phase_reversal/discord", Suite::PhaseReversal),
    ("reduce_pair", Suite::Monogamy),
    ("lqu_2q", Suite::Monogamy),
    ("lqu_2q_ghz_w11", Suite::Monogamy),
    ("monogamy_check", Suite::Monogamy),
];

/// Cases built on the printed phase-reversal factor; their failures are expected.
const WHITELIST: &[&str] = &[
    "phase_reversal/coherence_factor_printed",
    "phase_reversal/lqu",
    "phase_reversal/lqu_w33",
    "phase_reversal/negativity",
    "phase_reversal/discord",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    UndefinedClosedForm,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::UndefinedClosedForm => "undefined-closed-form",
        }
    }
}

/// One comparison. For vector or matrix quantities `closed` and `oracle` hold a
/// representative scalar and `diff` the entrywise max-abs difference.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationCase {
    pub suite: Suite,
    pub name: &'static str,
    pub family: String,
    pub params: String,
    pub closed: f64,
    pub oracle: f64,
    pub diff: f64,
    pub tolerance: f64,
    pub status: Status,
    pub whitelisted: bool,
    pub note: String,
}

impl VerificationCase {
    pub fn is_blocking(&self) -> bool {
        self.status == Status::Fail && !self.whitelisted
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Replaces every per-case tolerance when set.
    pub tolerance: Option<f64>,
    /// Points per axis of the (p, q) grids.
    pub grid: usize,
    pub random_states: usize,
    /// Points of the static p grids.
    pub static_points: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, tolerance: None, grid: 51, random_states: 200, static_points: 101 }
    }
}

struct Builder<'a> {
    suite: Suite,
    cfg: &'a VerifyConfig,
}

impl Builder<'_> {
    fn case(&self, name: &'static str, family: &str, params: String, closed: Result<f64>, oracle: Result<f64>, tol: f64) -> VerificationCase {
        self.case_with_diff(name, family, params, closed, oracle, None, tol)
    }

    #[allow(clippy::too_many_arguments)]
    fn case_with_diff(
        &self,
        name: &'static str,
        family: &str,
        params: String,
        closed: Result<f64>,
        oracle: Result<f64>,
        diff: Option<f64>,
        tol: f64,
    ) -> VerificationCase {
        let tolerance = self.cfg.tolerance.unwrap_or(tol);
        let mut notes = Vec::new();
        let closed = closed.unwrap_or_else(|e| {
            notes.push(e.to_string());
            f64::NAN
        });
        let oracle_ok = oracle.is_ok();
        let oracle = oracle.unwrap_or_else(|e| {
            notes.push(format!("oracle error: {e}"));
            f64::NAN
        });
        let mut note = notes.join("; ");
        let diff = diff.unwrap_or((closed - oracle).abs());
        let status = if !oracle_ok {
            Status::Fail
        } else if closed.is_nan() {
            Status::UndefinedClosedForm
        } else if diff <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        if status == Status::Fail && closed < 0.0 && note.is_empty() {
            note = "printed form negative".into();
        }
        let whitelisted = status != Status::Pass && self.suite == Suite::PhaseReversal && WHITELIST.contains(&name);
        if whitelisted && note.is_empty() {
            note = "printed phase-reversal factor differs from the Kraus factor".into();
        }
        VerificationCase { suite: self.suite, name, family: family.into(), params, closed, oracle, diff, tolerance, status, whitelisted, note }
    }
}

fn ghz(p: f64) -> XState {
    make_ghz_mixed(GhzMixedFamily::new(p).expect("grid point in [0, 1]"))
}

fn p_param(p: f64) -> String {
    format!("p={}", fmt_sig(p))
}

fn pq_param(p: f64, q: f64) -> String {
    format!("p={};q={}", fmt_sig(p), fmt_sig(q))
}

fn c_param(cs: [f64; 3]) -> String {
    format!("c={};{};{}", fmt_sig(cs[0]), fmt_sig(cs[1]), fmt_sig(cs[2]))
}

/// Bell-type coefficient triples on a coarse grid inside the positivity ball.
pub fn bell_grid() -> Vec<[f64; 3]> {
    let vals = [0.0, 0.15, 0.3, 0.45];
    let mut out = Vec::new();
    for &a in &vals {
        for &b in &vals {
            for &g in &vals {
                if a * a + b * b + g * g <= 1.0 {
                    out.push([a, b, g]);
                }
            }
        }
    }
    out
}

/// Equal-coefficient Bell-type points on [0, 1/sqrt 3].
pub fn bell_equal_grid(n: usize) -> Vec<f64> {
    let top = 1.0 / 3f64.sqrt();
    unit_grid(n).into_iter().map(|t| t * top).collect()
}

pub fn verify_suite(suite: Suite) -> Vec<VerificationCase> {
    verify_suite_with(suite, &VerifyConfig::default())
}

pub fn verify_suite_with(suite: Suite, cfg: &VerifyConfig) -> Vec<VerificationCase> {
    let b = Builder { suite, cfg };
    match suite {
        Suite::Appendix => appendix_suite(&b),
        Suite::Static => static_suite(&b),
        Suite::Dephasing | Suite::Depolarizing | Suite::PhaseReversal => channel_suite(&b),
        Suite::Monogamy => monogamy_suite(&b),
    }
}

fn appendix_suite(b: &Builder) -> Vec<VerificationCase> {
    let states = random_x_states(b.cfg.seed, b.cfg.random_states);
    let per_state: Vec<Vec<VerificationCase>> = states
        .par_iter()
        .enumerate()
        .map(|(i, x)| appendix_cases(b, i, x))
        .collect();
    per_state.into_iter().flatten().collect()
}

fn appendix_cases(b: &Builder, i: usize, x: &XState) -> Vec<VerificationCase> {
    let params = format!("state={i}");
    let fam = "random-x";
    let dense = x.to_dense();
    let mut out = Vec::with_capacity(6);

    let mut closed_eigs = x.eigenvalues_closed().to_vec();
    closed_eigs.sort_by(|a, b| b.total_cmp(a));
    out.push(match hermitian_eigenvalues(&dense) {
        Ok(num) => {
            let d = closed_eigs.iter().zip(&num).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            b.case_with_diff("eigenvalues_closed", fam, params.clone(), Ok(closed_eigs[0]), Ok(num[0]), Some(d), 1e-9)
        }
        Err(e) => b.case("eigenvalues_closed", fam, params.clone(), Ok(closed_eigs[0]), Err(e), 1e-9),
    });

    let closed_sqrt = x.sqrt_closed().to_dense();
    out.push(match matrix_sqrt_psd(&dense) {
        Ok(num) => b.case_with_diff(
            "sqrt_closed",
            fam,
            params.clone(),
            Ok(closed_sqrt.trace().re),
            Ok(num.trace().re),
            Some(closed_sqrt.max_abs_diff(&num)),
            1e-9,
        ),
        Err(e) => b.case("sqrt_closed", fam, params.clone(), Ok(closed_sqrt.trace().re), Err(e), 1e-9),
    });

    let wc = w_matrix_closed(x);
    out.push(match w_matrix_numeric(&dense) {
        Ok(wn) => b.case_with_diff(
            "w_matrix_closed",
            fam,
            params.clone(),
            Ok(wc.lambda_max()),
            Ok(wn.lambda_max()),
            Some(wc.max_abs_diff(&wn)),
            1e-9,
        ),
        Err(e) => b.case("w_matrix_closed", fam, params.clone(), Ok(wc.lambda_max()), Err(e), 1e-9),
    });

    let sum_abs = |t: &PauliTensor| t.coeffs.iter().flatten().flatten().map(|v| v.abs()).sum::<f64>();
    let rc = x.fano_bloch_r();
    let rn = PauliTensor::of_dense(&dense);
    out.push(b.case_with_diff("fano_bloch_r", fam, params.clone(), Ok(sum_abs(&rc)), Ok(sum_abs(&rn)), Some(rc.max_abs_diff(&rn)), 1e-9));
    let tc = x.fano_bloch_t();
    out.push(match matrix_sqrt_psd(&dense) {
        Ok(s) => {
            let tn = PauliTensor::of_dense(&s);
            b.case_with_diff("fano_bloch_t", fam, params.clone(), Ok(sum_abs(&tc)), Ok(sum_abs(&tn)), Some(tc.max_abs_diff(&tn)), 1e-9)
        }
        Err(e) => b.case("fano_bloch_t", fam, params.clone(), Ok(sum_abs(&tc)), Err(e), 1e-9),
    });

    out.push(b.case("lqu", fam, params, Ok(lqu(x)), lqu_numeric(&dense), 1e-8));
    out
}

fn static_suite(b: &Builder) -> Vec<VerificationCase> {
    let mut out = Vec::new();
    let ps = unit_grid(b.cfg.static_points);
    let coarse = unit_grid(11);

    for &p in &coarse {
        let direct = {
            let mut ghz_ket = vec![c(0.0, 0.0); 8];
            ghz_ket[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            ghz_ket[7] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let pure = ComplexMatrix::outer(&ghz_ket).scale_real(1.0 - p);
            &ComplexMatrix::identity(8).scale_real(p / 8.0) + &pure
        };
        let built = ghz(p).to_dense();
        out.push(b.case_with_diff("make_ghz_mixed", "ghz", p_param(p), Ok(built[(0, 7)].re), Ok(direct[(0, 7)].re), Some(built.max_abs_diff(&direct)), 1e-14));
    }
    for cs in bell_grid() {
        let fam = BellTypeFamily::new(cs[0], cs[1], cs[2]).expect("grid inside the ball");
        let built = make_bell_type(fam).to_dense();
        let mut t = PauliTensor::zero();
        t.coeffs[0][0][0] = 1.0;
        for (i, &ci) in cs.iter().enumerate() {
            t.coeffs[i + 1][i + 1][i + 1] = ci;
        }
        let direct = t.reconstruct();
        out.push(b.case_with_diff("make_bell_type", "bell", c_param(cs), Ok(built[(0, 7)].re), Ok(direct[(0, 7)].re), Some(built.max_abs_diff(&direct)), 1e-14));
    }

    // pure-state identities on seeded random states
    let mut rng = seeded_rng(b.cfg.seed);
    for i in 0..100 {
        let psi = random_pure_state(&mut rng, 8);
        let rho = ComplexMatrix::outer(&psi);
        out.push(b.case("lqu_pure", "random-pure", format!("state={i}"), lqu_pure(&psi), lqu_numeric(&rho), 1e-8));
        let n = {
            let v: [f64; 3] = [psi[0].re, psi[1].im, psi[2].re];
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.map(|a| a / norm)
        };
        let k = qubit1_observable(n);
        let mean = (&rho * &k).trace().re;
        let sq = (&rho * &(&k * &k)).trace().re;
        out.push(b.case("skew_information", "random-pure", format!("state={i}"), skew_information(&rho, &k), Ok(sq - mean * mean), 1e-9));
    }

    let ghz_rows: Vec<Vec<VerificationCase>> = ps
        .par_iter()
        .map(|&p| {
            let fam = GhzMixedFamily::new(p).expect("grid point in [0, 1]");
            let x = make_ghz_mixed(fam);
            let dense = x.to_dense();
            let wn = w_matrix_numeric(&dense);
            let (w11, w33) = ghz_w_printed(fam);
            vec![
                b.case("lqu_ghz", "ghz", p_param(p), Ok(lqu_ghz(fam)), lqu_numeric(&dense), 1e-8),
                b.case("ghz_w11_printed", "ghz", p_param(p), Ok(w11), wn.clone().map(|w| w.get(0, 0)), 1e-9),
                b.case("ghz_w33_printed", "ghz", p_param(p), Ok(w33), wn.map(|w| w.get(2, 2)), 1e-9),
                b.case("negativity_ghz", "ghz", p_param(p), Ok(negativity_ghz(fam)), tripartite_negativity(&dense).map(|r| r.tripartite), 1e-9),
                b.case("discord_x_closed", "ghz", format!("{};vs=discord_ghz", p_param(p)), discord_x_closed(&x).map(|d| d.discord), Ok(discord_ghz(fam)), 1e-9),
            ]
        })
        .collect();
    out.extend(ghz_rows.into_iter().flatten());

    for cs in bell_grid() {
        let fam = BellTypeFamily::new(cs[0], cs[1], cs[2]).expect("grid inside the ball");
        let dense = make_bell_type(fam).to_dense();
        let printed = bell_w_diagonal(fam);
        let wn = w_matrix_numeric(&dense);
        let d = wn.clone().map(|w| (0..3).map(|i| (w.get(i, i) - printed[i]).abs()).fold(0.0, f64::max));
        out.push(match (wn, d) {
            (Ok(w), Ok(d)) => b.case_with_diff("bell_w_diagonal", "bell", c_param(cs), Ok(printed[0]), Ok(w.get(0, 0)), Some(d), 1e-9),
            (Err(e), _) | (_, Err(e)) => b.case("bell_w_diagonal", "bell", c_param(cs), Ok(printed[0]), Err(e), 1e-9),
        });
        out.push(b.case("lqu_bell", "bell", c_param(cs), Ok(lqu_bell(fam)), lqu_numeric(&dense), 1e-8));
    }
    for cc in bell_equal_grid(11) {
        let fam = BellTypeFamily::new(cc, cc, cc).expect("equal coefficients inside the ball");
        let dense = make_bell_type(fam).to_dense();
        out.push(b.case("lqu_bell", "bell", c_param([cc; 3]), Ok(lqu_bell(fam)), lqu_numeric(&dense), 1e-8));
        let closed = negativity_bell(fam).ok_or_else(|| Error::OutOfClass("unequal coefficients".into()));
        out.push(b.case("negativity_bell", "bell", c_param([cc; 3]), closed, tripartite_negativity(&dense).map(|r| r.tripartite), 1e-10));
    }

    // measurement-optimised discord
    let oracle_rows: Vec<VerificationCase> = coarse
        .par_iter()
        .flat_map(|&p| {
            let fam = GhzMixedFamily::new(p).expect("grid point in [0, 1]");
            let x = make_ghz_mixed(fam);
            let num = discord_symmetric_numeric(&x.to_dense());
            vec![
                b.case("discord_ghz", "ghz", p_param(p), Ok(discord_ghz(fam)), num.clone(), 1e-8),
                b.case("discord_x_closed", "ghz", p_param(p), discord_x_closed(&x).map(|d| d.discord), num, 5e-3),
            ]
        })
        .collect();
    out.extend(oracle_rows);
    let bell_rows: Vec<VerificationCase> = bell_equal_grid(6)
        .par_iter()
        .map(|&cc| {
            let x = make_bell_type(BellTypeFamily::new(cc, cc, cc).expect("inside the ball"));
            b.case("discord_x_closed", "bell", c_param([cc; 3]), discord_x_closed(&x).map(|d| d.discord), discord_symmetric_numeric(&x.to_dense()), 5e-3)
        })
        .collect();
    out.extend(bell_rows);
    out
}

fn channel_of(suite: Suite) -> ChannelKind {
    match suite {
        Suite::Dephasing => ChannelKind::Dephasing,
        Suite::Depolarizing => ChannelKind::Depolarizing,
        _ => ChannelKind::PhaseReversal,
    }
}

fn channel_name(channel: ChannelKind, quant: Quantifier) -> &'static str {
    match (channel, quant) {
        (ChannelKind::Dephasing, Quantifier::Lqu) => "dephasing/lqu",
        (ChannelKind::Dephasing, Quantifier::Negativity) => "dephasing/negativity",
        (ChannelKind::Dephasing, Quantifier::Discord) => "dephasing/discord",
        (ChannelKind::Depolarizing, Quantifier::Lqu) => "depolarizing/lqu",
        (ChannelKind::Depolarizing, Quantifier::Negativity) => "depolarizing/negativity",
        (ChannelKind::Depolarizing, Quantifier::Discord) => "depolarizing/discord",
        (ChannelKind::PhaseReversal, Quantifier::Lqu) => "phase_reversal/lqu",
        (ChannelKind::PhaseReversal, Quantifier::Negativity) => "phase_reversal/negativity",
        (ChannelKind::PhaseReversal, Quantifier::Discord) => "phase_reversal/discord",
    }
}

fn channel_suite(b: &Builder) -> Vec<VerificationCase> {
    let channel = channel_of(b.suite);
    let grid = unit_grid(b.cfg.grid);
    let mut out = Vec::new();
    let probe_p = 0.3;
    let x = ghz(probe_p);

    match channel {
        ChannelKind::Dephasing => {
            for &q in &grid {
                let ratio = kraus(channel, q).and_then(|ks| evolve_x_state(&x, &ks)).map(|y| y.anti()[0].re / x.anti()[0].re);
                out.push(b.case("dephasing/coherence_factor", "ghz", pq_param(probe_p, q), Ok((1.0 - q).powf(1.5)), ratio, 1e-12));
            }
        }
        ChannelKind::Depolarizing => {
            let coarse = unit_grid(11);
            for &p in &coarse {
                for &q in &coarse {
                    let (r11, r22, r18) = depolarized_ghz_entries(p, q);
                    let evolved = kraus(channel, q).and_then(|ks| evolve_x_state(&ghz(p), &ks));
                    let d = evolved.clone().map(|y| {
                        (y.diag()[0] - r11).abs().max((y.diag()[1] - r22).abs()).max((y.anti()[0].re - r18).abs())
                    });
                    out.push(match d {
                        Ok(d) => b.case_with_diff("depolarizing/entries", "ghz", pq_param(p, q), Ok(r11), evolved.map(|y| y.diag()[0]), Some(d), 1e-12),
                        Err(e) => b.case("depolarizing/entries", "ghz", pq_param(p, q), Ok(r11), Err(e), 1e-12),
                    });
                }
            }
            for p in unit_grid(b.cfg.static_points) {
                let fam = GhzMixedFamily::new(p).expect("grid point in [0, 1]");
                out.push(b.case("depolarizing/lqu_q0", "ghz", p_param(p), evolved_closed_form(channel, Quantifier::Lqu, p, 0.0), Ok(lqu_ghz(fam)), 1e-10));
            }
        }
        ChannelKind::PhaseReversal => {
            for &q in &grid {
                let ratio = kraus(channel, q).and_then(|ks| evolve_x_state(&x, &ks)).map(|y| y.anti()[0].re / x.anti()[0].re);
                out.push(b.case("phase_reversal/coherence_factor_kraus", "ghz", pq_param(probe_p, q), Ok(phase_reversal_factor_kraus(q)), ratio.clone(), 1e-12));
                out.push(b.case("phase_reversal/coherence_factor_printed", "ghz", pq_param(probe_p, q), Ok(phase_reversal_factor_printed(q)), ratio, 1e-12));
            }
        }
    }

    let mut points: Vec<(f64, f64)> = grid.iter().flat_map(|&p| grid.iter().map(move |&q| (p, q))).collect();
    if channel == ChannelKind::Dephasing {
        // the printed LQU is negative here
        points.push((0.0, 0.75));
    }
    let rows: Vec<Vec<VerificationCase>> = points
        .par_iter()
        .map(|&(p, q)| {
            let rho = evolved_ghz(channel, p, q);
            let mut row = Vec::with_capacity(4);
            for quant in Quantifier::ALL {
                let oracle = rho.clone().and_then(|r| quantifier_numeric(quant, &r));
                let closed = evolved_closed_form(channel, quant, p, q);
                row.push(b.case(channel_name(channel, quant), "ghz", pq_param(p, q), closed, oracle.clone(), 1e-8));
                if channel == ChannelKind::PhaseReversal && quant == Quantifier::Lqu {
                    row.push(b.case("phase_reversal/lqu_w33", "ghz", pq_param(p, q), phase_reversal_lqu_from_w33(p, q), oracle, 1e-8));
                }
            }
            row
        })
        .collect();
    out.extend(rows.into_iter().flatten());
    out
}

fn monogamy_suite(b: &Builder) -> Vec<VerificationCase> {
    let mut out = Vec::new();
    for p in unit_grid(21) {
        let x = ghz(p);
        let printed = ComplexMatrix::from_real_diagonal(&[(2.0 - p) / 4.0, p / 4.0, p / 4.0, (2.0 - p) / 4.0]);
        for (pair, label) in [(Pair::TwoThree, "23"), (Pair::OneThree, "13")] {
            let red = reduce_pair(&x, pair);
            out.push(b.case_with_diff("reduce_pair", "ghz", format!("{};pair={label}", p_param(p)), Ok(printed[(0, 0)].re), Ok(red[(0, 0)].re), Some(red.max_abs_diff(&printed)), 1e-14));
        }
        let w = w_matrix_2q(&reduce_pair(&x, Pair::TwoThree));
        out.push(b.case("lqu_2q_ghz_w11", "ghz", p_param(p), Ok((p * (2.0 - p)).sqrt()), w.map(|w| w.get(0, 0)), 1e-9));
        out.extend(monogamy_cases(b, "ghz", p_param(p), &x));
    }
    let quarter = ComplexMatrix::identity(4).scale_real(0.25);
    for cs in bell_grid().into_iter().filter(|cs| cs[0] == cs[1] && cs[1] == cs[2]).chain(bell_equal_grid(6).into_iter().map(|v| [v; 3])) {
        let x = make_bell_type(BellTypeFamily::new(cs[0], cs[1], cs[2]).expect("inside the ball"));
        for (pair, label) in [(Pair::TwoThree, "23"), (Pair::OneThree, "13")] {
            let red = reduce_pair(&x, pair);
            out.push(b.case_with_diff("reduce_pair", "bell", format!("{};pair={label}", c_param(cs)), Ok(0.25), Ok(red[(0, 0)].re), Some(red.max_abs_diff(&quarter)), 1e-14));
        }
        out.extend(monogamy_cases(b, "bell", c_param(cs), &x));
    }
    for (i, x) in random_x_states(b.cfg.seed, 10).iter().enumerate() {
        let red = reduce_pair(x, Pair::OneTwo);
        out.push(b.case("lqu_2q", "random-x", format!("state={i};pair=12"), lqu_2q(&red), lqu_2q_audit(&red, 720).map(|m| m.value), 1e-8));
    }
    out
}

fn monogamy_cases(b: &Builder, family: &str, params: String, x: &XState) -> Vec<VerificationCase> {
    let report = monogamy_check(x);
    let pairwise = report.clone().map(|r| r.u_1_2 + r.u_1_3);
    let violation = report.map(|r| (-r.slack).max(0.0));
    vec![
        b.case("monogamy_check", family, format!("{params};term=pairwise"), pairwise, Ok(0.0), 1e-10),
        b.case("monogamy_check", family, format!("{params};term=violation"), violation, Ok(0.0), 1e-9),
    ]
}

pub fn has_blocking_failure(cases: &[VerificationCase]) -> bool {
    cases.iter().any(VerificationCase::is_blocking)
}

pub fn write_ledger_csv<W: Write>(out: W, cases: &[VerificationCase]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["suite", "name", "family", "params", "closed", "oracle", "diff", "tolerance", "status", "whitelisted", "note"])?;
    for k in cases {
        w.write_record([
            k.suite.name().to_string(),
            k.name.to_string(),
            k.family.clone(),
            k.params.clone(),
            fmt_sig(k.closed),
            fmt_sig(k.oracle),
            fmt_sig(k.diff),
            fmt_sig(k.tolerance),
            k.status.as_str().to_string(),
            k.whitelisted.to_string(),
            k.note.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-check counts in first-appearance order.
pub fn summarize(cases: &[VerificationCase]) -> String {
    let mut groups: Vec<(Suite, &str, [usize; 4], f64)> = Vec::new();
    for k in cases {
        let idx = match groups.iter().position(|g| g.0 == k.suite && g.1 == k.name) {
            Some(i) => i,
            None => {
                groups.push((k.suite, k.name, [0; 4], 0.0));
                groups.len() - 1
            }
        };
        let g = &mut groups[idx];
        match (k.status, k.whitelisted) {
            (Status::Pass, _) => g.2[0] += 1,
            (Status::Fail, false) => g.2[1] += 1,
            (Status::Fail, true) => g.2[2] += 1,
            (Status::UndefinedClosedForm, _) => g.2[3] += 1,
        }
        if k.status != Status::UndefinedClosedForm && k.diff.is_finite() {
            g.3 = g.3.max(k.diff);
        }
    }
    let mut s = String::new();
    for (suite, name, [pass, fail, white, undef], worst) in &groups {
        let total = pass + fail + white + undef;
        let mark = if *fail > 0 { "FAIL" } else { "ok" };
        let label = if name.contains('/') { name.to_string() } else { format!("{suite}/{name}") };
        s.push_str(&format!(
            "{mark:4} {label}: {pass}/{total} pass, {fail} fail, {white} whitelisted, {undef} undefined, max diff {}\n",
            fmt_sig(*worst)
        ));
    }
    let blocking = cases.iter().filter(|k| k.is_blocking()).count();
    s.push_str(&format!("{} cases, {blocking} blocking failures\n", cases.len()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn small() -> VerifyConfig {
        VerifyConfig { grid: 3, random_states: 5, static_points: 5, ..VerifyConfig::default() }
    }

    #[test]
    fn registry_names_are_unique() {
        let names: HashSet<&str> = REGISTRY.iter().map(|r| r.0).collect();
        assert_eq!(names.len(), REGISTRY.len());
    }

    #[test]
    fn every_registered_form_is_checked_by_its_suite_only() {
        let cfg = small();
        let mut seen: Vec<(Suite, HashSet<&str>)> = Vec::new();
        for suite in [Suite::Appendix, Suite::Monogamy, Suite::Dephasing, Suite::Depolarizing, Suite::PhaseReversal] {
            let names = verify_suite_with(suite, &cfg).iter().map(|k| k.name).collect();
            seen.push((suite, names));
        }
        for (name, suite) in REGISTRY {
            if *suite == Suite::Static {
                continue;
            }
            for (s, names) in &seen {
                assert_eq!(names.contains(name), s == suite, "{name} in {s}");
            }
        }
        for (s, names) in &seen {
            for n in names {
                assert!(REGISTRY.iter().any(|(r, rs)| r == n && rs == s), "{n} not registered for {s}");
            }
        }
    }

    #[test]
    fn appendix_passes_on_a_small_sample() {
        let cases = verify_suite_with(Suite::Appendix, &small());
        assert!(cases.iter().all(|k| k.status == Status::Pass), "{}", summarize(&cases));
    }

    #[test]
    fn phase_reversal_failures_are_whitelisted() {
        let cases = verify_suite_with(Suite::PhaseReversal, &small());
        assert!(!has_blocking_failure(&cases), "{}", summarize(&cases));
        assert!(cases.iter().any(|k| k.whitelisted));
    }

    #[test]
    fn ledger_is_deterministic() {
        let render = || {
            let mut buf = Vec::new();
            write_ledger_csv(&mut buf, &verify_suite_with(Suite::Monogamy, &small())).unwrap();
            buf
        };
        assert_eq!(render(), render());
    }
}
