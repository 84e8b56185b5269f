//! Tripartite quantum discord of permutation-symmetric states.
//!
//! `D = S(1|23) + S(rho_12) - S(rho)` where `S(1|23)` is the conditional
//! entropy of qubit 1 minimised over rank-one projective measurements on
//! qubits 2 and 3.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{c, partial_trace, permute_qubits, to_lexicographic, von_neumann_entropy, ComplexMatrix, C64};
use crate::optimize::nelder_mead;
use crate::xstate::{GhzMixedFamily, XState};

/// Arguments of a logarithm below `-LOG_TOL` are a domain error; above it they are clamped.
pub const LOG_TOL: f64 = 1e-12;
/// Largest entrywise deviation under a qubit swap accepted as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-9;
pub const DEFAULT_ORACLE_SEED: u64 = 0x5EED;

/// `coef * log2(arg)`, zero when the argument vanishes.
fn weighted_log(coef: f64, arg: f64) -> Result<f64> {
    if arg < -LOG_TOL {
        return Err(Error::NumericalDomain(format!("log of negative argument {arg:.6e}")));
    }
    if arg <= 0.0 || coef == 0.0 {
        return Ok(0.0);
    }
    Ok(coef * arg.log2())
}

/// `x log2 x` with the convention `0 log 0 = 0`.
pub fn xlog2(x: f64) -> Result<f64> {
    weighted_log(x, x)
}

/// `(1 + x) log(1 + x) + (1 - x) log(1 - x)`
pub fn g_function(x: f64) -> Result<f64> {
    Ok(xlog2(1.0 + x)? + xlog2(1.0 - x)?)
}

/// `(3 + x) log(3 + x) + (3 - 3x) log(3 - 3x) - 2 (3 - x) log(3 - x)`
pub fn f_function(x: f64) -> Result<f64> {
    Ok(xlog2(3.0 + x)? + xlog2(3.0 - 3.0 * x)? - 2.0 * xlog2(3.0 - x)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bipartition {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Bipartition {
    pub fn new(a: &[usize], b: &[usize]) -> Result<Self> {
        let all: Vec<usize> = a.iter().chain(b).copied().collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::BadSubsystem("both parts must be non-empty".into()));
        }
        for (i, q) in all.iter().enumerate() {
            if !(1..=3).contains(q) || all[..i].contains(q) {
                return Err(Error::BadSubsystem(format!("parts {a:?} and {b:?} are not disjoint qubit sets")));
            }
        }
        Ok(Self { a: a.to_vec(), b: b.to_vec() })
    }
}

/// `I(A:B) = S(A) + S(B) - S(AB)`.
pub fn mutual_information_2(rho: &ComplexMatrix, part: &Bipartition) -> Result<f64> {
    let joint: Vec<usize> = part.a.iter().chain(&part.b).copied().collect();
    let s_ab = if joint.len() == 3 { von_neumann_entropy(rho)? } else { von_neumann_entropy(&partial_trace(rho, &joint)?)? };
    Ok(von_neumann_entropy(&partial_trace(rho, &part.a)?)? + von_neumann_entropy(&partial_trace(rho, &part.b)?)? - s_ab)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionalBranch {
    /// min{S1, S3}: opposite-sign coherences with |3 rho18| >= |rho27|
    MinS1S3,
    /// min{S1, S2}
    MinS1S2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscordBreakdown {
    pub rho11: f64,
    pub rho18: f64,
    pub rho27: f64,
    pub s1: f64,
    pub s2: Option<f64>,
    pub s3: Option<f64>,
    pub branch: ConditionalBranch,
    pub conditional_entropy: f64,
    pub discord: f64,
}

/// Coherence magnitudes below this are treated as absent when fixing phases.
const PHASE_TOL: f64 = 1e-14;

/// Real-valued (rho18, rho27, rho36, rho45) reachable by local diagonal
/// phase rotations, if one exists.
///
/// Such rotations shift the four coherence phases by a three-dimensional
/// family, leaving `theta18 - theta27 - theta36 + theta45` fixed. The last
/// three are made non-negative and the first inherits the invariant phase.
pub fn real_coherence_gauge(x: &XState) -> Result<[f64; 4]> {
    let a = x.anti();
    let present = a.iter().all(|z| z.norm() > PHASE_TOL);
    let mut out = [a[0].norm(), a[1].norm(), a[2].norm(), a[3].norm()];
    if present {
        let phase = (a[0] * a[1].conj() * a[2].conj() * a[3]).arg();
        let (s, cs) = phase.sin_cos();
        if s.abs() > 1e-9 {
            return Err(Error::OutOfClass(format!(
                "coherence phase invariant {phase:.6} admits no real gauge"
            )));
        }
        out[0] *= cs.signum();
    }
    Ok(out)
}

/// Closed-form discord of an X state, after moving to a real gauge.
pub fn discord_x_closed(x: &XState) -> Result<DiscordBreakdown> {
    let [rho18, rho27, _, _] = real_coherence_gauge(x)?;
    let rho11 = x.diag()[0];

    let s1 = 1.0 - f_function(1.0 - 8.0 * rho11)? / 12.0;
    let opposite = rho18 * rho27 < 0.0 && (3.0 * rho18).abs() >= rho27.abs();
    let (branch, s2, s3, cond) = if opposite {
        let s3 = 1.0 - 0.5 * g_function(((rho18 - rho27).powi(3) / rho18).max(0.0).sqrt())?;
        (ConditionalBranch::MinS1S3, None, Some(s3), s1.min(s3))
    } else {
        let s2 = 1.0 - 0.5 * g_function(6.0 * rho27 + 2.0 * rho18)?;
        (ConditionalBranch::MinS1S2, Some(s2), None, s1.min(s2))
    };

    let rest = -weighted_log((1.0 + 4.0 * rho11) / 3.0, 2.0 + 8.0 * rho11)?
        - weighted_log(2.0 * (1.0 - 2.0 * rho11) / 3.0, 4.0 - 8.0 * rho11)?
        - 1.0
        + 2.0 * rho11 * 3f64.log2()
        + weighted_log(rho11 - rho18, 8.0 * (rho11 - rho18))?
        + weighted_log(rho11 + rho18, 8.0 * (rho11 + rho18))?
        + weighted_log(0.5 * (1.0 - 2.0 * rho11 - 6.0 * rho27), 4.0 - 8.0 * rho11 - 24.0 * rho27)?
        + weighted_log(0.5 * (1.0 - 2.0 * rho11 + 6.0 * rho27), 4.0 - 8.0 * rho11 + 24.0 * rho27)?;
    Ok(DiscordBreakdown { rho11, rho18, rho27, s1, s2, s3, branch, conditional_entropy: cond, discord: cond + rest })
}

/// Printed GHZ-mixture expression.
pub fn discord_ghz(family: GhzMixedFamily) -> f64 {
    let p = family.p();
    let t1 = (3.0 * p - 4.0) / 4.0 * (4.0 - 3.0 * p).log2();
    let t2 = if p > 0.0 { p / 8.0 * p.log2() } else { 0.0 };
    let t3 = (8.0 - 7.0 * p) / 8.0 * (8.0 - 7.0 * p).log2();
    t1 + t2 + t3
}

/// Search settings for the conditional-entropy minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasurementOracle {
    /// Random Haar-spread bases evaluated on top of the structured ones.
    pub samples: usize,
    pub seed: u64,
    /// Number of best grid bases refined with Nelder-Mead.
    pub refine_starts: usize,
    pub refine_evals: usize,
}

impl Default for MeasurementOracle {
    fn default() -> Self {
        Self { samples: 10_000, seed: DEFAULT_ORACLE_SEED, refine_starts: 2, refine_evals: 1200 }
    }
}

#[derive(Clone, Debug)]
pub struct OracleMinimum {
    pub value: f64,
    /// Best value over the fixed candidate set, before refinement.
    pub grid_value: f64,
    /// Columns are the measurement vectors on qubits 2 and 3 (qubit 2 most significant).
    pub basis: Matrix4<C64>,
}

type Basis = Matrix4<C64>;

/// The four 4x4 blocks `R_xy[b][d] = rho[(x b), (y d)]` with qubit 1 split out.
struct SplitState {
    r00: Basis,
    r01: Basis,
    r11: Basis,
}

impl SplitState {
    fn new(rho: &ComplexMatrix) -> Result<Self> {
        let lex = to_lexicographic(rho)?;
        let block = |x: usize, y: usize| Basis::from_fn(|b, d| lex[(4 * x + b, 4 * y + d)]);
        Ok(Self { r00: block(0, 0), r01: block(0, 1), r11: block(1, 1) })
    }

    fn conditional_entropy(&self, u: &Basis) -> f64 {
        let mut total = 0.0;
        for k in 0..4 {
            let e: Vector4<C64> = u.column(k).into_owned();
            let form = |m: &Basis| (e.adjoint() * m * e)[(0, 0)];
            let m00 = form(&self.r00).re;
            let m11 = form(&self.r11).re;
            let m01 = form(&self.r01);
            let p = m00 + m11;
            if p <= 1e-300 {
                continue;
            }
            let disc = ((m00 - m11).powi(2) + 4.0 * m01.norm_sqr()).sqrt();
            for lam in [0.5 * (p + disc), 0.5 * (p - disc)] {
                if lam > 0.0 {
                    total -= lam * (lam / p).log2();
                }
            }
        }
        total
    }
}

fn hermitian_generator(theta: &[f64]) -> Basis {
    let mut h = Basis::zeros();
    for i in 0..4 {
        h[(i, i)] = c(theta[i], 0.0);
    }
    let mut k = 4;
    for i in 0..4 {
        for j in (i + 1)..4 {
            h[(i, j)] = c(theta[k], theta[k + 1]);
            h[(j, i)] = c(theta[k], -theta[k + 1]);
            k += 2;
        }
    }
    h
}

fn unitary_from(theta: &[f64]) -> Basis {
    (hermitian_generator(theta) * c(0.0, 1.0)).exp()
}

fn product_basis(n2: (f64, f64), n3: (f64, f64)) -> Basis {
    let qubit = |(theta, phi): (f64, f64)| {
        let (s, co) = (0.5 * theta).sin_cos();
        let e = C64::from_polar(1.0, phi);
        // columns |n> and |-n>
        [[c(co, 0.0), e * s], [-e.conj() * s, c(co, 0.0)]]
    };
    let a = qubit(n2);
    let b = qubit(n3);
    Basis::from_fn(|row, col| {
        let (ra, rb) = (row / 2, row % 2);
        let (ca, cb) = (col / 2, col % 2);
        // a[ra][ca] is the ra component of the ca-th vector, laid out column-major
        let av = if ca == 0 { [a[0][0], a[0][1]] } else { [a[1][0], a[1][1]] };
        let bv = if cb == 0 { [b[0][0], b[0][1]] } else { [b[1][0], b[1][1]] };
        av[ra] * bv[rb]
    })
}

/// Rotations inside span{|00>, |11>} and span{|01>, |10>}.
fn entangled_basis(alpha: f64, beta: f64) -> Basis {
    let (s, co) = alpha.sin_cos();
    let e = C64::from_polar(1.0, beta);
    let mut u = Basis::zeros();
    u[(0, 0)] = c(co, 0.0);
    u[(3, 0)] = e * s;
    u[(0, 1)] = -e.conj() * s;
    u[(3, 1)] = c(co, 0.0);
    u[(1, 2)] = c(co, 0.0);
    u[(2, 2)] = e * s;
    u[(1, 3)] = -e.conj() * s;
    u[(2, 3)] = c(co, 0.0);
    u
}

fn structured_bases() -> Vec<Basis> {
    let mut out = vec![Basis::identity()];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // Bell basis
    out.push(Basis::from_row_slice(&[
        c(h, 0.0), c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0),
        c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0), c(h, 0.0),
        c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0), c(-h, 0.0),
        c(h, 0.0), c(-h, 0.0), c(0.0, 0.0), c(0.0, 0.0),
    ]));
    let pi = std::f64::consts::PI;
    let dirs: Vec<(f64, f64)> = (0..5)
        .flat_map(|i| (0..8).map(move |j| (pi * i as f64 / 4.0, 2.0 * pi * j as f64 / 8.0)))
        .collect();
    for &d2 in &dirs {
        for &d3 in &dirs {
            out.push(product_basis(d2, d3));
        }
    }
    for i in 0..20 {
        for j in 0..20 {
            out.push(entangled_basis(pi * i as f64 / 40.0, 2.0 * pi * j as f64 / 20.0));
        }
    }
    out
}

/// Structured bases followed by `samples` seeded `exp(iH)` draws. Longer
/// sample counts extend shorter ones, so candidate sets are nested.
fn candidate_bases(samples: usize, seed: u64) -> Arc<Vec<Basis>> {
    type Cache = Mutex<HashMap<(usize, u64), Arc<Vec<Basis>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache lock").get(&(samples, seed)) {
        return hit.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = structured_bases();
    out.reserve(samples);
    for _ in 0..samples {
        let theta: Vec<f64> = (0..16).map(|_| rng.sample::<f64, _>(StandardNormal) * 1.5).collect();
        out.push(unitary_from(&theta));
    }
    let out = Arc::new(out);
    cache.lock().expect("cache lock").insert((samples, seed), out.clone());
    out
}

impl MeasurementOracle {
    /// Minimum over the fixed candidate set only.
    pub fn grid_minimum(&self, rho: &ComplexMatrix) -> Result<(f64, usize)> {
        let split = SplitState::new(rho)?;
        let cands = candidate_bases(self.samples, self.seed);
        Ok(grid_scan(&split, &cands)[0])
    }

    pub fn minimize(&self, rho: &ComplexMatrix) -> Result<OracleMinimum> {
        let split = SplitState::new(rho)?;
        let cands = candidate_bases(self.samples, self.seed);
        let ranked = grid_scan(&split, &cands);
        let (grid_value, best_idx) = ranked[0];
        let mut best = (grid_value, cands[best_idx]);
        for &(_, idx) in ranked.iter().take(self.refine_starts) {
            let start = cands[idx];
            let f = |theta: &[f64]| split.conditional_entropy(&(start * unitary_from(theta)));
            let m = nelder_mead(f, &[0.0; 16], 0.05, 1e-14, self.refine_evals);
            if m.value < best.0 {
                best = (m.value, start * unitary_from(&m.x));
            }
        }
        Ok(OracleMinimum { value: best.0, grid_value, basis: best.1 })
    }
}

/// Candidates sorted by (value, index).
fn grid_scan(split: &SplitState, cands: &[Basis]) -> Vec<(f64, usize)> {
    let mut values: Vec<(f64, usize)> =
        cands.par_iter().enumerate().map(|(i, u)| (split.conditional_entropy(u), i)).collect();
    values.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    values
}

/// `S(1|23)` minimised numerically with the default oracle settings.
pub fn conditional_entropy_min_oracle(rho: &ComplexMatrix) -> Result<f64> {
    Ok(MeasurementOracle::default().minimize(rho)?.value)
}

pub fn symmetry_residual(rho: &ComplexMatrix) -> Result<f64> {
    let swap12 = permute_qubits(rho, [2, 1, 3])?;
    let swap23 = permute_qubits(rho, [1, 3, 2])?;
    Ok(swap12.max_abs_diff(rho).max(swap23.max_abs_diff(rho)))
}

/// Discord of a permutation-symmetric state from the numerical conditional entropy.
pub fn discord_symmetric_numeric(rho: &ComplexMatrix) -> Result<f64> {
    discord_symmetric_with(rho, &MeasurementOracle::default())
}

pub fn discord_symmetric_with(rho: &ComplexMatrix, oracle: &MeasurementOracle) -> Result<f64> {
    let residual = symmetry_residual(rho)?;
    if residual > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { residual });
    }
    let cond = oracle.minimize(rho)?.value;
    Ok(cond + von_neumann_entropy(&partial_trace(rho, &[1, 2])?)? - von_neumann_entropy(rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstate::make_ghz_mixed;

    fn ghz(p: f64) -> XState {
        make_ghz_mixed(GhzMixedFamily::new(p).unwrap())
    }

    #[test]
    fn special_function_values() {
        assert!((g_function(1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(g_function(0.0).unwrap().abs() < 1e-15);
        assert!((f_function(1.0).unwrap() - 4.0).abs() < 1e-14);
        assert!(g_function(1.5).is_err());
    }

    #[test]
    fn ghz_discord_endpoints() {
        assert!((discord_ghz(GhzMixedFamily::new(0.0).unwrap()) - 1.0).abs() < 1e-15);
        assert!(discord_ghz(GhzMixedFamily::new(1.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn x_closed_form_reduces_to_ghz_form() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let d = discord_x_closed(&ghz(p)).unwrap();
            assert!((d.discord - discord_ghz(GhzMixedFamily::new(p).unwrap())).abs() < 1e-12, "p = {p}");
        }
        let half = discord_x_closed(&ghz(0.5)).unwrap();
        assert!((half.discord - 0.331878).abs() < 1e-6);
    }

    #[test]
    fn mutual_information_of_pure_ghz() {
        let rho = ghz(0.0).to_dense();
        let part = Bipartition::new(&[1], &[2, 3]).unwrap();
        assert!((mutual_information_2(&rho, &part).unwrap() - 2.0).abs() < 1e-12);
        assert!(Bipartition::new(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn oracle_matches_ghz_discord() {
        let x = ghz(0.3);
        let d = discord_symmetric_numeric(&x.to_dense()).unwrap();
        assert!((d - discord_ghz(GhzMixedFamily::new(0.3).unwrap())).abs() < 1e-9);
    }

    #[test]
    fn non_symmetric_state_rejected() {
        let x = XState::new(
            [0.3, 0.1, 0.05, 0.05, 0.1, 0.1, 0.1, 0.2],
            [c(0.0, 0.0); 4],
        )
        .unwrap();
        assert!(matches!(discord_symmetric_numeric(&x.to_dense()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn product_and_entangled_bases_are_unitary() {
        for u in structured_bases().iter().take(50).chain(structured_bases().iter().rev().take(50)) {
            let err = (u.adjoint() * u - Basis::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }
}
