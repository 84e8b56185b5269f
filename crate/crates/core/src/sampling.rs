//! Seeded random states and unitaries for tests and verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{c, local_operator, ComplexMatrix, C64};
use crate::xstate::XState;

pub const DEFAULT_SEED: u64 = 0x5EED;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Diagonal drawn uniformly from the probability simplex, each coherence
/// uniformly from the disc allowed by its block.
pub fn random_x_state<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let raw: [f64; 8] = std::array::from_fn(|_| rng.sample::<f64, _>(Exp1));
    let total: f64 = raw.iter().sum();
    let mut diag = raw.map(|v| v / total);
    // make the trace exact in floating point
    let drift: f64 = diag.iter().sum::<f64>() - 1.0;
    diag[0] -= drift;
    let anti = std::array::from_fn(|k| {
        let radius = (diag[k] * diag[7 - k]).sqrt() * rng.random::<f64>().sqrt();
        let angle = rng.random::<f64>() * std::f64::consts::TAU;
        C64::from_polar(radius * (1.0 - 1e-12), angle)
    });
    XState::new(diag, anti).expect("sampled state is valid")
}

pub fn random_x_states(seed: u64, n: usize) -> Vec<XState> {
    let mut rng = seeded_rng(seed);
    (0..n).map(|_| random_x_state(&mut rng)).collect()
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `G G^dagger / tr` for a complex Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian_c64(rng));
    let m = &g * &g.dagger();
    let t = m.trace().re;
    let m = m.scale_real(1.0 / t);
    // exact Hermitian symmetry
    ComplexMatrix::from_fn(dim, |r, col| 0.5 * (m[(r, col)] + m[(col, r)].conj()))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian_c64(rng));
    (&g + &g.dagger()).scale_real(0.5)
}

/// Haar-random unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
        for u in &cols {
            let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= overlap * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |r, col| cols[col][r])
}

pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let a = random_unitary(rng, 2);
    let b = random_unitary(rng, 2);
    let g = random_unitary(rng, 2);
    local_operator(&a, &b, &g)
}
