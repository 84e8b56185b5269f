//! Local quantum uncertainty with respect to qubit 1.
//!
//! For a qubit observable `n . sigma` the skew information is
//! `1 - n^T W n`, where `W_ij = tr(sqrt(rho) sigma_i sqrt(rho) sigma_j)` with
//! `sigma_i` acting on qubit 1. The LQU is `1 - lambda_max(W)`.

use nalgebra::{Matrix3, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    bloch_operator, check_hermitian, local_operator, matrix_sqrt_psd, partial_trace, pauli, ComplexMatrix, C64,
};
use crate::optimize::{fibonacci_sphere, nelder_mead, spherical, to_spherical};
use crate::xstate::{BellTypeFamily, GhzMixedFamily, XState};

/// Largest tolerated imaginary part of a numerically evaluated W entry.
pub const W_IMAG_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WMatrix {
    pub entries: [[f64; 3]; 3],
}

impl WMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    /// Eigenvalues in descending order with unit eigenvectors.
    pub fn eigen(&self) -> ([f64; 3], [[f64; 3]; 3]) {
        let m = Matrix3::from_fn(|i, j| 0.5 * (self.entries[i][j] + self.entries[j][i]));
        let eig = SymmetricEigen::new(m);
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.map(|k| eig.eigenvalues[k]);
        let vectors = order.map(|k| [eig.eigenvectors[(0, k)], eig.eigenvectors[(1, k)], eig.eigenvectors[(2, k)]]);
        (values, vectors)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigen().0[0]
    }

    pub fn quadratic_form(&self, n: [f64; 3]) -> f64 {
        (0..3).map(|i| (0..3).map(|j| n[i] * self.entries[i][j] * n[j]).sum::<f64>()).sum()
    }

    pub fn max_abs_diff(&self, other: &WMatrix) -> f64 {
        let a = self.entries.iter().flatten();
        let b = other.entries.iter().flatten();
        a.zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

/// `I(rho, K) = -1/2 tr([sqrt(rho), K]^2)`.
pub fn skew_information(rho: &ComplexMatrix, k: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: k.dim() });
    }
    check_hermitian(k)?;
    let s = matrix_sqrt_psd(rho)?;
    Ok(skew_with_root(&s, k))
}

fn skew_with_root(sqrt_rho: &ComplexMatrix, k: &ComplexMatrix) -> f64 {
    let comm = &(sqrt_rho * k) - &(k * sqrt_rho);
    -0.5 * (&comm * &comm).trace().re
}

/// `n . sigma` on qubit 1 of three.
pub fn qubit1_observable(n: [f64; 3]) -> ComplexMatrix {
    let id = pauli(0);
    local_operator(&bloch_operator(n), &id, &id)
}

/// sigma_i (x) 1 (x) 1 for i = 1, 2, 3.
pub fn qubit1_paulis() -> [ComplexMatrix; 3] {
    let id = pauli(0);
    std::array::from_fn(|i| local_operator(&pauli(i + 1), &id, &id))
}

/// W from an explicit square root and a triple of local Pauli operators.
pub fn w_from_root(sqrt_rho: &ComplexMatrix, ops: &[ComplexMatrix; 3]) -> Result<WMatrix> {
    let sandwiched: Vec<ComplexMatrix> = ops.iter().map(|o| &(sqrt_rho * o) * sqrt_rho).collect();
    let mut entries = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let v: C64 = (&sandwiched[i] * &ops[j]).trace();
            if v.im.abs() > W_IMAG_TOL {
                return Err(Error::NonHermitianInput { residual: v.im.abs() });
            }
            entries[i][j] = v.re;
        }
    }
    Ok(WMatrix { entries })
}

pub fn w_matrix_numeric(rho: &ComplexMatrix) -> Result<WMatrix> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, got: rho.dim() });
    }
    let s = matrix_sqrt_psd(rho)?;
    w_from_root(&s, &qubit1_paulis())
}

/// W in closed form from the four 2x2 blocks of an X state.
///
/// Flipping qubit 1 maps block k onto block k ^ 2, so only the pairs
/// (0, 2) and (1, 3) contribute to the transverse entries.
pub fn w_matrix_closed(x: &XState) -> WMatrix {
    let blocks = x.blocks();
    let s: Vec<f64> = blocks.iter().map(|b| b.root_scale()).collect();
    let delta: Vec<f64> = blocks.iter().map(|b| b.upper - b.lower).collect();
    let coh: Vec<C64> = blocks.iter().map(|b| b.coherence).collect();

    let (mut w11, mut w22, mut w12) = (0.0, 0.0, 0.0);
    for (k, m) in [(0usize, 2usize), (1, 3)] {
        let ss = s[k] * s[m];
        if ss == 0.0 {
            continue;
        }
        let cross = coh[k] * coh[m].conj();
        let dd = delta[k] * delta[m];
        w11 += ss + (dd + 4.0 * cross.re) / ss;
        w22 += ss + (dd - 4.0 * cross.re) / ss;
        w12 -= 4.0 * cross.im / ss;
    }
    let trace: f64 = blocks.iter().map(|b| b.trace()).sum();
    let coherent: f64 = (0..4).filter(|&k| s[k] > 0.0).map(|k| coh[k].norm_sqr() / (s[k] * s[k])).sum();
    let w33 = trace - 4.0 * coherent;
    WMatrix { entries: [[w11, w12, 0.0], [w12, w22, 0.0], [0.0, 0.0, w33]] }
}

/// Exact LQU of an X state.
pub fn lqu(x: &XState) -> f64 {
    (1.0 - w_matrix_closed(x).lambda_max()).max(0.0)
}

/// Skew information at the top eigenvector of the numerically evaluated W.
pub fn lqu_numeric(rho: &ComplexMatrix) -> Result<f64> {
    let s = matrix_sqrt_psd(rho)?;
    let ops = qubit1_paulis();
    let w = w_from_root(&s, &ops)?;
    let n = w.eigen().1[0];
    Ok(skew_with_root(&s, &qubit1_observable(n)).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereMinimum {
    pub value: f64,
    pub direction: [f64; 3],
}

/// Direct minimisation of the skew information over unit Bloch vectors:
/// a Fibonacci grid followed by Nelder-Mead refinement of the best point.
pub fn sphere_audit(rho: &ComplexMatrix, ops: &[ComplexMatrix; 3], points: usize) -> Result<SphereMinimum> {
    let s = matrix_sqrt_psd(rho)?;
    let eval = |n: [f64; 3]| {
        let k = &(&ops[0].scale_real(n[0]) + &ops[1].scale_real(n[1])) + &ops[2].scale_real(n[2]);
        skew_with_root(&s, &k)
    };
    let best = fibonacci_sphere(points)
        .into_par_iter()
        .map(|n| SphereMinimum { value: eval(n), direction: n })
        .reduce_with(|a, b| if key_less(&b, &a) { b } else { a })
        .expect("at least one grid point");
    let (theta, phi) = to_spherical(best.direction);
    let refined = nelder_mead(|v| eval(spherical(v[0], v[1])), &[theta, phi], 0.05, 1e-15, 2000);
    if refined.value < best.value {
        Ok(SphereMinimum { value: refined.value, direction: spherical(refined.x[0], refined.x[1]) })
    } else {
        Ok(best)
    }
}

/// Order by value, ties broken lexicographically on the direction.
fn key_less(a: &SphereMinimum, b: &SphereMinimum) -> bool {
    match a.value.total_cmp(&b.value) {
        std::cmp::Ordering::Equal => a.direction.iter().zip(&b.direction).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y),
        o => o.is_lt(),
    }
}

pub fn lqu_sphere_audit(rho: &ComplexMatrix, points: usize) -> Result<SphereMinimum> {
    sphere_audit(rho, &qubit1_paulis(), points)
}

/// `2 (1 - tr rho_1^2)` for a pure three-qubit state.
pub fn lqu_pure(psi: &[C64]) -> Result<f64> {
    if psi.len() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, got: psi.len() });
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let rho1 = partial_trace(&ComplexMatrix::outer(psi), &[1])?;
    let purity = (&rho1 * &rho1).trace().re;
    Ok(2.0 * (1.0 - purity))
}

/// Printed GHZ-mixture expression.
pub fn lqu_ghz(family: GhzMixedFamily) -> f64 {
    let p = family.p();
    let d = 4.0 - 3.0 * p + (p * (8.0 - 7.0 * p)).sqrt();
    31.0 * (p - 1.0).powi(2) / (8.0 * d)
}

/// Printed diagonal entries (w11 = w22, w33) for the GHZ mixture.
pub fn ghz_w_printed(family: GhzMixedFamily) -> (f64, f64) {
    let p = family.p();
    let r = (p * (8.0 - 7.0 * p)).sqrt();
    let d = 4.0 - 3.0 * p + r;
    let w11 = 0.5 * (p + (p * d / 2.0).sqrt());
    let w33 = (8.0 * r - 31.0 * p * p + 38.0 * p + 1.0) / (8.0 * d);
    (w11, w33)
}

/// Printed W diagonal for the Bell-type family.
pub fn bell_w_diagonal(family: BellTypeFamily) -> [f64; 3] {
    let [c1, c2, c3] = family.coefficients();
    let d = 1.0 + (1.0 - c1 * c1 - c2 * c2 - c3 * c3).max(0.0).sqrt();
    [1.0 - (c2 * c2 + c3 * c3) / d, 1.0 - (c1 * c1 + c3 * c3) / d, 1.0 - (c1 * c1 + c2 * c2) / d]
}

/// Piecewise Bell-type LQU; ties resolve to the earliest listed branch.
pub fn lqu_bell(family: BellTypeFamily) -> f64 {
    let [c1, c2, c3] = family.coefficients();
    let d = 1.0 + (1.0 - c1 * c1 - c2 * c2 - c3 * c3).max(0.0).sqrt();
    let numerator = if c1 >= c2 && c1 >= c3 {
        c2 * c2 + c3 * c3
    } else if c2 >= c1 && c2 >= c3 {
        c1 * c1 + c3 * c3
    } else {
        c1 * c1 + c2 * c2
    };
    numerator / d
}
