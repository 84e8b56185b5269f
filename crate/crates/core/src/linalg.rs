//! Dense complex matrices, Hermitian spectra and the three-qubit index layout.
//!
//! Basis states of three qubits are stored in the order
//! |000>,|010>,|100>,|110>,|001>,|011>,|101>,|111> (kets written q1 q2 q3),
//! so qubit 3 is the slowest index, then qubit 1, then qubit 2.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues above `-EIGEN_CLAMP` are treated as rounding noise and clamped to zero.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Bit weight of qubits 1, 2, 3 inside a basis index.
pub const QUBIT_WEIGHT: [usize; 3] = [2, 1, 4];

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    /// Row-major construction; panics unless `entries.len()` is a perfect square.
    pub fn from_rows(entries: &[C64]) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, entries.len(), "row-major data must be square");
        Self(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |r, col| if r == col { c(diag[r], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// |psi><psi|
    pub fn outer(psi: &[C64]) -> Self {
        Self::from_fn(psi.len(), |r, col| psi[r] * psi[col].conj())
    }

    pub fn from_inner(m: DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
        Self(m)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for col in r..n {
                worst = worst.max((self.0[(r, col)] - self.0[(col, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    pub fn hilbert_schmidt(&self, other: &Self) -> C64 {
        (&self.0.adjoint() * &other.0).trace()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Eigen-decomposition with eigenvalues sorted in descending order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        *self.values.last().expect("empty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }
}

pub fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NonHermitianInput { residual });
    }
    Ok(())
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    check_hermitian(m)?;
    let sym = (&m.0 + m.0.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.dim();
    let vectors = ComplexMatrix::from_fn(n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(Spectrum { values, vectors })
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(m)?.values)
}

fn clamp_spectrum(spec: &Spectrum) -> Result<Vec<f64>> {
    let min = spec.min();
    if min < -EIGEN_CLAMP {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(spec.values.iter().map(|&v| v.max(0.0)).collect())
}

/// Eigenvalues this far below the largest one are rounded to zero before a
/// square root, where they would otherwise surface as ~1e-8 noise.
pub const SQRT_ZERO: f64 = 1e-14;

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(m)?;
    let mut vals = clamp_spectrum(&spec)?;
    let floor = SQRT_ZERO * vals.first().copied().unwrap_or(0.0);
    vals.iter_mut().filter(|v| **v <= floor).for_each(|v| *v = 0.0);
    let v = &spec.vectors.0;
    let n = m.dim();
    let scaled = DMatrix::from_fn(n, n, |r, k| v[(r, k)] * vals[k].sqrt());
    Ok(ComplexMatrix(&scaled * v.adjoint()))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Identity (index 0) and the three Pauli matrices.
pub fn pauli(index: usize) -> ComplexMatrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match index {
        0 => ComplexMatrix::from_rows(&[one, z, z, one]),
        1 => ComplexMatrix::from_rows(&[z, one, one, z]),
        2 => ComplexMatrix::from_rows(&[z, -i, i, z]),
        3 => ComplexMatrix::from_rows(&[one, z, z, -one]),
        _ => panic!("Pauli index {index} out of range"),
    }
}

/// Single-qubit operator `n . sigma`.
pub fn bloch_operator(n: [f64; 3]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2);
    for (k, &nk) in n.iter().enumerate() {
        out = &out + &pauli(k + 1).scale_real(nk);
    }
    out
}

/// o1 on qubit 1, o2 on qubit 2, o3 on qubit 3, in the stored basis order.
pub fn local_operator(o1: &ComplexMatrix, o2: &ComplexMatrix, o3: &ComplexMatrix) -> ComplexMatrix {
    kron(o3, &kron(o1, o2))
}

/// Bit value (0 or 1) of `qubit` (1-based) in basis index `idx`.
pub fn qubit_bit(idx: usize, qubit: usize) -> usize {
    (idx / QUBIT_WEIGHT[qubit - 1]) & 1
}

/// Basis index of the ket |b1 b2 b3>.
pub fn basis_index(bits: [usize; 3]) -> usize {
    bits.iter().zip(QUBIT_WEIGHT).map(|(&b, w)| b * w).sum()
}

fn check_three_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, got: rho.dim() });
    }
    Ok(())
}

fn check_qubit_set(qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::BadSubsystem("empty qubit set".into()));
    }
    for (i, &q) in qubits.iter().enumerate() {
        if !(1..=3).contains(&q) {
            return Err(Error::BadSubsystem(format!("qubit {q} is not one of 1, 2, 3")));
        }
        if qubits[..i].contains(&q) {
            return Err(Error::BadSubsystem(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// Reduced state on `keep` (1-based labels). The kept qubits are ordered by
/// label and the lowest label is the most significant index of the result.
pub fn partial_trace(rho: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
    check_three_qubit(rho)?;
    check_qubit_set(keep)?;
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (1..=3).filter(|q| !kept.contains(q)).collect();
    let dim = 1 << kept.len();
    let reduced_index = |idx: usize| {
        kept.iter().fold(0, |acc, &q| (acc << 1) | qubit_bit(idx, q))
    };
    let env_index = |idx: usize| traced.iter().fold(0, |acc, &q| (acc << 1) | qubit_bit(idx, q));
    let mut out = ComplexMatrix::zeros(dim);
    for r in 0..8 {
        for col in 0..8 {
            if env_index(r) == env_index(col) {
                out[(reduced_index(r), reduced_index(col))] += rho[(r, col)];
            }
        }
    }
    Ok(out)
}

/// Transpose with respect to the listed qubits.
pub fn partial_transpose(rho: &ComplexMatrix, qubits: &[usize]) -> Result<ComplexMatrix> {
    check_three_qubit(rho)?;
    check_qubit_set(qubits)?;
    let mask: usize = qubits.iter().map(|&q| QUBIT_WEIGHT[q - 1]).sum();
    Ok(ComplexMatrix::from_fn(8, |r, col| {
        // swap the masked bits between row and column
        let r2 = (r & !mask) | (col & mask);
        let c2 = (col & !mask) | (r & mask);
        rho[(r2, c2)]
    }))
}

pub fn shannon_entropy(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spec = hermitian_eig(rho)?;
    Ok(shannon_entropy(&clamp_spectrum(&spec)?))
}

/// Lexicographic index 4 q1 + 2 q2 + q3 of a stored basis index.
pub fn lexicographic_index(idx: usize) -> usize {
    (qubit_bit(idx, 1) << 2) | (qubit_bit(idx, 2) << 1) | qubit_bit(idx, 3)
}

/// Reorders a three-qubit operator so that qubit 1 is the most significant index
/// (plain `A (x) B (x) C` ordering).
pub fn to_lexicographic(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_three_qubit(rho)?;
    let mut out = ComplexMatrix::zeros(8);
    for r in 0..8 {
        for col in 0..8 {
            out[(lexicographic_index(r), lexicographic_index(col))] = rho[(r, col)];
        }
    }
    Ok(out)
}

/// Permutes qubits: qubit `k` of the input becomes qubit `perm[k-1]` of the output.
pub fn permute_qubits(rho: &ComplexMatrix, perm: [usize; 3]) -> Result<ComplexMatrix> {
    check_three_qubit(rho)?;
    let map = |idx: usize| {
        let mut bits = [0; 3];
        for q in 1..=3 {
            bits[perm[q - 1] - 1] = qubit_bit(idx, q);
        }
        basis_index(bits)
    };
    let mut out = ComplexMatrix::zeros(8);
    for r in 0..8 {
        for col in 0..8 {
            out[(map(r), map(col))] = rho[(r, col)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(bits: [usize; 3]) -> Vec<C64> {
        let mut v = vec![c(0.0, 0.0); 8];
        v[basis_index(bits)] = c(1.0, 0.0);
        v
    }

    #[test]
    fn basis_order_matches_layout() {
        let order = [[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 0], [0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 1]];
        for (idx, bits) in order.iter().enumerate() {
            assert_eq!(basis_index(*bits), idx);
        }
    }

    #[test]
    fn local_operator_acts_on_the_right_qubit() {
        let x = pauli(1);
        let id = pauli(0);
        let flip1 = local_operator(&x, &id, &id);
        let out = &flip1 * &ComplexMatrix::outer(&ket([0, 1, 1]));
        let expected = ComplexMatrix::from_fn(8, |r, col| {
            if r == basis_index([1, 1, 1]) && col == basis_index([0, 1, 1]) { c(1.0, 0.0) } else { c(0.0, 0.0) }
        });
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = ComplexMatrix::from_rows(&[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let b = ComplexMatrix::from_real_diagonal(&[0.4, 0.6]);
        let cc = ComplexMatrix::from_real_diagonal(&[0.9, 0.1]);
        let rho = local_operator(&a, &b, &cc);
        assert!(partial_trace(&rho, &[1]).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&rho, &[3]).unwrap().max_abs_diff(&cc) < 1e-15);
        let ab = partial_trace(&rho, &[2, 1]).unwrap();
        assert!(ab.max_abs_diff(&kron(&a, &b)) < 1e-15);
        let ac = partial_trace(&rho, &[1, 3]).unwrap();
        assert!(ac.max_abs_diff(&kron(&a, &cc)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_sets() {
        let rho = ComplexMatrix::identity(8);
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::BadSubsystem(_))));
        assert!(matches!(partial_trace(&rho, &[4]), Err(Error::BadSubsystem(_))));
        assert!(matches!(partial_trace(&rho, &[1, 1]), Err(Error::BadSubsystem(_))));
        assert!(matches!(partial_trace(&ComplexMatrix::identity(4), &[1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn eig_sorted_and_reconstructs() {
        let m = ComplexMatrix::from_rows(&[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let spec = hermitian_eig(&m).unwrap();
        assert!((spec.values[0] - 3.0).abs() < 1e-14);
        assert!((spec.values[1] - 1.0).abs() < 1e-14);
        let d = ComplexMatrix::from_real_diagonal(&spec.values);
        let back = d.conjugate_by(&spec.vectors);
        assert!(back.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_rows(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn sqrt_of_negative_matrix_fails() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -0.1]);
        assert!(matches!(matrix_sqrt_psd(&m), Err(Error::NotPsd { .. })));
        let tiny = ComplexMatrix::from_real_diagonal(&[1.0, -1e-12]);
        assert!(matrix_sqrt_psd(&tiny).is_ok());
    }

    #[test]
    fn entropy_of_maximally_mixed() {
        let rho = ComplexMatrix::identity(8).scale_real(0.125);
        assert!((von_neumann_entropy(&rho).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn partial_transpose_flips_coherence() {
        let rho = ComplexMatrix::outer(&ket([1, 0, 1]));
        let pt = partial_transpose(&rho, &[2]).unwrap();
        assert!(pt.max_abs_diff(&rho) < 1e-15);
        let mut m = ComplexMatrix::zeros(8);
        m[(basis_index([0, 0, 0]), basis_index([1, 1, 1]))] = c(0.0, 1.0);
        let pt = partial_transpose(&m, &[1]).unwrap();
        assert_eq!(pt[(basis_index([1, 0, 0]), basis_index([0, 1, 1]))], c(0.0, 1.0));
    }

    #[test]
    fn lexicographic_reorder_matches_plain_kron() {
        let a = pauli(1);
        let b = pauli(2);
        let cc = pauli(3);
        let stored = local_operator(&a, &b, &cc);
        let lex = to_lexicographic(&stored).unwrap();
        assert!(lex.max_abs_diff(&kron(&a, &kron(&b, &cc))) < 1e-15);
    }

    #[test]
    fn permute_qubits_moves_operators() {
        let a = pauli(1);
        let b = pauli(2);
        let cc = pauli(3);
        let stored = local_operator(&a, &b, &cc);
        let moved = permute_qubits(&stored, [2, 3, 1]).unwrap();
        assert!(moved.max_abs_diff(&local_operator(&cc, &a, &b)) < 1e-15);
    }
}
