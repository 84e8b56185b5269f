//! Three-qubit X states: diagonal plus anti-diagonal density matrices.
//!
//! Anti-diagonal entry `k` (k = 0..3) couples basis index `k` with `7 - k`,
//! which is the ket with every qubit flipped. Each pair forms a 2x2 block
//! that is diagonalised independently.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{c, local_operator, pauli, qubit_bit, ComplexMatrix, C64};

/// Tolerance for the trace, non-negativity and block positivity checks.
pub const STATE_TOL: f64 = 1e-12;

/// One 2x2 block `[[upper, coherence], [conj(coherence), lower]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Block {
    pub upper: f64,
    pub lower: f64,
    pub coherence: C64,
}

impl Block {
    pub fn trace(&self) -> f64 {
        self.upper + self.lower
    }

    pub fn det(&self) -> f64 {
        self.upper * self.lower - self.coherence.norm_sqr()
    }

    /// sqrt(lambda_+) + sqrt(lambda_-) = sqrt(t + 2 sqrt(det)).
    pub fn root_scale(&self) -> f64 {
        (self.trace() + 2.0 * self.det().max(0.0).sqrt()).max(0.0).sqrt()
    }

    /// (lambda_+, lambda_-)
    pub fn eigenvalues(&self) -> (f64, f64) {
        let t = self.trace();
        let disc = (t * t - 4.0 * self.det()).max(0.0).sqrt();
        (0.5 * (t + disc), 0.5 * (t - disc))
    }

    pub fn sqrt(&self) -> Block {
        let s = self.root_scale();
        if s == 0.0 {
            return Block { upper: 0.0, lower: 0.0, coherence: c(0.0, 0.0) };
        }
        let rd = self.det().max(0.0).sqrt();
        Block { upper: (self.upper + rd) / s, lower: (self.lower + rd) / s, coherence: self.coherence / s }
    }
}

/// Any Hermitian 8x8 matrix with X-shaped support.
#[derive(Clone, Debug, PartialEq)]
pub struct XShape {
    diag: [f64; 8],
    anti: [C64; 4],
}

impl XShape {
    pub fn new(diag: [f64; 8], anti: [C64; 4]) -> Self {
        Self { diag, anti }
    }

    pub fn from_blocks(blocks: &[Block; 4]) -> Self {
        let mut diag = [0.0; 8];
        let mut anti = [c(0.0, 0.0); 4];
        for (k, b) in blocks.iter().enumerate() {
            diag[k] = b.upper;
            diag[7 - k] = b.lower;
            anti[k] = b.coherence;
        }
        Self { diag, anti }
    }

    pub fn diag(&self) -> &[f64; 8] {
        &self.diag
    }

    pub fn anti(&self) -> &[C64; 4] {
        &self.anti
    }

    pub fn blocks(&self) -> [Block; 4] {
        std::array::from_fn(|k| Block { upper: self.diag[k], lower: self.diag[7 - k], coherence: self.anti[k] })
    }

    /// Entry (r, 7 - r).
    pub fn anti_entry(&self, r: usize) -> C64 {
        if r < 4 { self.anti[r] } else { self.anti[7 - r].conj() }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(8);
        for r in 0..8 {
            m[(r, r)] = c(self.diag[r], 0.0);
            m[(r, 7 - r)] = self.anti_entry(r);
        }
        m
    }

    pub fn from_dense(m: &ComplexMatrix, tol: f64) -> Result<Self> {
        if m.dim() != 8 {
            return Err(Error::DimensionMismatch { expected: 8, got: m.dim() });
        }
        crate::linalg::check_hermitian(m)?;
        let mut residual: f64 = 0.0;
        for r in 0..8 {
            for col in 0..8 {
                if col != r && col != 7 - r {
                    residual = residual.max(m[(r, col)].norm());
                }
            }
            residual = residual.max(m[(r, r)].im.abs());
        }
        if residual > tol {
            return Err(Error::NotXShaped { residual });
        }
        let diag = std::array::from_fn(|k| m[(k, k)].re);
        let anti = std::array::from_fn(|k| 0.5 * (m[(k, 7 - k)] + m[(7 - k, k)].conj()));
        Ok(Self { diag, anti })
    }

    pub fn eigenvalues(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (k, b) in self.blocks().iter().enumerate() {
            let (hi, lo) = b.eigenvalues();
            out[2 * k] = hi;
            out[2 * k + 1] = lo;
        }
        out
    }

    /// Square root computed block by block.
    pub fn sqrt(&self) -> XShape {
        XShape::from_blocks(&self.blocks().map(|b| b.sqrt()))
    }

    pub fn max_abs_diff(&self, other: &XShape) -> f64 {
        let d = self.diag.iter().zip(other.diag.iter()).map(|(a, b)| (a - b).abs());
        let a = self.anti.iter().zip(other.anti.iter()).map(|(a, b)| (a - b).norm());
        d.chain(a).fold(0.0, f64::max)
    }

    /// tr(rho sigma_a (x) sigma_b (x) sigma_c) for every Pauli triple, in closed form.
    pub fn pauli_coefficients(&self) -> PauliTensor {
        let mut t = PauliTensor::zero();
        for a in 0..4 {
            for b in 0..4 {
                for g in 0..4 {
                    t.coeffs[a][b][g] = self.pauli_coefficient([a, b, g]);
                }
            }
        }
        t
    }

    fn pauli_coefficient(&self, ops: [usize; 3]) -> f64 {
        let diagonal_ops = ops.iter().all(|&o| o == 0 || o == 3);
        let flip_ops = ops.iter().all(|&o| o == 1 || o == 2);
        if diagonal_ops {
            (0..8)
                .map(|idx| {
                    let flips = (1..=3).filter(|&q| ops[q - 1] == 3 && qubit_bit(idx, q) == 1).count();
                    if flips % 2 == 0 { self.diag[idx] } else { -self.diag[idx] }
                })
                .sum()
        } else if flip_ops {
            // tr(rho P) = sum_a rho[a][7-a] P[7-a][a]; sigma_y picks up -i on |1>, +i on |0>
            let mut acc = c(0.0, 0.0);
            for a in 0..8 {
                let mut p = c(1.0, 0.0);
                for q in 1..=3 {
                    if ops[q - 1] == 2 {
                        p *= if qubit_bit(a, q) == 1 { c(0.0, -1.0) } else { c(0.0, 1.0) };
                    }
                }
                acc += self.anti_entry(a) * p;
            }
            acc.re
        } else {
            0.0
        }
    }
}

/// The 16 Pauli triples that can carry weight on an X-shaped matrix.
pub fn x_support() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(16);
    for set in [[0usize, 3], [1, 2]] {
        for &a in &set {
            for &b in &set {
                for &g in &set {
                    out.push([a, b, g]);
                }
            }
        }
    }
    out
}

/// Coefficients c_abg = tr(M sigma_a (x) sigma_b (x) sigma_g), index 0 is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTensor {
    pub coeffs: [[[f64; 4]; 4]; 4],
}

impl PauliTensor {
    pub fn zero() -> Self {
        Self { coeffs: [[[0.0; 4]; 4]; 4] }
    }

    pub fn get(&self, ops: [usize; 3]) -> f64 {
        self.coeffs[ops[0]][ops[1]][ops[2]]
    }

    /// Numerical coefficients of an arbitrary 8x8 matrix.
    pub fn of_dense(m: &ComplexMatrix) -> Self {
        let p: Vec<ComplexMatrix> = (0..4).map(pauli).collect();
        let mut t = Self::zero();
        for a in 0..4 {
            for b in 0..4 {
                for g in 0..4 {
                    let op = local_operator(&p[a], &p[b], &p[g]);
                    t.coeffs[a][b][g] = (m * &op).trace().re;
                }
            }
        }
        t
    }

    /// sum c_abg sigma_a (x) sigma_b (x) sigma_g / 8
    pub fn reconstruct(&self) -> ComplexMatrix {
        let p: Vec<ComplexMatrix> = (0..4).map(pauli).collect();
        let mut m = ComplexMatrix::zeros(8);
        for a in 0..4 {
            for b in 0..4 {
                for g in 0..4 {
                    let v = self.coeffs[a][b][g];
                    if v != 0.0 {
                        m = &m + &local_operator(&p[a], &p[b], &p[g]).scale_real(v / 8.0);
                    }
                }
            }
        }
        m
    }

    pub fn support(&self, tol: f64) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for g in 0..4 {
                    if self.coeffs[a][b][g].abs() > tol {
                        out.push([a, b, g]);
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &PauliTensor) -> f64 {
        let a = self.coeffs.iter().flatten().flatten();
        let b = other.coeffs.iter().flatten().flatten();
        a.zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

/// A validated X-shaped density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct XState(XShape);

impl XState {
    pub fn new(diag: [f64; 8], anti: [C64; 4]) -> Result<Self> {
        let shape = XShape::new(diag, anti);
        validate(&shape)?;
        Ok(Self(shape))
    }

    pub fn from_dense(m: &ComplexMatrix) -> Result<Self> {
        let shape = XShape::from_dense(m, 1e-10)?;
        validate(&shape)?;
        Ok(Self(shape))
    }

    pub fn maximally_mixed() -> Self {
        Self(XShape::new([0.125; 8], [c(0.0, 0.0); 4]))
    }

    pub fn shape(&self) -> &XShape {
        &self.0
    }

    pub fn diag(&self) -> &[f64; 8] {
        self.0.diag()
    }

    pub fn anti(&self) -> &[C64; 4] {
        self.0.anti()
    }

    pub fn blocks(&self) -> [Block; 4] {
        self.0.blocks()
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        self.0.to_dense()
    }

    /// Eigenvalues as [lambda_1+, lambda_1-, ..., lambda_4+, lambda_4-].
    pub fn eigenvalues_closed(&self) -> [f64; 8] {
        self.0.eigenvalues()
    }

    pub fn sqrt_closed(&self) -> XShape {
        self.0.sqrt()
    }

    /// Pauli coefficients of the state itself.
    pub fn fano_bloch_r(&self) -> PauliTensor {
        self.0.pauli_coefficients()
    }

    /// Pauli coefficients of the square root of the state.
    pub fn fano_bloch_t(&self) -> PauliTensor {
        self.sqrt_closed().pauli_coefficients()
    }

    /// Record of 12 whitespace separated fields: eight diagonal entries, then
    /// four anti-diagonal coherences written `re,im`.
    pub fn to_record(&self) -> String {
        let mut s = String::new();
        for d in self.diag() {
            write!(s, "{d} ").unwrap();
        }
        let fields: Vec<String> = self.anti().iter().map(|z| format!("{},{}", z.re, z.im)).collect();
        s.push_str(&fields.join(" "));
        s
    }

    pub fn parse_record(text: &str) -> Result<Self> {
        let fields: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .collect();
        if fields.len() != 12 {
            return Err(Error::Parse(format!("expected 12 fields, found {}", fields.len())));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("'{s}' is not a number")));
        let mut diag = [0.0; 8];
        for (d, f) in diag.iter_mut().zip(&fields[..8]) {
            *d = real(f)?;
        }
        let mut anti = [c(0.0, 0.0); 4];
        for (a, f) in anti.iter_mut().zip(&fields[8..]) {
            *a = match f.split_once(',') {
                Some((re, im)) => c(real(re)?, real(im)?),
                None => c(real(f)?, 0.0),
            };
        }
        Self::new(diag, anti)
    }
}

fn validate(shape: &XShape) -> Result<()> {
    if shape.diag.iter().chain(shape.anti.iter().flat_map(|z| [&z.re, &z.im])).any(|v| !v.is_finite()) {
        return Err(Error::Parse("non-finite entry".into()));
    }
    for (index, &value) in shape.diag.iter().enumerate() {
        if value < -STATE_TOL {
            return Err(Error::NegativeDiagonal { index, value });
        }
    }
    let trace: f64 = shape.diag.iter().sum();
    if (trace - 1.0).abs() > STATE_TOL {
        return Err(Error::Trace { trace });
    }
    for (block, b) in shape.blocks().iter().enumerate() {
        if b.det() < -STATE_TOL {
            return Err(Error::CoherenceTooLarge { block });
        }
    }
    Ok(())
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Domain { name, value, domain: "[0, 1]" });
    }
    Ok(())
}

/// `p I/8 + (1 - p) |GHZ><GHZ|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzMixedFamily {
    p: f64,
}

impl GhzMixedFamily {
    pub fn new(p: f64) -> Result<Self> {
        check_unit("p", p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

pub fn make_ghz_mixed(family: GhzMixedFamily) -> XState {
    let p = family.p;
    let mut diag = [p / 8.0; 8];
    diag[0] += (1.0 - p) / 2.0;
    diag[7] += (1.0 - p) / 2.0;
    let anti = [c((1.0 - p) / 2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    XState(XShape::new(diag, anti))
}

/// `(I + sum_i c_i sigma_i (x) sigma_i (x) sigma_i) / 8`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellTypeFamily {
    c: [f64; 3],
}

impl BellTypeFamily {
    /// Positivity requires c_1^2 + c_2^2 + c_3^2 <= 1 (up to the shared tolerance).
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(Error::Domain { name, value: v, domain: "[-1, 1]" });
            }
        }
        let norm2 = c1 * c1 + c2 * c2 + c3 * c3;
        if norm2 > 1.0 + STATE_TOL {
            return Err(Error::Domain { name: "c1^2 + c2^2 + c3^2", value: norm2, domain: "[0, 1]" });
        }
        Ok(Self { c: [c1, c2, c3] })
    }

    pub fn coefficients(&self) -> [f64; 3] {
        self.c
    }
}

pub fn make_bell_type(family: BellTypeFamily) -> XState {
    let [c1, c2, c3] = family.c;
    let mut diag = [0.0; 8];
    for (idx, d) in diag.iter_mut().enumerate() {
        let ones = (1..=3).filter(|&q| qubit_bit(idx, q) == 1).count();
        *d = (1.0 + if ones % 2 == 0 { c3 } else { -c3 }) / 8.0;
    }
    let anti = std::array::from_fn(|k| {
        // (sigma_y^{(x)3})[k][7-k] = prod over qubits of -i (bit 0) or +i (bit 1)
        let mut y = c(1.0, 0.0);
        for q in 1..=3 {
            y *= if qubit_bit(k, q) == 0 { c(0.0, -1.0) } else { c(0.0, 1.0) };
        }
        (c(c1, 0.0) + y * c2) / 8.0
    });
    XState(XShape::new(diag, anti))
}
