//! Monogamy of the LQU of qubit 1: `U(1|23) >= U(1|2) + U(1|3)`.

use crate::error::{Error, Result};
use crate::linalg::{kron, matrix_sqrt_psd, partial_trace, pauli, ComplexMatrix};
use crate::lqu::{lqu, sphere_audit, w_from_root, SphereMinimum, WMatrix};
use crate::xstate::XState;

pub const MONOGAMY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    OneTwo,
    OneThree,
    TwoThree,
}

impl Pair {
    pub fn from_labels(a: usize, b: usize) -> Result<Self> {
        match (a.min(b), a.max(b)) {
            (1, 2) => Ok(Pair::OneTwo),
            (1, 3) => Ok(Pair::OneThree),
            (2, 3) => Ok(Pair::TwoThree),
            _ => Err(Error::BadSubsystem(format!("({a}, {b}) is not a pair of distinct qubits"))),
        }
    }

    pub fn labels(&self) -> [usize; 2] {
        match self {
            Pair::OneTwo => [1, 2],
            Pair::OneThree => [1, 3],
            Pair::TwoThree => [2, 3],
        }
    }
}

/// Two-qubit reduced state, lower label as the first factor.
pub fn reduce_pair(x: &XState, pair: Pair) -> ComplexMatrix {
    partial_trace(&x.to_dense(), &pair.labels()).expect("valid pair of an 8x8 state")
}

fn first_qubit_paulis() -> [ComplexMatrix; 3] {
    std::array::from_fn(|i| kron(&pauli(i + 1), &pauli(0)))
}

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    Ok(())
}

pub fn w_matrix_2q(rho: &ComplexMatrix) -> Result<WMatrix> {
    check_two_qubit(rho)?;
    w_from_root(&matrix_sqrt_psd(rho)?, &first_qubit_paulis())
}

/// LQU of the first qubit of a two-qubit state.
pub fn lqu_2q(rho: &ComplexMatrix) -> Result<f64> {
    Ok((1.0 - w_matrix_2q(rho)?.lambda_max()).max(0.0))
}

/// Direct minimisation of the two-qubit skew information.
pub fn lqu_2q_audit(rho: &ComplexMatrix, points: usize) -> Result<SphereMinimum> {
    check_two_qubit(rho)?;
    sphere_audit(rho, &first_qubit_paulis(), points)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonogamyReport {
    pub u_1_23: f64,
    pub u_1_2: f64,
    pub u_1_3: f64,
    pub satisfied: bool,
    pub slack: f64,
}

pub fn monogamy_check(x: &XState) -> Result<MonogamyReport> {
    let u_1_23 = lqu(x);
    let u_1_2 = lqu_2q(&reduce_pair(x, Pair::OneTwo))?;
    let u_1_3 = lqu_2q(&reduce_pair(x, Pair::OneThree))?;
    let slack = u_1_23 - u_1_2 - u_1_3;
    Ok(MonogamyReport { u_1_23, u_1_2, u_1_3, satisfied: slack >= -MONOGAMY_TOL, slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::xstate::{make_bell_type, make_ghz_mixed, BellTypeFamily, GhzMixedFamily};

    #[test]
    fn ghz_reductions_are_diagonal() {
        let p = 0.35;
        let x = make_ghz_mixed(GhzMixedFamily::new(p).unwrap());
        let expected = ComplexMatrix::from_real_diagonal(&[(2.0 - p) / 4.0, p / 4.0, p / 4.0, (2.0 - p) / 4.0]);
        for pair in [Pair::OneTwo, Pair::OneThree, Pair::TwoThree] {
            assert!(reduce_pair(&x, pair).max_abs_diff(&expected) < 1e-15);
        }
        let w = w_matrix_2q(&expected).unwrap();
        assert!((w.get(0, 0) - (p * (2.0 - p)).sqrt()).abs() < 1e-12);
        assert!((w.get(2, 2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_type_reductions_are_maximally_mixed() {
        let x = make_bell_type(BellTypeFamily::new(0.3, 0.3, 0.3).unwrap());
        let id = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(reduce_pair(&x, Pair::TwoThree).max_abs_diff(&id) < 1e-15);
        assert!(lqu_2q(&id).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bell_pair_has_unit_lqu() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        let rho = ComplexMatrix::outer(&psi);
        assert!((lqu_2q(&rho).unwrap() - 1.0).abs() < 1e-9);
        assert!((lqu_2q_audit(&rho, 200).unwrap().value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn reports_for_the_families() {
        let r = monogamy_check(&make_ghz_mixed(GhzMixedFamily::new(0.2).unwrap())).unwrap();
        assert!(r.satisfied && r.u_1_2 < 1e-10 && r.u_1_3 < 1e-10);
        assert!((r.slack - r.u_1_23).abs() < 1e-10);
        let r = monogamy_check(&XState::maximally_mixed()).unwrap();
        assert!(r.satisfied && r.u_1_23.abs() < 1e-12);
        assert!(Pair::from_labels(2, 2).is_err());
    }
}
