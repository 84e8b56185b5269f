//! Bipartite and tripartite negativity from partial transposes.

use crate::error::Result;
use crate::linalg::{hermitian_eigenvalues, partial_transpose, ComplexMatrix};
use crate::xstate::{BellTypeFamily, GhzMixedFamily};

/// Bipartite values below this are roundoff of `sum |lambda| - 1` and are
/// reported as 0, since the cube root of the product would amplify them.
pub const NEGATIVITY_FLOOR: f64 = 1e-12;

/// `sum_i |lambda_i(rho^{T_qubit})| - 1`.
pub fn bipartite_negativity(rho: &ComplexMatrix, qubit: usize) -> Result<f64> {
    let pt = partial_transpose(rho, &[qubit])?;
    let vals = hermitian_eigenvalues(&pt)?;
    let n = vals.iter().map(|v| v.abs()).sum::<f64>() - 1.0;
    Ok(if n < NEGATIVITY_FLOOR { 0.0 } else { n })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativityReport {
    /// Negativity of qubit k against the other two, k = 1, 2, 3.
    pub bipartite: [f64; 3],
    /// Geometric mean of the three bipartite values.
    pub tripartite: f64,
}

pub fn tripartite_negativity(rho: &ComplexMatrix) -> Result<NegativityReport> {
    let bipartite = [bipartite_negativity(rho, 1)?, bipartite_negativity(rho, 2)?, bipartite_negativity(rho, 3)?];
    let tripartite = bipartite.iter().product::<f64>().cbrt();
    Ok(NegativityReport { bipartite, tripartite })
}

/// Printed GHZ-mixture expression.
pub fn negativity_ghz(family: GhzMixedFamily) -> f64 {
    let p = family.p();
    p / 2.0 + (12.0 - 9.0 * p) / 8.0 + (5.0 * p - 4.0).abs() / 8.0 - 1.0
}

/// Printed Bell-type expression in the equal-coefficient case; `None` otherwise.
pub fn negativity_bell(family: BellTypeFamily) -> Option<f64> {
    let [c1, c2, c3] = family.coefficients();
    if c1 != c2 || c2 != c3 {
        return None;
    }
    let s = 3f64.sqrt() * c1;
    Some(0.5 * (1.0 - s).abs() + 0.5 * (1.0 + s).abs() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstate::{make_bell_type, make_ghz_mixed};

    #[test]
    fn ghz_printed_matches_partial_transpose() {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let fam = GhzMixedFamily::new(p).unwrap();
            let rep = tripartite_negativity(&make_ghz_mixed(fam).to_dense()).unwrap();
            assert!((rep.tripartite - negativity_ghz(fam)).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn ghz_separable_region() {
        for p in [0.8, 0.9, 1.0] {
            assert!(negativity_ghz(GhzMixedFamily::new(p).unwrap()).abs() < 1e-15);
        }
        assert!((negativity_ghz(GhzMixedFamily::new(0.0).unwrap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_type_is_not_npt() {
        let cc = 0.5;
        let fam = BellTypeFamily::new(cc, cc, cc).unwrap();
        let rep = tripartite_negativity(&make_bell_type(fam).to_dense()).unwrap();
        assert!(rep.tripartite < 1e-12);
        assert!(negativity_bell(fam).unwrap().abs() < 1e-15);
        assert!(negativity_bell(BellTypeFamily::new(0.1, 0.2, 0.3).unwrap()).is_none());
    }
}
