//! Real symmetric eigensolvers and operator norms.

mod complex;
mod dense;
mod tridiag;

pub use complex::{hermitian_eigenvalues, spectral_norm, ComplexDense, C64};
pub use dense::{dense_eigen, DenseSym, DENSE_LIMIT};
pub use tridiag::{
    ground_pair, ground_pair_parity, sturm_count, tridiag_eigs, EigenPair, Spectrum, SymTridiag,
    PIVOT_FLOOR,
};

use crate::error::Result;

/// Spectral norm of a Hermitian operator: the largest eigenvalue modulus.
pub trait OperatorNorm {
    fn operator_norm(&self) -> Result<f64>;
}

impl OperatorNorm for SymTridiag {
    fn operator_norm(&self) -> Result<f64> {
        let bound = self.norm_bound();
        if bound == 0.0 {
            return Ok(0.0);
        }
        let tol = 1e-15 * bound;
        let lo = tridiag_eigs(self, 1, tol)?.values[0];
        let hi = -tridiag_eigs(&self.negated(), 1, tol)?.values[0];
        Ok(lo.abs().max(hi.abs()))
    }
}

impl OperatorNorm for DenseSym {
    fn operator_norm(&self) -> Result<f64> {
        let values = dense_eigen(self)?.values;
        Ok(extreme_modulus(&values))
    }
}

impl OperatorNorm for ComplexDense {
    fn operator_norm(&self) -> Result<f64> {
        Ok(extreme_modulus(&hermitian_eigenvalues(self)?))
    }
}

/// Free-function form of [`OperatorNorm::operator_norm`].
pub fn operator_norm<M: OperatorNorm + ?Sized>(m: &M) -> Result<f64> {
    m.operator_norm()
}

fn extreme_modulus(values: &[f64]) -> f64 {
    match (values.first(), values.last()) {
        (Some(a), Some(b)) => a.abs().max(b.abs()),
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_z_norm() {
        let z = ComplexDense::diagonal(&[1.0, -1.0]);
        assert!((operator_norm(&z).unwrap() - 1.0).abs() < 1e-15);
        let t = SymTridiag::new(vec![1.0, -1.0], vec![0.0]).unwrap();
        assert!((operator_norm(&t).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_norm() {
        assert_eq!(operator_norm(&ComplexDense::zeros(3)).unwrap(), 0.0);
        assert_eq!(operator_norm(&DenseSym::zeros(3)).unwrap(), 0.0);
        let t = SymTridiag::new(vec![0.0; 3], vec![0.0; 2]).unwrap();
        assert_eq!(operator_norm(&t).unwrap(), 0.0);
    }

    #[test]
    fn norm_is_sign_and_scale_covariant() {
        let t = SymTridiag::new(vec![0.3, -1.2, 2.5, 0.1], vec![0.4, -0.9, 1.1]).unwrap();
        let n = operator_norm(&t).unwrap();
        let neg = operator_norm(&t.negated()).unwrap();
        let scaled = operator_norm(&t.scaled(-2.5)).unwrap();
        assert!((n - neg).abs() < 1e-12);
        assert!((scaled - 2.5 * n).abs() < 1e-11);
        let dense = DenseSym::from_rows(4, &t.to_dense()).unwrap();
        assert!((operator_norm(&dense).unwrap() - n).abs() < 1e-12);
    }
}
