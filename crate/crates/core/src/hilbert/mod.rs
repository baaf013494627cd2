//! Dense finite-dimensional complex Hilbert spaces.
//!
//! Everything here is double precision and immutable once built. Vectors and
//! matrices are plain owned buffers; the checks in the rest of the crate are
//! written against these types rather than a general linear-algebra backend.

mod matrix;
mod random;
mod subspace;
mod vector;

pub use matrix::ComplexMatrix;
pub use random::{random_state, random_unitary, SeededRng, GENERATOR_ID};
pub use subspace::{span, Subspace};
pub use vector::ComplexVector;

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Numerical thresholds shared by every check.
///
/// `eq_tol` decides equality of residuals (probabilities, ray equality,
/// orthonormality); `rank_tol` decides when a direction counts as present
/// in a rank computation, relative to the largest scale in the input.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ToleranceConfig {
    pub eq_tol: f64,
    pub rank_tol: f64,
}

impl ToleranceConfig {
    pub const DEFAULT_EQ_TOL: f64 = 1e-9;
    pub const DEFAULT_RANK_TOL: f64 = 1e-8;

    pub fn new(eq_tol: f64, rank_tol: f64) -> Result<Self> {
        let ok = eq_tol.is_finite()
            && rank_tol.is_finite()
            && eq_tol > 0.0
            && rank_tol > 0.0
            && eq_tol < 1.0;
        if ok {
            Ok(Self { eq_tol, rank_tol })
        } else {
            Err(Error::InvalidTolerance { eq_tol, rank_tol })
        }
    }

    pub fn with_eq_tol(self, eq_tol: f64) -> Result<Self> {
        Self::new(eq_tol, self.rank_tol)
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eq_tol: Self::DEFAULT_EQ_TOL,
            rank_tol: Self::DEFAULT_RANK_TOL,
        }
    }
}

/// `⟨v|w⟩`, conjugate-linear in `v`.
pub fn inner_product(v: &ComplexVector, w: &ComplexVector) -> Result<Complex64> {
    check_same_dim(v, w)?;
    Ok(v.dot_unchecked(w))
}

/// Born-rule transition probability `|⟨v|w⟩|² / (⟨v|v⟩⟨w|w⟩)`.
///
/// Depends only on the rays of `v` and `w`. Swapping the arguments gives a
/// bit-identical result: each term of the swapped inner product is the exact
/// conjugate of the original one.
pub fn transition_probability(
    v: &ComplexVector,
    w: &ComplexVector,
    tol: &ToleranceConfig,
) -> Result<f64> {
    check_same_dim(v, w)?;
    let nv = v.norm_sqr();
    let nw = w.norm_sqr();
    if nv.sqrt() < tol.eq_tol || nw.sqrt() < tol.eq_tol {
        return Err(Error::ZeroVector);
    }
    let overlap = v.dot_unchecked(w).norm_sqr();
    Ok((overlap / (nv * nw)).clamp(0.0, 1.0))
}

pub(crate) fn check_same_dim(v: &ComplexVector, w: &ComplexVector) -> Result<()> {
    if v.dim() == w.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: w.dim(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_product_examples() {
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        assert_eq!(inner_product(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&e1, &e2).unwrap(), c(0.0, 0.0));

        let v = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let w = ComplexVector::new(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(inner_product(&v, &w).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_slot() {
        let v = random_state(3, 1);
        let w = random_state(3, 2);
        let k = c(0.3, -1.2);
        let lhs = inner_product(&v.scale(k), &w).unwrap();
        let rhs = k.conj() * inner_product(&v, &w).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        let lhs = inner_product(&v, &w.scale(k)).unwrap();
        let rhs = k * inner_product(&v, &w).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn inner_product_rejects_mismatched_dims() {
        let err = inner_product(&ComplexVector::basis(2, 0), &ComplexVector::basis(3, 0));
        assert!(matches!(
            err,
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn transition_probability_examples() {
        let tol = ToleranceConfig::default();
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        assert_eq!(transition_probability(&e1, &e1, &tol).unwrap(), 1.0);
        let plus = &e1 + &e2;
        let p = transition_probability(&e1, &plus, &tol).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn transition_probability_rejects_zero() {
        let tol = ToleranceConfig::default();
        let z = ComplexVector::zeros(2);
        let e1 = ComplexVector::basis(2, 0);
        assert!(matches!(
            transition_probability(&z, &e1, &tol),
            Err(Error::ZeroVector)
        ));
        let tiny = e1.scale(c(1e-12, 0.0));
        assert!(matches!(
            transition_probability(&e1, &tiny, &tol),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn transition_probability_scaling_invariance() {
        let tol = ToleranceConfig::default();
        for seed in 0..20 {
            let v = random_state(4, seed);
            let w = random_state(4, seed + 100);
            let p = transition_probability(&v, &w, &tol).unwrap();
            let q = transition_probability(&v.scale(c(2.0, 0.0)), &w.scale(I), &tol).unwrap();
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::new(1e-9, 1e-8).is_ok());
        assert!(ToleranceConfig::new(0.0, 1e-8).is_err());
        assert!(ToleranceConfig::new(1.0, 1e-8).is_err());
        assert!(ToleranceConfig::new(1e-9, -1.0).is_err());
        assert!(ToleranceConfig::new(f64::NAN, 1e-8).is_err());
    }
}
