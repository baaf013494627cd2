use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{check_same_dim, ComplexVector, ToleranceConfig};

/// A point of projective space, held by its canonical representative.
///
/// The representative has unit norm and its first component with modulus
/// above `eq_tol` is real and strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    rep: ComplexVector,
}

impl std::fmt::Display for Ray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ray{}", self.rep)
    }
}

impl Ray {
    pub fn rep(&self) -> &ComplexVector {
        &self.rep
    }

    pub fn into_rep(self) -> ComplexVector {
        self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Ray of the standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        Self {
            rep: ComplexVector::basis(dim, index),
        }
    }

    /// `|⟨r|s⟩|²` for the unit representatives; panics on dimension mismatch.
    pub fn overlap(&self, other: &Ray) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.rep.dot_unchecked(&other.rep).norm_sqr().min(1.0)
    }
}

/// Picks the canonical representative of the ray through `v`.
pub fn canonicalize(v: &ComplexVector, tol: &ToleranceConfig) -> Result<Ray> {
    let norm = v.norm();
    if norm < tol.eq_tol {
        return Err(Error::ZeroVector);
    }
    let unit = v.scale(Complex64::new(1.0 / norm, 0.0));
    // Unit norm guarantees a component of modulus ≥ 1/√dim.
    let pivot = unit
        .iter()
        .position(|z| z.norm() > tol.eq_tol)
        .expect("unit vector has a significant component");
    let p = unit[pivot];
    let modulus = p.norm();
    let phase = p.conj() / modulus;
    let rep = unit
        .iter()
        .enumerate()
        .map(|(k, z)| {
            if k == pivot {
                Complex64::new(modulus, 0.0)
            } else {
                z * phase
            }
        })
        .collect();
    Ok(Ray { rep })
}

/// Equality in projective space: `1 − P(r, s) < eq_tol`.
pub fn ray_equal(r: &Ray, s: &Ray, tol: &ToleranceConfig) -> Result<bool> {
    check_same_dim(&r.rep, &s.rep)?;
    Ok(1.0 - r.overlap(s) < tol.eq_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{random_state, I};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn v(p: &[(f64, f64)]) -> ComplexVector {
        ComplexVector::from_pairs(p).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let r = canonicalize(&v(&[(0.0, 0.0), (0.0, 2.0)]), &tol()).unwrap();
        assert_eq!(r.rep(), &v(&[(0.0, 0.0), (1.0, 0.0)]));

        let r = canonicalize(&v(&[(1.0, 0.0), (1.0, 0.0)]), &tol()).unwrap();
        assert!(
            r.rep()
                .max_abs_diff(&v(&[(FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0)]))
                < 1e-15
        );

        let r = canonicalize(&v(&[(0.0, 1.0), (1.0, 0.0)]), &tol()).unwrap();
        assert!(
            r.rep()
                .max_abs_diff(&v(&[(FRAC_1_SQRT_2, 0.0), (0.0, -FRAC_1_SQRT_2)]))
                < 1e-15
        );
    }

    #[test]
    fn canonicalize_rejects_zero() {
        assert!(matches!(
            canonicalize(&ComplexVector::zeros(3), &tol()),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn pivot_skips_noise_level_components() {
        let r = canonicalize(&v(&[(1e-12, 1e-12), (0.0, -3.0)]), &tol()).unwrap();
        assert_eq!(r.rep()[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn ray_equal_examples() {
        let x = random_state(4, 8);
        let r = canonicalize(&x, &tol()).unwrap();
        let phase = Complex64::from_polar(3.0, 1.234);
        let s = canonicalize(&x.scale(phase), &tol()).unwrap();
        assert!(ray_equal(&r, &s, &tol()).unwrap());

        let e1 = Ray::basis(2, 0);
        let e2 = Ray::basis(2, 1);
        assert!(!ray_equal(&e1, &e2, &tol()).unwrap());

        // 1 − P = 1e-6 / (1 + 1e-6) for e1 + 1e-3·e2.
        let near = canonicalize(&v(&[(1.0, 0.0), (1e-3, 0.0)]), &tol()).unwrap();
        let gap = 1.0 - e1.overlap(&near);
        assert!((gap - 1e-6 / (1.0 + 1e-6)).abs() < 1e-15);
        assert!(!ray_equal(&e1, &near, &tol()).unwrap());

        let imag = canonicalize(&ComplexVector::basis(2, 0).scale(I), &tol()).unwrap();
        assert_eq!(imag, e1);
    }

    #[test]
    fn ray_equal_dimension_mismatch() {
        assert!(matches!(
            ray_equal(&Ray::basis(2, 0), &Ray::basis(3, 0), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
