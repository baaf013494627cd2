use std::sync::Arc;

use super::{canonicalize, ray_equal, Ray};
use crate::error::{Error, Result};
use crate::hilbert::{ComplexMatrix, ComplexVector, ToleranceConfig};
use crate::tensor::CompositionOracle;

/// A map from rays to rays, queried point by point.
pub trait RayMap: Send + Sync {
    fn domain_dim(&self) -> usize;
    fn codomain_dim(&self) -> usize;
    fn apply(&self, ray: &Ray, tol: &ToleranceConfig) -> Result<Ray>;
}

/// Which argument of a composition map is held fixed.
#[derive(Debug, Clone, PartialEq)]
pub enum FrozenSlot {
    /// `a ↦ m(a, b)` for the stored `b`.
    Second(ComplexVector),
    /// `b ↦ m(a, b)` for the stored `a`.
    First(ComplexVector),
}

/// Ray map `ray(a) ↦ ray(m(a, b))` (or the mirror image with `a` fixed).
#[derive(Clone)]
pub struct FrozenComposition {
    composition: Arc<dyn CompositionOracle>,
    frozen: FrozenSlot,
}

impl std::fmt::Debug for FrozenComposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FrozenComposition")
            .field("dims", &self.composition.dims())
            .field("frozen", &self.frozen)
            .finish()
    }
}

impl FrozenComposition {
    pub fn new(composition: Arc<dyn CompositionOracle>, frozen: FrozenSlot) -> Result<Self> {
        let (da, db, _) = composition.dims();
        let (expected, found) = match &frozen {
            FrozenSlot::Second(b) => (db, b.dim()),
            FrozenSlot::First(a) => (da, a.dim()),
        };
        if expected != found {
            return Err(Error::DimensionMismatch { expected, found });
        }
        Ok(Self {
            composition,
            frozen,
        })
    }
}

/// The concrete ray maps the library knows how to build and serialize.
#[derive(Debug, Clone)]
pub enum RayMapOracle {
    /// `ray(x) ↦ ray(A x)`, or `ray(A x̄)` when `conjugate_input` is set.
    MatrixInduced {
        matrix: ComplexMatrix,
        conjugate_input: bool,
    },
    /// Finite lookup table of `(input, output)` rays.
    Tabulated {
        domain_dim: usize,
        codomain_dim: usize,
        pairs: Vec<(Ray, Ray)>,
    },
    Composite(FrozenComposition),
}

impl RayMapOracle {
    /// Requires full column rank at `rank_tol`.
    pub fn matrix_induced(
        matrix: ComplexMatrix,
        conjugate_input: bool,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let rank = matrix.numerical_rank(tol.rank_tol);
        if rank < matrix.cols() {
            return Err(Error::RankDeficient {
                rank,
                cols: matrix.cols(),
            });
        }
        Ok(Self::MatrixInduced {
            matrix,
            conjugate_input,
        })
    }

    /// Canonicalizes both sides of every pair and rejects repeated inputs.
    pub fn tabulated(
        domain_dim: usize,
        codomain_dim: usize,
        pairs: &[(ComplexVector, ComplexVector)],
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        if domain_dim == 0 || codomain_dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut table: Vec<(Ray, Ray)> = Vec::with_capacity(pairs.len());
        for (input, output) in pairs {
            if input.dim() != domain_dim {
                return Err(Error::DimensionMismatch {
                    expected: domain_dim,
                    found: input.dim(),
                });
            }
            if output.dim() != codomain_dim {
                return Err(Error::DimensionMismatch {
                    expected: codomain_dim,
                    found: output.dim(),
                });
            }
            let input = canonicalize(input, tol)?;
            if let Some(first) = table
                .iter()
                .position(|(seen, _)| 1.0 - seen.overlap(&input) < tol.eq_tol)
            {
                return Err(Error::DuplicateRay {
                    first,
                    second: table.len(),
                });
            }
            table.push((input, canonicalize(output, tol)?));
        }
        Ok(Self::Tabulated {
            domain_dim,
            codomain_dim,
            pairs: table,
        })
    }

    /// Tabulates `matrix_induced(matrix, conjugate_input)` on `inputs`.
    pub fn tabulate(
        matrix: &ComplexMatrix,
        conjugate_input: bool,
        inputs: &[ComplexVector],
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let source = Self::matrix_induced(matrix.clone(), conjugate_input, tol)?;
        let pairs = inputs
            .iter()
            .map(|x| {
                let r = canonicalize(x, tol)?;
                Ok((x.clone(), source.apply(&r, tol)?.into_rep()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::tabulated(matrix.cols(), matrix.rows(), &pairs, tol)
    }

    pub fn composite(frozen: FrozenComposition) -> Self {
        Self::Composite(frozen)
    }
}

impl RayMap for RayMapOracle {
    fn domain_dim(&self) -> usize {
        match self {
            Self::MatrixInduced { matrix, .. } => matrix.cols(),
            Self::Tabulated { domain_dim, .. } => *domain_dim,
            Self::Composite(c) => c.domain_dim(),
        }
    }

    fn codomain_dim(&self) -> usize {
        match self {
            Self::MatrixInduced { matrix, .. } => matrix.rows(),
            Self::Tabulated { codomain_dim, .. } => *codomain_dim,
            Self::Composite(c) => c.codomain_dim(),
        }
    }

    fn apply(&self, ray: &Ray, tol: &ToleranceConfig) -> Result<Ray> {
        if ray.dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                found: ray.dim(),
            });
        }
        match self {
            Self::MatrixInduced {
                matrix,
                conjugate_input,
            } => {
                let image = if *conjugate_input {
                    matrix.mul_vec(&ray.rep().conj())?
                } else {
                    matrix.mul_vec(ray.rep())?
                };
                canonicalize(&image, tol)
            }
            Self::Tabulated { pairs, .. } => {
                for (input, output) in pairs {
                    if ray_equal(input, ray, tol)? {
                        return Ok(output.clone());
                    }
                }
                Err(Error::NotInTable)
            }
            Self::Composite(c) => c.apply(ray, tol),
        }
    }
}

impl RayMap for FrozenComposition {
    fn domain_dim(&self) -> usize {
        let (da, db, _) = self.composition.dims();
        match self.frozen {
            FrozenSlot::Second(_) => da,
            FrozenSlot::First(_) => db,
        }
    }

    fn codomain_dim(&self) -> usize {
        self.composition.dims().2
    }

    fn apply(&self, ray: &Ray, tol: &ToleranceConfig) -> Result<Ray> {
        if ray.dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                found: ray.dim(),
            });
        }
        let image = match &self.frozen {
            FrozenSlot::Second(b) => self.composition.compose(ray.rep(), b),
            FrozenSlot::First(a) => self.composition.compose(a, ray.rep()),
        };
        canonicalize(&image, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{random_unitary, Complex64, I};
    use crate::tensor::BilinearComposition;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn ray(p: &[(f64, f64)]) -> Ray {
        canonicalize(&ComplexVector::from_pairs(p).unwrap(), &tol()).unwrap()
    }

    #[test]
    fn identity_oracle_fixes_rays() {
        let m = RayMapOracle::matrix_induced(ComplexMatrix::identity(2), false, &tol()).unwrap();
        let r = ray(&[(1.0, 0.0), (1.0, 0.0)]);
        let out = m.apply(&r, &tol()).unwrap();
        assert!(ray_equal(&out, &r, &tol()).unwrap());
        assert!(out.rep().max_abs_diff(r.rep()) < 1e-15);
    }

    #[test]
    fn conjugating_oracle_conjugates() {
        let m = RayMapOracle::matrix_induced(ComplexMatrix::identity(2), true, &tol()).unwrap();
        let r = ray(&[(1.0, 1.0), (1.0, 0.0)]);
        let expected = ray(&[(1.0, -1.0), (1.0, 0.0)]);
        let got = m.apply(&r, &tol()).unwrap();
        assert!(got.rep().max_abs_diff(expected.rep()) < 1e-15);
    }

    #[test]
    fn unitary_oracle_matches_direct_product() {
        let u = random_unitary(3, 5);
        let m = RayMapOracle::matrix_induced(u.clone(), false, &tol()).unwrap();
        let got = m.apply(&Ray::basis(3, 0), &tol()).unwrap();
        let expected = canonicalize(&u.column(0), &tol()).unwrap();
        assert!(got.rep().max_abs_diff(expected.rep()) < 1e-15);
    }

    #[test]
    fn rank_deficient_matrix_is_rejected() {
        let mut a = ComplexMatrix::zeros(3, 2);
        a.set(0, 0, Complex64::new(1.0, 0.0));
        a.set(0, 1, Complex64::new(2.0, 0.0));
        assert!(matches!(
            RayMapOracle::matrix_induced(a, false, &tol()),
            Err(Error::RankDeficient { rank: 1, cols: 2 })
        ));
    }

    #[test]
    fn tabulated_lookup_and_miss() {
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        let m = RayMapOracle::tabulated(
            2,
            2,
            &[(e1.scale(I), e2.clone()), (e2.clone(), e1.clone())],
            &tol(),
        )
        .unwrap();
        assert_eq!(
            m.apply(&Ray::basis(2, 0), &tol()).unwrap(),
            Ray::basis(2, 1)
        );
        assert!(matches!(
            m.apply(&ray(&[(1.0, 0.0), (1.0, 0.0)]), &tol()),
            Err(Error::NotInTable)
        ));
    }

    #[test]
    fn tabulated_rejects_duplicate_inputs() {
        let e1 = ComplexVector::basis(2, 0);
        let r =
            RayMapOracle::tabulated(2, 2, &[(e1.clone(), e1.clone()), (e1.scale(I), e1)], &tol());
        assert!(matches!(
            r,
            Err(Error::DuplicateRay {
                first: 0,
                second: 1
            })
        ));
    }

    #[test]
    fn oracle_rejects_wrong_dimension() {
        let m = RayMapOracle::matrix_induced(ComplexMatrix::identity(2), false, &tol()).unwrap();
        assert!(matches!(
            m.apply(&Ray::basis(3, 0), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn frozen_composition_slices() {
        let m = Arc::new(BilinearComposition::canonical(2, 3));
        let b = ComplexVector::basis(3, 2);
        let slice = FrozenComposition::new(m.clone(), FrozenSlot::Second(b)).unwrap();
        assert_eq!((slice.domain_dim(), slice.codomain_dim()), (2, 6));
        let out = slice.apply(&Ray::basis(2, 1), &tol()).unwrap();
        assert_eq!(out, Ray::basis(6, 5));

        let a = ComplexVector::basis(2, 0);
        let slice = FrozenComposition::new(m.clone(), FrozenSlot::First(a)).unwrap();
        assert_eq!(slice.domain_dim(), 3);
        assert_eq!(
            slice.apply(&Ray::basis(3, 1), &tol()).unwrap(),
            Ray::basis(6, 1)
        );

        let bad = FrozenComposition::new(m, FrozenSlot::Second(ComplexVector::basis(2, 0)));
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }
}
