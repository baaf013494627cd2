use std::sync::Arc;

use serde::Serialize;

use super::{check_span_surjectivity, check_totality, map_basis, CompositionOracle, Condition};
use crate::error::{Error, Result};
use crate::hilbert::{ComplexMatrix, ComplexVector, SeededRng, ToleranceConfig};
use crate::lift::lift;
use crate::projective::{FrozenComposition, FrozenSlot, RayMapOracle};

/// Random pairs used for the factorization residual and the totality sweep.
pub const FACTORIZATION_TRIALS: usize = 100;

/// The unitary `U: A ⊗ B → C` with `m(a, b) = U (a ⊗ b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsomorphismResult {
    pub iso: ComplexMatrix,
    /// `max |U†U − I|`.
    pub unitarity_residual: f64,
    /// `max ‖m(a, b) − U (a ⊗ b)‖` over random unit pairs.
    pub factorization_residual: f64,
}

impl IsomorphismResult {
    pub fn accepted(&self, tol: &ToleranceConfig) -> bool {
        self.unitarity_residual < tol.eq_tol && self.factorization_residual < tol.eq_tol
    }
}

pub fn construct_isomorphism(
    m: &dyn CompositionOracle,
    tol: &ToleranceConfig,
) -> Result<IsomorphismResult> {
    construct_isomorphism_with(m, FACTORIZATION_TRIALS, 0, tol)
}

/// Gates run in order: H1, H3, orthonormal basis images, `dim_c = dim_a·dim_b`.
/// The first failure is returned.
pub fn construct_isomorphism_with(
    m: &dyn CompositionOracle,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<IsomorphismResult> {
    let (da, db, dc) = m.dims();
    if !check_totality(m, trials, seed, tol).passed {
        return Err(Error::PreconditionFailed(Condition::Totality));
    }
    if !check_span_surjectivity(m, tol).passed {
        return Err(Error::PreconditionFailed(Condition::SpanSurjectivity));
    }
    let basis = map_basis(m, tol);
    if basis.gram_deviation >= tol.eq_tol {
        return Err(Error::PreconditionFailed(Condition::OrthonormalBasis));
    }
    if dc != da * db {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: dc,
        });
    }
    let iso = ComplexMatrix::from_columns(&basis.vectors)?;
    let unitarity_residual = iso.isometry_defect();

    let mut rng = SeededRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut factorization_residual: f64 = 0.0;
    for _ in 0..trials {
        let a = rng
            .gaussian_vector(da)
            .normalized()
            .expect("nonzero sample");
        let b = rng
            .gaussian_vector(db)
            .normalized()
            .expect("nonzero sample");
        let direct = m.compose(&a, &b);
        let through = iso.mul_vec(&a.kron(&b))?;
        factorization_residual = factorization_residual.max((&direct - &through).norm());
    }
    Ok(IsomorphismResult {
        iso,
        unitarity_residual,
        factorization_residual,
    })
}

/// Whether `a ↦ m(a, e_0)` and `b ↦ m(e_0, b)` lift to linear or antilinear
/// maps. `None` for a one-dimensional factor, where the two coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub first_antilinear: Option<bool>,
    pub second_antilinear: Option<bool>,
}

fn slot_antilinear(
    m: &Arc<dyn CompositionOracle>,
    slot: FrozenSlot,
    domain_dim: usize,
    tol: &ToleranceConfig,
) -> Result<Option<bool>> {
    if domain_dim == 1 {
        return Ok(None);
    }
    let (_, _, dc) = m.dims();
    let oracle = RayMapOracle::composite(FrozenComposition::new(Arc::clone(m), slot)?);
    Ok(Some(lift(&oracle, domain_dim, dc, tol)?.antilinear()))
}

pub fn composition_convention(
    m: &Arc<dyn CompositionOracle>,
    tol: &ToleranceConfig,
) -> Result<Convention> {
    let (da, db, _) = m.dims();
    Ok(Convention {
        first_antilinear: slot_antilinear(
            m,
            FrozenSlot::Second(ComplexVector::basis(db, 0)),
            da,
            tol,
        )?,
        second_antilinear: slot_antilinear(
            m,
            FrozenSlot::First(ComplexVector::basis(da, 0)),
            db,
            tol,
        )?,
    })
}
