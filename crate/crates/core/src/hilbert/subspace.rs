use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector, ToleranceConfig};
use crate::error::{Error, Result};

/// A linear subspace stored as an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<ComplexVector>,
}

impl Subspace {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexVector] {
        &self.basis
    }

    /// Frame matrix, one orthonormal column per basis vector.
    pub fn frame(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.basis).expect("subspace frame is non-empty")
    }

    /// Orthogonal projector `F F†`.
    pub fn projector(&self) -> ComplexMatrix {
        let f = self.frame();
        f.matmul(&f.adjoint()).expect("shapes agree")
    }

    pub fn project(&self, v: &ComplexVector) -> ComplexVector {
        let mut out = ComplexVector::zeros(self.ambient_dim);
        for q in &self.basis {
            out = out.add_scaled(q.dot_unchecked(v), q);
        }
        out
    }

    /// True iff `‖v − F F† v‖ / ‖v‖ < eq_tol`.
    pub fn contains(&self, v: &ComplexVector, tol: &ToleranceConfig) -> Result<bool> {
        if v.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.dim(),
            });
        }
        let norm = v.norm();
        if norm < tol.eq_tol {
            return Err(Error::ZeroVector);
        }
        let residual = (v - &self.project(v)).norm();
        Ok(residual / norm < tol.eq_tol)
    }
}

/// Orthonormal basis of the linear span of `vectors`.
///
/// Modified Gram–Schmidt with one full reorthogonalization pass. A vector
/// whose residual after both passes is below `rank_tol` times the largest
/// input norm is treated as dependent and dropped.
pub fn span(vectors: &[ComplexVector], tol: &ToleranceConfig) -> Result<Subspace> {
    let first = vectors.first().ok_or(Error::EmptyInput)?;
    let ambient_dim = first.dim();
    for v in vectors {
        if v.dim() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: v.dim(),
            });
        }
    }
    let scale = vectors.iter().map(ComplexVector::norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroVector);
    }
    let threshold = tol.rank_tol * scale;

    let mut basis: Vec<ComplexVector> = Vec::new();
    for v in vectors {
        if basis.len() == ambient_dim {
            break;
        }
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = q.dot_unchecked(&w);
                w.sub_scaled_in_place(c, q);
            }
        }
        let r = w.norm();
        if r > threshold {
            basis.push(w.scale(Complex64::new(1.0 / r, 0.0)));
        }
    }
    Ok(Subspace { ambient_dim, basis })
}
