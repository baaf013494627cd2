//! Composition maps `m: A × B → C` and the checks that force `C ≅ A ⊗ B`.
//!
//! Tensor-basis order is fixed throughout: the pair `(i, j)` sits at column
//! `i·dim_b + j`, the ordering of [`ComplexVector::kron`].

mod checks;
mod isomorphism;

pub use checks::{
    check_bilinearity, check_composite_independence, check_composite_independence_with,
    check_probability_product, check_single_system_born, check_span_surjectivity, check_totality,
    frozen_pair_probabilities, map_basis, BasisReport, BilinearityReport, IndependenceReport,
    MarginalReport, ProbabilityProductReport, Side, SpanReport, TotalityReport, Witness,
};
pub use isomorphism::{
    composition_convention, construct_isomorphism, construct_isomorphism_with, Convention,
    IsomorphismResult, FACTORIZATION_TRIALS,
};

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{ComplexMatrix, ComplexVector};

/// The conditions a composition map must meet before it factors through `⊗`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Condition {
    /// H1: nonzero on every pair of states.
    Totality,
    /// H2: linear in each argument.
    Bilinearity,
    /// H3: the image spans `C`.
    SpanSurjectivity,
    /// Images of product basis pairs are orthonormal and number `dim_c`.
    OrthonormalBasis,
    /// Freezing one argument preserves transition probabilities.
    ProbabilityProduct,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Totality => "H1 totality",
            Condition::Bilinearity => "H2 bilinearity",
            Condition::SpanSurjectivity => "H3 span surjectivity",
            Condition::OrthonormalBasis => "orthonormal basis carry-over",
            Condition::ProbabilityProduct => "probability product",
        })
    }
}

/// A black-box map from vector pairs to vectors.
pub trait CompositionOracle: Send + Sync {
    /// `(dim_a, dim_b, dim_c)`.
    fn dims(&self) -> (usize, usize, usize);
    fn compose(&self, a: &ComplexVector, b: &ComplexVector) -> ComplexVector;
}

/// Composition given by a closure.
pub struct FnComposition<F> {
    dims: (usize, usize, usize),
    f: F,
}

impl<F> FnComposition<F>
where
    F: Fn(&ComplexVector, &ComplexVector) -> ComplexVector + Send + Sync,
{
    pub fn new(dim_a: usize, dim_b: usize, dim_c: usize, f: F) -> Self {
        assert!(
            dim_a > 0 && dim_b > 0 && dim_c > 0,
            "dimensions must be positive"
        );
        Self {
            dims: (dim_a, dim_b, dim_c),
            f,
        }
    }
}

impl<F> CompositionOracle for FnComposition<F>
where
    F: Fn(&ComplexVector, &ComplexVector) -> ComplexVector + Send + Sync,
{
    fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    fn compose(&self, a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
        (self.f)(a, b)
    }
}

/// The Kronecker product `(a, b) ↦ a ⊗ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Kronecker {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl CompositionOracle for Kronecker {
    fn dims(&self) -> (usize, usize, usize) {
        (self.dim_a, self.dim_b, self.dim_a * self.dim_b)
    }

    fn compose(&self, a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
        a.kron(b)
    }
}

/// `m(a, b)_k = Σ_{i,j} T[k][i][j] a_i b_j`, stored flat at
/// `k·(dim_a·dim_b) + i·dim_b + j`.
///
/// The flat layout is the row-major `dim_c × (dim_a·dim_b)` matrix whose
/// column `i·dim_b + j` is `m(e_i, e_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearComposition {
    dim_a: usize,
    dim_b: usize,
    dim_c: usize,
    coeffs: Vec<Complex64>,
}

impl BilinearComposition {
    pub fn new(dim_a: usize, dim_b: usize, dim_c: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_c == 0 {
            return Err(Error::ZeroDimension);
        }
        let expected = dim_a
            .checked_mul(dim_b)
            .and_then(|ab| ab.checked_mul(dim_c));
        if expected != Some(coeffs.len()) {
            return Err(Error::ShapeMismatch {
                rows: dim_c,
                cols: dim_a.saturating_mul(dim_b),
                found: coeffs.len(),
            });
        }
        Ok(Self {
            dim_a,
            dim_b,
            dim_c,
            coeffs,
        })
    }

    /// The Kronecker product itself: `T[i·dim_b + j][i][j] = 1`.
    pub fn canonical(dim_a: usize, dim_b: usize) -> Self {
        Self::from_matrix(&ComplexMatrix::identity(dim_a * dim_b), dim_a, dim_b)
            .expect("identity has matching shape")
    }

    /// `m(a, b) = matrix · (a ⊗ b)`.
    pub fn from_matrix(matrix: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if matrix.cols() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: matrix.cols(),
            });
        }
        Self::new(dim_a, dim_b, matrix.rows(), matrix.as_slice().to_vec())
    }

    /// The same map followed by an isometric embedding into `dim_c` dimensions
    /// (extra rows are zero).
    pub fn zero_padded(&self, dim_c: usize) -> Self {
        assert!(dim_c >= self.dim_c);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim_c * self.dim_a * self.dim_b, Complex64::new(0.0, 0.0));
        Self {
            dim_c,
            coeffs,
            ..*self
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim_c(&self) -> usize {
        self.dim_c
    }

    /// Flat coefficients in the documented order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn index(&self, k: usize, i: usize, j: usize) -> usize {
        assert!(k < self.dim_c && i < self.dim_a && j < self.dim_b);
        k * self.dim_a * self.dim_b + i * self.dim_b + j
    }

    pub fn coeff(&self, k: usize, i: usize, j: usize) -> Complex64 {
        self.coeffs[self.index(k, i, j)]
    }

    pub fn set_coeff(&mut self, k: usize, i: usize, j: usize, value: Complex64) {
        let idx = self.index(k, i, j);
        self.coeffs[idx] = value;
    }

    /// `dim_c × (dim_a·dim_b)` matrix with columns `m(e_i, e_j)`.
    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.dim_c, self.dim_a * self.dim_b, self.coeffs.clone())
            .expect("coefficient count matches shape")
    }

    pub fn evaluate(&self, a: &ComplexVector, b: &ComplexVector) -> Result<ComplexVector> {
        if a.dim() != self.dim_a {
            return Err(Error::DimensionMismatch {
                expected: self.dim_a,
                found: a.dim(),
            });
        }
        if b.dim() != self.dim_b {
            return Err(Error::DimensionMismatch {
                expected: self.dim_b,
                found: b.dim(),
            });
        }
        Ok(self.contract(a, b))
    }

    fn contract(&self, a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
        let ab = self.dim_a * self.dim_b;
        self.coeffs
            .chunks_exact(ab)
            .map(|slab| {
                slab.chunks_exact(self.dim_b)
                    .zip(a.iter())
                    .map(|(row, ai)| {
                        ai * row
                            .iter()
                            .zip(b.iter())
                            .map(|(t, bj)| t * bj)
                            .sum::<Complex64>()
                    })
                    .sum()
            })
            .collect()
    }
}

impl CompositionOracle for BilinearComposition {
    fn dims(&self) -> (usize, usize, usize) {
        (self.dim_a, self.dim_b, self.dim_c)
    }

    /// Panics on dimension mismatch; use [`BilinearComposition::evaluate`]
    /// for a checked call.
    fn compose(&self, a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
        self.evaluate(a, b)
            .expect("argument dimensions match the composition")
    }
}
