use std::ops::{Add, Index, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { data })
    }

    /// Builds a vector from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Standard basis vector `e_index` (0-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut v = Self::zeros(dim);
        v.data[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.data.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Returns `self / ‖self‖`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Kronecker product; index `i * other.dim() + j` holds `self[i] * other[j]`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { data }
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: Complex64, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    pub(crate) fn dot_unchecked(&self, other: &Self) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub(crate) fn sub_scaled_in_place(&mut self, k: Complex64, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a -= k * b;
        }
    }
}

/// `[re+imi, …]` with shortest round-trip digits.
impl std::fmt::Display for ComplexVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("[")?;
        for (k, z) in self.data.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}{:+}i", z.re, z.im)?;
        }
        f.write_str("]")
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;

    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        self.add_scaled(Complex64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;

    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        self.add_scaled(Complex64::new(-1.0, 0.0), rhs)
    }
}

impl FromIterator<Complex64> for ComplexVector {
    /// Panics on an empty iterator.
    fn from_iter<T: IntoIterator<Item = Complex64>>(iter: T) -> Self {
        let data: Vec<_> = iter.into_iter().collect();
        assert!(!data.is_empty(), "dimension must be positive");
        Self { data }
    }
}
