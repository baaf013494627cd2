use super::{canonicalize, Ray, RayMap};
use crate::error::{Error, Result};
use crate::hilbert::{ComplexVector, SeededRng, ToleranceConfig};

/// Outcome of comparing `P(v, w)` with `P(M v, M w)` over a set of pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub samples: usize,
    pub max_abs_deviation: f64,
    pub pass: bool,
    /// Domain rays of the pair with the largest deviation (first one on ties).
    pub worst_pair: Option<(Ray, Ray)>,
}

impl PreservationReport {
    pub(crate) fn empty() -> Self {
        Self {
            samples: 0,
            max_abs_deviation: 0.0,
            pass: true,
            worst_pair: None,
        }
    }

    pub(crate) fn record(&mut self, deviation: f64, pair: impl FnOnce() -> (Ray, Ray)) {
        self.samples += 1;
        if self.worst_pair.is_none() || deviation > self.max_abs_deviation {
            self.max_abs_deviation = deviation;
            self.worst_pair = Some(pair());
        }
    }

    pub(crate) fn finish(mut self, tol: &ToleranceConfig) -> Self {
        self.pass = self.max_abs_deviation < tol.eq_tol;
        self
    }
}

/// `(e_i, e_j)` for `i ≤ j` and `(e_i, e_i + e_j)` for `i ≠ j`.
///
/// These are the pairs the lift construction leans on, so they are always
/// part of a preservation check.
pub fn structured_pairs(dim: usize) -> Vec<(ComplexVector, ComplexVector)> {
    let mut pairs = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            pairs.push((ComplexVector::basis(dim, i), ComplexVector::basis(dim, j)));
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                let ei = ComplexVector::basis(dim, i);
                let sum = &ei + &ComplexVector::basis(dim, j);
                pairs.push((ei, sum));
            }
        }
    }
    pairs
}

fn pair_deviation(map: &dyn RayMap, v: &Ray, w: &Ray, tol: &ToleranceConfig) -> Result<f64> {
    let before = v.overlap(w);
    let after = map.apply(v, tol)?.overlap(&map.apply(w, tol)?);
    Ok((before - after).abs())
}

/// Largest `|P(x, y) − P(M x, M y)|` over the given domain pairs.
pub fn worst_pair_among(
    map: &dyn RayMap,
    pairs: &[(ComplexVector, ComplexVector)],
    tol: &ToleranceConfig,
) -> Result<PreservationReport> {
    let mut report = PreservationReport::empty();
    for (x, y) in pairs {
        let (x, y) = (canonicalize(x, tol)?, canonicalize(y, tol)?);
        let d = pair_deviation(map, &x, &y, tol)?;
        report.record(d, || (x, y));
    }
    Ok(report.finish(tol))
}

/// Preservation on the structured pairs alone; needs no random queries, so
/// it also works on tabulated maps that store exactly those points.
pub fn check_structured_preservation(
    map: &dyn RayMap,
    tol: &ToleranceConfig,
) -> Result<PreservationReport> {
    worst_pair_among(map, &structured_pairs(map.domain_dim()), tol)
}

/// Structured pairs plus `trials` random pairs of unit vectors.
pub fn check_probability_preservation(
    map: &dyn RayMap,
    dim: usize,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PreservationReport> {
    if dim != map.domain_dim() {
        return Err(Error::DimensionMismatch {
            expected: map.domain_dim(),
            found: dim,
        });
    }
    let mut report = PreservationReport::empty();
    for (x, y) in structured_pairs(dim) {
        let (x, y) = (canonicalize(&x, tol)?, canonicalize(&y, tol)?);
        let d = pair_deviation(map, &x, &y, tol)?;
        report.record(d, || (x, y));
    }
    let mut rng = SeededRng::new(seed);
    for _ in 0..trials {
        let x = canonicalize(&rng.gaussian_vector(dim), tol)?;
        let y = canonicalize(&rng.gaussian_vector(dim), tol)?;
        let d = pair_deviation(map, &x, &y, tol)?;
        report.record(d, || (x, y));
    }
    Ok(report.finish(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{random_unitary, Complex64, ComplexMatrix};
    use crate::projective::RayMapOracle;

    struct Constant {
        dim: usize,
        image: Ray,
    }

    impl RayMap for Constant {
        fn domain_dim(&self) -> usize {
            self.dim
        }
        fn codomain_dim(&self) -> usize {
            self.image.dim()
        }
        fn apply(&self, _: &Ray, _: &ToleranceConfig) -> Result<Ray> {
            Ok(self.image.clone())
        }
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn structured_pair_count() {
        // n(n+1)/2 basis pairs plus n(n-1) sums.
        assert_eq!(structured_pairs(3).len(), 6 + 6);
    }

    #[test]
    fn unitary_oracles_pass() {
        for dim in 2..=8 {
            for seed in 0..3 {
                let u = random_unitary(dim, seed);
                let m = RayMapOracle::matrix_induced(u, false, &tol()).unwrap();
                let r = check_probability_preservation(&m, dim, 30, seed, &tol()).unwrap();
                assert!(r.pass, "dim {dim} seed {seed}: {}", r.max_abs_deviation);
                assert!(r.max_abs_deviation < 1e-10);
            }
        }
    }

    #[test]
    fn constant_oracle_fails_on_orthogonal_pair() {
        let m = Constant {
            dim: 3,
            image: Ray::basis(3, 0),
        };
        let r = check_probability_preservation(&m, 3, 10, 1, &tol()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.max_abs_deviation, 1.0);
        let (a, b) = r.worst_pair.unwrap();
        assert_eq!(a.overlap(&b), 0.0);
    }

    #[test]
    fn perturbed_unitary_fails() {
        let dim = 4;
        let u = random_unitary(dim, 21);
        let mut rng = SeededRng::new(22);
        let mut columns = Vec::new();
        for j in 0..dim {
            let col = u
                .column(j)
                .add_scaled(Complex64::new(0.01, 0.0), &rng.gaussian_vector(dim));
            columns.push(col.normalized().unwrap());
        }
        let m = RayMapOracle::matrix_induced(
            ComplexMatrix::from_columns(&columns).unwrap(),
            false,
            &tol(),
        )
        .unwrap();
        let r = check_probability_preservation(&m, dim, 50, 3, &tol()).unwrap();
        assert!(!r.pass);
        assert!(r.max_abs_deviation > 1e-4, "{}", r.max_abs_deviation);
    }

    #[test]
    fn dimension_argument_must_match() {
        let m = RayMapOracle::matrix_induced(ComplexMatrix::identity(2), false, &tol()).unwrap();
        assert!(matches!(
            check_probability_preservation(&m, 3, 1, 0, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
