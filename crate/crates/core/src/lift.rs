//! Reconstruction of a linear or antilinear isometry from a ray map.
//!
//! Given a ray map `M` that preserves transition probabilities, [`lift`]
//! rebuilds a vector map `m` with `ray(m(x)) = M(ray(x))`, unique up to one
//! global phase:
//!
//! 1. `u_i` = representative of `M(ray(e_i))`; these must be orthonormal.
//! 2. `v_0 = u_0`. This is the only free choice (the global phase).
//! 3. For `i > 0`, `M(ray(e_0 + e_i)) = ray(v_0 + k u_i)` for a unique `k`
//!    with `|k| = 1`; set `v_i = k u_i`.
//! 4. The image of `e_0 + i·e_1` is either `ray(v_0 + i·v_1)` (linear) or
//!    `ray(v_0 − i·v_1)` (antilinear).
//! 5. Every other index `j` must agree with that classification.
//! 6. `m(Σ c_j e_j) = Σ τ(c_j) v_j`, validated against `M` on a
//!    full-support vector and on one with no `e_0` component.
//!
//! All oracle queries are listed by [`required_queries`], so a tabulated map
//! holding exactly those points can be lifted.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{inner_product, ComplexMatrix, ComplexVector, SeededRng, ToleranceConfig, I};
use crate::projective::{
    canonicalize, check_structured_preservation, worst_pair_among, PreservationReport, Ray, RayMap,
};

/// Gauge used by every lift built here.
pub const GLOBAL_PHASE_CONVENTION: &str =
    "column 0 equals the canonical representative of M(ray(e_0))";

/// A reconstructed semilinear isometry: `x ↦ A x` or `x ↦ A x̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemilinearLift {
    matrix: ComplexMatrix,
    antilinear: bool,
    residual: f64,
}

impl SemilinearLift {
    pub fn new(matrix: ComplexMatrix, antilinear: bool, residual: f64) -> Self {
        Self {
            matrix,
            antilinear,
            residual,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn antilinear(&self) -> bool {
        self.antilinear
    }

    /// Largest `1 − P` between the lift and the oracle over the queries made
    /// while building it.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn global_phase_convention(&self) -> &'static str {
        GLOBAL_PHASE_CONVENTION
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LiftConfig {
    /// Random validation vectors on top of the deterministic ones.
    pub extra_validation: usize,
    pub validation_seed: u64,
}

fn validation_coefficient(j: usize) -> Complex64 {
    Complex64::from_polar(1.0 + 0.25 * j as f64, 0.9 * (j + 1) as f64)
}

/// `Σ_j c_j e_j` with every `c_j` nonzero, and the same vector with the
/// `e_0` component removed.
pub fn validation_vectors(dim: usize) -> (ComplexVector, ComplexVector) {
    assert!(dim >= 2, "validation vectors need dimension ≥ 2");
    let full: ComplexVector = (0..dim).map(validation_coefficient).collect();
    let zero_pivot = (0..dim)
        .map(|j| {
            if j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                validation_coefficient(j)
            }
        })
        .collect();
    (full, zero_pivot)
}

/// Every domain vector [`lift`] may query, one per ray.
pub fn required_queries(dim: usize) -> Vec<ComplexVector> {
    let e = |i| ComplexVector::basis(dim, i);
    let mut out: Vec<ComplexVector> = (0..dim).map(e).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            out.push(&e(i) + &e(j));
        }
    }
    for j in 1..dim {
        out.push(e(0).add_scaled(I, &e(j)));
    }
    if dim >= 2 {
        let (full, zero_pivot) = validation_vectors(dim);
        out.push(full);
        out.push(zero_pivot);
    }
    dedup_rays(out)
}

fn dedup_rays(vectors: Vec<ComplexVector>) -> Vec<ComplexVector> {
    let tol = ToleranceConfig::default();
    let mut seen: Vec<Ray> = Vec::new();
    let mut out = Vec::new();
    for v in vectors {
        let r = canonicalize(&v, &tol).expect("query vectors are nonzero");
        if seen.iter().all(|s| 1.0 - s.overlap(&r) >= tol.eq_tol) {
            seen.push(r);
            out.push(v);
        }
    }
    out
}

/// `m(v)`: `A v` for a linear lift, `A v̄` for an antilinear one.
pub fn apply_lift(lift: &SemilinearLift, v: &ComplexVector) -> Result<ComplexVector> {
    if lift.antilinear {
        lift.matrix.mul_vec(&v.conj())
    } else {
        lift.matrix.mul_vec(v)
    }
}

pub fn lift(
    map: &dyn RayMap,
    domain_dim: usize,
    codomain_dim: usize,
    tol: &ToleranceConfig,
) -> Result<SemilinearLift> {
    lift_with(map, domain_dim, codomain_dim, &LiftConfig::default(), tol)
}

fn query(map: &dyn RayMap, x: &ComplexVector, tol: &ToleranceConfig) -> Result<ComplexVector> {
    Ok(map.apply(&canonicalize(x, tol)?, tol)?.into_rep())
}

/// Builds the `NotProbabilityPreserving` error for the worst of `pairs`.
fn reject(
    map: &dyn RayMap,
    pairs: &[(ComplexVector, ComplexVector)],
    tol: &ToleranceConfig,
) -> Error {
    match worst_pair_among(map, pairs, tol) {
        Ok(report) => not_preserving(report),
        Err(e) => e,
    }
}

fn not_preserving(report: PreservationReport) -> Error {
    let pair = report.worst_pair.expect("report covers at least one pair");
    Error::NotProbabilityPreserving {
        deviation: report.max_abs_deviation,
        pair: Box::new(pair),
    }
}

pub fn lift_with(
    map: &dyn RayMap,
    domain_dim: usize,
    codomain_dim: usize,
    config: &LiftConfig,
    tol: &ToleranceConfig,
) -> Result<SemilinearLift> {
    if map.domain_dim() != domain_dim {
        return Err(Error::DimensionMismatch {
            expected: map.domain_dim(),
            found: domain_dim,
        });
    }
    if map.codomain_dim() != codomain_dim {
        return Err(Error::DimensionMismatch {
            expected: map.codomain_dim(),
            found: codomain_dim,
        });
    }
    if domain_dim == 1 {
        return Err(Error::AmbiguousTau);
    }
    let n = domain_dim;
    let e = |i| ComplexVector::basis(n, i);

    // Step 1: images of the basis.
    let u = (0..n)
        .map(|i| query(map, &e(i), tol))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = (0.0, 0, 0);
    for i in 0..n {
        for j in i + 1..n {
            let d = u[i].dot_unchecked(&u[j]).norm_sqr();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
    }
    if worst.0 >= tol.eq_tol {
        return Err(Error::NotProbabilityPreserving {
            deviation: worst.0,
            pair: Box::new((Ray::basis(n, worst.1), Ray::basis(n, worst.2))),
        });
    }

    // Steps 2-3: fix relative phases through e_0 + e_i.
    let mut v = vec![u[0].clone()];
    for (i, ui) in u.iter().enumerate().skip(1) {
        let sum = &e(0) + &e(i);
        let w = query(map, &sum, tol)?;
        let alpha = v[0].dot_unchecked(&w);
        let beta = ui.dot_unchecked(&w);
        let out_of_plane = 1.0 - alpha.norm_sqr() - beta.norm_sqr();
        if out_of_plane >= tol.eq_tol {
            let pairs: Vec<_> = (0..n).map(|j| (e(j), sum.clone())).collect();
            return Err(reject(map, &pairs, tol));
        }
        let k = if alpha.norm() < tol.eq_tol {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            beta / alpha
        };
        let modulus = k.norm();
        if (modulus - 1.0).abs() >= tol.eq_tol || modulus.is_nan() {
            return Err(Error::NonUnimodularK { index: i, modulus });
        }
        v.push(ui.scale(k));
    }

    // Steps 4-5: linear or antilinear, uniformly across indices.
    let branch =
        |j: usize, c: Complex64| -> Result<Ray> { canonicalize(&v[0].add_scaled(c, &v[j]), tol) };
    let probe = |j: usize| e(0).add_scaled(I, &e(j));
    let probe_pairs = |j: usize| {
        let p = probe(j);
        vec![(e(0), p.clone()), (e(j), p.clone()), (&e(0) + &e(j), p)]
    };
    let classify = |j: usize| -> Result<Option<bool>> {
        let z = canonicalize(&query(map, &probe(j), tol)?, tol)?;
        if 1.0 - z.overlap(&branch(j, I)?) < tol.eq_tol {
            Ok(Some(false))
        } else if 1.0 - z.overlap(&branch(j, -I)?) < tol.eq_tol {
            Ok(Some(true))
        } else {
            Ok(None)
        }
    };
    let antilinear = match classify(1)? {
        Some(flag) => flag,
        None => return Err(reject(map, &probe_pairs(1), tol)),
    };
    for j in 2..n {
        match classify(j)? {
            Some(flag) if flag == antilinear => {}
            Some(_) => return Err(Error::InconsistentTau { index: j }),
            None => return Err(reject(map, &probe_pairs(j), tol)),
        }
    }

    let structured = check_structured_preservation(map, tol)?;
    if !structured.pass {
        return Err(not_preserving(structured));
    }

    // Step 6: assemble and validate.
    let mut lift = SemilinearLift {
        matrix: ComplexMatrix::from_columns(&v)?,
        antilinear,
        residual: 0.0,
    };
    let mut queries = required_queries(n);
    let mut rng = SeededRng::new(config.validation_seed);
    queries.extend((0..config.extra_validation).map(|_| rng.gaussian_vector(n)));
    let mut residual: f64 = 0.0;
    for x in &queries {
        let expected = map.apply(&canonicalize(x, tol)?, tol)?;
        let got = canonicalize(&apply_lift(&lift, x)?, tol)?;
        residual = residual.max(1.0 - got.overlap(&expected));
    }
    if residual >= tol.eq_tol || residual.is_nan() {
        return Err(Error::ValidationFailed { residual });
    }
    lift.residual = residual;
    Ok(lift)
}

/// Checks a lift against its oracle on random pairs: rays must agree, and
/// inner products must be preserved (swapped for an antilinear lift).
pub fn verify_lift(
    lift: &SemilinearLift,
    map: &dyn RayMap,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PreservationReport> {
    let n = lift.domain_dim();
    if map.domain_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: map.domain_dim(),
            found: n,
        });
    }
    if map.codomain_dim() != lift.codomain_dim() {
        return Err(Error::DimensionMismatch {
            expected: map.codomain_dim(),
            found: lift.codomain_dim(),
        });
    }
    let mut report = PreservationReport::empty();
    let mut rng = SeededRng::new(seed);
    for _ in 0..trials {
        let v = rng.gaussian_vector(n).normalized().expect("nonzero sample");
        let w = rng.gaussian_vector(n).normalized().expect("nonzero sample");
        let rv = canonicalize(&v, tol)?;
        let mv = apply_lift(lift, &v)?;
        let mw = apply_lift(lift, &w)?;
        let ray_gap = 1.0 - canonicalize(&mv, tol)?.overlap(&map.apply(&rv, tol)?);
        let before = inner_product(&v, &w)?;
        let after = if lift.antilinear {
            inner_product(&mw, &mv)?
        } else {
            inner_product(&mv, &mw)?
        };
        let d = ray_gap.max((before - after).norm());
        report.record(d, || (rv, canonicalize(&w, tol).expect("unit vector")));
    }
    Ok(report.finish(tol))
}

/// `min_θ max |a − e^{iθ} b|`, with `θ` taken from the Frobenius overlap.
pub fn global_phase_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap: Complex64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| y.conj() * x)
        .sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.max_abs_diff(&b.scale(phase))
}
