use serde::Serialize;

use super::CompositionOracle;
use crate::error::{Error, Result};
use crate::hilbert::{
    random_unitary, transition_probability, ComplexMatrix, ComplexVector, SeededRng,
    ToleranceConfig,
};
use crate::projective::structured_pairs;

/// Where a failing sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    BasisPair { i: usize, j: usize },
    RandomTrial { trial: usize },
}

/// Argument slot of a composition map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

fn unit(rng: &mut SeededRng, dim: usize) -> ComplexVector {
    rng.gaussian_vector(dim)
        .normalized()
        .expect("nonzero sample")
}

/// Transition probability that counts a vanishing image as a total miss.
fn prob_or_one_off(
    v: &ComplexVector,
    w: &ComplexVector,
    expected: f64,
    tol: &ToleranceConfig,
) -> f64 {
    match transition_probability(v, w, tol) {
        Ok(p) => (p - expected).abs(),
        Err(_) => 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TotalityReport {
    pub passed: bool,
    pub samples: usize,
    pub min_norm: f64,
    pub max_norm: f64,
    /// Sample with the smallest image norm.
    pub weakest: Option<Witness>,
}

/// H1: `‖m(a, b)‖ > rank_tol` on every basis pair and on `trials` random
/// pairs of unit vectors. The zero vector stands for "no composite state".
pub fn check_totality(
    m: &dyn CompositionOracle,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> TotalityReport {
    let (da, db, _) = m.dims();
    let mut report = TotalityReport {
        passed: true,
        samples: 0,
        min_norm: f64::INFINITY,
        max_norm: 0.0,
        weakest: None,
    };
    let mut record = |norm: f64, witness: Witness| {
        report.samples += 1;
        report.max_norm = report.max_norm.max(norm);
        if norm < report.min_norm {
            report.min_norm = norm;
            report.weakest = Some(witness);
        }
    };
    for i in 0..da {
        for j in 0..db {
            let out = m.compose(&ComplexVector::basis(da, i), &ComplexVector::basis(db, j));
            record(out.norm(), Witness::BasisPair { i, j });
        }
    }
    let mut rng = SeededRng::new(seed);
    for trial in 0..trials {
        let a = unit(&mut rng, da);
        let b = unit(&mut rng, db);
        record(m.compose(&a, &b).norm(), Witness::RandomTrial { trial });
    }
    report.passed = report.min_norm > tol.rank_tol;
    report
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilinearityReport {
    pub passed: bool,
    pub samples: usize,
    /// Largest relative residual of the additivity-homogeneity identity.
    pub max_residual: f64,
    pub worst_side: Option<Side>,
}

fn linearity_residual(
    combined: &ComplexVector,
    k1: num_complex::Complex64,
    first: &ComplexVector,
    k2: num_complex::Complex64,
    second: &ComplexVector,
) -> f64 {
    let expected = first.scale(k1).add_scaled(k2, second);
    let scale = combined.norm() + k1.norm() * first.norm() + k2.norm() * second.norm();
    if scale == 0.0 {
        0.0
    } else {
        (combined - &expected).norm() / scale
    }
}

/// H2: `m(k₁a₁ + k₂a₂, b) = k₁m(a₁, b) + k₂m(a₂, b)` and the same in the
/// second slot, on random vectors and scalars.
pub fn check_bilinearity(
    m: &dyn CompositionOracle,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> BilinearityReport {
    let (da, db, _) = m.dims();
    let mut rng = SeededRng::new(seed);
    let mut report = BilinearityReport {
        passed: true,
        samples: 0,
        max_residual: 0.0,
        worst_side: None,
    };
    let mut record = |r: f64, side: Side| {
        report.samples += 1;
        if report.worst_side.is_none() || r > report.max_residual {
            report.max_residual = r;
            report.worst_side = Some(side);
        }
    };
    for _ in 0..trials {
        let (k1, k2) = (rng.complex_gaussian(), rng.complex_gaussian());
        let (a1, a2, b) = (unit(&mut rng, da), unit(&mut rng, da), unit(&mut rng, db));
        let combined = m.compose(&a1.scale(k1).add_scaled(k2, &a2), &b);
        let r = linearity_residual(&combined, k1, &m.compose(&a1, &b), k2, &m.compose(&a2, &b));
        record(r, Side::First);

        let (k1, k2) = (rng.complex_gaussian(), rng.complex_gaussian());
        let (a, b1, b2) = (unit(&mut rng, da), unit(&mut rng, db), unit(&mut rng, db));
        let combined = m.compose(&a, &b1.scale(k1).add_scaled(k2, &b2));
        let r = linearity_residual(&combined, k1, &m.compose(&a, &b1), k2, &m.compose(&a, &b2));
        record(r, Side::Second);
    }
    report.passed = report.max_residual < tol.eq_tol;
    report
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityProductReport {
    pub passed: bool,
    pub samples: usize,
    pub max_deviation: f64,
    pub worst_side: Option<Side>,
}

/// `(P(m(a, b), m(ψ, b)), P(a, ψ))`: the two sides of the frozen-`b` identity.
pub fn frozen_pair_probabilities(
    m: &dyn CompositionOracle,
    a: &ComplexVector,
    psi: &ComplexVector,
    b: &ComplexVector,
    tol: &ToleranceConfig,
) -> Result<(f64, f64)> {
    let composite = transition_probability(&m.compose(a, b), &m.compose(psi, b), tol)?;
    Ok((composite, transition_probability(a, psi, tol)?))
}

/// Freezing either argument must preserve transition probabilities of the
/// other. Covers the structured pairs of each factor with a random frozen
/// partner, then `trials` random triples per side.
pub fn check_probability_product(
    m: &dyn CompositionOracle,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> ProbabilityProductReport {
    let (da, db, _) = m.dims();
    let mut rng = SeededRng::new(seed);
    let mut report = ProbabilityProductReport {
        passed: true,
        samples: 0,
        max_deviation: 0.0,
        worst_side: None,
    };
    let mut record = |d: f64, side: Side| {
        report.samples += 1;
        if report.worst_side.is_none() || d > report.max_deviation {
            report.max_deviation = d;
            report.worst_side = Some(side);
        }
    };
    let side_a = |x: &ComplexVector, y: &ComplexVector, b: &ComplexVector| {
        let expected = transition_probability(x, y, tol).expect("nonzero inputs");
        prob_or_one_off(&m.compose(x, b), &m.compose(y, b), expected, tol)
    };
    let side_b = |a: &ComplexVector, x: &ComplexVector, y: &ComplexVector| {
        let expected = transition_probability(x, y, tol).expect("nonzero inputs");
        prob_or_one_off(&m.compose(a, x), &m.compose(a, y), expected, tol)
    };

    let frozen_b = unit(&mut rng, db);
    for (x, y) in structured_pairs(da) {
        record(side_a(&x, &y, &frozen_b), Side::First);
    }
    let frozen_a = unit(&mut rng, da);
    for (x, y) in structured_pairs(db) {
        record(side_b(&frozen_a, &x, &y), Side::Second);
    }
    for _ in 0..trials {
        let (a, psi, b) = (unit(&mut rng, da), unit(&mut rng, da), unit(&mut rng, db));
        record(side_a(&a, &psi, &b), Side::First);
        let (a, b1, b2) = (unit(&mut rng, da), unit(&mut rng, db), unit(&mut rng, db));
        record(side_b(&a, &b1, &b2), Side::Second);
    }
    report.passed = report.max_deviation < tol.eq_tol;
    report
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanReport {
    pub passed: bool,
    pub rank: usize,
    pub dim_c: usize,
    pub singular_values: Vec<f64>,
}

fn basis_images(m: &dyn CompositionOracle) -> Vec<ComplexVector> {
    let (da, db, _) = m.dims();
    let mut out = Vec::with_capacity(da * db);
    for i in 0..da {
        for j in 0..db {
            out.push(m.compose(&ComplexVector::basis(da, i), &ComplexVector::basis(db, j)));
        }
    }
    out
}

/// H3: the images `m(e_i, e_j)` have numerical rank `dim_c`, with singular
/// values counted above `rank_tol` times the largest one.
pub fn check_span_surjectivity(m: &dyn CompositionOracle, tol: &ToleranceConfig) -> SpanReport {
    let (_, _, dc) = m.dims();
    let images = ComplexMatrix::from_columns(&basis_images(m)).expect("at least one basis pair");
    let singular_values = images.singular_values();
    let rank = match singular_values.first() {
        Some(&top) if top > 0.0 => singular_values
            .iter()
            .filter(|&&s| s > tol.rank_tol * top)
            .count(),
        _ => 0,
    };
    SpanReport {
        passed: rank == dc,
        rank,
        dim_c: dc,
        singular_values,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisReport {
    pub passed: bool,
    /// `m(e_i, e_j)` at position `i·dim_b + j`.
    pub vectors: Vec<ComplexVector>,
    /// `max |Gram − I|`.
    pub gram_deviation: f64,
    pub count: usize,
    pub dim_c: usize,
}

/// The images of product basis pairs must be an orthonormal basis of `C`.
pub fn map_basis(m: &dyn CompositionOracle, tol: &ToleranceConfig) -> BasisReport {
    let (_, _, dc) = m.dims();
    let vectors = basis_images(m);
    let gram_deviation = ComplexMatrix::from_columns(&vectors)
        .expect("at least one basis pair")
        .isometry_defect();
    BasisReport {
        passed: gram_deviation < tol.eq_tol && vectors.len() == dc,
        count: vectors.len(),
        dim_c: dc,
        vectors,
        gram_deviation,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalReport {
    pub passed: bool,
    pub samples: usize,
    pub max_deviation: f64,
}

/// Measuring one factor ignores the other's preparation:
/// `Σ_j P(m(a₁, b_j), m(a₂, b)) = P(a₁, a₂)` for any orthonormal basis
/// `{b_j}` of `B`, and symmetrically.
pub fn check_single_system_born(
    m: &dyn CompositionOracle,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> MarginalReport {
    let (da, db, _) = m.dims();
    let mut rng = SeededRng::new(seed);
    let mut max_deviation: f64 = 0.0;
    let mut samples = 0;
    for _ in 0..trials {
        let (a1, a2, b) = (unit(&mut rng, da), unit(&mut rng, da), unit(&mut rng, db));
        let basis = random_unitary(db, rng.next_u64()).columns();
        let target = m.compose(&a2, &b);
        let marginal: Result<f64> = basis
            .iter()
            .map(|bj| transition_probability(&m.compose(&a1, bj), &target, tol))
            .sum();
        let expected = transition_probability(&a1, &a2, tol).expect("unit vectors");
        max_deviation = max_deviation.max(marginal.map_or(1.0, |p| (p - expected).abs()));

        let (a, b1, b2) = (unit(&mut rng, da), unit(&mut rng, db), unit(&mut rng, db));
        let basis = random_unitary(da, rng.next_u64()).columns();
        let target = m.compose(&a, &b2);
        let marginal: Result<f64> = basis
            .iter()
            .map(|ai| transition_probability(&m.compose(ai, &b1), &target, tol))
            .sum();
        let expected = transition_probability(&b1, &b2, tol).expect("unit vectors");
        max_deviation = max_deviation.max(marginal.map_or(1.0, |p| (p - expected).abs()));
        samples += 2;
    }
    MarginalReport {
        passed: max_deviation < tol.eq_tol,
        samples,
        max_deviation,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub passed: bool,
    pub samples: usize,
    /// `|P(m(a₁,b), m(a₂,b)) − P(a₁,a₂)|`.
    pub max_deviation_first: f64,
    /// `|P(m(a,b₁), m(a,b₂)) − P(b₁,b₂)|`.
    pub max_deviation_second: f64,
    /// `|P(m(a,b), m(ψ,φ)) − P(a,ψ)·P(b,φ)|`.
    pub max_deviation_product: f64,
}

impl IndependenceReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation_first
            .max(self.max_deviation_second)
            .max(self.max_deviation_product)
    }
}

/// Statistical independence of preparations and factorization of joint
/// outcome probabilities, in the Kronecker model.
pub fn check_composite_independence(
    dim_a: usize,
    dim_b: usize,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<IndependenceReport> {
    if dim_a == 0 || dim_b == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(check_composite_independence_with(
        &super::Kronecker { dim_a, dim_b },
        trials,
        seed,
        tol,
    ))
}

/// [`check_composite_independence`] for an arbitrary composition map.
///
/// The composite side is a transition probability in `C`; the component
/// side multiplies probabilities computed in `A` and `B` alone.
pub fn check_composite_independence_with(
    m: &dyn CompositionOracle,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> IndependenceReport {
    let (da, db, _) = m.dims();
    let mut rng = SeededRng::new(seed);
    let mut report = IndependenceReport {
        passed: true,
        samples: 0,
        max_deviation_first: 0.0,
        max_deviation_second: 0.0,
        max_deviation_product: 0.0,
    };
    let p = |x: &ComplexVector, y: &ComplexVector| {
        transition_probability(x, y, tol).expect("unit vectors")
    };
    for _ in 0..trials {
        let (a1, a2, b) = (unit(&mut rng, da), unit(&mut rng, da), unit(&mut rng, db));
        let d = prob_or_one_off(&m.compose(&a1, &b), &m.compose(&a2, &b), p(&a1, &a2), tol);
        report.max_deviation_first = report.max_deviation_first.max(d);

        let (a, b1, b2) = (unit(&mut rng, da), unit(&mut rng, db), unit(&mut rng, db));
        let d = prob_or_one_off(&m.compose(&a, &b1), &m.compose(&a, &b2), p(&b1, &b2), tol);
        report.max_deviation_second = report.max_deviation_second.max(d);

        let (a, psi) = (unit(&mut rng, da), unit(&mut rng, da));
        let (b, phi) = (unit(&mut rng, db), unit(&mut rng, db));
        let d = prob_or_one_off(
            &m.compose(&a, &b),
            &m.compose(&psi, &phi),
            p(&a, &psi) * p(&b, &phi),
            tol,
        );
        report.max_deviation_product = report.max_deviation_product.max(d);
        report.samples += 3;
    }
    report.passed = report.max_deviation() < tol.eq_tol;
    report
}
