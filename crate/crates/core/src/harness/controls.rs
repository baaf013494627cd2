//! Negative controls: instances built to violate exactly one condition.
//! Each generator names the propositions whose checks must reject it.

use serde::{Deserialize, Serialize};

use super::plan::TrialPlan;
use super::{trial_seed, PropositionId};
use crate::error::{Error, Result};
use crate::hilbert::{
    random_unitary, Complex64, ComplexMatrix, ComplexVector, SeededRng, ToleranceConfig,
};
use crate::lift::{lift, required_queries};
use crate::projective::{check_probability_preservation, Ray, RayMap, RayMapOracle};
use crate::tensor::{
    check_bilinearity, check_composite_independence_with, check_single_system_born,
    check_span_surjectivity, check_totality, construct_isomorphism, map_basis, BilinearComposition,
    Condition, FnComposition, Witness,
};

pub const CONTROL_COUNT: usize = 10;

/// One proposition's verdict on one control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub proposition: PropositionId,
    pub detected: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlOutcome {
    pub name: String,
    /// Every listed proposition rejected the instance.
    pub detected: bool,
    pub detections: Vec<Detection>,
}

type Runner = fn(u64, &ToleranceConfig) -> Vec<Detection>;

struct Generator {
    name: &'static str,
    propositions: &'static [PropositionId],
    run: Runner,
}

use PropositionId as P;

const GENERATORS: [Generator; CONTROL_COUNT] = [
    Generator {
        name: "constant ray map",
        propositions: &[P::ProbabilityPreservation, P::StatisticalIndependence],
        run: constant_ray_map,
    },
    Generator {
        name: "perturbed unitary at 1e-2",
        propositions: &[
            P::ProbabilityPreservation,
            P::SingleBorn,
            P::MeasurementIndependence,
        ],
        run: perturbed_unitary,
    },
    Generator {
        name: "zeroed tensor slice",
        propositions: &[P::Totality],
        run: zeroed_slice,
    },
    Generator {
        name: "doubled coefficient",
        propositions: &[P::BasisCarryover],
        run: doubled_coefficient,
    },
    Generator {
        name: "zero-padded codomain",
        propositions: &[P::SpanSurjectivity, P::CompositeTheorem],
        run: zero_padded,
    },
    Generator {
        name: "non-homogeneous oracle",
        propositions: &[P::Bilinearity],
        run: non_homogeneous,
    },
    Generator {
        name: "dim-1 tau ambiguity",
        propositions: &[P::FtpgLift],
        run: dim_one,
    },
    Generator {
        name: "noisy bilinear oracle",
        propositions: &[P::Bilinearity, P::CompositeTheorem],
        run: noisy_bilinear,
    },
    Generator {
        name: "inconsistent-tau table",
        propositions: &[P::FtpgLift],
        run: inconsistent_tau,
    },
    Generator {
        name: "non-unimodular-k table",
        propositions: &[P::FtpgLift],
        run: non_unimodular_k,
    },
];

/// `(name, propositions)` of every generator, in run order.
pub fn control_generators() -> Vec<(&'static str, &'static [PropositionId])> {
    GENERATORS
        .iter()
        .map(|g| (g.name, g.propositions))
        .collect()
}

/// Runs every generator that touches a selected proposition and keeps only
/// the selected propositions' verdicts.
pub(crate) fn run_controls(selected: &[PropositionId], plan: &TrialPlan) -> Vec<ControlOutcome> {
    GENERATORS
        .iter()
        .filter(|g| g.propositions.iter().any(|p| selected.contains(p)))
        .map(|g| {
            let seed = trial_seed(plan.seed, &format!("control:{}", g.name), 0);
            let detections: Vec<Detection> = (g.run)(seed, &plan.tolerances)
                .into_iter()
                .filter(|d| selected.contains(&d.proposition))
                .collect();
            ControlOutcome {
                name: g.name.to_string(),
                detected: detections.iter().all(|d| d.detected),
                detections,
            }
        })
        .collect()
}

fn detection(proposition: PropositionId, detected: bool, detail: impl Into<String>) -> Detection {
    Detection {
        proposition,
        detected,
        detail: detail.into(),
    }
}

fn describe<T>(r: &Result<T>) -> String {
    match r {
        Ok(_) => "accepted".into(),
        Err(e) => e.to_string(),
    }
}

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

fn constant_ray_map(seed: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    let map = Constant {
        dim: 3,
        image: Ray::basis(3, 0),
    };
    let report = check_probability_preservation(&map, 3, 10, seed, tol);
    let lifted = lift(&map, 3, 3, tol);
    let eq3 = matches!(&report, Ok(r) if !r.pass)
        && matches!(lifted, Err(Error::NotProbabilityPreserving { .. }));

    let constant = FnComposition::new(2, 2, 4, |_: &ComplexVector, _: &ComplexVector| {
        ComplexVector::basis(4, 0)
    });
    let independence = check_composite_independence_with(&constant, 10, seed, tol);
    vec![
        detection(P::ProbabilityPreservation, eq3, describe(&lifted)),
        detection(
            P::StatisticalIndependence,
            !independence.passed,
            format!("max deviation {:.3e}", independence.max_deviation()),
        ),
    ]
}

/// Columns of a random unitary nudged by `1e-2` Gaussian noise, renormalized.
pub(crate) fn perturbed_unitary_matrix(dim: usize, seed: u64) -> ComplexMatrix {
    let u = random_unitary(dim, seed);
    let mut rng = SeededRng::new(seed.wrapping_add(1));
    let columns: Vec<ComplexVector> = (0..dim)
        .map(|j| {
            u.column(j)
                .add_scaled(Complex64::new(1e-2, 0.0), &rng.gaussian_vector(dim))
                .normalized()
                .expect("perturbation is small")
        })
        .collect();
    ComplexMatrix::from_columns(&columns).expect("equal-length columns")
}

fn perturbed_unitary(seed: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    let p = perturbed_unitary_matrix(4, seed);
    let oracle = RayMapOracle::matrix_induced(p.clone(), false, tol);
    let (eq3, detail) = match oracle {
        Ok(oracle) => {
            let lifted = lift(&oracle, 4, 4, tol);
            let report = check_probability_preservation(&oracle, 4, 20, seed, tol);
            (
                matches!(&report, Ok(r) if !r.pass)
                    && matches!(lifted, Err(Error::NotProbabilityPreserving { .. })),
                describe(&lifted),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    let m = BilinearComposition::from_matrix(&p, 2, 2).expect("4 = 2·2");
    let born = check_single_system_born(&m, 10, seed, tol);
    let joint = check_composite_independence_with(&m, 10, seed, tol);
    vec![
        detection(P::ProbabilityPreservation, eq3, detail),
        detection(
            P::SingleBorn,
            !born.passed,
            format!("max deviation {:.3e}", born.max_deviation),
        ),
        detection(
            P::MeasurementIndependence,
            joint.max_deviation_product >= tol.eq_tol,
            format!("max deviation {:.3e}", joint.max_deviation_product),
        ),
    ]
}

fn zeroed_slice(seed: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    let mut m = BilinearComposition::canonical(2, 2);
    for k in 0..4 {
        m.set_coeff(k, 0, 1, Complex64::new(0.0, 0.0));
    }
    let report = check_totality(&m, 10, seed, tol);
    let iso = construct_isomorphism(&m, tol);
    let detail = match report.weakest {
        Some(Witness::BasisPair { i, j }) => format!("offending basis pair ({i}, {j})"),
        Some(Witness::RandomTrial { trial }) => format!("offending random trial {trial}"),
        None => "no samples".into(),
    };
    let detected =
        !report.passed && matches!(iso, Err(Error::PreconditionFailed(Condition::Totality)));
    vec![detection(P::Totality, detected, detail)]
}

fn doubled_coefficient(_: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    let mut m = BilinearComposition::canonical(2, 2);
    m.set_coeff(3, 1, 1, Complex64::new(2.0, 0.0));
    let basis = map_basis(&m, tol);
    let iso = construct_isomorphism(&m, tol);
    let detected = !basis.passed
        && matches!(
            iso,
            Err(Error::PreconditionFailed(Condition::OrthonormalBasis))
        );
    vec![detection(P::BasisCarryover, detected, describe(&iso))]
}

fn zero_padded(_: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    let m = BilinearComposition::canonical(2, 2).zero_padded(5);
    let span = check_span_surjectivity(&m, tol);
    let iso = construct_isomorphism(&m, tol);
    vec![
        detection(
            P::SpanSurjectivity,
            !span.passed,
            format!("rank {} of {}", span.rank, span.dim_c),
        ),
        detection(
            P::CompositeTheorem,
            matches!(
                iso,
                Err(Error::PreconditionFailed(Condition::SpanSurjectivity))
            ),
            describe(&iso),
        ),
    ]
}

fn non_homogeneous(seed: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    let m = FnComposition::new(2, 2, 4, |a: &ComplexVector, b: &ComplexVector| {
        a.kron(b).scale(Complex64::new(a.norm(), 0.0))
    });
    let r = check_bilinearity(&m, 10, seed, tol);
    vec![detection(
        P::Bilinearity,
        !r.passed,
        format!("relative residual {:.3e}", r.max_residual),
    )]
}

fn dim_one(_: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    let result = RayMapOracle::matrix_induced(ComplexMatrix::identity(1), false, tol)
        .and_then(|m| lift(&m, 1, 1, tol));
    vec![detection(
        P::FtpgLift,
        matches!(result, Err(Error::AmbiguousTau)),
        describe(&result),
    )]
}

/// `a ⊗ b` plus noise of size `1e-6`, deterministic in the input bits.
pub(crate) fn noisy_kronecker(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let key = a.iter().chain(b.iter()).fold(0xa5a5_a5a5_u64, |h, z| {
        (h.rotate_left(7) ^ z.re.to_bits()).wrapping_mul(0x100_0000_01b3) ^ z.im.to_bits()
    });
    let mut rng = SeededRng::new(key);
    let out = a.kron(b);
    let noise = rng.gaussian_vector(out.dim());
    out.add_scaled(Complex64::new(1e-6, 0.0), &noise)
}

fn noisy_bilinear(seed: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    let m = FnComposition::new(2, 2, 4, noisy_kronecker);
    let r = check_bilinearity(&m, 10, seed, tol);
    let iso = construct_isomorphism(&m, tol);
    let accepted = matches!(&iso, Ok(r) if r.accepted(tol));
    vec![
        detection(
            P::Bilinearity,
            !r.passed,
            format!("relative residual {:.3e}", r.max_residual),
        ),
        detection(P::CompositeTheorem, !accepted, describe(&iso)),
    ]
}

/// Table of `f` on every point the lift asks for.
fn table_of(
    dim: usize,
    f: impl Fn(&ComplexVector) -> ComplexVector,
    tol: &ToleranceConfig,
) -> Result<RayMapOracle> {
    let pairs: Vec<_> = required_queries(dim)
        .into_iter()
        .map(|x| {
            let y = f(&x);
            (x, y)
        })
        .collect();
    RayMapOracle::tabulated(dim, dim, &pairs, tol)
}

fn inconsistent_tau(_: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    // Linear on the first two coordinates, conjugating on the third.
    let result = table_of(
        3,
        |x| ComplexVector::new(vec![x[0], x[1], x[2].conj()]).expect("dim 3"),
        tol,
    )
    .and_then(|m| lift(&m, 3, 3, tol));
    vec![detection(
        P::FtpgLift,
        matches!(result, Err(Error::InconsistentTau { index: 2 })),
        describe(&result),
    )]
}

fn non_unimodular_k(_: u64, tol: &ToleranceConfig) -> Vec<Detection> {
    // Identity except ray(e_0 + e_1) ↦ ray(e_0 + 2 e_1).
    let e = |i| ComplexVector::basis(3, i);
    let sum = &e(0) + &e(1);
    let skewed = e(0).add_scaled(Complex64::new(2.0, 0.0), &e(1));
    let result = table_of(
        3,
        |x| {
            if x.max_abs_diff(&sum) == 0.0 {
                skewed.clone()
            } else {
                x.clone()
            }
        },
        tol,
    )
    .and_then(|m| lift(&m, 3, 3, tol));
    vec![detection(
        P::FtpgLift,
        matches!(result, Err(Error::NonUnimodularK { index: 1, .. })),
        describe(&result),
    )]
}
