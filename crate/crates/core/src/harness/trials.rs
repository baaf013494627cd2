//! One randomized trial per call. Each returns a residual that is zero up to
//! rounding on a valid instance; the harness compares it with `eq_tol`.

use super::plan::Instance;
use super::PropositionId;
use crate::hilbert::{
    random_unitary, span, ComplexMatrix, ComplexVector, SeededRng, ToleranceConfig,
};
use crate::lift::{global_phase_distance, lift, verify_lift};
use crate::projective::{check_probability_preservation, RayMapOracle};
use crate::tensor::{
    check_bilinearity, check_composite_independence_with, check_probability_product,
    check_single_system_born, check_totality, construct_isomorphism_with, map_basis,
    BilinearComposition, CompositionOracle,
};

/// Residual reported when a check cannot even be evaluated.
const BROKEN: f64 = 1.0;

/// Random pairs drawn inside each trial.
const SAMPLES: usize = 4;

/// `m = U ∘ ⊗` with a Haar-random `U` on `C = A ⊗ B`.
pub(crate) fn rotated_tensor(
    dim_a: usize,
    dim_b: usize,
    seed: u64,
) -> (ComplexMatrix, BilinearComposition) {
    let u = random_unitary(dim_a * dim_b, seed);
    let m = BilinearComposition::from_matrix(&u, dim_a, dim_b).expect("square unitary");
    (u, m)
}

pub(crate) fn residual(
    id: PropositionId,
    inst: Instance,
    seed: u64,
    index: u64,
    tol: &ToleranceConfig,
) -> f64 {
    match inst {
        Instance::Single(n) => single(id, n, seed, index, tol),
        Instance::Pair(a, b) => {
            let (u, m) = rotated_tensor(a, b, seed);
            composite(id, &u, &m, seed.wrapping_add(1), tol)
        }
    }
}

fn single(id: PropositionId, n: usize, seed: u64, index: u64, tol: &ToleranceConfig) -> f64 {
    // Odd trials use the antiunitary x ↦ U x̄.
    let antilinear = index % 2 == 1;
    let u = random_unitary(n, seed);
    let Ok(oracle) = RayMapOracle::matrix_induced(u.clone(), antilinear, tol) else {
        return BROKEN;
    };
    match id {
        PropositionId::FtpgLift => match lift(&oracle, n, n, tol) {
            Ok(l) if l.antilinear() == antilinear => {
                let check = verify_lift(&l, &oracle, SAMPLES, seed.wrapping_add(1), tol)
                    .map_or(BROKEN, |r| r.max_abs_deviation);
                global_phase_distance(l.matrix(), &u)
                    .max(l.residual())
                    .max(check)
            }
            _ => BROKEN,
        },
        PropositionId::ProbabilityPreservation => {
            check_probability_preservation(&oracle, n, SAMPLES, seed.wrapping_add(1), tol)
                .map_or(BROKEN, |r| r.max_abs_deviation)
        }
        _ => unreachable!("{id} runs on pairs"),
    }
}

fn composite(
    id: PropositionId,
    u: &ComplexMatrix,
    m: &BilinearComposition,
    seed: u64,
    tol: &ToleranceConfig,
) -> f64 {
    match id {
        PropositionId::SingleBorn => check_single_system_born(m, 1, seed, tol).max_deviation,
        PropositionId::SpanSurjectivity => span_residual(m, seed, tol),
        PropositionId::Totality => {
            // Isometric instances send unit pairs to unit vectors.
            let r = check_totality(m, SAMPLES, seed, tol);
            if r.passed {
                (1.0 - r.min_norm).abs().max((r.max_norm - 1.0).abs())
            } else {
                BROKEN
            }
        }
        PropositionId::StatisticalIndependence => {
            let r = check_composite_independence_with(m, SAMPLES, seed, tol);
            let product = check_probability_product(m, SAMPLES, seed.wrapping_add(1), tol);
            r.max_deviation_first
                .max(r.max_deviation_second)
                .max(product.max_deviation)
        }
        PropositionId::Bilinearity => check_bilinearity(m, SAMPLES, seed, tol).max_residual,
        PropositionId::BasisCarryover => {
            let r = map_basis(m, tol);
            if r.count == r.dim_c {
                r.gram_deviation
            } else {
                BROKEN
            }
        }
        PropositionId::CompositeTheorem => {
            match construct_isomorphism_with(m, SAMPLES, seed, tol) {
                Ok(r) => r
                    .iso
                    .max_abs_diff(u)
                    .max(r.unitarity_residual)
                    .max(r.factorization_residual)
                    .max(inverse_residual(&r.iso, m, seed)),
                Err(_) => BROKEN,
            }
        }
        PropositionId::MeasurementIndependence => {
            check_composite_independence_with(m, SAMPLES, seed, tol).max_deviation_product
        }
        PropositionId::FtpgLift | PropositionId::ProbabilityPreservation => {
            unreachable!("{id} runs on single dimensions")
        }
    }
}

/// `max ‖iso† m(a, b) − a ⊗ b‖` over random unit pairs.
fn inverse_residual(iso: &ComplexMatrix, m: &dyn CompositionOracle, seed: u64) -> f64 {
    let (da, db, _) = m.dims();
    let inverse = iso.adjoint();
    let mut rng = SeededRng::new(seed.wrapping_add(2));
    (0..SAMPLES)
        .map(|_| {
            let a = rng
                .gaussian_vector(da)
                .normalized()
                .expect("nonzero sample");
            let b = rng
                .gaussian_vector(db)
                .normalized()
                .expect("nonzero sample");
            let back = inverse.mul_vec(&m.compose(&a, &b)).expect("square iso");
            (&back - &a.kron(&b)).norm()
        })
        .fold(0.0, f64::max)
}

/// Relative distance of a random `c ∈ C` from `span{m(e_i, e_j)}`; 1 when
/// the span is missing directions at `rank_tol`.
pub(crate) fn span_residual(m: &dyn CompositionOracle, seed: u64, tol: &ToleranceConfig) -> f64 {
    let (da, db, dc) = m.dims();
    let images: Vec<ComplexVector> = (0..da)
        .flat_map(|i| (0..db).map(move |j| (i, j)))
        .map(|(i, j)| m.compose(&ComplexVector::basis(da, i), &ComplexVector::basis(db, j)))
        .collect();
    let Ok(sub) = span(&images, tol) else {
        return BROKEN;
    };
    if sub.dim() < dc {
        return BROKEN;
    }
    let mut rng = SeededRng::new(seed);
    let c = rng.gaussian_vector(dc);
    (&c - &sub.project(&c)).norm() / c.norm()
}
