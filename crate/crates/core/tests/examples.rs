use wignerlift::harness::{parse_dims, run_proposition, run_suite, PropositionId, TrialPlan};
use wignerlift::hilbert::{transition_probability, ComplexVector, ToleranceConfig, I};
use wignerlift::lift::{lift, required_queries};
use wignerlift::projective::{check_probability_preservation, RayMapOracle};
use wignerlift::tensor::{
    check_composite_independence, construct_isomorphism, BilinearComposition,
};
use wignerlift::{codec, Error};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn e(dim: usize, i: usize) -> ComplexVector {
    ComplexVector::basis(dim, i)
}

#[test]
fn basis_superposition_has_probability_one_half() {
    let p = transition_probability(&e(2, 0), &(&e(2, 0) + &e(2, 1)), &tol()).unwrap();
    assert!((p - 0.5).abs() < 1e-12);
    let p = transition_probability(&e(2, 0), &e(2, 0).add_scaled(I, &e(2, 1)), &tol()).unwrap();
    assert!((p - 0.5).abs() < 1e-12);
}

#[test]
fn zero_vector_is_rejected() {
    assert!(matches!(
        transition_probability(&ComplexVector::zeros(2), &e(2, 0), &tol()),
        Err(Error::ZeroVector)
    ));
}

#[test]
fn lift_of_a_tabulated_rotation() {
    let text = r#"{"rows":2,"cols":2,"data":[[0.6,0],[-0.8,0],[0.8,0],[0.6,0]]}"#;
    let m = codec::decode_matrix(text).unwrap();
    let table = RayMapOracle::tabulate(&m, false, &required_queries(2), &tol()).unwrap();
    let l = lift(&table, 2, 2, &tol()).unwrap();
    assert!(!l.antilinear());
    assert!(l.matrix().max_abs_diff(&m) < 1e-15);
}

#[test]
fn canonical_composition_factors_through_identity() {
    let r = construct_isomorphism(&BilinearComposition::canonical(2, 3), &tol()).unwrap();
    assert_eq!(r.iso.rows(), 6);
    assert!(r.accepted(&tol()));
}

#[test]
fn independence_at_2x3_seed_13() {
    let r = check_composite_independence(2, 3, 1000, 13, &tol()).unwrap();
    assert!(r.max_deviation() < 1e-12, "{}", r.max_deviation());
}

#[test]
fn lift_proposition_over_dims_2_to_8() {
    let plan = TrialPlan {
        dims: parse_dims("2..8").unwrap(),
        trials: 100,
        ..TrialPlan::default()
    };
    let r = run_proposition(PropositionId::FtpgLift, &plan).unwrap();
    assert!(r.pass);
    assert_eq!(r.propositions[0].trials, 700);
    assert!(r.propositions[0].max_residual < 1e-9);
}

#[test]
fn totality_control_reports_offending_pair() {
    let plan = TrialPlan {
        propositions: vec![PropositionId::Totality],
        negative_controls: true,
        trials: 2,
        ..TrialPlan::default()
    };
    let r = run_suite(&plan).unwrap();
    let controls = r.negative_controls.unwrap();
    assert_eq!(controls.outcomes.len(), 1);
    let d = &controls.outcomes[0].detections[0];
    assert!(d.detected);
    assert!(d.detail.contains("offending basis pair"));
}

#[test]
fn perturbed_unitary_is_not_preserving() {
    let mut m = wignerlift::hilbert::random_unitary(3, 4);
    m.set(0, 0, m.get(0, 0) * 1.01);
    let oracle = RayMapOracle::matrix_induced(m, false, &tol()).unwrap();
    let r = check_probability_preservation(&oracle, 3, 50, 1, &tol()).unwrap();
    assert!(!r.pass);
    assert!(matches!(
        lift(&oracle, 3, 3, &tol()),
        Err(Error::NotProbabilityPreserving { .. })
    ));
}
