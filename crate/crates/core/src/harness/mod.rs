//! Seeded, parallel verification of every proposition, with negative
//! controls and a versioned JSON report.

mod controls;
mod plan;
mod report;
mod trials;

pub use controls::{control_generators, ControlOutcome, Detection, CONTROL_COUNT};
pub use plan::{parse_dims, DimSpec, Instance, TrialPlan, LIFT_DIM_CAP, PRODUCT_DIM_CAP};
pub use report::{
    ControlSummary, Environment, PropositionResult, VerificationReport, REPORT_SCHEMA,
};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The checked propositions, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropositionId {
    #[serde(rename = "S1-single-born")]
    SingleBorn,
    #[serde(rename = "S2-span-surjectivity")]
    SpanSurjectivity,
    #[serde(rename = "S3-totality")]
    Totality,
    #[serde(rename = "S5-statistical-independence")]
    StatisticalIndependence,
    #[serde(rename = "S6-ftpg-lift")]
    FtpgLift,
    #[serde(rename = "S7-bilinearity")]
    Bilinearity,
    #[serde(rename = "S8-basis-carryover")]
    BasisCarryover,
    #[serde(rename = "T1-composite-theorem")]
    CompositeTheorem,
    #[serde(rename = "ADD1-measurement-independence")]
    MeasurementIndependence,
    #[serde(rename = "EQ3-probability-preservation")]
    ProbabilityPreservation,
}

impl PropositionId {
    pub const ALL: [PropositionId; 10] = [
        PropositionId::SingleBorn,
        PropositionId::SpanSurjectivity,
        PropositionId::Totality,
        PropositionId::StatisticalIndependence,
        PropositionId::FtpgLift,
        PropositionId::Bilinearity,
        PropositionId::BasisCarryover,
        PropositionId::CompositeTheorem,
        PropositionId::MeasurementIndependence,
        PropositionId::ProbabilityPreservation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropositionId::SingleBorn => "S1-single-born",
            PropositionId::SpanSurjectivity => "S2-span-surjectivity",
            PropositionId::Totality => "S3-totality",
            PropositionId::StatisticalIndependence => "S5-statistical-independence",
            PropositionId::FtpgLift => "S6-ftpg-lift",
            PropositionId::Bilinearity => "S7-bilinearity",
            PropositionId::BasisCarryover => "S8-basis-carryover",
            PropositionId::CompositeTheorem => "T1-composite-theorem",
            PropositionId::MeasurementIndependence => "ADD1-measurement-independence",
            PropositionId::ProbabilityPreservation => "EQ3-probability-preservation",
        }
    }

    /// Short tag before the first `-`, e.g. `ADD1`.
    pub fn tag(self) -> &'static str {
        self.as_str().split('-').next().expect("non-empty id")
    }

    /// Propositions about a single system use single dimensions; the rest
    /// need a pair of factors.
    pub fn is_single_system(self) -> bool {
        matches!(
            self,
            PropositionId::FtpgLift | PropositionId::ProbabilityPreservation
        )
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Accepts the full id or its tag, case-insensitively.
impl FromStr for PropositionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        PropositionId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s) || id.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownProposition(s.to_string()))
    }
}

/// Parses a comma-separated proposition list.
pub fn parse_propositions(list: &str) -> Result<Vec<PropositionId>> {
    let mut out = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let id: PropositionId = item.parse()?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    Ok(out)
}

/// Seed of one trial: FNV-1a over `(master, id, index)`, then a splitmix64
/// finalizer. Depends on nothing else, so adding or removing propositions
/// leaves other instances unchanged.
pub fn trial_seed(master: u64, id: &str, index: u64) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let bytes = master
        .to_le_bytes()
        .into_iter()
        .chain(id.bytes())
        .chain([0xff])
        .chain(index.to_le_bytes());
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(PRIME);
    }
    splitmix64(h)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Larger residual wins; ties go to the smaller seed.
fn worse(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    match a.0.partial_cmp(&b.0) {
        Some(std::cmp::Ordering::Greater) => a,
        Some(std::cmp::Ordering::Less) => b,
        _ => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidPlan(format!("cannot start worker pool: {e}")))
}

fn run_trials(id: PropositionId, plan: &TrialPlan) -> PropositionResult {
    let start = Instant::now();
    let instances = plan.instances_for(id);
    let jobs: Vec<(Instance, u64)> = instances
        .iter()
        .flat_map(|&inst| std::iter::repeat_n(inst, plan.trials))
        .enumerate()
        .map(|(k, inst)| (inst, k as u64))
        .collect();
    let worst = jobs
        .par_iter()
        .map(|&(inst, index)| {
            let seed = trial_seed(plan.seed, id.as_str(), index);
            let r = trials::residual(id, inst, seed, index, &plan.tolerances);
            (if r.is_nan() { 1.0 } else { r }, seed)
        })
        .reduce_with(worse);
    let (max_residual, worst_seed) = worst.unwrap_or((0.0, 0));
    PropositionResult {
        id,
        pass: max_residual < plan.tolerances.eq_tol,
        trials: jobs.len(),
        instances: instances.iter().map(Instance::to_string).collect(),
        max_residual,
        worst_seed,
        skipped: instances.is_empty(),
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs one proposition, plus its negative controls when the plan asks for
/// them.
pub fn run_proposition(id: PropositionId, plan: &TrialPlan) -> Result<VerificationReport> {
    let mut single = plan.clone();
    single.propositions = vec![id];
    run_suite(&single)
}

/// Same as [`run_proposition`], taking the id as text.
pub fn run_proposition_named(id: &str, plan: &TrialPlan) -> Result<VerificationReport> {
    run_proposition(id.parse()?, plan)
}

pub fn run_suite(plan: &TrialPlan) -> Result<VerificationReport> {
    plan.validate()?;
    let start = Instant::now();
    let pool = pool(plan.workers)?;
    let (propositions, controls) = pool.install(|| {
        let propositions: Vec<PropositionResult> = plan
            .propositions_in_order()
            .into_iter()
            .map(|id| run_trials(id, plan))
            .collect();
        let controls = plan
            .negative_controls
            .then(|| controls::run_controls(&plan.propositions_in_order(), plan));
        (propositions, controls)
    });
    Ok(VerificationReport::assemble(
        plan,
        propositions,
        controls,
        start.elapsed().as_secs_f64(),
    ))
}
