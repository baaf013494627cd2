use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::controls::ControlOutcome;
use super::plan::{DimSpec, TrialPlan};
use super::PropositionId;
use crate::error::{Error, Result};
use crate::hilbert::{ToleranceConfig, GENERATOR_ID};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropositionResult {
    pub id: PropositionId,
    pub pass: bool,
    pub trials: usize,
    pub instances: Vec<String>,
    pub max_residual: f64,
    /// Instance seed of the largest residual (smallest seed on ties).
    pub worst_seed: u64,
    /// No admissible instance shape after the dimension caps.
    pub skipped: bool,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSummary {
    pub generators: usize,
    pub detected: usize,
    pub outcomes: Vec<ControlOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    pub version: String,
    pub generator: String,
    pub master_seed: u64,
    pub tolerances: ToleranceConfig,
    pub trials: usize,
    pub dims: Vec<DimSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub schema: u32,
    /// All propositions pass and every control run was detected.
    pub pass: bool,
    pub environment: Environment,
    pub propositions: Vec<PropositionResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative_controls: Option<ControlSummary>,
    pub elapsed_seconds: f64,
}

impl VerificationReport {
    pub(crate) fn assemble(
        plan: &TrialPlan,
        propositions: Vec<PropositionResult>,
        controls: Option<Vec<ControlOutcome>>,
        elapsed_seconds: f64,
    ) -> Self {
        let negative_controls = controls.map(|outcomes| ControlSummary {
            generators: outcomes.len(),
            detected: outcomes.iter().filter(|o| o.detected).count(),
            outcomes,
        });
        let pass = propositions.iter().all(|p| p.pass)
            && negative_controls
                .as_ref()
                .is_none_or(|c| c.detected == c.generators);
        Self {
            schema: REPORT_SCHEMA,
            pass,
            environment: Environment {
                version: env!("CARGO_PKG_VERSION").to_string(),
                generator: GENERATOR_ID.to_string(),
                master_seed: plan.seed,
                tolerances: plan.tolerances,
                trials: plan.trials,
                dims: plan.dims.clone(),
            },
            propositions,
            negative_controls,
            elapsed_seconds,
        }
    }

    /// The report with every timing field zeroed, for determinism checks.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        out.elapsed_seconds = 0.0;
        for p in &mut out.propositions {
            p.elapsed_seconds = 0.0;
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text)?;
        if report.schema != REPORT_SCHEMA {
            return Err(Error::Decode(format!(
                "unsupported schema {}",
                report.schema
            )));
        }
        Ok(report)
    }

    /// One `PROP id PASS|FAIL residual=…` line per proposition, then one
    /// line per control and a closing `SUITE` line.
    pub fn to_text(&self) -> String {
        let verdict = |pass: bool| if pass { "PASS" } else { "FAIL" };
        let mut out = String::new();
        for p in &self.propositions {
            let _ = writeln!(
                out,
                "PROP {} {} residual={:.3e} trials={} worst_seed={}{}",
                p.id,
                verdict(p.pass),
                p.max_residual,
                p.trials,
                p.worst_seed,
                if p.skipped { " skipped" } else { "" }
            );
        }
        if let Some(c) = &self.negative_controls {
            for o in &c.outcomes {
                let props: Vec<&str> = o.detections.iter().map(|d| d.proposition.tag()).collect();
                let _ = writeln!(
                    out,
                    "CONTROL {:?} {} props={}",
                    o.name,
                    if o.detected { "DETECTED" } else { "MISSED" },
                    props.join(",")
                );
            }
            let _ = writeln!(out, "CONTROLS {}/{} detected", c.detected, c.generators);
        }
        let _ = writeln!(
            out,
            "SUITE {} seed={} eq_tol={:e} rank_tol={:e}",
            verdict(self.pass),
            self.environment.master_seed,
            self.environment.tolerances.eq_tol,
            self.environment.tolerances.rank_tol
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let plan = TrialPlan::default();
        let props = vec![PropositionResult {
            id: PropositionId::Totality,
            pass: true,
            trials: 3,
            instances: vec!["2x2".into()],
            max_residual: 1.2345678901234567e-16,
            worst_seed: u64::MAX,
            skipped: false,
            elapsed_seconds: 0.1,
        }];
        VerificationReport::assemble(&plan, props, None, 0.5)
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let r = sample();
        let text = r.to_json();
        assert!(text.contains("\"schema\": 1"));
        assert_eq!(VerificationReport::from_json(&text).unwrap(), r);
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let text = sample().to_json().replace("\"schema\": 1", "\"schema\": 2");
        assert!(VerificationReport::from_json(&text).is_err());
    }

    #[test]
    fn text_lines() {
        let text = sample().to_text();
        assert!(text.starts_with("PROP S3-totality PASS residual=1.235e-16"));
        assert!(text
            .lines()
            .last()
            .unwrap()
            .starts_with("SUITE PASS seed=42"));
    }

    #[test]
    fn timing_is_stripped() {
        let r = sample().without_timing();
        assert_eq!(r.elapsed_seconds, 0.0);
        assert_eq!(r.propositions[0].elapsed_seconds, 0.0);
    }
}
