use std::fmt;

use serde::{Deserialize, Serialize};

use super::PropositionId;
use crate::error::{Error, Result};
use crate::hilbert::ToleranceConfig;

/// Largest domain dimension used for lift trials.
pub const LIFT_DIM_CAP: usize = 8;
/// Largest `dim_a·dim_b` used for isomorphism trials.
pub const PRODUCT_DIM_CAP: usize = 36;

const DIM_RANGE: std::ops::RangeInclusive<usize> = 2..=16;

/// One entry of a `--dims` list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimSpec {
    Single(usize),
    Pair(usize, usize),
}

impl fmt::Display for DimSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimSpec::Single(n) => write!(f, "{n}"),
            DimSpec::Pair(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

fn parse_dim(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidPlan(format!("not a dimension: {s:?}")))
}

/// Comma-separated `N`, `AxB`, or inclusive range `N..M`.
pub fn parse_dims(list: &str) -> Result<Vec<DimSpec>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let (lo, hi) = (parse_dim(lo)?, parse_dim(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(Error::InvalidPlan(format!("empty range {item:?}")));
            }
            out.extend((lo..=hi).map(DimSpec::Single));
        } else if let Some((a, b)) = item.split_once(['x', 'X']) {
            out.push(DimSpec::Pair(parse_dim(a)?, parse_dim(b)?));
        } else {
            out.push(DimSpec::Single(parse_dim(item)?));
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidPlan("no dimensions given".into()));
    }
    Ok(out)
}

/// A concrete trial shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instance {
    Single(usize),
    Pair(usize, usize),
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Single(n) => write!(f, "{n}"),
            Instance::Pair(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub propositions: Vec<PropositionId>,
    pub dims: Vec<DimSpec>,
    /// Trials per instance shape.
    pub trials: usize,
    pub seed: u64,
    pub tolerances: ToleranceConfig,
    pub negative_controls: bool,
    /// Worker threads; 0 picks one per core. Does not affect results.
    pub workers: usize,
}

impl Default for TrialPlan {
    fn default() -> Self {
        Self {
            propositions: PropositionId::ALL.to_vec(),
            dims: (2..=4).map(DimSpec::Single).collect(),
            trials: 50,
            seed: 42,
            tolerances: ToleranceConfig::default(),
            negative_controls: false,
            workers: 0,
        }
    }
}

impl TrialPlan {
    pub fn validate(&self) -> Result<()> {
        if self.propositions.is_empty() {
            return Err(Error::InvalidPlan("no propositions selected".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidPlan("trials must be at least 1".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::InvalidPlan("no dimensions given".into()));
        }
        for d in &self.dims {
            let ok = match *d {
                DimSpec::Single(n) => DIM_RANGE.contains(&n),
                DimSpec::Pair(a, b) => DIM_RANGE.contains(&a) && DIM_RANGE.contains(&b),
            };
            if !ok {
                return Err(Error::InvalidPlan(format!(
                    "dimension {d} outside {}..{}",
                    DIM_RANGE.start(),
                    DIM_RANGE.end()
                )));
            }
        }
        ToleranceConfig::new(self.tolerances.eq_tol, self.tolerances.rank_tol)?;
        Ok(())
    }

    /// Selected propositions in report order, without duplicates.
    pub fn propositions_in_order(&self) -> Vec<PropositionId> {
        PropositionId::ALL
            .into_iter()
            .filter(|id| self.propositions.contains(id))
            .collect()
    }

    /// Shapes a proposition runs on. Single dimensions `n, m` give pairs
    /// `n×m` with `n ≤ m`; pairs give their own factors as single dims.
    pub fn instances_for(&self, id: PropositionId) -> Vec<Instance> {
        let mut out = Vec::new();
        let mut push = |inst: Instance| {
            if !out.contains(&inst) {
                out.push(inst);
            }
        };
        if id.is_single_system() {
            for d in &self.dims {
                match *d {
                    DimSpec::Single(n) => push(Instance::Single(n)),
                    DimSpec::Pair(a, b) => {
                        push(Instance::Single(a));
                        push(Instance::Single(b));
                    }
                }
            }
        } else {
            let singles: Vec<usize> = self
                .dims
                .iter()
                .filter_map(|d| match d {
                    DimSpec::Single(n) => Some(*n),
                    DimSpec::Pair(..) => None,
                })
                .collect();
            for (k, &a) in singles.iter().enumerate() {
                for &b in &singles[k..] {
                    push(Instance::Pair(a.min(b), a.max(b)));
                }
            }
            for d in &self.dims {
                if let DimSpec::Pair(a, b) = *d {
                    push(Instance::Pair(a, b));
                }
            }
        }
        out.retain(|inst| match (id, *inst) {
            (PropositionId::FtpgLift, Instance::Single(n)) => n <= LIFT_DIM_CAP,
            (PropositionId::CompositeTheorem, Instance::Pair(a, b)) => a * b <= PRODUCT_DIM_CAP,
            _ => true,
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parse() {
        assert_eq!(
            parse_dims("2..4, 2x3").unwrap(),
            vec![
                DimSpec::Single(2),
                DimSpec::Single(3),
                DimSpec::Single(4),
                DimSpec::Pair(2, 3)
            ]
        );
        assert_eq!(parse_dims("3X5").unwrap(), vec![DimSpec::Pair(3, 5)]);
        assert!(parse_dims("").is_err());
        assert!(parse_dims("4..2").is_err());
        assert!(parse_dims("2xx").is_err());
        assert!(parse_dims("-1").is_err());
    }

    #[test]
    fn validation() {
        assert!(TrialPlan::default().validate().is_ok());
        let bad = |p: TrialPlan| matches!(p.validate(), Err(Error::InvalidPlan(_)));
        assert!(bad(TrialPlan {
            trials: 0,
            ..TrialPlan::default()
        }));
        assert!(bad(TrialPlan {
            dims: vec![DimSpec::Single(1)],
            ..TrialPlan::default()
        }));
        assert!(bad(TrialPlan {
            dims: vec![DimSpec::Pair(2, 17)],
            ..TrialPlan::default()
        }));
        let mut p = TrialPlan::default();
        p.tolerances.eq_tol = -1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn instance_expansion_and_caps() {
        let plan = TrialPlan {
            dims: parse_dims("2,3,2x5,9").unwrap(),
            ..TrialPlan::default()
        };
        let s6 = plan.instances_for(PropositionId::FtpgLift);
        assert_eq!(
            s6,
            vec![
                Instance::Single(2),
                Instance::Single(3),
                Instance::Single(5)
            ]
        );
        let t1 = plan.instances_for(PropositionId::CompositeTheorem);
        assert!(!t1.contains(&Instance::Pair(9, 9)));
        assert!(t1.contains(&Instance::Pair(3, 9)));
        assert!(t1.contains(&Instance::Pair(2, 5)));
        let s3 = plan.instances_for(PropositionId::Totality);
        assert!(s3.contains(&Instance::Pair(9, 9)));
    }
}
