use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Suite, SuiteConfig, TrialOutcome};

/// A single failed check, with what is needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub trial: usize,
    pub seed: u64,
    pub dim: usize,
    pub alpha: Option<f64>,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub name: String,
    pub claim: String,
    pub gating: bool,
    /// Trials in which the property was evaluated at least once.
    pub trials: usize,
    pub checks: usize,
    pub violations: usize,
    /// Smallest margin seen; `None` if the property was never evaluated.
    pub worst_margin: Option<f64>,
    pub violation_records: Vec<ViolationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub alphas: Vec<f64>,
    pub properties: Vec<PropertyRecord>,
}

impl VerificationReport {
    pub(crate) fn aggregate(suite: Suite, cfg: &SuiteConfig, outcomes: &[TrialOutcome]) -> Self {
        let mut properties: Vec<PropertyRecord> = suite
            .properties()
            .iter()
            .map(|p| PropertyRecord {
                name: p.name.to_string(),
                claim: p.claim.to_string(),
                gating: p.gating,
                trials: 0,
                checks: 0,
                violations: 0,
                worst_margin: None,
                violation_records: Vec::new(),
            })
            .collect();

        let mut sorted: Vec<&TrialOutcome> = outcomes.iter().collect();
        sorted.sort_by_key(|o| o.trial);

        for outcome in sorted {
            let mut touched = vec![false; properties.len()];
            for check in &outcome.checks {
                let idx = properties
                    .iter()
                    .position(|p| p.name == check.property)
                    .unwrap_or_else(|| {
                        panic!("check for unregistered property {}", check.property)
                    });
                let rec = &mut properties[idx];
                touched[idx] = true;
                rec.checks += 1;
                rec.worst_margin = Some(match rec.worst_margin {
                    Some(w) if check.margin.is_nan() || check.margin >= w => w,
                    _ => check.margin,
                });
                if check.is_violation() {
                    rec.violations += 1;
                    rec.violation_records.push(ViolationRecord {
                        trial: outcome.trial,
                        seed: outcome.seed,
                        dim: outcome.dim,
                        alpha: check.alpha,
                        margin: check.margin,
                    });
                }
            }
            for (rec, t) in properties.iter_mut().zip(touched) {
                rec.trials += usize::from(t);
            }
        }

        Self {
            suite,
            seed: cfg.seed,
            trials: cfg.trials,
            dims: cfg.dims.clone(),
            alphas: cfg.alphas.clone(),
            properties,
        }
    }

    pub fn gating_violations(&self) -> usize {
        self.properties
            .iter()
            .filter(|p| p.gating)
            .map(|p| p.violations)
            .sum()
    }

    pub fn total_violations(&self) -> usize {
        self.properties.iter().map(|p| p.violations).sum()
    }

    pub fn property(&self, name: &str) -> Option<&PropertyRecord> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// One line per property.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "suite {} (seed {}, {} trials, dims {:?})\n",
            self.suite.name(),
            self.seed,
            self.trials,
            self.dims
        );
        for p in &self.properties {
            let status = match (p.violations, p.gating) {
                (0, _) => "ok  ",
                (_, true) => "FAIL",
                (_, false) => "note",
            };
            let worst = p
                .worst_margin
                .map_or_else(|| "-".to_string(), |w| format!("{w:.3e}"));
            let _ = writeln!(
                out,
                "  [{status}] {:<28} {:>6}/{:<6} violations, worst margin {worst:>10}  {}{}",
                p.name,
                p.violations,
                p.checks,
                p.claim,
                if p.gating { "" } else { " (exploratory)" }
            );
        }
        out
    }
}
