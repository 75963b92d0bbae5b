//! Seeded property suites.
//!
//! Each suite runs `trials` independent trials. A trial draws its own RNG from
//! the master seed by counter-based splitting, so its outcome depends only on
//! `(seed, suite, trial index)` and never on execution order. Every check
//! yields a signed margin: nonnegative means the property held with the
//! configured slack already folded in, negative is a violation. Violations are
//! data in the report, never errors.

mod classical;
mod config;
mod ensemble;
mod measurement;
mod quantum;
mod report;

pub use classical::{check_classical, check_classical_with};
pub use config::{SuiteConfig, Tolerances, DEFAULT_ALPHAS};
pub use ensemble::check_ensemble;
pub use measurement::check_measurement;
pub use quantum::check_quantum;
pub use report::{PropertyRecord, VerificationReport, ViolationRecord};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Classical,
    Quantum,
    Measurement,
    Ensemble,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Self::Classical,
        Self::Quantum,
        Self::Measurement,
        Self::Ensemble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::Quantum => "quantum",
            Self::Measurement => "measurement",
            Self::Ensemble => "ensemble",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Self::Classical => 0xC1A5_51CA,
            Self::Quantum => 0x0A7A_0001,
            Self::Measurement => 0x3EA5_0002,
            Self::Ensemble => 0xE45E_0003,
        }
    }

    pub fn properties(self) -> &'static [PropertySpec] {
        match self {
            Self::Classical => classical::PROPERTIES,
            Self::Quantum => quantum::PROPERTIES,
            Self::Measurement => measurement::PROPERTIES,
            Self::Ensemble => ensemble::PROPERTIES,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite {s:?}")))
    }
}

/// Static description of one checked property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertySpec {
    pub name: &'static str,
    /// The mathematical claim being exercised, in words.
    pub claim: &'static str,
    /// Gating properties decide the exit status; the rest are exploratory.
    pub gating: bool,
}

/// One evaluated inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub property: &'static str,
    pub alpha: Option<f64>,
    pub margin: f64,
}

impl Check {
    pub fn is_violation(&self) -> bool {
        self.margin.is_nan() || self.margin < 0.0
    }
}

/// Everything a trial produced, enough to rebuild its report entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub dim: usize,
    pub checks: Vec<Check>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` of `suite` under master seed `master`.
pub fn trial_seed(master: u64, suite: Suite, trial: usize) -> u64 {
    let stream = splitmix64(master ^ splitmix64(suite.tag()));
    splitmix64(stream.wrapping_add(trial as u64))
}

pub(crate) fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn pick_dim<R: Rng>(rng: &mut R, dims: &[usize]) -> usize {
    dims[rng.gen_range(0..dims.len())]
}

/// Runs `trial_fn` for every trial index and folds the outcomes into a report.
pub(crate) fn run<F>(suite: Suite, cfg: &SuiteConfig, trial_fn: F) -> VerificationReport
where
    F: Fn(usize, u64) -> TrialOutcome + Sync,
{
    let one = |t: usize| trial_fn(t, trial_seed(cfg.seed, suite, t));
    let outcomes: Vec<TrialOutcome> = if cfg.parallel {
        (0..cfg.trials).into_par_iter().map(one).collect()
    } else {
        (0..cfg.trials).map(one).collect()
    };
    VerificationReport::aggregate(suite, cfg, &outcomes)
}

/// Re-runs a single trial of a suite, for reproducing a reported violation.
pub fn replay(suite: Suite, cfg: &SuiteConfig, trial: usize) -> Result<TrialOutcome> {
    cfg.validate_for(suite)?;
    let seed = trial_seed(cfg.seed, suite, trial);
    Ok(match suite {
        Suite::Classical => classical::trial(trial, seed, cfg, &crate::classical::exp_thc_entropy),
        Suite::Quantum => quantum::trial(trial, seed, cfg),
        Suite::Measurement => measurement::trial(trial, seed, cfg),
        Suite::Ensemble => ensemble::trial(trial, seed, cfg),
    })
}

pub fn check_suite(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    match suite {
        Suite::Classical => check_classical(cfg),
        Suite::Quantum => check_quantum(cfg),
        Suite::Measurement => check_measurement(cfg),
        Suite::Ensemble => check_ensemble(cfg),
    }
}

/// Margin for `|a − b| ≤ tol`.
pub(crate) fn closeness(a: f64, b: f64, tol: f64) -> f64 {
    tol - (a - b).abs()
}
