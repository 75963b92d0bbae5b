use serde::{Deserialize, Serialize};

use super::Suite;
use crate::error::{Error, Result};
use crate::linalg::DEFAULT_DIM_CAP;

pub const DEFAULT_ALPHAS: [f64; 8] = [0.25, 0.5, 0.9, 1.1, 1.5, 2.0, 3.0, 5.0];

/// Slack granted to each inequality before a check counts as a violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub symmetry: f64,
    pub nonnegativity: f64,
    /// Eigenvalues of a pure state can exceed 1 by an ulp, so the quantum
    /// non-negativity check gets rounding-level slack.
    pub quantum_nonnegativity: f64,
    pub expansibility: f64,
    pub maximality: f64,
    pub concavity: f64,
    /// Offset from α = 1 used for the limit checks.
    pub limit_offset: f64,
    pub limit: f64,
    /// Threshold on both the entropy and 1 − tr(ρ²) for calling a state pure.
    pub purity: f64,
    pub rank_bound: f64,
    pub equality: f64,
    pub minkowski: f64,
    pub unitary_invariance: f64,
    pub measurement: f64,
    pub idempotence: f64,
    pub trace: f64,
    /// Minimum entropy gain demanded when pinching a pure state in a
    /// non-commuting basis.
    pub strict_gap: f64,
    pub ensemble: f64,
    pub majorization: f64,
    pub unistochastic: f64,
    pub reconstruction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-12,
            nonnegativity: 0.0,
            quantum_nonnegativity: 1e-12,
            expansibility: 1e-12,
            maximality: 1e-12,
            concavity: 1e-10,
            limit_offset: 1e-5,
            limit: 1e-4,
            purity: 1e-9,
            rank_bound: 1e-10,
            equality: 1e-9,
            minkowski: 1e-10,
            unitary_invariance: 1e-8,
            measurement: 1e-10,
            idempotence: 1e-10,
            trace: 1e-10,
            strict_gap: 1e-12,
            ensemble: 1e-10,
            majorization: 1e-12,
            unistochastic: 1e-10,
            reconstruction: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub alphas: Vec<f64>,
    pub tolerances: Tolerances,
    /// Also run checks beyond what is proven (reported, never gating).
    pub explore: bool,
    /// Run trials on the rayon pool. Reports are identical either way.
    #[serde(skip)]
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            dims: (2..=8).collect(),
            alphas: DEFAULT_ALPHAS.to_vec(),
            tolerances: Tolerances::default(),
            explore: false,
            parallel: true,
        }
    }
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        Self {
            seed,
            trials,
            ..Self::default()
        }
    }

    pub fn with_dims(mut self, dims: impl IntoIterator<Item = usize>) -> Self {
        self.dims = dims.into_iter().collect();
        self
    }

    pub fn with_alphas(mut self, alphas: impl IntoIterator<Item = f64>) -> Self {
        self.alphas = alphas.into_iter().collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::InvalidConfig("no dimensions given".into()));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d == 0 || d > DEFAULT_DIM_CAP) {
            return Err(Error::InvalidConfig(format!(
                "dimension {d} outside 1..={DEFAULT_DIM_CAP}"
            )));
        }
        if self.alphas.is_empty() {
            return Err(Error::InvalidConfig("no alphas given".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidConfig(format!("alpha {a} must be positive")));
        }
        Ok(())
    }

    pub(crate) fn validate_for(&self, suite: Suite) -> Result<()> {
        self.validate()?;
        if suite == Suite::Classical && self.dims.contains(&1) {
            return Err(Error::InvalidConfig(
                "classical suite needs distributions with at least 2 outcomes".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = SuiteConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.dims, vec![2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(SuiteConfig::new(1, 0).validate().is_err());
        assert!(SuiteConfig::new(1, 5).with_dims([]).validate().is_err());
        assert!(SuiteConfig::new(1, 5).with_dims([0]).validate().is_err());
        assert!(SuiteConfig::new(1, 5).with_dims([65]).validate().is_err());
        assert!(SuiteConfig::new(1, 5)
            .with_alphas([0.5, 0.0])
            .validate()
            .is_err());
        assert!(SuiteConfig::new(1, 5)
            .with_alphas([f64::NAN])
            .validate()
            .is_err());
        let one = SuiteConfig::new(1, 5).with_dims([1]);
        assert!(one.validate_for(Suite::Quantum).is_ok());
        assert!(one.validate_for(Suite::Classical).is_err());
    }
}
