//! Entropies of finite probability distributions.
//!
//! All logarithms are natural, so every measure is in nats. With that base
//! the exponential measures of a uniform distribution over `n` outcomes all
//! equal `n`, and the exponential type-α entropy tends to Shannon entropy as
//! α → 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on |Σ p_i − 1| for a valid distribution.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Inside this distance from α = 1 the exponential entropy is evaluated by
/// its limit (Shannon entropy) instead of the cancelling quotient.
pub const ALPHA_ONE_BAND: f64 = 1e-6;

/// A point on the probability simplex with at least two outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::check_entries(&probs)?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self(probs))
    }

    /// Divides by the total. Only for callers that explicitly want
    /// unnormalized weights accepted.
    pub fn renormalized(weights: Vec<f64>) -> Result<Self> {
        Self::check_entries(&weights)?;
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "cannot normalize total {total}"
            )));
        }
        Ok(Self(weights.into_iter().map(|w| w / total).collect()))
    }

    fn check_entries(probs: &[f64]) -> Result<()> {
        if probs.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least 2 outcomes, got {}",
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("bad probability {bad}")));
        }
        Ok(())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    /// All mass on outcome `k`.
    pub fn degenerate(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidDistribution(format!(
                "outcome {k} out of range for n = {n}"
            )));
        }
        let mut p = vec![0.0; n];
        p[k] = 1.0;
        Self::new(p)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// λ·self + (1 − λ)·other.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(self.len(), other.len()));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidDistribution(format!(
                "mixing weight {lambda} outside [0, 1]"
            )));
        }
        let p = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b);
        Self::new(p.collect())
    }

    /// The same distribution with a zero-probability outcome appended.
    pub fn expanded(&self) -> Self {
        let mut p = self.0.clone();
        p.push(0.0);
        Self(p)
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if perm.len() != self.len()
            || perm
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidDistribution("not a permutation".into()));
        }
        Ok(Self(perm.iter().map(|&i| self.0[i]).collect()))
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Self {
        d.0
    }
}

/// Entropy order parameter, strictly positive and finite. Measures that are
/// undefined at α = 1 reject it themselves.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(Self(alpha))
        } else {
            Err(Error::AlphaOutOfRange(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    fn require_not_one(self) -> Result<f64> {
        if self.is_one() {
            Err(Error::AlphaOutOfRange(self.0))
        } else {
            Ok(self.0)
        }
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> Self {
        a.0
    }
}

/// Prefactor convention for the Tsallis-Havrda-Charvat family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// 1/(1 − 2^{1−α}): equals 1 on the fair coin.
    HavrdaCharvat,
    /// 1/(α − 1).
    Tsallis,
}

/// Σ p_i^α with 0^α = 0.
pub fn power_sum(probs: &[f64], alpha: f64) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p.powf(alpha))
        .sum()
}

pub(crate) fn shannon_of(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// (1 − e^{s − 1})/(α − 1) for a precomputed power sum `s`.
pub(crate) fn exp_thc_from_power_sum(power_sum: f64, alpha: f64) -> f64 {
    -(power_sum - 1.0).exp_m1() / (alpha - 1.0)
}

/// Exponential type-α entropy of nonnegative weights summing to one, with the
/// α → 1 limit handled.
pub(crate) fn exp_thc_of_slice(probs: &[f64], alpha: Alpha) -> f64 {
    let a = alpha.value();
    if (a - 1.0).abs() < ALPHA_ONE_BAND {
        shannon_of(probs)
    } else {
        exp_thc_from_power_sum(power_sum(probs, a), a)
    }
}

pub fn shannon_entropy(a: &Distribution) -> f64 {
    shannon_of(a.probs())
}

pub fn thc_entropy(a: &Distribution, alpha: Alpha, norm: Normalization) -> Result<f64> {
    let al = alpha.require_not_one()?;
    let deficit = 1.0 - power_sum(a.probs(), al);
    Ok(match norm {
        Normalization::HavrdaCharvat => deficit / (1.0 - 2f64.powf(1.0 - al)),
        Normalization::Tsallis => deficit / (al - 1.0),
    })
}

/// 1 − Σ p_i²; the Tsallis entropy at α = 2.
pub fn gini_simpson(a: &Distribution) -> f64 {
    1.0 - power_sum(a.probs(), 2.0)
}

pub fn renyi_entropy(a: &Distribution, alpha: Alpha) -> Result<f64> {
    let al = alpha.require_not_one()?;
    Ok(power_sum(a.probs(), al).ln() / (1.0 - al))
}

pub fn kapur_entropy(a: &Distribution, alpha: Alpha, beta: Alpha) -> Result<f64> {
    if alpha == beta {
        return Err(Error::ParamsEqual(alpha.value()));
    }
    let (al, be) = (alpha.value(), beta.value());
    let ratio = power_sum(a.probs(), al) / power_sum(a.probs(), be);
    Ok(ratio.ln() / (be - al))
}

/// Which entropy to exponentiate in [`exp_entropy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpKind {
    Shannon,
    Renyi(Alpha),
    Kapur(Alpha, Alpha),
}

/// e raised to the chosen entropy; the "effective number of outcomes".
pub fn exp_entropy(a: &Distribution, kind: ExpKind) -> Result<f64> {
    let h = match kind {
        ExpKind::Shannon => shannon_entropy(a),
        ExpKind::Renyi(alpha) => renyi_entropy(a, alpha)?,
        ExpKind::Kapur(alpha, beta) => kapur_entropy(a, alpha, beta)?,
    };
    Ok(h.exp())
}

/// Exponential type-α entropy (1 − e^{Σ p_i^α − 1})/(α − 1).
///
/// At α = 1, and within [`ALPHA_ONE_BAND`] of it, this returns the Shannon
/// entropy in nats.
pub fn exp_thc_entropy(a: &Distribution, alpha: Alpha) -> f64 {
    exp_thc_of_slice(a.probs(), alpha)
}

/// Closed-form value of [`exp_thc_entropy`] at the uniform distribution over
/// `n` outcomes, which is its maximum on the simplex.
pub fn exp_thc_max(n: usize, alpha: Alpha) -> f64 {
    assert!(n >= 1, "need at least one outcome");
    let a = alpha.value();
    if (a - 1.0).abs() < ALPHA_ONE_BAND {
        (n as f64).ln()
    } else {
        exp_thc_from_power_sum((n as f64).powf(1.0 - a), a)
    }
}
