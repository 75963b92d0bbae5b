use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    closeness, pick_dim, run, trial_rng, Check, PropertySpec, Suite, SuiteConfig, TrialOutcome,
    VerificationReport,
};
use crate::classical::{exp_thc_max, shannon_entropy, Alpha, Distribution};
use crate::error::Result;
use crate::linalg::sample_simplex;

pub(crate) const PROPERTIES: &[PropertySpec] = &[
    PropertySpec {
        name: "symmetry",
        claim: "invariant under permutation of outcomes",
        gating: true,
    },
    PropertySpec {
        name: "non_negativity",
        claim: "E_a(A) >= 0",
        gating: true,
    },
    PropertySpec {
        name: "expansibility",
        claim: "appending a zero-probability outcome changes nothing",
        gating: true,
    },
    PropertySpec {
        name: "decisivity",
        claim: "degenerate distributions have entropy exactly 0",
        gating: true,
    },
    PropertySpec {
        name: "maximality",
        claim: "E_a(A) <= E_a(uniform_n) closed form",
        gating: true,
    },
    PropertySpec {
        name: "concavity",
        claim: "E_a(lA + (1-l)B) >= l E_a(A) + (1-l) E_a(B)",
        gating: true,
    },
    PropertySpec {
        name: "shannon_limit",
        claim: "E_a(A) -> Shannon entropy as a -> 1",
        gating: true,
    },
];

/// Runs the classical suite against [`crate::classical::exp_thc_entropy`].
pub fn check_classical(cfg: &SuiteConfig) -> Result<VerificationReport> {
    check_classical_with(cfg, &crate::classical::exp_thc_entropy)
}

/// Runs the classical suite against an arbitrary measure. Useful for checking
/// that the harness actually catches a broken implementation.
pub fn check_classical_with<F>(cfg: &SuiteConfig, measure: &F) -> Result<VerificationReport>
where
    F: Fn(&Distribution, Alpha) -> f64 + Sync,
{
    cfg.validate_for(Suite::Classical)?;
    Ok(run(Suite::Classical, cfg, |t, seed| {
        trial(t, seed, cfg, measure)
    }))
}

fn simplex_point<R: Rng>(n: usize, rng: &mut R) -> Distribution {
    Distribution::new(sample_simplex(n, rng)).expect("sampled point lies on the simplex")
}

pub(crate) fn trial<F>(trial: usize, seed: u64, cfg: &SuiteConfig, measure: &F) -> TrialOutcome
where
    F: Fn(&Distribution, Alpha) -> f64,
{
    let tol = &cfg.tolerances;
    let mut rng = trial_rng(seed);
    let n = pick_dim(&mut rng, &cfg.dims);
    let a = simplex_point(n, &mut rng);
    let b = simplex_point(n, &mut rng);
    let lambda: f64 = rng.gen_range(f64::EPSILON..1.0);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let k = rng.gen_range(0..n);

    let permuted = a.permuted(&perm).expect("shuffle is a permutation");
    let expanded = a.expanded();
    let decisive = Distribution::degenerate(n, k).expect("k < n");
    let mixed = a.mix(&b, lambda).expect("same support size");

    let mut checks = Vec::new();
    let mut push = |property, alpha: Option<f64>, margin| {
        checks.push(Check {
            property,
            alpha,
            margin,
        })
    };

    for &al in &cfg.alphas {
        let alpha = Alpha::new(al).expect("validated config");
        let ea = measure(&a, alpha);
        let eb = measure(&b, alpha);
        push(
            "symmetry",
            Some(al),
            closeness(measure(&permuted, alpha), ea, tol.symmetry),
        );
        push("non_negativity", Some(al), ea + tol.nonnegativity);
        push(
            "expansibility",
            Some(al),
            closeness(measure(&expanded, alpha), ea, tol.expansibility),
        );
        push("decisivity", Some(al), -measure(&decisive, alpha).abs());
        push(
            "maximality",
            Some(al),
            exp_thc_max(n, alpha) + tol.maximality - ea,
        );
        let chord = lambda * ea + (1.0 - lambda) * eb;
        push(
            "concavity",
            Some(al),
            measure(&mixed, alpha) - chord + tol.concavity,
        );
    }

    let h = shannon_entropy(&a);
    for offset in [-tol.limit_offset, tol.limit_offset] {
        let near_one = Alpha::new(1.0 + offset).expect("offset is small");
        push(
            "shannon_limit",
            Some(1.0 + offset),
            closeness(measure(&a, near_one), h, tol.limit),
        );
    }

    TrialOutcome {
        trial,
        seed,
        dim: n,
        checks,
    }
}
