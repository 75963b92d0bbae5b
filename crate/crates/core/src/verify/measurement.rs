use rand::Rng;

use super::quantum::random_state;
use super::{
    closeness, pick_dim, run, trial_rng, Check, PropertySpec, Suite, SuiteConfig, TrialOutcome,
    VerificationReport,
};
use crate::channels::{projective_measure, ProjectorSet};
use crate::classical::Alpha;
use crate::error::Result;
use crate::linalg::{sample_density, sample_haar_unitary, DensityMethod};
use crate::quantum::{exp_qthc, DensityOperator};

pub(crate) const PROPERTIES: &[PropertySpec] = &[
    PropertySpec {
        name: "trace_preservation",
        claim: "tr(sum_i P_i rho P_i) = 1",
        gating: true,
    },
    PropertySpec {
        name: "idempotence",
        claim: "measuring twice equals measuring once",
        gating: true,
    },
    PropertySpec {
        name: "monotonicity",
        claim: "E_a(rho') >= E_a(rho) for rank-one projective measurements",
        gating: true,
    },
    PropertySpec {
        name: "commuting_equality",
        claim: "E_a(rho') = E_a(rho) when measuring in the eigenbasis of rho",
        gating: true,
    },
    PropertySpec {
        name: "pure_strict_increase",
        claim: "E_a(rho') > E_a(rho) = 0 for pure rho and a generic basis",
        gating: true,
    },
    PropertySpec {
        name: "general_rank_monotonicity",
        claim: "E_a(rho') >= E_a(rho) for projectors of arbitrary rank",
        gating: false,
    },
];

pub fn check_measurement(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate_for(Suite::Measurement)?;
    Ok(run(Suite::Measurement, cfg, |t, seed| trial(t, seed, cfg)))
}

/// Random composition of n into at least one block of size ≥ 2.
fn random_blocks<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let mut sizes = Vec::new();
        let mut left = n;
        while left > 0 {
            let s = rng.gen_range(1..=left);
            sizes.push(s);
            left -= s;
        }
        if sizes.iter().any(|&s| s >= 2) {
            return sizes;
        }
    }
}

pub(crate) fn trial(trial: usize, seed: u64, cfg: &SuiteConfig) -> TrialOutcome {
    let tol = &cfg.tolerances;
    let mut rng = trial_rng(seed);
    let n = pick_dim(&mut rng, &cfg.dims);
    let rho = random_state(n, &mut rng);
    let u = sample_haar_unitary(n, &mut rng);
    let pure = DensityOperator::new(sample_density(n, &mut rng, DensityMethod::Pure))
        .expect("valid pure state");

    let basis = ProjectorSet::from_unitary(&u).expect("Haar columns are orthonormal");
    let eigenbasis = ProjectorSet::from_basis(&rho.spectrum().eigenvectors.columns())
        .expect("eigenvectors are orthonormal");

    let measured = projective_measure(&rho, &basis).expect("dimensions match");
    let twice = projective_measure(&measured, &basis).expect("dimensions match");
    let in_eigenbasis = projective_measure(&rho, &eigenbasis).expect("dimensions match");
    let pure_measured = projective_measure(&pure, &basis).expect("dimensions match");

    let blocks = if cfg.explore && n >= 2 {
        let sizes = random_blocks(n, &mut rng);
        let coarse = ProjectorSet::from_blocks(&u.columns(), &sizes).expect("valid partition");
        Some(projective_measure(&rho, &coarse).expect("dimensions match"))
    } else {
        None
    };

    let mut checks = Vec::new();
    let mut push = |property, alpha: Option<f64>, margin| {
        checks.push(Check {
            property,
            alpha,
            margin,
        })
    };

    push(
        "trace_preservation",
        None,
        closeness(measured.matrix().trace().re, 1.0, tol.trace),
    );
    push(
        "idempotence",
        None,
        tol.idempotence - twice.matrix().max_abs_diff(measured.matrix()),
    );

    for &al in &cfg.alphas {
        let alpha = Alpha::new(al).expect("validated config");
        let e = exp_qthc(&rho, alpha);
        push(
            "monotonicity",
            Some(al),
            exp_qthc(&measured, alpha) - e + tol.measurement,
        );
        push(
            "commuting_equality",
            Some(al),
            closeness(exp_qthc(&in_eigenbasis, alpha), e, tol.equality),
        );
        if n >= 2 {
            let gain = exp_qthc(&pure_measured, alpha) - exp_qthc(&pure, alpha);
            push("pure_strict_increase", Some(al), gain - tol.strict_gap);
        }
        if let Some(coarse) = &blocks {
            push(
                "general_rank_monotonicity",
                Some(al),
                exp_qthc(coarse, alpha) - e + tol.measurement,
            );
        }
    }

    TrialOutcome {
        trial,
        seed,
        dim: n,
        checks,
    }
}
