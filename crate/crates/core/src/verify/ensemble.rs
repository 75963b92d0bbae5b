use super::quantum::random_state;
use super::{
    closeness, pick_dim, run, trial_rng, Check, PropertySpec, Suite, SuiteConfig, TrialOutcome,
    VerificationReport,
};
use crate::channels::{ensemble_from_unitary, mix_ensemble, unistochastic, Ensemble};
use crate::classical::{exp_thc_entropy, power_sum, Alpha};
use crate::error::Result;
use crate::linalg::{sample_haar_unitary, ComplexMatrix};
use crate::quantum::{exp_qthc, DensityOperator};

pub(crate) const PROPERTIES: &[PropertySpec] = &[
    PropertySpec {
        name: "unistochastic",
        claim: "rows and columns of |u_ij|^2 sum to 1",
        gating: true,
    },
    PropertySpec {
        name: "reconstruction",
        claim: "sum_i p_i |psi_i><psi_i| = rho",
        gating: true,
    },
    PropertySpec {
        name: "ensemble_bound",
        claim: "E_a(rho) <= E_a(p) for a > 1",
        gating: true,
    },
    PropertySpec {
        name: "majorization",
        claim: "sum_i p_i^a <= sum_j lambda_j^a for a > 1",
        gating: true,
    },
    PropertySpec {
        name: "identity_equality",
        claim: "U = I gives weights equal to the spectrum",
        gating: true,
    },
    PropertySpec {
        name: "maximally_mixed_equality",
        claim: "rho = I/n gives uniform weights for any U",
        gating: true,
    },
    PropertySpec {
        name: "ensemble_bound_small_alpha",
        claim: "E_a(rho) <= E_a(p) for 0 < a <= 1",
        gating: false,
    },
];

pub fn check_ensemble(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate_for(Suite::Ensemble)?;
    Ok(run(Suite::Ensemble, cfg, |t, seed| trial(t, seed, cfg)))
}

fn weight_entropy(e: &Ensemble, n: usize, alpha: Alpha) -> f64 {
    let dist = e
        .weight_distribution(n.max(2))
        .expect("weights lie on the simplex");
    exp_thc_entropy(&dist, alpha)
}

pub(crate) fn trial(trial: usize, seed: u64, cfg: &SuiteConfig) -> TrialOutcome {
    let tol = &cfg.tolerances;
    let mut rng = trial_rng(seed);
    let n = pick_dim(&mut rng, &cfg.dims);
    let rho = random_state(n, &mut rng);
    let u = sample_haar_unitary(n, &mut rng);

    let ensemble = ensemble_from_unitary(&rho, &u).expect("Haar matrix is unitary");
    let spectral =
        ensemble_from_unitary(&rho, &ComplexMatrix::identity(n)).expect("identity is unitary");
    let flat = DensityOperator::maximally_mixed(n);
    let flat_ensemble = ensemble_from_unitary(&flat, &u).expect("Haar matrix is unitary");

    let mut checks = Vec::new();
    let mut push = |property, alpha: Option<f64>, margin| {
        checks.push(Check {
            property,
            alpha,
            margin,
        })
    };

    let w = unistochastic(&u);
    let row_dev = w
        .iter()
        .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let col_dev = (0..n)
        .map(|j| (w.iter().map(|row| row[j]).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    push(
        "unistochastic",
        None,
        tol.unistochastic - row_dev.max(col_dev),
    );

    let rebuilt = mix_ensemble(&ensemble).expect("ensemble mixes to a state");
    let err = (rebuilt.matrix() - rho.matrix()).frobenius_norm();
    push("reconstruction", None, tol.reconstruction - err);

    for &al in &cfg.alphas {
        let alpha = Alpha::new(al).expect("validated config");
        let e = exp_qthc(&rho, alpha);
        let bound = weight_entropy(&ensemble, n, alpha) - e + tol.ensemble;
        if al > 1.0 {
            push("ensemble_bound", Some(al), bound);
            let majorization = power_sum(rho.eigenvalues(), al) - power_sum(ensemble.weights(), al);
            push("majorization", Some(al), majorization + tol.majorization);
            push(
                "identity_equality",
                Some(al),
                closeness(weight_entropy(&spectral, n, alpha), e, tol.equality),
            );
            let flat_e = exp_qthc(&flat, alpha);
            push(
                "maximally_mixed_equality",
                Some(al),
                closeness(
                    weight_entropy(&flat_ensemble, n, alpha),
                    flat_e,
                    tol.equality,
                ),
            );
        } else if cfg.explore {
            push("ensemble_bound_small_alpha", Some(al), bound);
        }
    }

    TrialOutcome {
        trial,
        seed,
        dim: n,
        checks,
    }
}
