use rand::Rng;

use super::{
    closeness, pick_dim, run, trial_rng, Check, PropertySpec, Suite, SuiteConfig, TrialOutcome,
    VerificationReport,
};
use crate::classical::{power_sum, Alpha};
use crate::error::Result;
use crate::linalg::{
    hermitian_eig, sample_density, sample_haar_unitary, trace_power, ComplexMatrix, DensityMethod,
};
use crate::quantum::{exp_qthc, exp_qthc_bound, rank, von_neumann, DensityOperator};

pub(crate) const PROPERTIES: &[PropertySpec] = &[
    PropertySpec {
        name: "non_negativity",
        claim: "E_a(rho) >= 0",
        gating: true,
    },
    PropertySpec {
        name: "zero_iff_pure",
        claim: "E_a(rho) = 0 exactly when rho is pure",
        gating: true,
    },
    PropertySpec {
        name: "rank_bound",
        claim: "E_a(rho) <= bound(rank rho)",
        gating: true,
    },
    PropertySpec {
        name: "rank_bound_equality",
        claim: "equidistribution of rank r attains bound(r)",
        gating: true,
    },
    PropertySpec {
        name: "trace_power_convexity",
        claim: "tr rho^a concave for a < 1, convex for a > 1",
        gating: true,
    },
    PropertySpec {
        name: "concavity",
        claim: "E_a(l rho + (1-l) sigma) >= l E_a(rho) + (1-l) E_a(sigma)",
        gating: true,
    },
    PropertySpec {
        name: "trace_minkowski",
        claim: "(tr(A+B)^a)^(1/a) <= (tr A^a)^(1/a) + (tr B^a)^(1/a), reversed for a < 1",
        gating: true,
    },
    PropertySpec {
        name: "unitary_invariance",
        claim: "E_a(U rho U^dag) = E_a(rho)",
        gating: true,
    },
    PropertySpec {
        name: "von_neumann_limit",
        claim: "E_a(rho) -> S(rho) as a -> 1",
        gating: true,
    },
];

pub fn check_quantum(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate_for(Suite::Quantum)?;
    Ok(run(Suite::Quantum, cfg, |t, seed| trial(t, seed, cfg)))
}

pub(crate) fn random_method<R: Rng>(rng: &mut R) -> DensityMethod {
    DensityMethod::ALL[rng.gen_range(0..DensityMethod::ALL.len())]
}

pub(crate) fn random_state<R: Rng>(n: usize, rng: &mut R) -> DensityOperator {
    let method = random_method(rng);
    DensityOperator::new(sample_density(n, rng, method)).expect("sampler yields valid states")
}

/// Rank-r equidistribution over a Haar-random r-dimensional subspace.
pub(crate) fn equidistribution<R: Rng>(n: usize, r: usize, rng: &mut R) -> DensityOperator {
    let mut diag = vec![0.0; n];
    diag[..r].iter_mut().for_each(|d| *d = 1.0 / r as f64);
    let u = sample_haar_unitary(n, rng);
    let m = ComplexMatrix::from_real_diagonal(&diag)
        .conjugate_by(&u)
        .hermitian_part();
    DensityOperator::new(m).expect("equidistribution is a valid state")
}

pub(crate) fn trial(trial: usize, seed: u64, cfg: &SuiteConfig) -> TrialOutcome {
    let tol = &cfg.tolerances;
    let mut rng = trial_rng(seed);
    let n = pick_dim(&mut rng, &cfg.dims);
    let rho = random_state(n, &mut rng);
    let sigma = random_state(n, &mut rng);
    let lambda: f64 = rng.gen_range(0.0..=1.0);
    let u = sample_haar_unitary(n, &mut rng);
    let r = rng.gen_range(1..=n);
    let equi = equidistribution(n, r, &mut rng);
    let (scale_a, scale_b): (f64, f64) = (rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0));

    let rotated = rho
        .conjugate_by(&u)
        .expect("unitary conjugation preserves validity");
    let mixed = rho
        .mix(&sigma, lambda)
        .expect("convex combination is a state");
    let sum = &rho.matrix().scale(scale_a) + &sigma.matrix().scale(scale_b);
    let sum_spectrum = hermitian_eig(&sum).expect("sum of PSD matrices is Hermitian");
    let rank_rho = rank(&rho);
    let purity = rho.purity();

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
        let e = exp_qthc(&rho, alpha);
        let es = exp_qthc(&sigma, alpha);

        push("non_negativity", Some(al), e + tol.quantum_nonnegativity);

        let zero_entropy = e < tol.purity;
        let pure = purity > 1.0 - tol.purity;
        let gap = (e - tol.purity)
            .abs()
            .min((purity - (1.0 - tol.purity)).abs());
        push(
            "zero_iff_pure",
            Some(al),
            if zero_entropy == pure { gap } else { -gap },
        );

        push(
            "rank_bound",
            Some(al),
            exp_qthc_bound(rank_rho, alpha) + tol.rank_bound - e,
        );

        let equality = if rank(&equi) == r {
            closeness(
                exp_qthc(&equi, alpha),
                exp_qthc_bound(r, alpha),
                tol.equality,
            )
        } else {
            -1.0
        };
        push("rank_bound_equality", Some(al), equality);

        if al != 1.0 {
            let g_mix = power_sum(mixed.eigenvalues(), al);
            let g_chord = lambda * power_sum(rho.eigenvalues(), al)
                + (1.0 - lambda) * power_sum(sigma.eigenvalues(), al);
            let margin = if al < 1.0 {
                g_mix - g_chord
            } else {
                g_chord - g_mix
            };
            push("trace_power_convexity", Some(al), margin + tol.concavity);

            let norm_sum = trace_power(&sum_spectrum, al)
                .expect("PSD spectrum")
                .powf(1.0 / al);
            let norm_a = scale_a * power_sum(rho.eigenvalues(), al).powf(1.0 / al);
            let norm_b = scale_b * power_sum(sigma.eigenvalues(), al).powf(1.0 / al);
            let margin = if al > 1.0 {
                norm_a + norm_b - norm_sum
            } else {
                norm_sum - norm_a - norm_b
            };
            push("trace_minkowski", Some(al), margin + tol.minkowski);
        }

        let chord = lambda * e + (1.0 - lambda) * es;
        push(
            "concavity",
            Some(al),
            exp_qthc(&mixed, alpha) - chord + tol.concavity,
        );

        push(
            "unitary_invariance",
            Some(al),
            closeness(exp_qthc(&rotated, alpha), e, tol.unitary_invariance),
        );
    }

    let s = von_neumann(&rho);
    for offset in [-tol.limit_offset, tol.limit_offset] {
        let near_one = Alpha::new(1.0 + offset).expect("offset is small");
        push(
            "von_neumann_limit",
            Some(1.0 + offset),
            closeness(exp_qthc(&rho, near_one), s, tol.limit),
        );
    }

    TrialOutcome {
        trial,
        seed,
        dim: n,
        checks,
    }
}
