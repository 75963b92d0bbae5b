//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use expent::classical::{
    exp_entropy, exp_thc_entropy, thc_entropy, Alpha, Distribution, ExpKind, Normalization,
};
use expent::linalg::{hermitian_eig, sample_density, ComplexMatrix, DensityMethod};
use expent::quantum::exp_qthc;
use expent::DensityOperator;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn alpha(a: f64) -> Alpha {
    Alpha::new(a).unwrap()
}

fn dist(p: &[f64]) -> Distribution {
    Distribution::new(p.to_vec()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Double-double arithmetic, enough for exp and integer powers.
mod dd {
    #[derive(Clone, Copy, Debug)]
    pub struct Dd(pub f64, pub f64);

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let (s, e) = two_sum(hi, lo);
        Dd(s, e)
    }

    impl Dd {
        pub fn from(x: f64) -> Self {
            Dd(x, 0.0)
        }

        pub fn add(self, o: Dd) -> Dd {
            let (s, e) = two_sum(self.0, o.0);
            renorm(s, e + self.1 + o.1)
        }

        pub fn neg(self) -> Dd {
            Dd(-self.0, -self.1)
        }

        pub fn mul(self, o: Dd) -> Dd {
            let (p, e) = two_prod(self.0, o.0);
            renorm(p, e + self.0 * o.1 + self.1 * o.0)
        }

        pub fn div_f64(self, d: f64) -> Dd {
            let q = self.0 / d;
            let (p, e) = two_prod(q, d);
            let r = (self.0 - p - e + self.1) / d;
            renorm(q, r)
        }

        pub fn powi(self, k: u32) -> Dd {
            (0..k).fold(Dd::from(1.0), |acc, _| acc.mul(self))
        }

        /// Taylor series after halving the argument eight times.
        pub fn exp(self) -> Dd {
            let r = Dd(self.0 / 256.0, self.1 / 256.0);
            let mut term = Dd::from(1.0);
            let mut sum = Dd::from(1.0);
            for k in 1..40 {
                term = term.mul(r).div_f64(k as f64);
                sum = sum.add(term);
            }
            (0..8).fold(sum, |acc, _| acc.mul(acc))
        }

        pub fn to_f64(self) -> f64 {
            self.0 + self.1
        }
    }
}

/// Extended-precision (1 − e^{Σp^k − 1})/(k − 1) for integer order k.
fn exp_thc_oracle(p: &[f64], k: u32) -> f64 {
    use dd::Dd;
    let s = p
        .iter()
        .fold(Dd::from(0.0), |acc, &x| acc.add(Dd::from(x).powi(k)));
    let e = s.add(Dd::from(-1.0)).exp();
    Dd::from(1.0).add(e.neg()).div_f64(k as f64 - 1.0).to_f64()
}

fn golden_values() -> Outcome {
    // Reference values computed to 40 digits with mpmath.
    const COIN: f64 = 0.3934693402873666;
    const SKEWED: f64 = 0.3127107212090278;
    let cases = [(vec![0.5, 0.5], COIN), (vec![0.75, 0.25], SKEWED)];
    let mut worst = 0.0f64;
    for (p, frozen) in &cases {
        let oracle = exp_thc_oracle(p, 2);
        ensure((oracle - frozen).abs() < 1e-15, || {
            format!("oracle {oracle} disagrees with frozen {frozen}")
        })?;
        let got = exp_thc_entropy(&dist(p), alpha(2.0));
        worst = worst.max((got - oracle).abs());
        ensure((got - oracle).abs() <= 1e-12, || {
            format!("{p:?}: {got} vs oracle {oracle}")
        })?;
    }
    for a in [2.0, 3.0, 0.5] {
        let hc = thc_entropy(&dist(&[0.5, 0.5]), alpha(a), Normalization::HavrdaCharvat).unwrap();
        worst = worst.max((hc - 1.0).abs());
        ensure((hc - 1.0).abs() <= 1e-12, || {
            format!("HC normalization at α={a}: {hc}")
        })?;
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn uniform_reduces_to_n() -> Outcome {
    let kinds = [
        ExpKind::Shannon,
        ExpKind::Renyi(alpha(0.5)),
        ExpKind::Renyi(alpha(2.0)),
        ExpKind::Renyi(alpha(3.7)),
        ExpKind::Kapur(alpha(0.5), alpha(2.0)),
        ExpKind::Kapur(alpha(3.0), alpha(1.5)),
    ];
    let mut worst = 0.0f64;
    for n in 2..=16 {
        let u = Distribution::uniform(n).unwrap();
        for kind in kinds {
            let v = exp_entropy(&u, kind).unwrap();
            worst = worst.max((v - n as f64).abs());
            ensure((v - n as f64).abs() <= 1e-9, || {
                format!("n={n}, {kind:?}: {v}")
            })?;
        }
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn run_verify(args: &[&str], report: &Path) -> Result<(i32, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_expent"))
        .arg("verify")
        .args(args)
        .arg("--report")
        .arg(report)
        .output()
        .map_err(|e| format!("cannot launch binary: {e}"))?;
    let code = out.status.code().unwrap_or(-1);
    let text =
        std::fs::read_to_string(report).map_err(|e| format!("no report (exit {code}): {e}"))?;
    let json = serde_json::from_str(&text).map_err(|e| format!("bad report JSON: {e}"))?;
    Ok((code, json))
}

/// Runs one suite through the binary and demands zero violations of `required`.
fn suite_criterion(args: &[&str], required: &[&str], alphas_needed: &[f64]) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (code, json) = run_verify(args, &dir.path().join("report.json"))?;
    let report = &json["reports"][0];
    let props = report["properties"]
        .as_array()
        .ok_or("report has no properties")?;
    let mut checks = 0;
    for name in required {
        let p = props
            .iter()
            .find(|p| p["name"] == *name)
            .ok_or_else(|| format!("property {name} missing"))?;
        let v = p["violations"].as_u64().unwrap_or(u64::MAX);
        ensure(v == 0, || {
            format!("{name}: {v} violations, worst margin {}", p["worst_margin"])
        })?;
        let n = p["checks"].as_u64().unwrap_or(0);
        ensure(n > 0, || format!("{name} was never evaluated"))?;
        checks += n;
    }
    let alphas: Vec<f64> = report["alphas"]
        .as_array()
        .into_iter()
        .flatten()
        .filter_map(Value::as_f64)
        .collect();
    for a in alphas_needed {
        ensure(alphas.contains(a), || {
            format!("α={a} not in the grid {alphas:?}")
        })?;
    }
    ensure(code == 0, || format!("exit code {code}"))?;
    Ok(format!("{checks} checks, 0 violations"))
}

fn classical_suite() -> Outcome {
    suite_criterion(
        &[
            "--suite",
            "classical",
            "--seed",
            "42",
            "--trials",
            "1000",
            "--dims",
            "2..8",
            "--alphas",
            "0.25,0.5,0.9,1.1,1.5,2,5",
        ],
        &[
            "symmetry",
            "non_negativity",
            "expansibility",
            "decisivity",
            "maximality",
            "concavity",
        ],
        &[0.25, 0.5, 0.9, 1.1, 1.5, 2.0, 5.0],
    )
}

fn quantum_suite() -> Outcome {
    suite_criterion(
        &[
            "--suite", "quantum", "--seed", "7", "--trials", "500", "--dims", "2..6",
        ],
        &[
            "non_negativity",
            "zero_iff_pure",
            "rank_bound",
            "rank_bound_equality",
            "concavity",
            "trace_minkowski",
            "von_neumann_limit",
        ],
        &[0.5, 2.0],
    )
}

fn measurement_suite() -> Outcome {
    suite_criterion(
        &[
            "--suite",
            "measurement",
            "--seed",
            "3",
            "--trials",
            "500",
            "--dims",
            "2..6",
        ],
        &["monotonicity", "commuting_equality"],
        &[],
    )
}

fn ensemble_suite() -> Outcome {
    suite_criterion(
        &[
            "--suite", "ensemble", "--seed", "11", "--trials", "500", "--dims", "2..6",
        ],
        &["ensemble_bound", "majorization", "identity_equality"],
        &[1.5, 2.0, 3.0, 5.0],
    )
}

/// Characteristic polynomial det(λI − m) of a 2×2 or 3×3 Hermitian matrix,
/// evaluated at `x`.
fn charpoly_at(m: &ComplexMatrix, x: f64) -> f64 {
    let a = |i: usize, j: usize| m[(i, j)];
    let minor = |i: usize, j: usize| (a(i, i) * a(j, j) - a(i, j) * a(j, i)).re;
    match m.dim() {
        2 => x * x - (a(0, 0) + a(1, 1)).re * x + minor(0, 1),
        3 => {
            let tr = (a(0, 0) + a(1, 1) + a(2, 2)).re;
            let c1 = minor(0, 1) + minor(0, 2) + minor(1, 2);
            let det = (a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)))
            .re;
            ((x - tr) * x + c1) * x - det
        }
        n => panic!("no closed form for dimension {n}"),
    }
}

/// Eigenvalues of a 2×2 or 3×3 Hermitian matrix as closed-form roots of its
/// characteristic polynomial, sorted descending. Repeated roots are only
/// resolved to about the square root of machine precision.
fn charpoly_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let a = |i: usize, j: usize| m[(i, j)];
    let mut ev = match m.dim() {
        2 => {
            let (p, q) = (a(0, 0).re, a(1, 1).re);
            let r = (((p - q) / 2.0).powi(2) + a(0, 1).norm_sqr()).sqrt();
            vec![(p + q) / 2.0 + r, (p + q) / 2.0 - r]
        }
        3 => {
            let q = (a(0, 0).re + a(1, 1).re + a(2, 2).re) / 3.0;
            let off = a(0, 1).norm_sqr() + a(0, 2).norm_sqr() + a(1, 2).norm_sqr();
            let diag: f64 = (0..3).map(|i| (a(i, i).re - q).powi(2)).sum();
            let p = ((diag + 2.0 * off) / 6.0).sqrt();
            if p == 0.0 {
                return vec![q; 3];
            }
            let b = |i: usize, j: usize| {
                let shift = if i == j {
                    Complex64::new(q, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (a(i, j) - shift) / p
            };
            let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
                - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
                + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
            let phi = (det.re / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
            let e1 = q + 2.0 * p * phi.cos();
            let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
            vec![e1, 3.0 * q - e1 - e3, e3]
        }
        n => panic!("no closed form for dimension {n}"),
    };
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let alphas = [0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0, 5.0];
    let (mut worst_entropy, mut worst_spectrum, mut worst_residual, mut oracle_checked) =
        (0.0f64, 0.0f64, 0.0f64, 0);
    for i in 0..200 {
        let n = rng.gen_range(2..=6);
        let method = DensityMethod::ALL[i % DensityMethod::ALL.len()];
        let rho =
            DensityOperator::new(sample_density(n, &mut rng, method)).map_err(|e| e.to_string())?;
        let raw = hermitian_eig(rho.matrix()).map_err(|e| e.to_string())?;
        if n <= 3 {
            let residual = raw
                .eigenvalues
                .iter()
                .map(|&x| charpoly_at(rho.matrix(), x).abs())
                .fold(0.0, f64::max);
            worst_residual = worst_residual.max(residual);
            ensure(residual <= 1e-12, || {
                format!("state {i}: char poly residual {residual:.1e}")
            })?;
            let cp = charpoly_eigenvalues(rho.matrix());
            let dev = cp
                .iter()
                .zip(&raw.eigenvalues)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst_spectrum = worst_spectrum.max(dev);
            ensure(dev <= 1e-7, || {
                format!(
                    "state {i}: spectrum {:?} vs char poly {cp:?}",
                    raw.eigenvalues
                )
            })?;
            oracle_checked += 1;
        }
        let spectrum =
            Distribution::renormalized(rho.eigenvalues().to_vec()).map_err(|e| e.to_string())?;
        for a in alphas {
            let q = exp_qthc(&rho, alpha(a));
            let c = exp_thc_entropy(&spectrum, alpha(a));
            worst_entropy = worst_entropy.max((q - c).abs());
            ensure((q - c).abs() <= 1e-10, || {
                format!("state {i}, α={a}: {q} vs {c}")
            })?;
        }
    }
    Ok(format!(
        "entropy gap {worst_entropy:.1e}; {oracle_checked} small states: char-poly residual {worst_residual:.1e}, root gap {worst_spectrum:.1e}"
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let args = ["--suite", "all", "--seed", "42", "--trials", "200"];
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let (code_a, _) = run_verify(&args, &a)?;
    let (code_b, _) = run_verify(&args, &b)?;
    let bytes_a = std::fs::read(&a).map_err(|e| e.to_string())?;
    let bytes_b = std::fs::read(&b).map_err(|e| e.to_string())?;
    ensure(bytes_a == bytes_b, || "reports differ".into())?;
    ensure(code_a == 0 && code_b == 0, || {
        format!("exit codes {code_a}, {code_b}")
    })?;
    Ok(format!("{} identical bytes", bytes_a.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden values", Duration::from_secs(1), golden_values),
        (
            "uniform reduces to n",
            Duration::from_secs(1),
            uniform_reduces_to_n,
        ),
        ("classical suite", Duration::from_secs(10), classical_suite),
        ("quantum suite", Duration::from_secs(30), quantum_suite),
        (
            "measurement suite",
            Duration::from_secs(30),
            measurement_suite,
        ),
        ("ensemble suite", Duration::from_secs(30), ensemble_suite),
        (
            "oracle equivalence",
            Duration::from_secs(10),
            oracle_equivalence,
        ),
        ("determinism", Duration::from_secs(60), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > *budget {
            outcome = Err(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {}. {name}: {detail} ({elapsed:.2?})", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
