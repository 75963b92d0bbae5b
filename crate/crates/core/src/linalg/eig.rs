use num_complex::Complex64;

use super::{ComplexMatrix, DEFAULT_DIM_CAP, STRUCTURE_TOL};
use crate::error::{Error, Result};

/// Relative threshold below which an eigenvalue counts as numerically zero.
pub const ZERO_EIGENVALUE_REL_TOL: f64 = 1e-10;

/// Knobs for the Jacobi eigensolver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigConfig {
    pub max_sweeps: usize,
    /// Convergence once off-diagonal Frobenius norm < `rel_tol * max(1, ‖m‖_F)`.
    pub rel_tol: f64,
    pub dim_cap: usize,
}

impl Default for EigConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 100,
            rel_tol: 1e-12,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

/// Eigenvalues (descending) and the matching orthonormal eigenvectors, stored
/// as the columns of `eigenvectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// V diag(λ) V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }

    /// Scale-aware cut-off for numerically-zero eigenvalues:
    /// `1e-10 · max(1, λ_max)`.
    pub fn zero_floor(&self) -> f64 {
        ZERO_EIGENVALUE_REL_TOL * self.max_eigenvalue().max(1.0)
    }

    /// Eigenvalues with the PSD slack removed. Values in `[-1e-9, 0)` and
    /// values at or below [`Spectrum::zero_floor`] become exactly zero.
    pub fn nonnegative_eigenvalues(&self) -> Result<Vec<f64>> {
        let floor = self.zero_floor();
        self.eigenvalues
            .iter()
            .map(|&l| {
                if l < -STRUCTURE_TOL {
                    Err(Error::NegativeEigenvalue(l))
                } else if l <= floor {
                    Ok(0.0)
                } else {
                    Ok(l)
                }
            })
            .collect()
    }

    /// Number of eigenvalues above [`Spectrum::zero_floor`].
    pub fn numerical_rank(&self) -> usize {
        let floor = self.zero_floor();
        self.eigenvalues.iter().filter(|&&l| l > floor).count()
    }
}

/// Eigendecomposition of a Hermitian matrix with the default configuration.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    hermitian_eig_with(m, &EigConfig::default())
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq`, turning the
/// 2x2 block real symmetric, then applies the classic real Jacobi rotation.
/// The combined unitary is
///
/// ```text
/// J = [ c          s        ]
///     [ -s e^{-iφ}  c e^{-iφ} ]
/// ```
///
/// and the iteration updates `A ← J† A J`, `V ← V J`.
pub fn hermitian_eig_with(m: &ComplexMatrix, cfg: &EigConfig) -> Result<Spectrum> {
    let n = m.dim();
    if n > cfg.dim_cap {
        return Err(Error::DimensionTooLarge {
            dim: n,
            cap: cfg.dim_cap,
        });
    }
    let defect = m.hermiticity_defect();
    if defect > STRUCTURE_TOL {
        return Err(Error::NotHermitian(defect));
    }

    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = cfg.rel_tol * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off < threshold {
            break;
        }
        if sweeps == cfg.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase_conj = (apq / g).conj();

    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = phase_conj * (-s);
    let j_qq = phase_conj * c;

    let n = a.dim();
    // columns: A ← A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // rows: A ← J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, p)] = Complex64::new(app - t * g, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g, 0.0);
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Σ_j λ_j^α over the spectrum, with `0^α = 0`.
///
/// Eigenvalues in `[-1e-9, 0)` and numerically-zero eigenvalues (see
/// [`Spectrum::zero_floor`]) contribute nothing.
pub fn trace_power(s: &Spectrum, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(s.nonnegative_eigenvalues()?
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| l.powf(alpha))
        .sum())
}
