use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{vec_norm, ComplexMatrix, C_ONE, C_ZERO};

/// How [`sample_density`] draws a random state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    /// GG†/tr(GG†) for a complex Ginibre matrix G (Hilbert-Schmidt measure).
    Ginibre,
    /// U diag(p) U† with p uniform on the simplex and U Haar.
    DiagMixture,
    /// |ψ⟩⟨ψ| for a Haar-random unit vector.
    Pure,
}

impl DensityMethod {
    pub const ALL: [DensityMethod; 3] = [Self::Ginibre, Self::DiagMixture, Self::Pure];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ginibre => "ginibre",
            Self::DiagMixture => "diag_mixture",
            Self::Pure => "pure",
        }
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// n×n matrix of i.i.d. standard complex Gaussians (E|z|² = 1).
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

/// Haar-random unit vector in Cⁿ.
pub fn sample_pure_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Householder QR. Returns Q and the diagonal of R.
fn householder_qr(m: &ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let n = m.dim();
    let mut a = m.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut r_diag = vec![C_ZERO; n];

    for k in 0..n {
        let x: Vec<Complex64> = (k..n).map(|i| a[(i, k)]).collect();
        let norm = vec_norm(&x);
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0] == C_ZERO {
            C_ONE
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vn = vec_norm(&v);
        r_diag[k] = alpha;
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);

        for j in k..n {
            let w: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * a[(k + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                a[(k + i, j)] -= vi * w * 2.0;
            }
        }
        for row in 0..n {
            let w: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| q[(row, k + i)] * vi)
                .sum();
            for (i, vi) in v.iter().enumerate() {
                q[(row, k + i)] -= w * vi.conj() * 2.0;
            }
        }
    }
    (q, r_diag)
}

/// Haar-distributed n×n unitary: QR of a Ginibre matrix with Q's columns
/// rescaled by the phases of R's diagonal.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    let g = complex_gaussian_matrix(n, rng);
    let (q, r_diag) = householder_qr(&g);
    let phases: Vec<Complex64> = r_diag
        .iter()
        .map(|&r| if r == C_ZERO { C_ONE } else { r / r.norm() })
        .collect();
    ComplexMatrix::from_fn(n, |i, j| q[(i, j)] * phases[j])
}

/// Random density matrix. The result is exactly Hermitian with unit trace
/// up to rounding; `n = 1` always yields `[[1]]`.
pub fn sample_density<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    method: DensityMethod,
) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    if n == 1 {
        return ComplexMatrix::identity(1);
    }
    let raw = match method {
        DensityMethod::Ginibre => {
            let g = complex_gaussian_matrix(n, rng);
            &g * &g.adjoint()
        }
        DensityMethod::DiagMixture => {
            let p = sample_simplex(n, rng);
            let u = sample_haar_unitary(n, rng);
            ComplexMatrix::from_real_diagonal(&p).conjugate_by(&u)
        }
        DensityMethod::Pure => ComplexMatrix::outer(&sample_pure_vector(n, rng)),
    };
    let h = raw.hermitian_part();
    let tr = h.trace().re;
    let mut rho = h.scale(1.0 / tr);
    for i in 0..n {
        rho[(i, i)].im = 0.0;
    }
    rho
}

/// Uniform point on the probability simplex (normalized exponential variates).
pub(crate) fn sample_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = e.iter().sum();
        if total > 0.0 {
            return e.into_iter().map(|x| x / total).collect();
        }
    }
}
