//! Entropies of density operators, computed through the eigenvalue spectrum.

use num_complex::Complex64;

use crate::classical::{
    exp_thc_from_power_sum, exp_thc_of_slice, shannon_of, Alpha, ALPHA_ONE_BAND,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, vec_norm, ComplexMatrix, Spectrum, STRUCTURE_TOL};

/// A validated density matrix together with its spectrum.
///
/// Immutable after construction; every measure reads the cached spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    spectrum: Spectrum,
    probs: Vec<f64>,
}

/// Checks the three density-operator axioms: Hermitian, unit trace, positive
/// semi-definite, each to within 1e-9.
pub fn validate_density(m: ComplexMatrix) -> Result<DensityOperator> {
    let defect = m.hermiticity_defect();
    if defect > STRUCTURE_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let tr = m.trace().re;
    if (tr - 1.0).abs() > STRUCTURE_TOL {
        return Err(Error::TraceNotOne(tr));
    }
    let spectrum = hermitian_eig(&m)?;
    let min = spectrum.min_eigenvalue();
    if min < -STRUCTURE_TOL {
        return Err(Error::NotPositive(min));
    }
    let probs = spectrum.nonnegative_eigenvalues()?;
    Ok(DensityOperator {
        matrix: m,
        spectrum,
        probs,
    })
}

impl DensityOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        validate_density(m)
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        validate_density(ComplexMatrix::from_real_diagonal(probs))
    }

    /// |ψ⟩⟨ψ| for a unit vector ψ.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = vec_norm(psi);
        if (norm - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::TraceNotOne(norm * norm));
        }
        validate_density(ComplexMatrix::outer(psi))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0 / n as f64; n]).expect("I/n is a density operator")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues, descending, with PSD slack and numerical zeros set to 0.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.probs
    }

    /// tr(ρ²), computed from the matrix entries.
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// λρ + (1 − λ)σ.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let m = &self.matrix.scale(lambda) + &other.matrix.scale(1.0 - lambda);
        validate_density(m)
    }

    /// UρU†.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), u.dim()));
        }
        validate_density(self.matrix.conjugate_by(u).hermitian_part())
    }
}

/// −tr(ρ ln ρ) in nats.
pub fn von_neumann(rho: &DensityOperator) -> f64 {
    shannon_of(rho.eigenvalues())
}

/// (1 − e^{tr(ρ^α) − 1})/(α − 1); von Neumann entropy at α = 1.
pub fn exp_qthc(rho: &DensityOperator, alpha: Alpha) -> f64 {
    exp_thc_of_slice(rho.eigenvalues(), alpha)
}

/// Number of eigenvalues above `1e-10 · max(1, λ_max)`.
pub fn rank(rho: &DensityOperator) -> usize {
    rho.spectrum.numerical_rank()
}

/// Upper bound on [`exp_qthc`] for a state of rank `r`, attained by the
/// equidistribution over an `r`-dimensional support.
pub fn exp_qthc_bound(r: usize, alpha: Alpha) -> f64 {
    assert!(r >= 1, "rank must be positive");
    let a = alpha.value();
    if (a - 1.0).abs() < ALPHA_ONE_BAND {
        (r as f64).ln()
    } else {
        exp_thc_from_power_sum((r as f64).powf(1.0 - a), a)
    }
}
