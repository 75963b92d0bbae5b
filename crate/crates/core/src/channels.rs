//! Projective measurements with unrecorded outcomes, and pure-state ensembles
//! that realize a given density operator.

use num_complex::Complex64;

use crate::classical::{Distribution, SIMPLEX_TOL};
use crate::error::{Error, Result};
use crate::linalg::{gram_defect, vec_norm, ComplexMatrix, STRUCTURE_TOL};
use crate::quantum::{validate_density, DensityOperator};

/// Ensemble members lighter than this are dropped.
pub const MIN_ENSEMBLE_WEIGHT: f64 = 1e-14;

/// A complete set of mutually orthogonal projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSet {
    dim: usize,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectorSet {
    /// Validates idempotence, mutual orthogonality and completeness, each to
    /// within 1e-9 entrywise. Projectors may have any rank.
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = projectors
            .first()
            .map(ComplexMatrix::dim)
            .ok_or_else(|| Error::InvalidProjectors("empty set".into()))?;
        if let Some(p) = projectors.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
        let zero = ComplexMatrix::zeros(dim);
        let mut total = ComplexMatrix::zeros(dim);
        for (i, p) in projectors.iter().enumerate() {
            let herm = p.hermiticity_defect();
            if herm > STRUCTURE_TOL {
                return Err(Error::InvalidProjectors(format!(
                    "P{i} not Hermitian ({herm:e})"
                )));
            }
            let idem = (p * p).max_abs_diff(p);
            if idem > STRUCTURE_TOL {
                return Err(Error::InvalidProjectors(format!(
                    "P{i} not idempotent ({idem:e})"
                )));
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                let overlap = (p * q).max_abs_diff(&zero);
                if overlap > STRUCTURE_TOL {
                    return Err(Error::InvalidProjectors(format!(
                        "P{i} P{j} != 0 ({overlap:e})"
                    )));
                }
            }
            total = &total + p;
        }
        let gap = total.max_abs_diff(&ComplexMatrix::identity(dim));
        if gap > STRUCTURE_TOL {
            return Err(Error::InvalidProjectors(format!(
                "projectors do not sum to I ({gap:e})"
            )));
        }
        Ok(Self { dim, projectors })
    }

    /// Rank-one projectors |v_i⟩⟨v_i| onto an orthonormal basis.
    pub fn from_basis(vectors: &[Vec<Complex64>]) -> Result<Self> {
        let n = vectors.len();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(n, v.len()));
        }
        let defect = gram_defect(vectors);
        if defect > STRUCTURE_TOL {
            return Err(Error::NotOrthonormal(defect));
        }
        Self::new(vectors.iter().map(|v| ComplexMatrix::outer(v)).collect())
    }

    /// Rank-one projectors onto the columns of a unitary.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::from_basis(&u.columns())
    }

    /// Groups consecutive basis vectors into blocks of the given sizes, one
    /// projector per block.
    pub fn from_blocks(vectors: &[Vec<Complex64>], sizes: &[usize]) -> Result<Self> {
        if sizes.iter().sum::<usize>() != vectors.len() || sizes.contains(&0) {
            return Err(Error::InvalidProjectors(format!(
                "block sizes {sizes:?} do not partition {} vectors",
                vectors.len()
            )));
        }
        let defect = gram_defect(vectors);
        if defect > STRUCTURE_TOL {
            return Err(Error::NotOrthonormal(defect));
        }
        let n = vectors.len();
        let mut start = 0;
        let mut projectors = Vec::with_capacity(sizes.len());
        for &size in sizes {
            let mut p = ComplexMatrix::zeros(n);
            for v in &vectors[start..start + size] {
                p = &p + &ComplexMatrix::outer(v);
            }
            projectors.push(p);
            start += size;
        }
        Self::new(projectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn is_rank_one(&self) -> bool {
        self.projectors.len() == self.dim
    }
}

/// ρ ↦ Σ_i P_i ρ P_i.
pub fn projective_measure(rho: &DensityOperator, p: &ProjectorSet) -> Result<DensityOperator> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), p.dim()));
    }
    let mut out = ComplexMatrix::zeros(rho.dim());
    for proj in p.projectors() {
        out = &out + &(&(proj * rho.matrix()) * proj);
    }
    validate_density(out.hermitian_part())
}

/// Weighted pure states {p_i, |ψ_i⟩}.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<Vec<Complex64>>,
}

impl Ensemble {
    /// Weights must be nonnegative and sum to one within 1e-9; states must be
    /// unit vectors of a common dimension. A single member is allowed.
    pub fn new(weights: Vec<f64>, states: Vec<Vec<Complex64>>) -> Result<Self> {
        if weights.is_empty() || weights.len() != states.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidEnsemble(format!("bad weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        let dim = states[0].len();
        for (i, s) in states.iter().enumerate() {
            if s.len() != dim {
                return Err(Error::DimensionMismatch(dim, s.len()));
            }
            let norm = vec_norm(s);
            if (norm - 1.0).abs() > STRUCTURE_TOL {
                return Err(Error::InvalidEnsemble(format!("state {i} has norm {norm}")));
            }
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[Vec<Complex64>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    /// The weights as a distribution over `n` outcomes, zero-padded. Padding
    /// with impossible outcomes leaves every entropy in this crate unchanged.
    pub fn weight_distribution(&self, n: usize) -> Result<Distribution> {
        if n < self.len() {
            return Err(Error::DimensionMismatch(n, self.len()));
        }
        let mut p = self.weights.clone();
        p.resize(n, 0.0);
        Distribution::new(p)
    }
}

/// w_ij = |u_ij|².
pub fn unistochastic(u: &ComplexMatrix) -> Vec<Vec<f64>> {
    let n = u.dim();
    (0..n)
        .map(|i| (0..n).map(|j| u[(i, j)].norm_sqr()).collect())
        .collect()
}

/// Ensemble obtained by mixing the spectral ensemble of `rho` with a unitary:
/// √p_i |ψ_i⟩ = Σ_j u_ij √λ_j |φ_j⟩, so p_i = Σ_j |u_ij|² λ_j.
pub fn ensemble_from_unitary(rho: &DensityOperator, u: &ComplexMatrix) -> Result<Ensemble> {
    let n = rho.dim();
    if u.dim() != n {
        return Err(Error::DimensionMismatch(n, u.dim()));
    }
    let defect = u.unitarity_defect();
    if defect > STRUCTURE_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let lambdas = rho.eigenvalues();
    let phis: Vec<Vec<Complex64>> = (0..n).map(|j| rho.spectrum().eigenvector(j)).collect();

    let mut weights = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for i in 0..n {
        let p: f64 = (0..n).map(|j| u[(i, j)].norm_sqr() * lambdas[j]).sum();
        if p < MIN_ENSEMBLE_WEIGHT {
            continue;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (j, phi) in phis.iter().enumerate() {
            let coeff = u[(i, j)] * lambdas[j].sqrt();
            for (vk, pk) in v.iter_mut().zip(phi) {
                *vk += coeff * pk;
            }
        }
        let norm = vec_norm(&v);
        weights.push(p);
        states.push(v.into_iter().map(|z| z / norm).collect());
    }
    Ensemble::new(weights, states)
}

/// Σ p_i |ψ_i⟩⟨ψ_i|.
pub fn mix_ensemble(e: &Ensemble) -> Result<DensityOperator> {
    let mut m = ComplexMatrix::zeros(e.dim());
    for (w, s) in e.weights.iter().zip(&e.states) {
        m = &m + &ComplexMatrix::outer(s).scale(*w);
    }
    validate_density(m.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sample_density, sample_haar_unitary, DensityMethod};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn computational(n: usize) -> Vec<Vec<Complex64>> {
        ComplexMatrix::identity(n).columns()
    }

    fn hadamard_basis() -> Vec<Vec<Complex64>> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]
    }

    fn hadamard() -> ComplexMatrix {
        ComplexMatrix::from_columns(&hadamard_basis()).unwrap()
    }

    #[test]
    fn computational_projectors() {
        let p = ProjectorSet::from_basis(&computational(2)).unwrap();
        assert_eq!(
            p.projectors()[0],
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
        );
        assert_eq!(
            p.projectors()[1],
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0])
        );
        assert!(p.is_rank_one());
    }

    #[test]
    fn hadamard_projectors_sum_to_identity() {
        let p = ProjectorSet::from_basis(&hadamard_basis()).unwrap();
        let total = &p.projectors()[0] + &p.projectors()[1];
        assert!(total.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn haar_columns_give_projectors() {
        let u = sample_haar_unitary(4, &mut ChaCha8Rng::seed_from_u64(4));
        let p = ProjectorSet::from_unitary(&u).unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let v = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ];
        assert!(matches!(
            ProjectorSet::from_basis(&v),
            Err(Error::NotOrthonormal(_))
        ));
        let incomplete = vec![ComplexMatrix::from_real_diagonal(&[1.0, 0.0])];
        assert!(matches!(
            ProjectorSet::new(incomplete),
            Err(Error::InvalidProjectors(_))
        ));
    }

    #[test]
    fn block_projectors() {
        let p = ProjectorSet::from_blocks(&computational(3), &[2, 1]).unwrap();
        assert_eq!(
            p.projectors()[0],
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.0])
        );
        assert!(!p.is_rank_one());
        assert!(ProjectorSet::from_blocks(&computational(3), &[2, 2]).is_err());
    }

    #[test]
    fn pinching_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::pure(&[c(s, 0.0), c(s, 0.0)]).unwrap();
        let z = ProjectorSet::from_basis(&computational(2)).unwrap();
        let out = projective_measure(&plus, &z).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5]))
                < 1e-15
        );

        let diag = DensityOperator::from_diagonal(&[0.75, 0.25]).unwrap();
        assert_eq!(
            projective_measure(&diag, &z).unwrap().matrix(),
            diag.matrix()
        );

        let x = ProjectorSet::from_basis(&hadamard_basis()).unwrap();
        let out = projective_measure(&diag, &x).unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5]))
                < 1e-15
        );

        assert!(matches!(
            projective_measure(&DensityOperator::maximally_mixed(3), &z),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn pinching_is_idempotent_and_diagonal_in_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho =
            DensityOperator::new(sample_density(4, &mut rng, DensityMethod::Ginibre)).unwrap();
        let u = sample_haar_unitary(4, &mut rng);
        let p = ProjectorSet::from_unitary(&u).unwrap();
        let once = projective_measure(&rho, &p).unwrap();
        let twice = projective_measure(&once, &p).unwrap();
        assert!(once.matrix().max_abs_diff(twice.matrix()) < 1e-10);
        assert!((once.matrix().trace().re - 1.0).abs() < 1e-10);
        // ⟨i|ρ'|i⟩ = ⟨i|ρ|i⟩ and ⟨i|ρ'|j⟩ = 0 for the measurement basis
        let in_basis = &(&u.adjoint() * once.matrix()) * &u;
        let orig = &(&u.adjoint() * rho.matrix()) * &u;
        for i in 0..4 {
            assert!((in_basis[(i, i)] - orig[(i, i)]).norm() < 1e-12);
            for j in 0..4 {
                if i != j {
                    assert!(in_basis[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn identity_unitary_gives_spectral_ensemble() {
        let rho = DensityOperator::from_diagonal(&[0.25, 0.75]).unwrap();
        let e = ensemble_from_unitary(&rho, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.weights(), rho.eigenvalues());
    }

    #[test]
    fn hadamard_mixing_weights() {
        let rho = DensityOperator::from_diagonal(&[0.75, 0.25]).unwrap();
        let e = ensemble_from_unitary(&rho, &hadamard()).unwrap();
        assert!((e.weights()[0] - 0.5).abs() < 1e-15);
        assert!((e.weights()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_gives_uniform_weights() {
        let rho = DensityOperator::maximally_mixed(2);
        let u = sample_haar_unitary(2, &mut ChaCha8Rng::seed_from_u64(2));
        let e = ensemble_from_unitary(&rho, &u).unwrap();
        for w in e.weights() {
            assert!((w - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_weights_are_dropped() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::pure(&[c(s, 0.0), c(s, 0.0)]).unwrap();
        let e = ensemble_from_unitary(&plus, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.len(), 1);
        let d = e.weight_distribution(2).unwrap();
        assert!((d.probs()[0] - 1.0).abs() < 1e-15);
        assert_eq!(d.probs()[1], 0.0);
    }

    #[test]
    fn rejects_non_unitary() {
        let rho = DensityOperator::maximally_mixed(2);
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        assert!(matches!(
            ensemble_from_unitary(&rho, &m),
            Err(Error::NotUnitary(_))
        ));
        assert!(matches!(
            ensemble_from_unitary(&rho, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn mix_examples() {
        let e = Ensemble::new(vec![1.0], vec![vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let rho = mix_ensemble(&e).unwrap();
        assert_eq!(
            rho.matrix(),
            &ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
        );

        let e = Ensemble::new(vec![0.5, 0.5], computational(2)).unwrap();
        assert_eq!(
            mix_ensemble(&e).unwrap().matrix(),
            &ComplexMatrix::from_real_diagonal(&[0.5, 0.5])
        );
    }

    #[test]
    fn ensemble_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for method in DensityMethod::ALL {
            for n in 2..=6 {
                let rho = DensityOperator::new(sample_density(n, &mut rng, method)).unwrap();
                let u = sample_haar_unitary(n, &mut rng);
                let e = ensemble_from_unitary(&rho, &u).unwrap();
                let back = mix_ensemble(&e).unwrap();
                assert!((back.matrix() - rho.matrix()).frobenius_norm() < 1e-8);
            }
        }
    }

    #[test]
    fn unistochastic_rows_and_columns() {
        let u = sample_haar_unitary(5, &mut ChaCha8Rng::seed_from_u64(17));
        let w = unistochastic(&u);
        for i in 0..5 {
            assert!((w[i].iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!((w.iter().map(|row| row[i]).sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn ensemble_validation() {
        assert!(Ensemble::new(vec![], vec![]).is_err());
        assert!(Ensemble::new(vec![0.5, 0.4], computational(2)).is_err());
        assert!(Ensemble::new(vec![1.0], vec![vec![c(2.0, 0.0)]]).is_err());
    }
}
