use nalgebra::SymmetricEigen;

use super::operator::{real, CMatrix, CVector, HermitianOperator, StateVector, C64, I};
use crate::error::{Error, Result};
use crate::measure::{Atom, CharacteristicFunctionTrace, SpectralMeasure};

/// Relative factor of the default merge tolerance `1e-8 * max(1, ||H||)`.
pub const MERGE_RTOL: f64 = 1e-8;

/// Eigenvalues (distinct, ascending) with their eigenprojections.
///
/// Each projection is stored as an orthonormal block of eigenvectors `V_k` and
/// materialized on request as `V_k V_k^dagger`. The blocks are the columns of one
/// unitary matrix, which keeps functional calculus at a single `O(n^3)` product.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    vectors: CMatrix,
    offsets: Vec<usize>,
    merge_tol: f64,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Orthonormal basis of the k-th eigenspace, one column per vector.
    pub fn eigenvectors(&self, k: usize) -> CMatrix {
        let start = self.offsets[k];
        self.vectors.columns(start, self.offsets[k + 1] - start).into_owned()
    }

    pub fn projection(&self, k: usize) -> CMatrix {
        let v = self.eigenvectors(k);
        &v * v.adjoint()
    }

    pub fn projections(&self) -> Vec<CMatrix> {
        (0..self.len()).map(|k| self.projection(k)).collect()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
    }

    /// `f(H) = Σ f(λ_k) E_k`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for k in 0..self.len() {
            let fk = f(self.eigenvalues[k]);
            for col in self.offsets[k]..self.offsets[k + 1] {
                scaled.column_mut(col).iter_mut().for_each(|z| *z *= fk);
            }
        }
        &scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(real)
    }

    /// `e^{itH}`.
    pub fn exp_it(&self, t: f64) -> CMatrix {
        self.map(|l| (I * t * l).exp())
    }

    /// `<u, E_k u>` for every eigenvalue.
    pub fn weights(&self, u: &StateVector) -> Result<Vec<f64>> {
        u.check_dim(self.dim())?;
        let coords: CVector = self.vectors.adjoint() * u.amplitudes();
        Ok((0..self.len())
            .map(|k| {
                (self.offsets[k]..self.offsets[k + 1])
                    .map(|j| coords[j].norm_sqr())
                    .sum()
            })
            .collect())
    }

    pub fn measure(&self, u: &StateVector) -> Result<SpectralMeasure> {
        let weights = self.weights(u)?;
        let atoms = self
            .eigenvalues
            .iter()
            .zip(weights)
            .map(|(&location, weight)| Atom { location, weight })
            .collect();
        Ok(SpectralMeasure::from_atoms(atoms, "exact"))
    }
}

/// Eigendecomposition with the default merge tolerance `1e-8 * max(1, ||H||)`.
pub fn decompose(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    decompose_inner(h, None)
}

/// Eigendecomposition merging eigenvalues closer than `merge_tol`.
pub fn decompose_with_tol(h: &HermitianOperator, merge_tol: f64) -> Result<SpectralDecomposition> {
    if !(merge_tol >= 0.0 && merge_tol.is_finite()) {
        return Err(Error::Invalid(format!("merge tolerance {merge_tol} must be finite and >= 0")));
    }
    decompose_inner(h, Some(merge_tol))
}

fn decompose_inner(h: &HermitianOperator, merge_tol: Option<f64>) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let max_iter = 100 * n + 1000;
    let eig = SymmetricEigen::try_new(h.entries().clone(), f64::EPSILON, max_iter).ok_or_else(|| {
        Error::Numerical(format!(
            "Hermitian eigensolver did not converge within {max_iter} sweeps (dim {n}, ||H||_F = {:e})",
            h.frobenius_norm()
        ))
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let raw: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if raw.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numerical("eigensolver returned non-finite eigenvalues".into()));
    }
    let norm = raw.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let tol = merge_tol.unwrap_or(MERGE_RTOL * norm.max(1.0));

    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);

    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut offsets = vec![0];
    let mut start = 0;
    for j in 1..=n {
        if j == n || raw[j] - raw[j - 1] > tol {
            let group = &raw[start..j];
            eigenvalues.push(group.iter().sum::<f64>() / group.len() as f64);
            multiplicities.push(j - start);
            offsets.push(j);
            start = j;
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        multiplicities,
        vectors,
        offsets,
        merge_tol: tol,
    })
}

/// `e^{itH}` by spectral mapping.
pub fn matrix_exp_it(h: &HermitianOperator, t: f64) -> Result<CMatrix> {
    Ok(decompose(h)?.exp_it(t))
}

/// Atoms `(λ_k, <u, E_k u>)` of the spectral measure of `H` in the state `u`.
pub fn spectral_measure(h: &HermitianOperator, u: &StateVector) -> Result<SpectralMeasure> {
    u.check_dim(h.dim())?;
    decompose(h)?.measure(u)
}

/// `<u, e^{itH} u>` sampled at `ts`, as the Fourier sum over the spectral atoms.
pub fn charfun_exact(h: &HermitianOperator, u: &StateVector, ts: &[f64]) -> Result<CharacteristicFunctionTrace> {
    Ok(spectral_measure(h, u)?.charfun(ts))
}
