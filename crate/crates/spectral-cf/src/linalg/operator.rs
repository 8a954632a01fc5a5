use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Asymmetry tolerated (relative to the largest entry) before a matrix is rejected as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance on the Euclidean norm of a state vector.
pub const NORM_TOL: f64 = 1e-12;

pub(crate) const I: C64 = C64::new(0.0, 1.0);


pub(crate) fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest entry modulus of a matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// A dense complex matrix that is Hermitian up to rounding.
///
/// Construction checks `H[i][j] == conj(H[j][i])` and then replaces the input by
/// `(H + H^dagger) / 2`, so downstream code can rely on exact Hermiticity.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
    label: Option<String>,
}

impl HermitianOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::Invalid(format!("matrix is {rows}x{cols}, not square")));
        }
        if rows == 0 {
            return Err(Error::Invalid("matrix has dimension 0".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix has non-finite entries".into()));
        }
        let scale = max_abs(&entries).max(1.0);
        let mut worst = (0, 0, 0.0_f64);
        for j in 0..rows {
            for i in 0..=j {
                let d = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        if worst.2 > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian {
                row: worst.0,
                col: worst.1,
                asymmetry: worst.2,
            });
        }
        let sym = (&entries + entries.adjoint()) * real(0.5);
        Ok(Self {
            entries: sym,
            label: None,
        })
    }

    /// Builds from a real row-major slice of length `dim * dim`.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Self::new(CMatrix::from_fn(dim, dim, |i, j| real(data[i * dim + j])))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Gershgorin enclosure of the (real) spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let radius: f64 = (0..n).filter(|&j| j != i).map(|j| self.entries[(i, j)].norm()).sum();
            let centre = self.entries[(i, i)].re;
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        (lo, hi)
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.entries * v
    }

    /// `<u, H u>`, real for Hermitian `H`.
    pub fn expectation(&self, u: &StateVector) -> f64 {
        u.amplitudes().dotc(&self.apply(u.amplitudes())).re
    }

    /// Real linear combination `Σ c_k H_k` of operators of equal dimension.
    pub fn combination(terms: &[(f64, &HermitianOperator)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Invalid("empty linear combination".into()))?;
        let n = first.1.dim();
        let mut acc = CMatrix::zeros(n, n);
        for (coef, op) in terms {
            if op.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: op.dim(),
                });
            }
            acc += op.entries() * real(*coef);
        }
        Self::new(acc)
    }
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Invalid("state has dimension 0".into()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Invalid(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Invalid(format!("cannot normalize vector of norm {norm}")));
        }
        Ok(Self {
            amplitudes: amplitudes / real(norm),
        })
    }

    pub fn from_complex(values: &[C64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(values))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(CVector::from_iterator(values.len(), values.iter().map(|&x| real(x))))
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Invalid(format!("basis index {k} out of range for dimension {dim}")));
        }
        let mut v = CVector::zeros(dim);
        v[k] = real(1.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &CVector) -> C64 {
        self.amplitudes.dotc(other)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}
