use num_complex::ComplexFloat;

use super::operator::{real, CMatrix, CVector, HermitianOperator, StateVector, C64};
use crate::error::{Error, Result};

/// Relative residual accepted from a shifted solve.
pub const SOLVE_RTOL: f64 = 1e-10;

/// Dense LU factorization with partial (row) pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct ComplexLu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl ComplexLu {
    pub fn factor(mut a: CMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Invalid("LU needs a square matrix".into()));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (pivot, size) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if size == 0.0 || !size.is_finite() {
                return Err(Error::Numerical(format!("singular matrix at pivot {k}")));
            }
            if pivot != k {
                a.swap_rows(k, pivot);
                perm.swap(k, pivot);
            }
            let inv = a[(k, k)].recip();
            for i in k + 1..n {
                let l = a[(i, k)] * inv;
                a[(i, k)] = l;
                if l != C64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let u = a[(k, j)];
                        a[(i, j)] -= l * u;
                    }
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    pub fn solve(&self, b: &CVector) -> CVector {
        let n = self.lu.nrows();
        let mut x = CVector::from_fn(n, |i, _| b[self.perm[i]]);
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }
}

/// Solves `(z I - H) x = u` for `Im z != 0`.
pub fn shifted_solve(h: &HermitianOperator, z: C64, u: &StateVector) -> Result<CVector> {
    u.check_dim(h.dim())?;
    if z.im == 0.0 {
        return Err(Error::Precondition(format!(
            "resolvent shift {z} lies on the real axis; probe with Im z != 0"
        )));
    }
    let n = h.dim();
    let shifted = CMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { z } else { real(0.0) };
        d - h.entries()[(i, j)]
    });
    let lu = ComplexLu::factor(shifted.clone())?;
    let x = lu.solve(u.amplitudes());
    let residual = (&shifted * &x - u.amplitudes()).norm();
    if residual > SOLVE_RTOL * u.amplitudes().norm() {
        return Err(Error::Numerical(format!(
            "shifted solve at z = {z} left residual {residual:e}"
        )));
    }
    Ok(x)
}

/// Lanczos tridiagonalization of `H` on the Krylov space of `u`, with full reorthogonalization.
///
/// `alpha[k]` are the diagonal entries and `beta[k]` couples steps `k` and `k + 1`, so
/// `<u, (z - H)^{-1} u>` is the Jacobi continued fraction built from them.
#[derive(Clone, Debug)]
pub struct Lanczos {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl Lanczos {
    pub fn run(h: &HermitianOperator, u: &StateVector) -> Result<Self> {
        Self::run_steps(h, u, h.dim())
    }

    pub fn run_steps(h: &HermitianOperator, u: &StateVector, max_steps: usize) -> Result<Self> {
        u.check_dim(h.dim())?;
        let n = h.dim();
        let steps = max_steps.clamp(1, n);
        let (glo, ghi) = h.gershgorin_bounds();
        let breakdown = 1e-13 * glo.abs().max(ghi.abs()).max(1.0);

        let mut basis: Vec<CVector> = Vec::with_capacity(steps);
        let mut alpha = Vec::with_capacity(steps);
        let mut beta = Vec::with_capacity(steps);
        let mut v = u.amplitudes().clone();
        for k in 0..steps {
            let mut w = h.apply(&v);
            let a = v.dotc(&w).re;
            alpha.push(a);
            basis.push(v);
            if k + 1 == steps {
                break;
            }
            // Two passes of classical Gram-Schmidt keep the basis orthogonal to working precision.
            for _ in 0..2 {
                for q in &basis {
                    let proj = q.dotc(&w);
                    w.axpy(-proj, q, real(1.0));
                }
            }
            let b = w.norm();
            if !b.is_finite() {
                return Err(Error::Numerical(format!("Lanczos produced a non-finite vector at step {k}")));
            }
            if b <= breakdown {
                break;
            }
            beta.push(b);
            v = w / real(b);
        }
        Ok(Self { alpha, beta })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// `<u, (z - H)^{-1} u>` evaluated bottom-up from the continued fraction.
    pub fn green(&self, z: C64) -> C64 {
        let m = self.alpha.len();
        let mut tail = C64::new(0.0, 0.0);
        for k in (0..m).rev() {
            let coupling = if k + 1 < m { self.beta[k] * self.beta[k] } else { 0.0 };
            tail = (z - self.alpha[k] - tail * coupling).recip();
        }
        tail
    }
}
