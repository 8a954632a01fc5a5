//! Quadrature rules on uniform grids, Gauss-Legendre panels and polynomial extrapolation.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    Trapezoid,
    Simpson,
}

/// Weights of the composite rule for `n` equally spaced samples with step `h`.
///
/// Simpson needs an even number of intervals; with an odd count the last three
/// intervals use the 3/8 rule.
pub fn weights(n: usize, h: f64, rule: Quadrature) -> Vec<f64> {
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    let intervals = n - 1;
    if rule == Quadrature::Trapezoid || intervals < 2 {
        w.iter_mut().for_each(|x| *x = h);
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
        return w;
    }
    let simpson_end = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
    for k in (0..simpson_end).step_by(2) {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
    }
    if simpson_end < intervals {
        let s = simpson_end;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    w
}

pub fn integrate(values: &[f64], h: f64, rule: Quadrature) -> f64 {
    weights(values.len(), h, rule)
        .iter()
        .zip(values)
        .map(|(w, v)| w * v)
        .sum()
}

/// Running integral `F[k] = ∫_{x_0}^{x_k} f`.
///
/// The Simpson variant is exact on quadratics at every node: even nodes close a
/// Simpson panel, odd nodes take the half-panel formula `h(5f0 + 8f1 - f2)/12`.
pub fn cumulative(values: &[f64], h: f64, rule: Quadrature) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    match rule {
        Quadrature::Trapezoid => {
            for k in 1..n {
                out[k] = out[k - 1] + 0.5 * h * (values[k - 1] + values[k]);
            }
        }
        Quadrature::Simpson if n < 3 => {
            out[1] = 0.5 * h * (values[0] + values[1]);
        }
        Quadrature::Simpson => {
            let f = values;
            let mut k = 1;
            while k < n {
                let base = out[k - 1];
                if k + 1 < n {
                    out[k] = base + h * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]) / 12.0;
                    out[k + 1] = base + h * (f[k - 1] + 4.0 * f[k] + f[k + 1]) / 3.0;
                } else {
                    out[k] = base + h * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]) / 12.0;
                }
                k += 2;
            }
        }
    }
    out
}

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Golub-Welsch: the nodes are the eigenvalues of the Jacobi matrix of the Legendre
/// recurrence and the weights are twice the squared first eigenvector components.
pub fn gauss_legendre(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::Invalid("Gauss-Legendre order must be positive".into()));
    }
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let kf = k as f64;
        let b = kf / (4.0 * kf * kf - 1.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| (eig.eigenvalues[k], 2.0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Enforce the reflection symmetry of the rule exactly.
    for k in 0..order / 2 {
        let j = order - 1 - k;
        let x = 0.5 * (pairs[j].0 - pairs[k].0);
        let w = 0.5 * (pairs[j].1 + pairs[k].1);
        pairs[k] = (-x, w);
        pairs[j] = (x, w);
    }
    if order % 2 == 1 {
        pairs[order / 2].0 = 0.0;
    }
    Ok(pairs.into_iter().unzip())
}

/// Composite Gauss-Legendre rule on `[a, b]` with `panels` equal panels.
pub fn gauss_legendre_panels(a: f64, b: f64, panels: usize, order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if panels == 0 || !(b > a) {
        return Err(Error::Invalid(format!("invalid panel rule on [{a}, {b}] with {panels} panels")));
    }
    let (x, w) = gauss_legendre(order)?;
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * width * xi);
            weights.push(0.5 * width * wi);
        }
    }
    Ok((nodes, weights))
}

/// Neville evaluation at `x0` of the interpolating polynomial through `(xs, ys)`.
///
/// Returns the extrapolated value and the size of the last correction, a
/// conventional error estimate.
pub fn neville<T>(xs: &[f64], ys: &[T], x0: f64) -> (T, f64)
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> + Magnitude,
{
    assert_eq!(xs.len(), ys.len(), "Neville needs matching abscissae and ordinates");
    assert!(!xs.is_empty(), "Neville needs at least one point");
    let n = xs.len();
    let mut table: Vec<T> = ys.to_vec();
    let mut last_correction = 0.0;
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            let (a, b) = (table[i], table[i + 1]);
            let denom = xs[i] - xs[j];
            let next = a * ((x0 - xs[j]) / denom) + b * ((xs[i] - x0) / denom);
            if i == 0 {
                last_correction = (next - a).magnitude();
            }
            table[i] = next;
        }
    }
    (table[0], last_correction)
}

/// Absolute value, shared by real and complex Neville tables.
pub trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Magnitude for num_complex::Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}
