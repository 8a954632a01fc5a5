//! Spectral measures and sampled characteristic functions.

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{C64, I};

/// A point mass of the spectral measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// The scalar measure `d<u, E_λ u>`: atoms and/or sampled density and CDF.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralMeasure {
    pub atoms: Vec<Atom>,
    pub density: Option<Vec<(f64, f64)>>,
    pub cdf: Option<Vec<(f64, f64)>>,
    pub method: String,
    /// Smallest Poisson width used, or 0 for an exact measure.
    pub epsilon_used: f64,
    /// Bound on the mass lost outside the sampled window, when one applies.
    pub tail_bound: Option<f64>,
}

impl SpectralMeasure {
    pub fn from_atoms(atoms: Vec<Atom>, method: impl Into<String>) -> Self {
        Self {
            atoms,
            density: None,
            cdf: None,
            method: method.into(),
            epsilon_used: 0.0,
            tail_bound: None,
        }
    }

    pub fn total_atom_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// The atom closest to `location`, if one lies within `tol`.
    pub fn atom_near(&self, location: f64, tol: f64) -> Option<Atom> {
        self.atoms
            .iter()
            .copied()
            .filter(|a| (a.location - location).abs() <= tol)
            .min_by(|a, b| (a.location - location).abs().total_cmp(&(b.location - location).abs()))
    }

    /// `Σ w_k e^{itλ_k}` over the atoms.
    pub fn charfun_at(&self, t: f64) -> C64 {
        self.atoms
            .iter()
            .map(|a| a.weight * (I * t * a.location).exp())
            .sum()
    }

    pub fn charfun(&self, ts: &[f64]) -> CharacteristicFunctionTrace {
        let values = ts.par_iter().map(|&t| self.charfun_at(t)).collect();
        CharacteristicFunctionTrace {
            ts: ts.to_vec(),
            values,
            method: CfMethod::Exact,
            epsilon: 0.0,
            truncation: None,
        }
    }

    /// Right-continuous distribution function of the atomic part.
    pub fn atomic_cdf(&self, lambda: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.location <= lambda)
            .map(|a| a.weight)
            .sum()
    }
}

/// How a characteristic-function trace was produced.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CfMethod {
    Exact,
    Stone,
    ClosedForm(String),
}

impl std::fmt::Display for CfMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CfMethod::Exact => write!(f, "exact"),
            CfMethod::Stone => write!(f, "stone"),
            CfMethod::ClosedForm(id) => write!(f, "closed-form:{id}"),
        }
    }
}

/// Samples of `t -> <u, e^{itH} u>`.
///
/// `epsilon` is the Poisson width whose damping `e^{-ε|t|}` is still present in the
/// values (0 when none is).
#[derive(Clone, Debug, Serialize)]
pub struct CharacteristicFunctionTrace {
    pub ts: Vec<f64>,
    pub values: Vec<C64>,
    pub method: CfMethod,
    pub epsilon: f64,
    pub truncation: Option<String>,
}

impl CharacteristicFunctionTrace {
    pub fn from_fn(ts: &[f64], method: CfMethod, f: impl Fn(f64) -> C64 + Sync) -> Self {
        Self {
            ts: ts.to_vec(),
            values: ts.par_iter().map(|&t| f(t)).collect(),
            method,
            epsilon: 0.0,
            truncation: None,
        }
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, C64)> + '_ {
        self.ts.iter().copied().zip(self.values.iter().copied())
    }

    pub fn with_truncation(mut self, truncation: impl Into<String>) -> Self {
        self.truncation = Some(truncation.into());
        self
    }

    /// Multiplies by `e^{-ε|t|}`, the effect of Poisson smoothing of width `ε`.
    pub fn damped(&self, eps: f64) -> Self {
        let mut out = self.clone();
        for (v, t) in out.values.iter_mut().zip(&self.ts) {
            *v *= (-eps * t.abs()).exp();
        }
        out.epsilon += eps;
        out
    }

    /// Divides out the recorded Poisson damping.
    pub fn undamped(&self) -> Self {
        let mut out = self.clone();
        for (v, t) in out.values.iter_mut().zip(&self.ts) {
            *v *= (self.epsilon * t.abs()).exp();
        }
        out.epsilon = 0.0;
        out
    }

    /// Largest pointwise distance to another trace on the same abscissae.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.ts.len(), other.ts.len(), "traces sampled on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest pointwise distance to a reference function.
    pub fn max_abs_diff_fn(&self, f: impl Fn(f64) -> C64) -> f64 {
        self.iter().map(|(t, v)| (v - f(t)).norm()).fold(0.0, f64::max)
    }
}
