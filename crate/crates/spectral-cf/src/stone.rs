//! Spectral measures from resolvent probes.
//!
//! The Poisson-smoothed density `ρ_ε(λ) = -Im G(λ + iε) / π`, with
//! `G(z) = <u, (z - H)^{-1} u>`, is sampled on a uniform grid. Integrals against it
//! use a Cauchy control variate centred at the mean `m = <u, H u>`: the kernel
//! `(ε/π) / ((λ - m)² + ε²)` has the same total mass and first moment, so the
//! remainder decays like `λ^{-4}` and the analytic kernel carries the slow tails.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{shifted_solve, HermitianOperator, Lanczos, StateVector, C64, I};
use crate::measure::{Atom, CfMethod, CharacteristicFunctionTrace, SpectralMeasure};
use crate::quadrature::{cumulative, neville, weights, Quadrature};

/// Target for the control-variate tail left outside an automatically chosen grid.
pub const AUTO_TAIL_TOL: f64 = 1e-9;
/// Grid steps per smallest Poisson width in automatic configurations.
/// Largest grid step accepted, in units of the smallest width.
pub const MAX_STEP_PER_EPSILON: f64 = 0.5;
pub const AUTO_STEPS_PER_EPSILON: f64 = 8.0;
/// Largest grid accepted, to keep sample vectors in memory.
pub const MAX_GRID_POINTS: usize = 1 << 24;
/// A grid covers the measure when the recovered CDF reaches this value at its upper end.
pub const COVERAGE_MIN: f64 = 0.99;
/// Allowed distance of an atom's log-log density slope from -1.
pub const ATOM_SLOPE_TOL: f64 = 0.1;
const MAX_ATOM_CANDIDATES: usize = 32;
const MIN_ATOM_WEIGHT: f64 = 1e-8;

/// Uniform grid `lo, lo + h, ..., hi` with `n` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UniformGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Invalid(format!("grid needs n >= 2 and lo < hi (got {lo}:{hi}:{n})")));
        }
        if n > MAX_GRID_POINTS {
            return Err(Error::Invalid(format!("grid of {n} points exceeds the limit of {MAX_GRID_POINTS}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.n {
            self.hi
        } else {
            self.lo + k as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }
}

/// How results at several Poisson widths are combined.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extrapolation {
    /// Report the smallest width as is.
    None,
    /// Polynomial extrapolation to `ε = 0` across the ladder, pointwise in `λ` or `t`.
    Richardson,
    /// Divide the damping `e^{-ε|t|}` out of the characteristic function at the smallest
    /// width and invert it on `[0, t_max]`. Suited to absolutely continuous measures
    /// whose characteristic function is negligible beyond `t_max`.
    PoissonDeconvolution { t_max: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResolventBackend {
    /// Dense factorization for dimensions up to [`DENSE_AUTO_MAX_DIM`], Lanczos above.
    #[default]
    Auto,
    /// One dense LU factorization of `z - H` per shift.
    DenseLu,
    /// Jacobi continued fraction from a fully reorthogonalized Lanczos run.
    Lanczos,
}

pub const DENSE_AUTO_MAX_DIM: usize = 8;

/// Parameters of a resolvent sweep. `t_grid` is the grid on the spectral axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolventProbeConfig {
    pub epsilons: Vec<f64>,
    pub t_grid: UniformGrid,
    pub quadrature: Quadrature,
    pub extrapolation: Extrapolation,
    pub backend: ResolventBackend,
}

impl ResolventProbeConfig {
    pub fn new(epsilons: Vec<f64>, t_grid: UniformGrid) -> Result<Self> {
        let config = Self {
            epsilons,
            t_grid,
            quadrature: Quadrature::Simpson,
            extrapolation: Extrapolation::None,
            backend: ResolventBackend::Auto,
        };
        config.validate()?;
        Ok(config)
    }

    /// A grid wide enough that the control-variate tail at the smallest width stays below
    /// [`AUTO_TAIL_TOL`], with [`AUTO_STEPS_PER_EPSILON`] points per smallest width.
    /// Larger widths lose proportionally more tail mass; the bound is reported.
    pub fn auto(h: &HermitianOperator, u: &StateVector, epsilons: Vec<f64>) -> Result<Self> {
        validate_epsilons(&epsilons)?;
        u.check_dim(h.dim())?;
        let (mean, variance) = moments(h, u);
        let eps_min = *epsilons.last().unwrap();
        let spread = variance.max(eps_min * eps_min);
        let tail = (eps_min * spread / (PI * AUTO_TAIL_TOL)).cbrt();
        let reach = 12.0 * spread.sqrt() + tail;
        let (glo, ghi) = h.gershgorin_bounds();
        let lo = (mean - reach).max(glo - tail);
        let hi = (mean + reach).min(ghi + tail);
        let step = eps_min / AUTO_STEPS_PER_EPSILON;
        let mut n = ((hi - lo) / step).ceil() as usize + 1;
        if n.is_multiple_of(2) {
            n += 1;
        }
        Self::new(epsilons, UniformGrid::new(lo, hi, n.max(3))?)
    }

    pub fn with_quadrature(mut self, quadrature: Quadrature) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn with_extrapolation(mut self, extrapolation: Extrapolation) -> Self {
        self.extrapolation = extrapolation;
        self
    }

    pub fn with_backend(mut self, backend: ResolventBackend) -> Self {
        self.backend = backend;
        self
    }

    pub fn smallest_epsilon(&self) -> f64 {
        *self.epsilons.last().expect("validated ladder is nonempty")
    }

    pub fn validate(&self) -> Result<()> {
        validate_epsilons(&self.epsilons)?;
        let g = UniformGrid::new(self.t_grid.lo, self.t_grid.hi, self.t_grid.n)?;
        let eps = self.smallest_epsilon();
        if g.step() > MAX_STEP_PER_EPSILON * eps {
            let need = ((g.hi - g.lo) / (MAX_STEP_PER_EPSILON * eps)).ceil() as usize + 1;
            return Err(Error::Invalid(format!(
                "grid step {} does not resolve epsilon = {eps}; use at least {need} points on [{}, {}]",
                g.step(),
                g.lo,
                g.hi
            )));
        }
        if let Extrapolation::PoissonDeconvolution { t_max } = self.extrapolation {
            if !(t_max > 0.0 && t_max.is_finite()) {
                return Err(Error::Invalid(format!("deconvolution needs t_max > 0 (got {t_max})")));
            }
        }
        Ok(())
    }
}

fn validate_epsilons(epsilons: &[f64]) -> Result<()> {
    if epsilons.is_empty() {
        return Err(Error::Invalid("epsilon ladder is empty".into()));
    }
    if epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Invalid(format!("epsilons must be positive, got {epsilons:?}")));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid(format!("epsilons must be strictly descending, got {epsilons:?}")));
    }
    Ok(())
}

fn moments(h: &HermitianOperator, u: &StateVector) -> (f64, f64) {
    let hu = h.apply(u.amplitudes());
    let mean = u.inner(&hu).re;
    let second = hu.norm_squared();
    (mean, (second - mean * mean).max(0.0))
}

enum Green {
    Dense { h: HermitianOperator, u: StateVector },
    Lanczos(Lanczos),
}

/// Evaluates `G(z) = <u, (z - H)^{-1} u>` and the smoothed density for one `(H, u)` pair.
pub struct ResolventProbe {
    green: Green,
    mean: f64,
    variance: f64,
}

impl ResolventProbe {
    pub fn new(h: &HermitianOperator, u: &StateVector, backend: ResolventBackend) -> Result<Self> {
        u.check_dim(h.dim())?;
        let dense = match backend {
            ResolventBackend::Auto => h.dim() <= DENSE_AUTO_MAX_DIM,
            ResolventBackend::DenseLu => true,
            ResolventBackend::Lanczos => false,
        };
        let green = if dense {
            Green::Dense {
                h: h.clone(),
                u: u.clone(),
            }
        } else {
            Green::Lanczos(Lanczos::run(h, u)?)
        };
        let (mean, variance) = moments(h, u);
        Ok(Self { green, mean, variance })
    }

    pub fn green(&self, z: C64) -> Result<C64> {
        match &self.green {
            Green::Dense { h, u } => Ok(u.inner(&shifted_solve(h, z, u)?)),
            Green::Lanczos(l) => {
                if z.im == 0.0 {
                    return Err(Error::Precondition(format!("resolvent shift {z} lies on the real axis")));
                }
                Ok(l.green(z))
            }
        }
    }

    /// `(1/2πi) <u, (R(λ - iε) - R(λ + iε)) u> = -Im G(λ + iε) / π`.
    pub fn density(&self, lambda: f64, eps: f64) -> Result<f64> {
        if !(eps > 0.0) {
            return Err(Error::Precondition(format!("Poisson width must be positive, got {eps}")));
        }
        Ok(-self.green(C64::new(lambda, eps))?.im / PI)
    }

    pub fn density_on(&self, grid: &UniformGrid, eps: f64) -> Result<Vec<f64>> {
        (0..grid.n)
            .into_par_iter()
            .map(|k| self.density(grid.point(k), eps))
            .collect()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.green, Green::Dense { .. })
    }

    fn cauchy(&self, lambda: f64, eps: f64) -> f64 {
        let d = lambda - self.mean;
        eps / (PI * (d * d + eps * eps))
    }

    fn cauchy_cdf(&self, lambda: f64, eps: f64) -> f64 {
        0.5 + ((lambda - self.mean) / eps).atan() / PI
    }

    /// Bound on the remainder mass beyond the grid for width `eps`.
    fn tail_bound(&self, grid: &UniformGrid, eps: f64) -> f64 {
        let reach = (self.mean - grid.lo).min(grid.hi - self.mean);
        if reach <= 0.0 {
            return 1.0;
        }
        2.0 * eps * self.variance.max(eps * eps) / (PI * reach.powi(3))
    }
}

/// Smoothed density samples `(λ, ρ_ε(λ))` on `grid`.
pub fn smoothed_density(
    h: &HermitianOperator,
    u: &StateVector,
    eps: f64,
    grid: &UniformGrid,
) -> Result<Vec<(f64, f64)>> {
    let probe = ResolventProbe::new(h, u, ResolventBackend::Auto)?;
    let values = probe.density_on(grid, eps)?;
    Ok(grid.points().into_iter().zip(values).collect())
}

/// Remainder `w_k (ρ_ε - c_ε)(λ_k)` with quadrature weights folded in.
fn weighted_remainder(probe: &ResolventProbe, grid: &UniformGrid, density: &[f64], eps: f64, rule: Quadrature) -> Vec<f64> {
    weights(grid.n, grid.step(), rule)
        .into_iter()
        .enumerate()
        .map(|(k, w)| w * (density[k] - probe.cauchy(grid.point(k), eps)))
        .collect()
}

/// `Σ_k f_k e^{itλ_k}` on a uniform grid, with the phase advanced by a recurrence and
/// resynchronized every few thousand steps.
fn fourier_sum(grid: &UniformGrid, f: &[f64], t: f64) -> C64 {
    const RESYNC: usize = 2048;
    let step = (I * t * grid.step()).exp();
    let mut acc = C64::new(0.0, 0.0);
    for (chunk_index, chunk) in f.chunks(RESYNC).enumerate() {
        let mut phase = (I * t * grid.point(chunk_index * RESYNC)).exp();
        let mut part = C64::new(0.0, 0.0);
        for &v in chunk {
            part += phase * v;
            phase *= step;
        }
        acc += part;
    }
    acc
}

fn damped_charfun(probe: &ResolventProbe, grid: &UniformGrid, remainder: &[f64], eps: f64, ts: &[f64]) -> Vec<C64> {
    ts.par_iter()
        .map(|&t| {
            let kernel = (I * t * probe.mean).exp() * (-eps * t.abs()).exp();
            kernel + fourier_sum(grid, remainder, t)
        })
        .collect()
}

fn smoothed_cdf(probe: &ResolventProbe, grid: &UniformGrid, density: &[f64], eps: f64, rule: Quadrature) -> Vec<f64> {
    let remainder: Vec<f64> = (0..grid.n)
        .map(|k| density[k] - probe.cauchy(grid.point(k), eps))
        .collect();
    cumulative(&remainder, grid.step(), rule)
        .into_iter()
        .enumerate()
        .map(|(k, r)| probe.cauchy_cdf(grid.point(k), eps) + r)
        .collect()
}

/// Maximizes `f` on `[a, b]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Atoms are peaks whose height scales like `1/(πε)` between the two smallest widths;
/// their weights are `π ε ρ_ε(λ*)` extrapolated to `ε = 0`.
fn detect_atoms(probe: &ResolventProbe, grid: &UniformGrid, density: &[f64], epsilons: &[f64]) -> Result<Vec<Atom>> {
    if epsilons.len() < 2 {
        return Ok(Vec::new());
    }
    let eps_min = *epsilons.last().unwrap();
    let floor = MIN_ATOM_WEIGHT / (PI * eps_min);
    let mut candidates: Vec<(usize, f64)> = (1..grid.n - 1)
        .filter(|&k| density[k] > floor && density[k] >= density[k - 1] && density[k] > density[k + 1])
        .map(|k| (k, density[k]))
        .collect();
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1));
    candidates.truncate(MAX_ATOM_CANDIDATES);
    candidates.sort_by_key(|c| c.0);

    let mut atoms = Vec::new();
    for (k, _) in candidates {
        let mut centre = grid.point(k);
        let mut peaks = Vec::with_capacity(epsilons.len());
        for &eps in epsilons.iter().rev() {
            let half = 2.0 * eps.max(grid.step());
            let (x, v) = golden_max(|x| probe.density(x, eps), centre - half, centre + half, 1e-6 * eps)?;
            if peaks.is_empty() {
                centre = x;
            }
            peaks.push((eps, x, v));
        }
        let (e0, _, v0) = peaks[0];
        let (e1, _, v1) = peaks[1];
        if !(v0 > 0.0 && v1 > 0.0) {
            continue;
        }
        let slope = (v1 / v0).ln() / (e1 / e0).ln();
        if (slope + 1.0).abs() > ATOM_SLOPE_TOL {
            continue;
        }
        let xs: Vec<f64> = peaks.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = peaks.iter().map(|p| PI * p.0 * p.2).collect();
        let (weight, _) = neville(&xs, &ys, 0.0);
        if weight > MIN_ATOM_WEIGHT && !atoms.iter().any(|a: &Atom| (a.location - centre).abs() < eps_min) {
            atoms.push(Atom {
                location: centre,
                weight,
            });
        }
    }
    Ok(atoms)
}

fn check_coverage(probe: &ResolventProbe, grid: &UniformGrid, cdf_hi: f64, eps: f64) -> Result<()> {
    if cdf_hi >= COVERAGE_MIN {
        return Ok(());
    }
    let sigma = probe.variance.max(eps * eps).sqrt();
    let reach = 12.0 * sigma + (eps * sigma * sigma / (PI * AUTO_TAIL_TOL)).cbrt();
    Err(Error::Range {
        lo: grid.lo,
        hi: grid.hi,
        cdf_hi,
        suggested_lo: grid.lo.min(probe.mean - reach),
        suggested_hi: grid.hi.max(probe.mean + reach),
    })
}

/// Gil-Pelaez inversion `F(λ) = ½ - (1/π) ∫_0^T Im(e^{-itλ} φ(t)) / t dt`.
///
/// The integrand is even in `t`, so the trapezoid rule on `[0, T]` converges
/// geometrically once the step resolves the oscillation `|λ - m| + 12σ`.
/// `phi` must be the undamped characteristic function, `mean` its first moment.
pub fn gil_pelaez_cdf(
    phi: impl Fn(&[f64]) -> Result<Vec<C64>>,
    mean: f64,
    spread: f64,
    lambdas: &[f64],
    t_max: f64,
) -> Result<Vec<f64>> {
    if !(t_max > 0.0) {
        return Err(Error::Invalid(format!("Gil-Pelaez needs t_max > 0 (got {t_max})")));
    }
    let reach = lambdas.iter().map(|l| (l - mean).abs()).fold(0.0, f64::max) + 12.0 * spread + 10.0;
    let steps = ((t_max * reach / (0.5 * PI)).ceil() as usize).max(64);
    let dt = t_max / steps as f64;
    let ts: Vec<f64> = (1..=steps).map(|k| k as f64 * dt).collect();
    let values = phi(&ts)?;
    Ok(lambdas
        .par_iter()
        .map(|&l| {
            let rot = (-I * l * dt).exp();
            let mut phase = rot;
            let mut acc = 0.5 * (mean - l);
            for (k, v) in values.iter().enumerate() {
                if k % 1024 == 1023 {
                    phase = (-I * l * ts[k]).exp();
                }
                let w = if k + 1 == steps { 0.5 } else { 1.0 };
                acc += w * (phase * v).im / ts[k];
                phase *= rot;
            }
            0.5 - acc * dt / PI
        })
        .collect())
}

/// Distribution function of `d<u, E_λ u>` from resolvent probes.
pub fn stone_cdf(h: &HermitianOperator, u: &StateVector, config: &ResolventProbeConfig) -> Result<SpectralMeasure> {
    config.validate()?;
    let probe = ResolventProbe::new(h, u, config.backend)?;
    let grid = &config.t_grid;
    let eps_min = config.smallest_epsilon();
    let rule = config.quadrature;

    let finest = probe.density_on(grid, eps_min)?;
    let finest_cdf = smoothed_cdf(&probe, grid, &finest, eps_min, rule);
    check_coverage(&probe, grid, *finest_cdf.last().unwrap(), eps_min)?;
    let atoms = detect_atoms(&probe, grid, &finest, &config.epsilons)?;

    let (cdf, method, tail_bound) = match config.extrapolation {
        Extrapolation::None => (finest_cdf, "stone", probe.tail_bound(grid, eps_min)),
        Extrapolation::Richardson => {
            let mut ladder = Vec::with_capacity(config.epsilons.len());
            for &eps in &config.epsilons[..config.epsilons.len() - 1] {
                let d = probe.density_on(grid, eps)?;
                ladder.push(smoothed_cdf(&probe, grid, &d, eps, rule));
            }
            ladder.push(finest_cdf);
            let cdf = (0..grid.n)
                .into_par_iter()
                .map(|k| {
                    let ys: Vec<f64> = ladder.iter().map(|c| c[k]).collect();
                    neville(&config.epsilons, &ys, 0.0).0
                })
                .collect();
            (cdf, "stone+richardson", probe.tail_bound(grid, config.epsilons[0]))
        }
        Extrapolation::PoissonDeconvolution { t_max } => {
            let remainder = weighted_remainder(&probe, grid, &finest, eps_min, rule);
            let phi = |ts: &[f64]| -> Result<Vec<C64>> {
                Ok(damped_charfun(&probe, grid, &remainder, eps_min, ts)
                    .into_iter()
                    .zip(ts)
                    .map(|(v, t)| v * (eps_min * t.abs()).exp())
                    .collect())
            };
            let lambdas = grid.points();
            let cdf = gil_pelaez_cdf(phi, probe.mean, probe.variance.sqrt(), &lambdas, t_max)?;
            (cdf, "stone+deconvolution", probe.tail_bound(grid, eps_min) * (eps_min * t_max).exp())
        }
    };

    let density = (0..grid.n)
        .map(|k| {
            let x = grid.point(k);
            let smeared: f64 = atoms
                .iter()
                .map(|a| a.weight * eps_min / (PI * ((x - a.location).powi(2) + eps_min * eps_min)))
                .sum();
            (x, finest[k] - smeared)
        })
        .collect();
    Ok(SpectralMeasure {
        atoms,
        density: Some(density),
        cdf: Some(grid.points().into_iter().zip(cdf).collect()),
        method: method.into(),
        epsilon_used: eps_min,
        tail_bound: Some(tail_bound),
    })
}

/// `<u, e^{itH} u>` by quadrature of `e^{itλ}` against the smoothed density.
///
/// Without extrapolation the trace keeps the damping `e^{-ε|t|}` of the smallest width
/// and records it in `epsilon`.
pub fn stone_charfun(
    h: &HermitianOperator,
    u: &StateVector,
    config: &ResolventProbeConfig,
    ts: &[f64],
) -> Result<CharacteristicFunctionTrace> {
    config.validate()?;
    let probe = ResolventProbe::new(h, u, config.backend)?;
    let grid = &config.t_grid;
    let eps_min = config.smallest_epsilon();
    let at = |eps: f64| -> Result<Vec<C64>> {
        let d = probe.density_on(grid, eps)?;
        let total = *smoothed_cdf(&probe, grid, &d, eps, config.quadrature).last().unwrap();
        check_coverage(&probe, grid, total, eps)?;
        let remainder = weighted_remainder(&probe, grid, &d, eps, config.quadrature);
        Ok(damped_charfun(&probe, grid, &remainder, eps, ts))
    };
    let undamp = |values: Vec<C64>, eps: f64| -> Vec<C64> {
        values
            .into_iter()
            .zip(ts)
            .map(|(v, t)| v * (eps * t.abs()).exp())
            .collect()
    };

    let (values, epsilon) = match config.extrapolation {
        Extrapolation::None => (at(eps_min)?, eps_min),
        Extrapolation::PoissonDeconvolution { .. } => (undamp(at(eps_min)?, eps_min), 0.0),
        Extrapolation::Richardson => {
            let mut ladder = Vec::with_capacity(config.epsilons.len());
            for &eps in &config.epsilons {
                ladder.push(undamp(at(eps)?, eps));
            }
            let values = (0..ts.len())
                .map(|k| {
                    let ys: Vec<C64> = ladder.iter().map(|row| row[k]).collect();
                    neville(&config.epsilons, &ys, 0.0).0
                })
                .collect();
            (values, 0.0)
        }
    };
    Ok(CharacteristicFunctionTrace {
        ts: ts.to_vec(),
        values,
        method: CfMethod::Stone,
        epsilon,
        truncation: None,
    })
}

/// Optional taper applied to a characteristic function before inversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Window {
    None,
    /// Multiplies by `e^{-t²/(2 s²)}`, which convolves the density with a normal law of
    /// standard deviation `1/s`.
    Gaussian { s: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityInversion {
    pub samples: Vec<(f64, f64)>,
    /// Largest imaginary part discarded from the inversion integral.
    pub imaginary_residual: f64,
}

/// Endpoint magnitude below which a trace counts as decayed.
pub const INVERSION_DECAY: f64 = 1e-6;

/// `ρ(λ) = (1/2π) ∫ e^{-itλ} φ(t) dt` by the trapezoid rule on the trace's uniform, symmetric grid.
pub fn invert_cf_to_density(cf: &CharacteristicFunctionTrace, lambdas: &[f64], window: Window) -> Result<DensityInversion> {
    let n = cf.len();
    if n < 3 {
        return Err(Error::Precondition("inversion needs at least 3 samples".into()));
    }
    let (t0, t1) = (cf.ts[0], cf.ts[n - 1]);
    let dt = (t1 - t0) / (n - 1) as f64;
    let scale = t1.abs().max(1.0);
    if (t0 + t1).abs() > 1e-9 * scale {
        return Err(Error::Precondition(format!("inversion needs a symmetric t-grid, got [{t0}, {t1}]")));
    }
    if cf.ts.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1e-300) + 1e-12 * scale) {
        return Err(Error::Precondition("inversion needs a uniform t-grid".into()));
    }
    let taper = |t: f64| match window {
        Window::None => 1.0,
        Window::Gaussian { s } => (-t * t / (2.0 * s * s)).exp(),
    };
    if let Window::Gaussian { s } = window {
        if !(s > 0.0) {
            return Err(Error::Invalid(format!("window width must be positive, got {s}")));
        }
    }
    let edge = (cf.values[0] * taper(t0)).norm().max((cf.values[n - 1] * taper(t1)).norm());
    if edge >= INVERSION_DECAY {
        return Err(Error::Precondition(format!(
            "characteristic function has |φ| = {edge:e} at the grid ends; extend the grid or apply a window"
        )));
    }
    let tapered: Vec<C64> = cf.iter().map(|(t, v)| v * taper(t)).collect();
    let results: Vec<C64> = lambdas
        .par_iter()
        .map(|&l| {
            let sum: C64 = tapered
                .iter()
                .zip(&cf.ts)
                .enumerate()
                .map(|(k, (v, &t))| {
                    let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
                    w * v * (-I * t * l).exp()
                })
                .sum();
            sum * dt / (2.0 * PI)
        })
        .collect();
    Ok(DensityInversion {
        samples: lambdas.iter().copied().zip(results.iter().map(|z| z.re)).collect(),
        imaginary_residual: results.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
    })
}
