//! Finite realizations of the position and momentum operators on L²(ℝ), with ħ = 1.
//!
//! Two discretizations are provided: the truncated number basis `e_0..e_{n_max}` and a
//! periodic uniform grid with trigonometric differentiation. Operator identities that
//! involve the ladder operators are only expected on the leading interior block of a
//! truncation, since `a†` maps `e_{n_max}` out of the truncated space.

use std::f64::consts::{PI, SQRT_2};
use std::str::FromStr;

use crate::closed_forms::stirling2;
use crate::error::{Error, Result};
use crate::linalg::{decompose, max_abs, real, CMatrix, HermitianOperator, StateVector, C64, I};

/// Truncated number basis with ladder operators `a|n> = √n |n-1>`.
#[derive(Clone, Debug)]
pub struct FockTruncation {
    n_max: usize,
    x: HermitianOperator,
    p: HermitianOperator,
    a: CMatrix,
    adag: CMatrix,
    vacuum: StateVector,
}

pub fn make_fock(n_max: usize) -> Result<FockTruncation> {
    if n_max < 2 {
        return Err(Error::Invalid(format!("Fock truncation needs n_max >= 2, got {n_max}")));
    }
    let dim = n_max + 1;
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = real((n as f64).sqrt());
    }
    let adag = a.adjoint();
    let x = HermitianOperator::new((&a + &adag) * real(1.0 / SQRT_2))?.with_label(format!("fock({n_max}):X"));
    let p = HermitianOperator::new((&a - &adag) * (-I / SQRT_2))?.with_label(format!("fock({n_max}):P"));
    Ok(FockTruncation {
        n_max,
        x,
        p,
        a,
        adag,
        vacuum: StateVector::basis(dim, 0)?,
    })
}

impl FockTruncation {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn adag(&self) -> &CMatrix {
        &self.adag
    }
}

/// Uniform periodic grid on `[-x_max, x_max)` with spectral differentiation.
#[derive(Clone, Debug)]
pub struct GridLine {
    n_points: usize,
    x_min: f64,
    x_max: f64,
    abscissae: Vec<f64>,
    x: HermitianOperator,
    p: HermitianOperator,
    vacuum: StateVector,
}

/// Builds the grid. `P = -i D` where `D_jk = (π / 2x_max) (-1)^{j-k} cot(π (j-k) / n)`
/// is real antisymmetric, so `P` is Hermitian exactly.
pub fn make_grid(n_points: usize, x_max: f64) -> Result<GridLine> {
    if n_points < 16 || !n_points.is_multiple_of(2) {
        return Err(Error::Invalid(format!("grid needs an even number of points >= 16, got {n_points}")));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::Invalid(format!("grid half-width must be positive, got {x_max}")));
    }
    let n = n_points;
    let h = 2.0 * x_max / n as f64;
    let abscissae: Vec<f64> = (0..n).map(|j| -x_max + j as f64 * h).collect();
    let x = HermitianOperator::new(CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        abscissae.iter().map(|&v| real(v)),
    )))?
    .with_label(format!("grid({n_points},{x_max}):X"));

    let scale = PI / (2.0 * x_max);
    let d = CMatrix::from_fn(n, n, |j, k| {
        if j == k {
            return real(0.0);
        }
        let diff = j as i64 - k as i64;
        let sign = if diff.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        real(scale * sign / (PI * diff as f64 / n as f64).tan())
    });
    let p = HermitianOperator::new(d * (-I))?.with_label(format!("grid({n_points},{x_max}):P"));

    let samples = abscissae.iter().map(|&v| real(PI.powf(-0.25) * (-0.5 * v * v).exp()));
    let vacuum = StateVector::normalized(nalgebra::DVector::from_iterator(n, samples))?;
    Ok(GridLine {
        n_points,
        x_min: -x_max,
        x_max,
        abscissae,
        x,
        p,
        vacuum,
    })
}

impl GridLine {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn step(&self) -> f64 {
        2.0 * self.x_max / self.n_points as f64
    }
}

/// Common view of the two discretizations.
pub trait LineRealization {
    fn x(&self) -> &HermitianOperator;
    fn p(&self) -> &HermitianOperator;
    fn vacuum(&self) -> &StateVector;
    fn describe(&self) -> String;

    /// `(a, a†)`; by default `((X + iP)/√2, (X - iP)/√2)`.
    fn ladder(&self) -> (CMatrix, CMatrix) {
        let x = self.x().entries();
        let p = self.p().entries();
        let s = real(1.0 / SQRT_2);
        ((x + p * I) * s, (x - p * I) * s)
    }
}

impl LineRealization for FockTruncation {
    fn x(&self) -> &HermitianOperator {
        &self.x
    }

    fn p(&self) -> &HermitianOperator {
        &self.p
    }

    fn vacuum(&self) -> &StateVector {
        &self.vacuum
    }

    fn describe(&self) -> String {
        format!("fock(n_max={})", self.n_max)
    }

    fn ladder(&self) -> (CMatrix, CMatrix) {
        (self.a.clone(), self.adag.clone())
    }
}

impl LineRealization for GridLine {
    fn x(&self) -> &HermitianOperator {
        &self.x
    }

    fn p(&self) -> &HermitianOperator {
        &self.p
    }

    fn vacuum(&self) -> &StateVector {
        &self.vacuum
    }

    fn describe(&self) -> String {
        format!("grid(n_points={}, x_max={})", self.n_points, self.x_max)
    }
}

/// Composite observables built from `X` and `P`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XpMode {
    X,
    P,
    XPlusP,
    XpPlusPx,
    /// `a X² + b P²`
    Quad(f64, f64),
    /// `K+ + K- + K0 = (a†² + a²)/2 + (a a† + a† a)/4`
    Su11H,
}

impl FromStr for XpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "X" => return Ok(XpMode::X),
            "P" => return Ok(XpMode::P),
            "X+P" => return Ok(XpMode::XPlusP),
            "XP+PX" => return Ok(XpMode::XpPlusPx),
            "su11-H" | "su11_H" => return Ok(XpMode::Su11H),
            _ => {}
        }
        let inner = s
            .strip_prefix("quad(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Unknown(format!("line observable '{s}'")))?;
        let parts: Vec<&str> = inner.split(',').collect();
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("bad coefficient '{t}' in '{s}'")))
        };
        match parts.as_slice() {
            [a, b] => Ok(XpMode::Quad(parse(a)?, parse(b)?)),
            _ => Err(Error::Invalid(format!("quad needs two coefficients: '{s}'"))),
        }
    }
}

impl std::fmt::Display for XpMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XpMode::X => write!(f, "X"),
            XpMode::P => write!(f, "P"),
            XpMode::XPlusP => write!(f, "X+P"),
            XpMode::XpPlusPx => write!(f, "XP+PX"),
            XpMode::Quad(a, b) => write!(f, "quad({a},{b})"),
            XpMode::Su11H => write!(f, "su11-H"),
        }
    }
}

pub fn observable_xp(mode: XpMode, space: &dyn LineRealization) -> Result<HermitianOperator> {
    let x = space.x().entries();
    let p = space.p().entries();
    let m = match mode {
        XpMode::X => x.clone(),
        XpMode::P => p.clone(),
        XpMode::XPlusP => x + p,
        XpMode::XpPlusPx => {
            let xp = x * p;
            &xp + xp.adjoint()
        }
        XpMode::Quad(a, b) => {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::Invalid("quad coefficients must be finite reals".into()));
            }
            x * x * real(a) + p * p * real(b)
        }
        XpMode::Su11H => su11_sum(&space.ladder()),
    };
    Ok(HermitianOperator::new(m)?.with_label(format!("{}:{mode}", space.describe())))
}

fn su11_sum((a, ad): &(CMatrix, CMatrix)) -> CMatrix {
    (ad * ad + a * a) * real(0.5) + (a * ad + ad * a) * real(0.25)
}

/// Largest entry modulus of the leading `interior x interior` block.
pub fn interior_residual(m: &CMatrix, interior: usize) -> f64 {
    let k = interior.min(m.nrows());
    max_abs(&m.view((0, 0), (k, k)).into_owned())
}

fn check_interior(fock: &FockTruncation, interior: usize) -> Result<()> {
    if interior == 0 || interior > fock.dim() {
        return Err(Error::Invalid(format!(
            "interior block {interior} must lie in 1..={}",
            fock.dim()
        )));
    }
    Ok(())
}

/// Residuals of `K+ + K- + K0` against `(3X² - P²)/4` with and without the `I/2` shift.
#[derive(Clone, Copy, Debug)]
pub struct Lemma1Report {
    pub with_half_identity: f64,
    pub without_shift: f64,
}

pub fn verify_lemma1(fock: &FockTruncation, interior: usize) -> Result<Lemma1Report> {
    check_interior(fock, interior)?;
    let k = su11_sum(&fock.ladder());
    let x = fock.x().entries();
    let p = fock.p().entries();
    let quad = (x * x * real(3.0) - p * p) * real(0.25);
    let shifted = &quad + CMatrix::identity(fock.dim(), fock.dim()) * real(0.5);
    Ok(Lemma1Report {
        with_half_identity: interior_residual(&(&k - shifted), interior),
        without_shift: interior_residual(&(&k - quad), interior),
    })
}

/// Interior residuals of the three exponential commutation identities.
#[derive(Clone, Copy, Debug)]
pub struct Lemma2Report {
    /// `[e^{bX²}, XP] - 2ib X² e^{bX²}`
    pub residual_21: f64,
    /// `e^{ibXP} P² - e^{-2b} P² e^{ibXP}`
    pub residual_22: f64,
    /// `[e^{bX²}, P²] - (2b - 4b²X² + 4ib XP) e^{bX²}`
    pub residual_23: f64,
    /// Exponent size that the conditioning guard compared against [`LEMMA2_GUARD`].
    pub guard: f64,
}

impl Lemma2Report {
    pub fn max(&self) -> f64 {
        self.residual_21.max(self.residual_22).max(self.residual_23)
    }
}

/// Largest exponent admitted on the interior block before the exponentials are deemed ill-conditioned.
pub const LEMMA2_GUARD: f64 = 5.0;

/// Checks the identities with every exponential computed by spectral mapping.
///
/// `e^{ibXP}` is evaluated as `e^{-b/2} e^{ib(XP+PX)/2}`, which uses `XP = (XP + PX)/2 + i/2`.
/// The guard bounds the growing exponents on the interior block:
/// `max(Re b, 0) λmax(X²)` and `|Im b| ρ(XP + PX) / 2`.
pub fn verify_lemma2(fock: &FockTruncation, b: C64, interior: usize) -> Result<Lemma2Report> {
    check_interior(fock, interior)?;
    let x = fock.x().entries();
    let p = fock.p().entries();
    let n = fock.dim();
    let x2 = HermitianOperator::new(x * x)?;
    let xp = x * p;
    let sym = HermitianOperator::new(&xp + xp.adjoint())?;
    let p2 = p * p;

    let interior_op = |m: &HermitianOperator| {
        HermitianOperator::new(m.entries().view((0, 0), (interior, interior)).into_owned()).and_then(|h| decompose(&h))
    };
    let x2_int = interior_op(&x2)?;
    let sym_int = interior_op(&sym)?;
    let guard = (b.re.max(0.0) * x2_int.eigenvalues().last().copied().unwrap_or(0.0))
        .max(b.im.abs() * sym_int.spectral_norm() / 2.0);
    if guard > LEMMA2_GUARD {
        return Err(Error::Conditioning(format!(
            "b = {b} gives interior exponent {guard:.3} > {LEMMA2_GUARD}"
        )));
    }

    let ebx2 = decompose(&x2)?.map(|l| (b * l).exp());
    let lhs21 = &ebx2 * &xp - &xp * &ebx2;
    let rhs21 = x * x * &ebx2 * (2.0 * I * b);
    let residual_21 = interior_residual(&(lhs21 - rhs21), interior);

    let eixp = decompose(&sym)?.map(|l| (-b / 2.0 + I * b * l / 2.0).exp());
    let lhs22 = &eixp * &p2;
    let rhs22 = &p2 * &eixp * (-2.0 * b).exp();
    let residual_22 = interior_residual(&(lhs22 - rhs22), interior);

    let lhs23 = &ebx2 * &p2 - &p2 * &ebx2;
    let coef = CMatrix::identity(n, n) * (2.0 * b) - x * x * (4.0 * b * b) + &xp * (4.0 * I * b);
    let rhs23 = coef * &ebx2;
    let residual_23 = interior_residual(&(lhs23 - rhs23), interior);

    Ok(Lemma2Report {
        residual_21,
        residual_22,
        residual_23,
        guard,
    })
}

/// Interior residual of `(XP)^n - Σ_k (-1)^{n-k} i^{n-k} S(n,k) X^k P^k`.
pub fn verify_lemma4(fock: &FockTruncation, n: usize, interior: usize) -> Result<f64> {
    if !(1..=5).contains(&n) {
        return Err(Error::Precondition(format!("power n = {n} must lie in 1..=5")));
    }
    check_interior(fock, interior)?;
    let x = fock.x().entries();
    let p = fock.p().entries();
    let dim = fock.dim();
    let xp = x * p;
    let mut lhs = CMatrix::identity(dim, dim);
    for _ in 0..n {
        lhs = &lhs * &xp;
    }
    let mut rhs = CMatrix::zeros(dim, dim);
    let mut xk = CMatrix::identity(dim, dim);
    let mut pk = CMatrix::identity(dim, dim);
    for k in 1..=n {
        xk = &xk * x;
        pk = &pk * p;
        let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        let coef = I.powu((n - k) as u32) * (sign * stirling2(n as u32, k as u32)? as f64);
        rhs += &xk * &pk * coef;
    }
    Ok(interior_residual(&(lhs - rhs), interior))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;

    #[test]
    fn small_fock_entries() {
        let f = make_fock(2).unwrap();
        let s = 1.0 / SQRT_2;
        assert!((f.x().entries()[(0, 1)] - real(s)).norm() < 1e-16);
        assert!((f.x().entries()[(1, 0)] - real(s)).norm() < 1e-16);
        let av: CVector = f.a() * f.vacuum().amplitudes();
        assert_eq!(av.norm(), 0.0);
        assert!(make_fock(1).is_err());
    }

    #[test]
    fn fock_ladder_invariants() {
        let f = make_fock(30).unwrap();
        let s = real(1.0 / SQRT_2);
        let x = f.x().entries();
        let p = f.p().entries();
        assert!(max_abs(&((x + p * I) * s - f.a())) < 1e-15);
        assert!(max_abs(&((x - p * I) * s - f.adag())) < 1e-15);
        let comm = f.a() * f.adag() - f.adag() * f.a() - CMatrix::identity(31, 31);
        assert!(interior_residual(&comm, 30) < 1e-12);
        let heis = x * p - p * x - CMatrix::identity(31, 31) * I;
        assert!(interior_residual(&heis, 30) < 1e-10);
    }

    #[test]
    fn vacuum_second_moment() {
        // Oracle: ∫ x² π^{-1/2} e^{-x²} dx by trapezoid on a wide grid.
        let h = 1e-3;
        let oracle: f64 = (-12000..=12000)
            .map(|k| {
                let x = k as f64 * h;
                x * x * (-x * x).exp() / PI.sqrt() * h
            })
            .sum();
        let f = make_fock(40).unwrap();
        let x2 = f.x().entries() * f.x().entries();
        let v = f.vacuum().amplitudes();
        let m = v.dotc(&(x2 * v)).re;
        assert!((m - 0.5).abs() < 1e-14);
        assert!((m - oracle).abs() < 1e-12);
    }

    #[test]
    fn grid_derivative_of_gaussian() {
        let g = make_grid(256, 8.0).unwrap();
        let f = CVector::from_iterator(256, g.abscissae().iter().map(|&x| real((-0.5 * x * x).exp())));
        let pf = g.p().apply(&f);
        let err = g
            .abscissae()
            .iter()
            .zip(pf.iter())
            .map(|(&x, v)| (v - (-I) * (-x * (-0.5 * x * x).exp())).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-8, "{err}");
    }

    #[test]
    fn grid_vacuum_and_x_action() {
        let g = make_grid(64, 8.0).unwrap();
        assert!((g.vacuum().amplitudes().norm() - 1.0).abs() < 1e-12);
        let xv = g.x().apply(g.vacuum().amplitudes());
        for (j, &x) in g.abscissae().iter().enumerate() {
            assert_eq!(xv[j], g.vacuum().amplitudes()[j] * x);
        }
        assert!(make_grid(15, 8.0).is_err());
        assert!(make_grid(64, 0.0).is_err());
    }

    #[test]
    fn parity_of_vacuum_moments() {
        let f = make_fock(40).unwrap();
        let g = make_grid(128, 10.0).unwrap();
        for (x, p, v) in [
            (f.x(), f.p(), f.vacuum()),
            (g.x(), g.p(), g.vacuum()),
        ] {
            assert!(x.expectation(v).abs() < 1e-10);
            assert!(p.expectation(v).abs() < 1e-10);
        }
    }

    #[test]
    fn xp_plus_px_is_ladder_form() {
        let f = make_fock(60).unwrap();
        let m = observable_xp(XpMode::XpPlusPx, &f).unwrap();
        let (a, ad) = f.ladder();
        let expect = (&ad * &ad - &a * &a) * I;
        assert!(interior_residual(&(m.entries() - expect), 30) < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_ground_energy_on_grid() {
        let g = make_grid(128, 10.0).unwrap();
        let h = observable_xp(XpMode::Quad(1.0, 1.0), &g).unwrap();
        assert!((h.expectation(g.vacuum()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn su11_sum_matches_ladder_definition() {
        let f = make_fock(20).unwrap();
        let m = observable_xp(XpMode::Su11H, &f).unwrap();
        let (a, ad) = f.ladder();
        let expect = (&ad * &ad + &a * &a) * real(0.5) + (&a * &ad + &ad * &a) * real(0.25);
        assert!(max_abs(&(m.entries() - expect)) < 1e-14);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("X+P".parse::<XpMode>().unwrap(), XpMode::XPlusP);
        assert_eq!("quad(0.75,-0.25)".parse::<XpMode>().unwrap(), XpMode::Quad(0.75, -0.25));
        assert!("Y".parse::<XpMode>().is_err());
    }

    #[test]
    fn lemma2_at_zero_is_trivial() {
        let f = make_fock(20).unwrap();
        let r = verify_lemma2(&f, C64::new(0.0, 0.0), 10).unwrap();
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn lemma2_guard_rejects_large_b() {
        let f = make_fock(40).unwrap();
        assert!(matches!(verify_lemma2(&f, C64::new(1.0, 0.0), 20), Err(Error::Conditioning(_))));
    }

    #[test]
    fn lemma4_small_powers() {
        let f = make_fock(100).unwrap();
        assert_eq!(verify_lemma4(&f, 1, 40).unwrap(), 0.0);
        assert!(verify_lemma4(&f, 2, 40).unwrap() <= 1e-8);
        assert!(verify_lemma4(&f, 3, 40).unwrap() <= 1e-8);
        assert!(verify_lemma4(&f, 6, 40).is_err());
    }
}
