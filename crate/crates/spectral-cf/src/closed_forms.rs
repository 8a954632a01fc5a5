//! Analytic reference functions: vacuum characteristic functions, densities and
//! distribution functions, the splitting functions of the quadratic disentangling
//! formula, and Stirling numbers of the second kind.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{real, C64, I};
use crate::quadrature::{integrate, Quadrature};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Largest `n` accepted by [`stirling2`]; every `S(n, k)` with `n <= 40` fits in a `u128`.
pub const STIRLING_MAX_N: u32 = 40;

/// Stirling number of the second kind by the exact recurrence `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2(n: u32, k: u32) -> Result<u128> {
    if k > n || n > STIRLING_MAX_N {
        return Err(Error::Precondition(format!(
            "S({n}, {k}) needs 0 <= k <= n <= {STIRLING_MAX_N}"
        )));
    }
    let (n, k) = (n as usize, k as usize);
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    Ok(row[k])
}

/// `(tanh z, cosh z)`, using real or trigonometric evaluation on the two axes.
fn tanh_cosh(z: C64) -> (C64, C64) {
    if z.im == 0.0 {
        (real(z.re.tanh()), real(z.re.cosh()))
    } else if z.re == 0.0 {
        (I * z.im.tan(), real(z.im.cos()))
    } else {
        (z.tanh(), z.cosh())
    }
}

/// Values `(p, q, r)` of the splitting functions at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplittingValues {
    pub p: C64,
    pub q: C64,
    pub r: C64,
}

/// Splitting functions of `e^{s(aX² + bP²)} = e^{p/2} e^{qX²} e^{ipXP} e^{rP²}`.
///
/// With `g = √(ab)`:
/// `q = a tanh(2gs) / 2g`, `r = b tanh(2gs) / 2g`, `p = -log cosh(2gs)`.
/// Each expression is even in `g`, so the result does not depend on the square-root
/// branch, and it solves `p' = -4bq`, `q' = a - 4bq²`, `r' = b e^{2p}` with zero
/// initial values. For `a, b > 0` this agrees with `q = ½√(a/b) tanh(2√(ab)s)`; for
/// `ab < 0` the principal-branch reading of that formula has the opposite sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplittingFunctions {
    pub a: f64,
    pub b: f64,
}

impl SplittingFunctions {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 || b == 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(Error::Precondition(format!("splitting needs finite nonzero a, b (got {a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub fn eval(&self, s: C64) -> Result<SplittingValues> {
        let g = real(self.a * self.b).sqrt();
        let z = 2.0 * g * s;
        if s == real(0.0) {
            return Ok(SplittingValues {
                p: real(0.0),
                q: real(0.0),
                r: real(0.0),
            });
        }
        let (th, ch) = tanh_cosh(z);
        if ch.norm() < 1e-12 {
            return Err(Error::Pole(format!("{s}")));
        }
        let ratio = th / (2.0 * g);
        Ok(SplittingValues {
            p: -ch.ln(),
            q: ratio * self.a,
            r: ratio * self.b,
        })
    }

    pub fn p(&self, s: C64) -> Result<C64> {
        Ok(self.eval(s)?.p)
    }

    pub fn q(&self, s: C64) -> Result<C64> {
        Ok(self.eval(s)?.q)
    }

    pub fn r(&self, s: C64) -> Result<C64> {
        Ok(self.eval(s)?.r)
    }
}

pub fn splitting(a: f64, b: f64, s: C64) -> Result<SplittingValues> {
    SplittingFunctions::new(a, b)?.eval(s)
}

/// The splitting functions exactly as printed: `q = ½√(a/b) tanh(2√(ab)s)`,
/// `r = ½√(b/a) tanh(2√(ab)s)`, `p = log sech(2√(ab)s)`, principal branches throughout.
pub fn splitting_printed(a: f64, b: f64, s: C64) -> Result<SplittingValues> {
    SplittingFunctions::new(a, b)?;
    let g = real(a * b).sqrt();
    let (th, ch) = tanh_cosh(2.0 * g * s);
    if ch.norm() < 1e-12 {
        return Err(Error::Pole(format!("{s}")));
    }
    Ok(SplittingValues {
        p: ch.inv().ln(),
        q: real(a / b).sqrt() * th * 0.5,
        r: real(b / a).sqrt() * th * 0.5,
    })
}

/// Square root of `f(t)` on the branch reached by following `f` continuously from `t = 0`,
/// starting from the principal root of `f(0)`.
///
/// The path is refined until every step changes the argument by less than π/2.
pub fn tracked_sqrt(f: impl Fn(f64) -> Result<C64>, t: f64) -> Result<C64> {
    let z0 = f(0.0)?;
    if z0.norm() == 0.0 {
        return Err(Error::Branch {
            t: 0.0,
            reason: "radicand vanishes at the origin".into(),
        });
    }
    if t == 0.0 {
        return Ok(z0.sqrt());
    }
    let mut steps = 64usize.max((4.0 * t.abs()).ceil() as usize);
    while steps <= 1 << 22 {
        let mut arg = z0.arg();
        let mut prev = z0;
        let mut refined = true;
        for k in 1..=steps {
            let s = t * k as f64 / steps as f64;
            let z = f(s)?;
            if z.norm() < 1e-300 || !z.norm().is_finite() {
                return Err(Error::Branch {
                    t: s,
                    reason: format!("radicand {z} vanishes or diverges on the path"),
                });
            }
            let d = (z / prev).arg();
            if d.abs() >= PI / 2.0 {
                refined = false;
                break;
            }
            arg += d;
            prev = z;
        }
        if refined {
            return Ok(C64::from_polar(prev.norm().sqrt(), arg / 2.0));
        }
        steps *= 4;
    }
    Err(Error::Branch {
        t,
        reason: "argument jumps by at least π/2 at every resolution".into(),
    })
}

fn check_wtf_args(a: f64, b: f64) -> Result<()> {
    if !(a * b < 0.0) {
        return Err(Error::Precondition(format!(
            "the unitary regime needs ab < 0 (got a = {a}, b = {b})"
        )));
    }
    Ok(())
}

/// The disentangling vacuum formula as printed, `√2 e^{p/2} / √(p² + (2q-1)(2r-1))`,
/// with the printed splitting functions at `s = it`. Evaluates to `√2` at `t = 0`.
pub fn theorem_wtf_cf_printed(a: f64, b: f64, t: f64) -> Result<C64> {
    check_wtf_args(a, b)?;
    let s = |t: f64| C64::new(0.0, t);
    let v = splitting_printed(a, b, s(t))?;
    let root = tracked_sqrt(
        |x| {
            let w = splitting_printed(a, b, s(x))?;
            Ok(w.p * w.p + (2.0 * w.q - 1.0) * (2.0 * w.r - 1.0))
        },
        t,
    )?;
    Ok(SQRT_2 * (v.p / 2.0).exp() / root)
}

/// The printed formula divided by its value `√2` at the origin.
pub fn theorem_wtf_cf(a: f64, b: f64, t: f64) -> Result<C64> {
    Ok(theorem_wtf_cf_printed(a, b, t)? / SQRT_2)
}

/// `√2 e^{p/2} / √(e^{2p} + (2q-1)(2r-1))` with the branch-free splitting functions.
///
/// This is what the Gaussian integral over the vacuum produces; it equals
/// [`quadratic_vacuum_cf`].
pub fn theorem_wtf_cf_corrected(a: f64, b: f64, t: f64) -> Result<C64> {
    check_wtf_args(a, b)?;
    let sf = SplittingFunctions::new(a, b)?;
    let s = |t: f64| C64::new(0.0, t);
    let v = sf.eval(s(t))?;
    let root = tracked_sqrt(
        |x| {
            let w = sf.eval(s(x))?;
            Ok((2.0 * w.p).exp() + (2.0 * w.q - 1.0) * (2.0 * w.r - 1.0))
        },
        t,
    )?;
    Ok(SQRT_2 * (v.p / 2.0).exp() / root)
}

/// `<Φ, e^{it(aX² + bP²)} Φ> = (C(t) - i(a + b) S(t))^{-1/2}` for real `a, b`, where
/// `C = cos ωt`, `S = sin(ωt)/ω` with `ω = 2√(ab)` (hyperbolic for `ab < 0`).
pub fn quadratic_vacuum_cf(a: f64, b: f64, t: f64) -> Result<C64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Invalid("coefficients must be finite".into()));
    }
    let radicand = |t: f64| -> Result<C64> {
        let ab = a * b;
        let (c, s) = if ab > 0.0 {
            let w = 2.0 * ab.sqrt();
            ((w * t).cos(), (w * t).sin() / w)
        } else if ab < 0.0 {
            let w = 2.0 * (-ab).sqrt();
            ((w * t).cosh(), (w * t).sinh() / w)
        } else {
            (1.0, t)
        };
        Ok(C64::new(c, -(a + b) * s))
    };
    Ok(tracked_sqrt(radicand, t)?.inv())
}

/// The disentangled vacuum characteristic function of `K+ + K- + K0 = (3X² - P²)/4`.
pub fn su11_boson_vacuum(t: f64) -> C64 {
    let w = SQRT_3 / 2.0;
    let d = C64::new((w * t).cosh(), -(w * t).sinh() / SQRT_3);
    // The radicand has positive real part for all t, so the principal root is the continuous one.
    d.sqrt().inv()
}

/// The printed closed form for the same quantity:
/// `(6 sech / (3 + 3 log² sech - 3 tanh² + 4i√3 tanh))^{1/2}` at `√3 t / 2`.
pub fn su11_boson_vacuum_printed(t: f64) -> Result<C64> {
    let radicand = |t: f64| -> Result<C64> {
        let x = SQRT_3 * t / 2.0;
        let sech = 1.0 / x.cosh();
        let th = x.tanh();
        let l = sech.ln();
        let den = C64::new(3.0 + 3.0 * l * l - 3.0 * th * th, 4.0 * SQRT_3 * th);
        Ok(real(6.0 * sech) / den)
    };
    tracked_sqrt(radicand, t)
}

/// Kind of a registered closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    /// A characteristic function: `f(0) = 1`, `|f| <= 1`, `f(-t) = conj f(t)`.
    CharacteristicFunction,
    /// A formula kept verbatim although it is not normalized as a characteristic function.
    Printed,
    Density,
    Cdf,
}

/// A registered analytic reference.
#[derive(Clone, Copy)]
pub struct ClosedForm {
    pub id: &'static str,
    pub kind: FormKind,
    pub validity: (f64, f64),
    pub provenance: &'static str,
    eval: fn(f64) -> Result<C64>,
}

impl std::fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosedForm")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("validity", &self.validity)
            .finish()
    }
}

impl ClosedForm {
    pub fn evaluate(&self, x: f64) -> Result<C64> {
        if !(self.validity.0..=self.validity.1).contains(&x) {
            return Err(Error::Precondition(format!(
                "{} is registered on [{}, {}], got {x}",
                self.id, self.validity.0, self.validity.1
            )));
        }
        (self.eval)(x)
    }

    /// Registration check: `f(0) = 1` for characteristic functions, unit mass for densities.
    pub fn check(&self) -> Result<()> {
        match self.kind {
            FormKind::CharacteristicFunction => {
                let f0 = self.evaluate(0.0)?;
                if (f0 - 1.0).norm() > 1e-14 {
                    return Err(Error::Numerical(format!("{}: f(0) = {f0}", self.id)));
                }
            }
            FormKind::Density => {
                let (lo, hi) = self.validity;
                let n = 200_001;
                let h = (hi - lo) / (n - 1) as f64;
                let vals = (0..n)
                    .map(|k| self.evaluate(lo + k as f64 * h).map(|z| z.re))
                    .collect::<Result<Vec<f64>>>()?;
                let mass = integrate(&vals, h, Quadrature::Simpson);
                if (mass - 1.0).abs() > 1e-8 {
                    return Err(Error::Numerical(format!("{}: total mass {mass}", self.id)));
                }
            }
            FormKind::Printed | FormKind::Cdf => {}
        }
        Ok(())
    }
}

fn ok(z: C64) -> Result<C64> {
    Ok(z)
}

fn eit(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

const ALL_T: (f64, f64) = (f64::NEG_INFINITY, f64::INFINITY);
const DENSITY_WINDOW: (f64, f64) = (-12.0, 12.0);

static REGISTRY: &[ClosedForm] = &[
    ClosedForm {
        id: "sl2-H-vacuum",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "sl(2,R) observable R - Delta + rho in the vacuum (0, 1)",
        eval: |t| ok(C64::new((SQRT_2 * t).cos(), -(SQRT_2 * t).sin() / SQRT_2)),
    },
    ClosedForm {
        id: "sl2-H0-vacuum",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "sl(2,R) observable R - Delta in the vacuum (0, 1)",
        eval: |t| ok(real(t.cos())),
    },
    ClosedForm {
        id: "su11-H-vacuum",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "su(1,1) observable i(K1 + K2) + K0 in the state (0, 1)",
        eval: |t| ok(C64::new((SQRT_3 * t / 2.0).cos(), -(SQRT_3 * t / 2.0).sin() / SQRT_3)),
    },
    ClosedForm {
        id: "su11-H-state-10",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "su(1,1) observable i(K1 + K2) + K0 in the state (1, 0)",
        eval: |t| ok(C64::new((SQRT_3 * t / 2.0).cos(), (SQRT_3 * t / 2.0).sin() / SQRT_3)),
    },
    ClosedForm {
        id: "casimir-so3",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "so(3) Casimir element Lx² + Ly² + Lz² = -2I in any state",
        eval: |t| ok(eit(-2.0 * t)),
    },
    ClosedForm {
        id: "gaussian-X",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "position operator in the vacuum; Fourier transform of the normal law with variance 1/2",
        eval: |t| ok(real((-t * t / 4.0).exp())),
    },
    ClosedForm {
        id: "gaussian-P",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "momentum operator in the vacuum; Fourier transform of the normal law with variance 1/2",
        eval: |t| ok(real((-t * t / 4.0).exp())),
    },
    ClosedForm {
        id: "gaussian-X-printed",
        kind: FormKind::Printed,
        validity: ALL_T,
        provenance: "position operator in the vacuum, characteristic function as printed: √2 e^{-t²/2}",
        eval: |t| ok(real(SQRT_2 * (-t * t / 2.0).exp())),
    },
    ClosedForm {
        id: "gaussian-P-printed",
        kind: FormKind::Printed,
        validity: ALL_T,
        provenance: "momentum operator in the vacuum, characteristic function as printed: √2 e^{-t²/2}",
        eval: |t| ok(real(SQRT_2 * (-t * t / 2.0).exp())),
    },
    ClosedForm {
        id: "gaussian-X+P",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "X + P in the vacuum: standard normal law",
        eval: |t| ok(real((-t * t / 2.0).exp())),
    },
    ClosedForm {
        id: "xp-px-vacuum",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "XP + PX in the vacuum: (sech 2t)^{1/2}, the dilation generator at su(1,1) weight 1/4",
        eval: |t| ok(real((1.0 / (2.0 * t).cosh()).sqrt())),
    },
    ClosedForm {
        id: "xp-px-vacuum-printed",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "XP + PX in the vacuum as printed: (sech t)^{1/2}",
        eval: |t| ok(real((1.0 / t.cosh()).sqrt())),
    },
    ClosedForm {
        id: "su11-boson-vacuum",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "K+ + K- + K0 = (3X² - P²)/4 in the vacuum: (cosh(√3t/2) - (i/√3) sinh(√3t/2))^{-1/2}",
        eval: |t| ok(su11_boson_vacuum(t)),
    },
    ClosedForm {
        id: "su11-boson-vacuum-printed",
        kind: FormKind::Printed,
        validity: ALL_T,
        provenance: "K+ + K- + K0 in the vacuum, sech-formula as printed (value √2 at t = 0)",
        eval: su11_boson_vacuum_printed,
    },
    ClosedForm {
        id: "su11-boson-vacuum-printed-normalized",
        kind: FormKind::CharacteristicFunction,
        validity: ALL_T,
        provenance: "K+ + K- + K0 in the vacuum, printed sech-formula divided by its value at t = 0",
        eval: |t| Ok(su11_boson_vacuum_printed(t)? / SQRT_2),
    },
    ClosedForm {
        id: "gaussian-X-density",
        kind: FormKind::Density,
        validity: DENSITY_WINDOW,
        provenance: "vacuum density of X and of P: π^{-1/2} e^{-λ²}",
        eval: |l| ok(real((-l * l).exp() / PI.sqrt())),
    },
    ClosedForm {
        id: "gaussian-X+P-density",
        kind: FormKind::Density,
        validity: DENSITY_WINDOW,
        provenance: "vacuum density of X + P: (2π)^{-1/2} e^{-λ²/2}",
        eval: |l| ok(real((-l * l / 2.0).exp() / (2.0 * PI).sqrt())),
    },
    ClosedForm {
        id: "gaussian-X-cdf",
        kind: FormKind::Cdf,
        validity: ALL_T,
        provenance: "vacuum distribution function of X and of P: π^{-1/2} ∫_{-∞}^λ e^{-s²} ds",
        eval: |l| ok(real(0.5 * (1.0 + libm::erf(l)))),
    },
    ClosedForm {
        id: "gaussian-X+P-cdf",
        kind: FormKind::Cdf,
        validity: ALL_T,
        provenance: "vacuum distribution function of X + P: (2π)^{-1/2} ∫_{-∞}^λ e^{-s²/2} ds",
        eval: |l| ok(real(0.5 * (1.0 + libm::erf(l / SQRT_2)))),
    },
];

/// All registered forms, in a stable order.
pub fn registry() -> &'static [ClosedForm] {
    REGISTRY
}

pub fn closed_form(id: &str) -> Result<&'static ClosedForm> {
    REGISTRY
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::Unknown(id.to_string()))
}

pub fn cf_reference(id: &str, t: f64) -> Result<C64> {
    closed_form(id)?.evaluate(t)
}

/// Parametric characteristic functions of the two- and three-level observables in a state `u`,
/// in the displayed trigonometric form.
pub mod displays {
    use super::*;

    /// `R - Δ + ρ` for real `(a, b)`: `cos √2t + i (a² - b² + 2ab)/√2 sin √2t`.
    pub fn sl2_h(a: f64, b: f64, t: f64) -> C64 {
        let w = SQRT_2 * t;
        C64::new(w.cos(), (a * a - b * b + 2.0 * a * b) / SQRT_2 * w.sin())
    }

    /// Pauli matrix `σ_j` in the state `(a, b)`.
    pub fn pauli(j: usize, a: C64, b: C64, t: f64) -> C64 {
        match j {
            1 => t.cos() + I * (b * a.conj() + a * b.conj()) * t.sin(),
            2 => t.cos() + (b * a.conj() - a * b.conj()) * t.sin(),
            _ => a.norm_sqr() * eit(t) + b.norm_sqr() * eit(-t),
        }
    }

    /// `i(K1 + K2) + K0` in the state `(a, b)`.
    pub fn su11_h(a: C64, b: C64, t: f64) -> C64 {
        let w = SQRT_3 * t / 2.0;
        let coef = C64::new(-1.0, 1.0) / SQRT_3 * b * a.conj()
            + C64::new(1.0, 1.0) / SQRT_3 * a * b.conj()
            + I / SQRT_3 * (a.norm_sqr() - b.norm_sqr());
        coef * w.sin() + w.cos()
    }

    /// `J - I` for real `(a, b, c)`.
    pub fn h3_h(a: f64, b: f64, c: f64, t: f64) -> C64 {
        let s = (a + b + c).powi(2) / 3.0;
        (1.0 - s) * eit(-t) + s * eit(2.0 * t)
    }
}
