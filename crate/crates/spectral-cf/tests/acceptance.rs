//! Acceptance checks, one line per criterion. Reference values are written out here
//! rather than taken from the library's own catalogue.

use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_cf::fock::{make_fock, make_grid, observable_xp, LineRealization, XpMode};
use spectral_cf::lie::{build_generators, build_observable};
use spectral_cf::linalg::{
    charfun_exact, decompose, matrix_exp_it, spectral_measure, CMatrix, CVector, HermitianOperator, StateVector,
};
use spectral_cf::measure::{CfMethod, CharacteristicFunctionTrace};
use spectral_cf::quadrature::{integrate, Quadrature};
use spectral_cf::stone::{invert_cf_to_density, stone_cdf, stone_charfun, Extrapolation, ResolventProbeConfig, Window};

type Res<T> = Result<T, String>;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const SQRT_3: f64 = 1.732_050_807_568_877_2;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

/// Largest deviation of a sampled function from a reference.
fn sup_err(trace: &CharacteristicFunctionTrace, reference: impl Fn(f64) -> C64) -> f64 {
    trace.iter().map(|(t, v)| (v - reference(t)).norm()).fold(0.0, f64::max)
}

struct Line {
    ok: bool,
    detail: String,
}

impl Line {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

/// Collects sub-checks of one criterion.
#[derive(Default)]
struct Checks {
    parts: Vec<(String, bool)>,
}

impl Checks {
    fn err(&mut self, name: &str, err: f64, tol: f64) {
        self.parts.push((format!("{name} {err:.2e}/{tol:.0e}"), err <= tol));
    }

    fn flag(&mut self, name: &str, ok: bool) {
        self.parts.push((name.to_string(), ok));
    }

    fn finish(self, elapsed: Duration, budget: Option<f64>) -> Line {
        let mut ok = self.parts.iter().all(|p| p.1);
        let mut text: Vec<String> = self
            .parts
            .iter()
            .map(|(s, pass)| if *pass { s.clone() } else { format!("{s} [FAILED]") })
            .collect();
        let secs = elapsed.as_secs_f64();
        match budget {
            Some(b) => {
                let in_time = secs < b;
                ok &= in_time;
                text.push(format!("{secs:.2}s (limit {b}s){}", if in_time { "" } else { " [FAILED]" }));
            }
            None => text.push(format!("{secs:.2}s")),
        }
        Line::new(ok, text.join("; "))
    }
}

fn criterion_1() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();
    let h = build_observable("sl2-H").map_err(e)?.matrix;
    let d = decompose(&h).map_err(e)?;
    let ev = d.eigenvalues();
    ck.err("eigenvalues ±√2", (ev[0] + SQRT_2).abs().max((ev[1] - SQRT_2).abs()), 1e-12);

    let u = StateVector::from_real(&[0.0, 1.0]).map_err(e)?;
    let m = spectral_measure(&h, &u).map_err(e)?;
    let want = [(-SQRT_2, (2.0 + SQRT_2) / 4.0), (SQRT_2, (2.0 - SQRT_2) / 4.0)];
    let atom_err = if m.atoms.len() == 2 {
        m.atoms
            .iter()
            .zip(want)
            .map(|(a, (x, w))| (a.location - x).abs().max((a.weight - w).abs()))
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    ck.err("vacuum atoms", atom_err, 1e-12);

    let ts = uniform(-5.0, 5.0, 256);
    let tr = charfun_exact(&h, &u, &ts).map_err(e)?;
    let err = sup_err(&tr, |t| c((SQRT_2 * t).cos(), -(SQRT_2 * t).sin() / SQRT_2));
    ck.err("vacuum cf", err, 1e-12);
    Ok(ck.finish(start.elapsed(), Some(1.0)))
}

fn criterion_2() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();
    let ts = uniform(-5.0, 5.0, 256);
    let (a, b) = (c(0.6, 0.0), c(0.48, 0.64));
    let u = StateVector::from_complex(&[a, b]).map_err(e)?;

    let pauli: [(&str, Box<dyn Fn(f64) -> C64>); 3] = [
        ("sigma1", Box::new(move |t: f64| t.cos() + I * (b * a.conj() + a * b.conj()) * t.sin())),
        ("sigma2", Box::new(move |t: f64| t.cos() + (b * a.conj() - a * b.conj()) * t.sin())),
        ("sigma3", Box::new(move |t: f64| a.norm_sqr() * (I * t).exp() + b.norm_sqr() * (-I * t).exp())),
    ];
    for (j, (name, display)) in pauli.iter().enumerate() {
        let h = build_observable(&format!("pauli-{}", j + 1)).map_err(e)?.matrix;
        let tr = charfun_exact(&h, &u, &ts).map_err(e)?;
        ck.err(&format!("{name} cf"), sup_err(&tr, display), 1e-10);
    }

    let h = build_observable("su11-H").map_err(e)?.matrix;
    let su11 = |a: C64, b: C64, t: f64| {
        let w = SQRT_3 * t / 2.0;
        let coef = c(-1.0, 1.0) / SQRT_3 * b * a.conj()
            + c(1.0, 1.0) / SQRT_3 * a * b.conj()
            + I / SQRT_3 * (a.norm_sqr() - b.norm_sqr());
        coef * w.sin() + w.cos()
    };
    let tr = charfun_exact(&h, &u, &ts).map_err(e)?;
    ck.err("su11 cf (a, b)", sup_err(&tr, |t| su11(a, b, t)), 1e-10);
    for (label, amps, w_plus) in [
        ("(1,0)", [1.0, 0.0], 0.5 * (1.0 + 1.0 / SQRT_3)),
        ("(0,1)", [0.0, 1.0], 0.5 * (1.0 - 1.0 / SQRT_3)),
    ] {
        let v = StateVector::from_real(&amps).map_err(e)?;
        let tr = charfun_exact(&h, &v, &ts).map_err(e)?;
        let sign = amps[0] - amps[1];
        let err = sup_err(&tr, |t| c((SQRT_3 * t / 2.0).cos(), sign * (SQRT_3 * t / 2.0).sin() / SQRT_3));
        ck.err(&format!("su11 cf {label}"), err, 1e-10);
        let m = spectral_measure(&h, &v).map_err(e)?;
        let plus = m.atom_near(SQRT_3 / 2.0, 1e-9).map_or(f64::NAN, |x| x.weight);
        let minus = m.atom_near(-SQRT_3 / 2.0, 1e-9).map_or(f64::NAN, |x| x.weight);
        let err = (plus - w_plus).abs().max((minus - (1.0 - w_plus)).abs());
        ck.err(&format!("su11 atoms {label}"), if err.is_nan() { f64::INFINITY } else { err }, 1e-10);
    }

    let h = build_observable("casimir-so3").map_err(e)?.matrix;
    let v = StateVector::from_real(&[0.48, 0.6, 0.64]).map_err(e)?;
    let tr = charfun_exact(&h, &v, &ts).map_err(e)?;
    ck.err("casimir cf", sup_err(&tr, |t| (-2.0 * I * t).exp()), 1e-10);

    let h = build_observable("h3-H").map_err(e)?.matrix;
    let m = spectral_measure(&h, &v).map_err(e)?;
    let s: f64 = (0.48f64 + 0.6 + 0.64).powi(2) / 3.0;
    let err = match m.atoms.as_slice() {
        [lo, hi] => (lo.location + 1.0)
            .abs()
            .max((hi.location - 2.0).abs())
            .max((lo.weight - (1.0 - s)).abs())
            .max((hi.weight - s).abs()),
        _ => f64::INFINITY,
    };
    ck.err("h3 atoms", err, 1e-10);
    Ok(ck.finish(start.elapsed(), Some(1.0)))
}

fn criterion_3() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    // (set, [(x, y, coefficient, z)]) meaning [x, y] = coefficient z.
    let table: [(&str, &[(&str, &str, C64, &str)]); 5] = [
        ("sl2R", &[("Delta", "R", one, "rho"), ("rho", "R", c(2.0, 0.0), "R"), ("rho", "Delta", c(-2.0, 0.0), "Delta")]),
        (
            "su2-pauli",
            &[("sigma1", "sigma2", c(0.0, 2.0), "sigma3"), ("sigma2", "sigma3", c(0.0, 2.0), "sigma1"), ("sigma3", "sigma1", c(0.0, 2.0), "sigma2")],
        ),
        ("su11-pauli", &[("K1", "K2", -I, "K0"), ("K0", "K1", I, "K2"), ("K2", "K0", I, "K1")]),
        ("so3", &[("Lx", "Ly", one, "Lz"), ("Ly", "Lz", one, "Lx"), ("Lz", "Lx", one, "Ly")]),
        ("h3R", &[("D", "X", one, "h"), ("D", "h", zero, "h"), ("X", "h", zero, "h")]),
    ];
    for (name, rels) in table {
        let set = build_generators(name).map_err(e)?;
        ck.flag(&format!("{name} declares {} brackets", rels.len()), set.relations.len() == rels.len());
        let mut worst: f64 = 0.0;
        for (x, y, k, z) in rels {
            let get = |g: &str| set.generator(g).cloned().ok_or_else(|| format!("{name} has no generator {g}"));
            let (x, y, z) = (get(x)?, get(y)?, get(z)?);
            let residual = &x * &y - &y * &x - z * *k;
            worst = worst.max(residual.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        ck.err(name, worst, 1e-12);
    }
    Ok(ck.finish(start.elapsed(), Some(1.0)))
}

fn criterion_4() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();
    let h = build_observable("sl2-H").map_err(e)?.matrix;
    let u = StateVector::from_real(&[0.0, 1.0]).map_err(e)?;
    let eps = 1e-3;
    let ts = uniform(-5.0, 5.0, 101);
    let exact = charfun_exact(&h, &u, &ts).map_err(e)?;

    let config = ResolventProbeConfig::auto(&h, &u, vec![1e-1, 1e-2, eps]).map_err(e)?;
    let stone = stone_charfun(&h, &u, &config, &ts).map_err(e)?;
    let err = stone
        .values
        .iter()
        .zip(&exact.values)
        .zip(&ts)
        .map(|((s, x), t)| (s - x * (-eps * t.abs()).exp()).norm())
        .fold(0.0, f64::max);
    ck.err("stone cf vs exact e^{-ε|t|}", err, 1e-6);

    let m = stone_cdf(&h, &u, &config).map_err(e)?;
    let want = [(2.0 + SQRT_2) / 4.0, (2.0 - SQRT_2) / 4.0];
    let err = if m.atoms.len() == 2 {
        m.atoms.iter().zip(want).map(|(a, w)| (a.weight - w).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    ck.err("extrapolated atom weights", err, 1e-4);
    Ok(ck.finish(start.elapsed(), Some(10.0)))
}

fn gaussian_cdf(x: f64, variance: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / (2.0 * variance).sqrt()))
}

fn criterion_5() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();
    let grid = make_grid(512, 10.0).map_err(e)?;
    let vac = grid.vacuum();
    for (mode, variance) in [(XpMode::X, 0.5), (XpMode::XPlusP, 1.0)] {
        let h = observable_xp(mode, &grid).map_err(e)?;
        let config = ResolventProbeConfig::auto(&h, vac, vec![0.1])
            .map_err(e)?
            .with_extrapolation(Extrapolation::PoissonDeconvolution { t_max: 10.0 });
        let m = stone_cdf(&h, vac, &config).map_err(e)?;
        let err = m
            .cdf
            .as_deref()
            .unwrap_or(&[])
            .iter()
            .filter(|p| p.0.abs() <= 5.0)
            .map(|&(l, f)| (f - gaussian_cdf(l, variance)).abs())
            .fold(0.0, f64::max);
        ck.err(&format!("{mode} cdf"), err, 1e-4);
        if mode == XpMode::XPlusP {
            let ts = uniform(-4.0, 4.0, 81);
            let tr = stone_charfun(&h, vac, &config, &ts).map_err(e)?;
            ck.err("X+P cf e^{-t²/2}", sup_err(&tr, |t| c((-t * t / 2.0).exp(), 0.0)), 1e-4);
        }
    }
    Ok(ck.finish(start.elapsed(), Some(60.0)))
}

fn criterion_6() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();
    let fock = make_fock(300).map_err(e)?;
    let h = observable_xp(XpMode::XpPlusPx, &fock).map_err(e)?;
    let vac = fock.vacuum();
    let sech_half = |t: f64| c((1.0 / t.cosh()).sqrt(), 0.0);

    let ts = uniform(-3.0, 3.0, 121);
    let exact = charfun_exact(&h, vac, &ts).map_err(e)?;
    ck.err("exact vs (sech t)^1/2", sup_err(&exact, sech_half), 1e-6);

    let eps = 1e-3;
    let config = ResolventProbeConfig::auto(&h, vac, vec![eps]).map_err(e)?;
    let stone = stone_charfun(&h, vac, &config, &ts).map_err(e)?;
    let err = sup_err(&stone, |t| sech_half(t) * (-eps * t.abs()).exp());
    ck.err("stone vs (sech t)^1/2 e^{-ε|t|}", err, 1e-4);

    let ts_inv = uniform(-60.0, 60.0, 4801);
    let cf = CharacteristicFunctionTrace::from_fn(&ts_inv, CfMethod::ClosedForm("(sech t)^1/2".into()), sech_half);
    let lambdas = uniform(-40.0, 40.0, 4001);
    let inv = invert_cf_to_density(&cf, &lambdas, Window::None).map_err(e)?;
    let values: Vec<f64> = inv.samples.iter().map(|p| p.1).collect();
    let mass = integrate(&values, lambdas[1] - lambdas[0], Quadrature::Simpson);
    ck.err("inverted density mass", (mass - 1.0).abs(), 1e-4);
    Ok(ck.finish(start.elapsed(), None))
}

fn interior_max(m: &CMatrix, k: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

/// `e^{f(H)}` by spectral mapping.
fn exp_of(h: &CMatrix, f: impl Fn(f64) -> C64) -> Res<CMatrix> {
    let d = decompose(&HermitianOperator::new(h.clone()).map_err(e)?).map_err(e)?;
    Ok(d.map(|l| f(l).exp()))
}

/// Follows `√(f(t))` continuously from the principal root at `t = 0`.
fn continued_sqrt(f: impl Fn(f64) -> C64, t: f64) -> C64 {
    let steps = 4000usize.max((t.abs() * 4000.0) as usize);
    let mut root = f(0.0).sqrt();
    for k in 1..=steps {
        let r = f(t * k as f64 / steps as f64).sqrt();
        root = if (r - root).norm() <= (r + root).norm() { r } else { -r };
    }
    root
}

fn criterion_7() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();

    let fock = make_fock(200).map_err(e)?;
    let (x, p) = (fock.x().entries().clone(), fock.p().entries().clone());
    let (a, ad) = fock.ladder();
    let n = fock.dim();
    let k_sum = (&ad * &ad) * c(0.5, 0.0) + (&a * &a) * c(0.5, 0.0) + (&a * &ad + &ad * &a) * c(0.25, 0.0);
    let quad = (&x * &x * c(3.0, 0.0) - &p * &p) * c(0.25, 0.0);
    let printed = &quad + CMatrix::identity(n, n) * c(0.5, 0.0);
    ck.err("lemma 1 (with ½I)", interior_max(&(&k_sum - &printed), 100), 1e-8);

    let fock = make_fock(120).map_err(e)?;
    let (x, p) = (fock.x().entries().clone(), fock.p().entries().clone());
    let n = fock.dim();
    let xp = &x * &p;
    let x2 = &x * &x;
    let p2 = &p * &p;
    for b in [c(0.0, 0.05), c(0.02, 0.0)] {
        let ebx2 = exp_of(&x2, |l| b * l)?;
        let r1 = &ebx2 * &xp - &xp * &ebx2 - &x2 * &ebx2 * (2.0 * I * b);
        // e^{ibXP} = e^{-b/2} e^{ib(XP + PX)/2}
        let eixp = exp_of(&(&xp + xp.adjoint()), |l| -b / 2.0 + I * b * l / 2.0)?;
        let r2 = &eixp * &p2 - &p2 * &eixp * (-2.0 * b).exp();
        let coef = CMatrix::identity(n, n) * (2.0 * b) - &x2 * (4.0 * b * b) + &xp * (4.0 * I * b);
        let r3 = &ebx2 * &p2 - &p2 * &ebx2 - coef * &ebx2;
        let worst = interior_max(&r1, 60).max(interior_max(&r2, 60)).max(interior_max(&r3, 60));
        ck.err(&format!("lemma 2 b={b}"), worst, 1e-6);
    }

    let fock = make_fock(100).map_err(e)?;
    let (x, p) = (fock.x().entries().clone(), fock.p().entries().clone());
    let n = fock.dim();
    let xp = &x * &p;
    let stirling: [&[f64]; 4] = [&[1.0], &[1.0, 1.0], &[1.0, 3.0, 1.0], &[1.0, 7.0, 6.0, 1.0]];
    let mut worst: f64 = 0.0;
    let mut lhs = CMatrix::identity(n, n);
    for (m, row) in stirling.iter().enumerate() {
        let m = m + 1;
        lhs = &lhs * &xp;
        let mut rhs = CMatrix::zeros(n, n);
        let (mut xk, mut pk) = (CMatrix::identity(n, n), CMatrix::identity(n, n));
        for (k, s) in row.iter().enumerate() {
            xk = &xk * &x;
            pk = &pk * &p;
            let j = (m - (k + 1)) as i32;
            rhs += &xk * &pk * ((-I).powi(j) * *s);
        }
        worst = worst.max(interior_max(&(&lhs - &rhs), 40));
    }
    ck.err("lemma 4 n<=4", worst, 1e-6);

    let x0: f64 = 0.7;
    // S(n, 3) for n = 3..=25 from S(n, k) = k S(n-1, k) + S(n-1, k-1).
    let mut row = vec![1.0f64];
    let mut series = 0.0;
    let mut fact = 1.0;
    for m in 1..=25usize {
        let mut next = vec![0.0; m + 1];
        for k in 1..=m {
            let keep = if k < m { k as f64 * row[k] } else { 0.0 };
            next[k] = keep + row[k - 1];
        }
        row = next;
        fact *= m as f64;
        if m >= 3 {
            series += x0.powi(m as i32) / fact * row[3];
        }
    }
    ck.err("stirling generating identity", (series - (x0.exp() - 1.0).powi(3) / 6.0).abs(), 1e-10);

    let fock = make_fock(400).map_err(e)?;
    let h = observable_xp(XpMode::Su11H, &fock).map_err(e)?;
    let ts = uniform(-2.0, 2.0, 41);
    let numeric = charfun_exact(&h, fock.vacuum(), &ts).map_err(e)?;
    let radicand = |t: f64| {
        let y = SQRT_3 * t / 2.0;
        let sech = 1.0 / y.cosh();
        let l = sech.ln();
        c(6.0 * sech, 0.0) / c(3.0 + 3.0 * l * l - 3.0 * y.tanh().powi(2), 4.0 * SQRT_3 * y.tanh())
    };
    let normalized = |t: f64| continued_sqrt(radicand, t) / continued_sqrt(radicand, 0.0);
    ck.err("corollary normalized form vs Fock", sup_err(&numeric, normalized), 1e-5);
    Ok(ck.finish(start.elapsed(), Some(120.0)))
}

fn criterion_8() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();
    let ts = uniform(-4.0, 4.0, 81);

    let grid = make_grid(512, 10.0).map_err(e)?;
    for mode in [XpMode::X, XpMode::P] {
        let h = observable_xp(mode, &grid).map_err(e)?;
        let numeric = charfun_exact(&h, grid.vacuum(), &ts).map_err(e)?;
        ck.err(&format!("{mode} cf e^{{-t²/4}}"), sup_err(&numeric, |t| c((-t * t / 4.0).exp(), 0.0)), 1e-10);
        // printed √2 e^{-t²/2} should be √2 times the numerics
        let dev = numeric
            .iter()
            .map(|(t, v)| (SQRT_2 * (-t * t / 2.0).exp() / v - SQRT_2).norm())
            .fold(0.0, f64::max);
        ck.err(&format!("{mode} printed/numeric = √2"), dev, 1e-6);
    }

    let fock = make_fock(400).map_err(e)?;
    let h = observable_xp(XpMode::Su11H, &fock).map_err(e)?;
    let ts = uniform(-2.0, 2.0, 41);
    let numeric = charfun_exact(&h, fock.vacuum(), &ts).map_err(e)?;
    let radicand = |t: f64| {
        let y = SQRT_3 * t / 2.0;
        let sech = 1.0 / y.cosh();
        let l = sech.ln();
        c(6.0 * sech, 0.0) / c(3.0 + 3.0 * l * l - 3.0 * y.tanh().powi(2), 4.0 * SQRT_3 * y.tanh())
    };
    let raw0 = continued_sqrt(radicand, 0.0);
    ck.err("corollary raw value at 0 is √2", (raw0 - SQRT_2).norm(), 1e-12);
    ck.err("corollary f(0) = 1 normalization vs numerics", sup_err(&numeric, |t| continued_sqrt(radicand, t) / raw0), 1e-5);
    let dev = numeric
        .iter()
        .map(|(t, v)| (continued_sqrt(radicand, t) / v - SQRT_2).norm())
        .fold(0.0, f64::max);
    ck.err("corollary printed/numeric = √2", dev, 1e-5);
    Ok(ck.finish(start.elapsed(), None))
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> Res<HermitianOperator> {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
        for j in 0..i {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m).map_err(e)
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Res<StateVector> {
    let v = CVector::from_iterator(n, (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    StateVector::normalized(v).map_err(e)
}

fn criterion_9() -> Res<Line> {
    let start = Instant::now();
    let mut ck = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20240917);
    let ts = uniform(-3.0, 3.0, 25);
    let (mut recon, mut sym, mut modulus, mut damping, mut group) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = rng.gen_range(1..=32);
        let h = random_hermitian(&mut rng, n)?;
        let u = random_state(&mut rng, n)?;
        let d = decompose(&h).map_err(e)?;
        recon = recon.max((d.reconstruct() - h.entries()).iter().map(|z| z.norm()).fold(0.0, f64::max));

        let tr = charfun_exact(&h, &u, &ts).map_err(e)?;
        let m = ts.len();
        for k in 0..m {
            sym = sym.max((tr.values[k] - tr.values[m - 1 - k].conj()).norm());
            modulus = modulus.max(tr.values[k].norm() - 1.0);
        }

        for eps in [0.5, 0.2] {
            let config = ResolventProbeConfig::auto(&h, &u, vec![eps]).map_err(e)?;
            let stone = stone_charfun(&h, &u, &config, &ts).map_err(e)?;
            for k in 0..m {
                let want = tr.values[k] * (-eps * ts[k].abs()).exp();
                damping = damping.max((stone.values[k] - want).norm());
            }
        }

        let (s, t) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let lhs = matrix_exp_it(&h, s).map_err(e)? * matrix_exp_it(&h, t).map_err(e)?;
        let rhs = matrix_exp_it(&h, s + t).map_err(e)?;
        group = group.max((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    ck.err("reconstruction", recon, 1e-10);
    ck.err("cf conjugate symmetry", sym, 1e-12);
    ck.err("|cf| - 1", modulus.max(0.0), 1e-12);
    ck.err("poisson damping at ε = 0.5, 0.2", damping, 1e-6);
    ck.err("group law", group, 1e-10);
    Ok(ck.finish(start.elapsed(), Some(30.0)))
}

/// Not a criterion: the Fock numerics against `(sech 2t)^{1/2}` where the truncation is trustworthy.
fn sech_2t_note() -> Res<String> {
    let fock = make_fock(300).map_err(e)?;
    let h = observable_xp(XpMode::XpPlusPx, &fock).map_err(e)?;
    let ts = uniform(-1.5, 1.5, 61);
    let exact = charfun_exact(&h, fock.vacuum(), &ts).map_err(e)?;
    let err = sup_err(&exact, |t| c((1.0 / (2.0 * t).cosh()).sqrt(), 0.0));
    Ok(format!("exact XP+PX cf vs (sech 2t)^1/2 on |t| <= 1.5: {err:.2e}"))
}

fn main() {
    let criteria: [(usize, fn() -> Res<Line>); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (k, run) in criteria {
        let line = run().unwrap_or_else(|msg| Line::new(false, format!("error: {msg}")));
        println!("criterion {k}: {} {}", if line.ok { "PASS" } else { "FAIL" }, line.detail);
        if !line.ok {
            failed.push(k);
        }
    }
    match sech_2t_note() {
        Ok(s) => println!("note: {s}"),
        Err(msg) => println!("note: error: {msg}"),
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
    } else {
        println!("acceptance: {} of 9 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
