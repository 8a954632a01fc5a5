use num_complex::Complex64 as C64;

use spectral_cf::closed_forms::{quadratic_vacuum_cf, su11_boson_vacuum, theorem_wtf_cf_corrected};
use spectral_cf::fock::{make_fock, make_grid, observable_xp, LineRealization, XpMode};
use spectral_cf::linalg::charfun_exact;
use spectral_cf::stone::{stone_cdf, Extrapolation, ResolventProbeConfig};

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn fock_vs_grid(mode: XpMode, t_max: f64) -> f64 {
    let fock = make_fock(300).unwrap();
    let grid = make_grid(512, 10.0).unwrap();
    let ts = uniform(-t_max, t_max, 61);
    let a = charfun_exact(&observable_xp(mode, &fock).unwrap(), fock.vacuum(), &ts).unwrap();
    let b = charfun_exact(&observable_xp(mode, &grid).unwrap(), grid.vacuum(), &ts).unwrap();
    a.max_abs_diff(&b)
}

#[test]
fn fock_and_grid_agree_on_x_plus_p() {
    assert!(fock_vs_grid(XpMode::XPlusP, 3.0) < 1e-8);
}

#[test]
fn fock_and_grid_agree_on_su11_h() {
    assert!(fock_vs_grid(XpMode::Su11H, 3.0) < 1e-8);
}

#[test]
fn fock_and_grid_agree_on_dilation_for_short_times() {
    assert!(fock_vs_grid(XpMode::XpPlusPx, 1.5) < 1e-8);
}

// The 301-dimensional Fock truncation leaves the dilation group's range of validity
// near |t| = 2: by t = 3 the vacuum has spread past the highest retained level.
#[test]
fn fock_and_grid_agree_on_dilation_up_to_t3() {
    let err = fock_vs_grid(XpMode::XpPlusPx, 3.0);
    assert!(err < 1e-8, "Fock n_max = 300 and grid n = 512 differ by {err:e} on |t| <= 3");
}

#[test]
fn disentangled_vacuum_law_matches_fock_numerics() {
    let fock = make_fock(400).unwrap();
    let ts = uniform(-2.0, 2.0, 41);
    for (a, b) in [(0.75, -0.25), (1.0, 1.0), (0.5, 0.0), (-0.3, 0.2)] {
        let h = observable_xp(XpMode::Quad(a, b), &fock).unwrap();
        let numeric = charfun_exact(&h, fock.vacuum(), &ts).unwrap();
        let err = numeric.max_abs_diff_fn(|t| quadratic_vacuum_cf(a, b, t).unwrap());
        assert!(err < 1e-8, "({a}, {b}): {err:e}");
        if a * b < 0.0 {
            let err = numeric.max_abs_diff_fn(|t| theorem_wtf_cf_corrected(a, b, t).unwrap());
            assert!(err < 1e-8, "corrected wtf ({a}, {b}): {err:e}");
        }
    }
}

#[test]
fn number_operator_oracle() {
    // X² + P² = 2N + 1 has the vacuum as eigenvector with eigenvalue 1.
    for t in [-1.3, 0.0, 0.4, 2.9] {
        let z = quadratic_vacuum_cf(1.0, 1.0, t).unwrap();
        assert!((z - C64::new(t.cos(), t.sin())).norm() < 1e-13);
    }
    // X² alone is half a chi-square variable with one degree of freedom.
    for t in [-2.0, 0.7, 5.0] {
        let z = quadratic_vacuum_cf(1.0, 0.0, t).unwrap();
        let want = C64::new(1.0, -t).sqrt().inv();
        assert!((z - want).norm() < 1e-13);
    }
}

#[test]
fn su11_boson_closed_form_is_the_three_quarter_quadratic() {
    for t in uniform(-3.0, 3.0, 13) {
        let a = su11_boson_vacuum(t);
        let b = quadratic_vacuum_cf(0.75, -0.25, t).unwrap();
        assert!((a - b).norm() < 1e-13, "t = {t}");
    }
}

#[test]
fn richardson_ladder_recovers_the_position_law() {
    let grid = make_grid(512, 10.0).unwrap();
    let h = observable_xp(XpMode::X, &grid).unwrap();
    let config = ResolventProbeConfig::auto(&h, grid.vacuum(), vec![0.2, 0.15, 0.1, 0.05])
        .unwrap()
        .with_extrapolation(Extrapolation::Richardson);
    let m = stone_cdf(&h, grid.vacuum(), &config).unwrap();
    assert_eq!(m.method, "stone+richardson");
    let err = m
        .cdf
        .unwrap()
        .iter()
        .filter(|p| p.0.abs() <= 5.0)
        .map(|&(l, f)| (f - 0.5 * (1.0 + libm::erf(l))).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-4, "{err:e}");
}
