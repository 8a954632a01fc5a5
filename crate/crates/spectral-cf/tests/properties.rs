use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_cf::cli::{parse_complex, parse_matrix};
use spectral_cf::closed_forms::{registry, stirling2};
use spectral_cf::linalg::{charfun_exact, decompose, matrix_exp_it, spectral_measure, CMatrix, CVector, HermitianOperator, StateVector};
use spectral_cf::report::fmt_f64;

fn hermitian_from(n: usize, raw: &[f64]) -> HermitianOperator {
    let mut m = CMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        m[(i, i)] = C64::new(raw[k], 0.0);
        k += 1;
        for j in 0..i {
            let z = C64::new(raw[k], raw[k + 1]);
            k += 2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m).unwrap()
}

fn operator_and_state() -> impl Strategy<Value = (HermitianOperator, StateVector)> {
    (1usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(-2.0f64..2.0, n * n),
            prop::collection::vec(-1.0f64..1.0, 2 * n).prop_filter("nonzero state", |v| v.iter().any(|x| x.abs() > 1e-3)),
        )
            .prop_map(move |(h, s)| {
                let v = CVector::from_iterator(n, (0..n).map(|k| C64::new(s[2 * k], s[2 * k + 1])));
                (hermitian_from(n, &h), StateVector::normalized(v).unwrap())
            })
    })
}

proptest! {
    #[test]
    fn decomposition_reconstructs((h, _) in operator_and_state()) {
        let d = decompose(&h).unwrap();
        let err = (d.reconstruct() - h.entries()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10);
        prop_assert_eq!(d.multiplicities().iter().sum::<usize>(), h.dim());
    }

    #[test]
    fn measure_is_a_probability((h, u) in operator_and_state()) {
        let m = spectral_measure(&h, &u).unwrap();
        prop_assert!((m.total_atom_weight() - 1.0).abs() < 1e-12);
        prop_assert!(m.atoms.iter().all(|a| a.weight >= 0.0));
        let mean: f64 = m.atoms.iter().map(|a| a.location * a.weight).sum();
        prop_assert!((mean - h.expectation(&u)).abs() < 1e-10);
    }

    #[test]
    fn cf_is_positive_definite_at_small_sizes((h, u) in operator_and_state(), t in -10.0f64..10.0) {
        let tr = charfun_exact(&h, &u, &[0.0, t, -t]).unwrap();
        prop_assert!((tr.values[0] - 1.0).norm() < 1e-12);
        prop_assert!((tr.values[1] - tr.values[2].conj()).norm() < 1e-12);
        let gram = 1.0 - tr.values[1].norm_sqr();
        prop_assert!(gram > -1e-12);
    }

    #[test]
    fn unitary_group((h, _) in operator_and_state(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = matrix_exp_it(&h, s).unwrap() * matrix_exp_it(&h, t).unwrap();
        let rhs = matrix_exp_it(&h, s + t).unwrap();
        prop_assert!((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn formatted_floats_parse_back(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn complex_tokens_roundtrip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let token = format!("{}{}{}i", fmt_f64(re), if im < 0.0 { "-" } else { "+" }, fmt_f64(im.abs()));
        prop_assert_eq!(parse_complex(&token), Some(C64::new(re, im)));
    }

    #[test]
    fn matrix_files_roundtrip((h, _) in operator_and_state()) {
        let n = h.dim();
        let mut text = format!("dim {n}\n");
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = h.entries()[(i, j)];
                    format!("{}{}{}i", fmt_f64(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_f64(z.im.abs()))
                })
                .collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        prop_assert_eq!(&parse_matrix(&text).unwrap(), h.entries());
    }
}

#[test]
fn stirling_rows_sum_to_bell_numbers() {
    let bell: [u128; 11] = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
    for (n, b) in bell.iter().enumerate() {
        let sum: u128 = (0..=n as u32).map(|k| stirling2(n as u32, k).unwrap()).sum();
        assert_eq!(sum, *b, "n = {n}");
    }
}

#[test]
fn registered_forms_pass_their_self_checks() {
    for form in registry() {
        form.check().unwrap_or_else(|e| panic!("{}: {e}", form.id));
    }
}

#[test]
fn seeded_batch_of_large_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(1..=32);
        let raw: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h = hermitian_from(n, &raw);
        let d = decompose(&h).unwrap();
        let err = (d.reconstruct() - h.entries()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "dim {n}: {err:e}");
        let proj_sum = d.projections().into_iter().fold(CMatrix::zeros(n, n), |acc, p| acc + p);
        let id_err = (proj_sum - CMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(id_err < 1e-10, "dim {n}: {id_err:e}");
    }
}
