mod common;

use matpred::linalg::{block_embed, eig_sym, exp_sym, log_sym, matrix_fn, qre, LogPolicy, Matrix, SymMatrix};
use proptest::prelude::*;

use common::{jacobi_singular_values, rng, uniform_sym};

fn sym_strategy(max_order: usize, scale: f64) -> impl Strategy<Value = SymMatrix<f64>> {
    (1..=max_order).prop_flat_map(move |d| {
        prop::collection::vec(-scale..=scale, d * d)
            .prop_map(move |v| SymMatrix::new(Matrix::new(d, d, v).unwrap()).unwrap())
    })
}

fn rect_strategy(max_dim: usize) -> impl Strategy<Value = Matrix<f64>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(m, n)| {
        prop::collection::vec(-1.0f64..=1.0, m * n).prop_map(move |v| Matrix::new(m, n, v).unwrap())
    })
}

/// `V diag(λ) Vᵀ` recomputed entrywise from the raw factors.
fn reconstruct(e: &matpred::linalg::EigenDecomp<f64>) -> Matrix<f64> {
    let v = e.vectors();
    let d = e.order();
    Matrix::from_fn(d, d, |i, j| (0..d).map(|k| v.get(i, k) * e.values()[k] * v.get(j, k)).sum())
}

#[test]
fn eigen_reconstruction_on_a_thousand_matrices() {
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for k in 0..1000 {
        // Mostly small orders with a tail up to 64.
        let d = if k % 50 == 0 { 64 } else { 1 + k % 24 };
        let m = uniform_sym(&mut r, d, 1.0 + (k % 7) as f64);
        let e = eig_sym(&m).unwrap();
        let rec = reconstruct(&e);
        let err = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (rec.get(i, j) - m.get(i, j)).abs())
            .fold(0.0, f64::max);
        let rel = err / (1.0 + m.max_abs());
        worst = worst.max(rel);
        assert!(rel <= 1e-8, "order {d}: reconstruction error {err:e}");
        assert!(e.values().windows(2).all(|w| w[0] >= w[1]));
    }
    assert!(worst <= 1e-8);
}

#[test]
fn traceless_diagonal_exponential_has_unit_determinant() {
    let mut r = rng(12);
    for d in 1..=12 {
        let mut diag: Vec<f64> = (0..d).map(|_| rand::Rng::random_range(&mut r, -3.0..3.0)).collect();
        let mean = diag.iter().sum::<f64>() / d as f64;
        diag.iter_mut().for_each(|x| *x -= mean);
        let e = exp_sym(&SymMatrix::from_diag(&diag)).unwrap();
        let det: f64 = e.diag().iter().product();
        assert!((det - 1.0).abs() <= 1e-8, "order {d}: det {det}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exp_then_log_round_trips(m in sym_strategy(8, 5.0)) {
        // Keep the spectral norm at most 5.
        let norm = eig_sym(&m).unwrap().values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let m = if norm > 5.0 { m.scale(5.0 / norm) } else { m };
        let back = matrix_fn(&matrix_fn(&m, f64::exp).unwrap(), f64::ln).unwrap();
        prop_assert!(back.sub(&m).unwrap().max_abs() <= 1e-8);
    }

    #[test]
    fn sym_spectrum_is_plus_minus_singular_values(w in rect_strategy(7)) {
        let (m, n) = (w.rows(), w.cols());
        let mut got: Vec<f64> = eig_sym(&block_embed(&w)).unwrap().values().iter().map(|v| v.abs()).collect();
        got.sort_by(f64::total_cmp);
        // Oracle: eigenvalues of WᵀW, descending.
        let gram = SymMatrix::new(w.transpose().matmul(&w).unwrap()).unwrap();
        let sv = eig_sym(&gram).unwrap().values().to_vec();
        let top = sv[..m.min(n)].iter().map(|l| l.max(0.0).sqrt());
        let mut expected: Vec<f64> = top.clone().chain(top).collect();
        expected.resize(m + n, 0.0);
        expected.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-7, "{got:?} vs {expected:?}");
        }
        // Second route through the Jacobi oracle.
        let jac = jacobi_singular_values(&w);
        let total: f64 = got.iter().sum();
        prop_assert!((total - 2.0 * jac.iter().sum::<f64>()).abs() <= 1e-8);
    }

    #[test]
    fn relative_entropy_is_nonnegative(a in sym_strategy(6, 1.0), b in sym_strategy(6, 1.0), shift in 0.0f64..0.5) {
        let d = a.order().min(b.order());
        let idx: Vec<usize> = (0..d).collect();
        // A Aᵀ + shift·I is PSD; shift 0 exercises null directions.
        let x = a.principal(&idx).square().axpy(1.0, &SymMatrix::scaled_identity(d, shift)).unwrap();
        let y = b.principal(&idx).square().axpy(1.0, &SymMatrix::scaled_identity(d, 1e-3 + shift)).unwrap();
        prop_assert!(qre(&x, &y).unwrap() >= -1e-9);
        prop_assert!(qre(&x, &x).unwrap().abs() <= 1e-8 * (1.0 + x.trace()));
    }

    #[test]
    fn floored_log_is_finite_on_singular_input(w in rect_strategy(5)) {
        let s = w.transpose().matmul(&w).unwrap();
        let l = log_sym(&SymMatrix::new(s).unwrap(), LogPolicy::Floor).unwrap();
        prop_assert!(l.is_finite());
    }
}
