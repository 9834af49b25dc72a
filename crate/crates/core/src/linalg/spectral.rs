//! Spectral functions of symmetric matrices and the symmetrization operator.

use super::eigen::{eig_sym, EigenDecomp};
use super::matrix::{Matrix, SymMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative floor applied to eigenvalues before taking logarithms.
pub const LOG_FLOOR_REL: f64 = 1e-12;

/// How `log` treats eigenvalues at or below the floor
/// `LOG_FLOOR_REL * max(1, λ_max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogPolicy {
    /// Raise small eigenvalues to the floor.
    Floor,
    /// Fail with a domain error.
    Strict,
}

/// `[[0, W], [Wᵀ, 0]]`, or `W` itself when it is square and exactly symmetric.
pub fn symmetrize<T: Scalar>(w: &Matrix<T>) -> SymMatrix<T> {
    if w.is_symmetric() {
        return SymMatrix::new(w.clone()).expect("square");
    }
    block_embed(w)
}

/// `[[0, W], [Wᵀ, 0]]` regardless of the shape of `W`.
pub fn block_embed<T: Scalar>(w: &Matrix<T>) -> SymMatrix<T> {
    let (m, n) = (w.rows(), w.cols());
    let mut s = SymMatrix::zeros(m + n);
    for i in 0..m {
        for j in 0..n {
            s.set(i, m + j, w.get(i, j));
        }
    }
    s
}

/// `V diag(f(λ)) Vᵀ`.
pub fn matrix_fn<T: Scalar>(m: &SymMatrix<T>, f: impl Fn(T) -> T) -> Result<SymMatrix<T>> {
    Ok(eig_sym(m)?.apply(f))
}

pub fn exp_sym<T: Scalar>(m: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    matrix_fn(m, T::exp)
}

pub fn log_floor<T: Scalar>(lambda_max: T) -> T {
    T::of(LOG_FLOOR_REL) * lambda_max.max(T::one())
}

/// Matrix logarithm of a (numerically) positive definite matrix.
pub fn log_sym<T: Scalar>(m: &SymMatrix<T>, policy: LogPolicy) -> Result<SymMatrix<T>> {
    let e = eig_sym(m)?;
    log_from_eig(&e, policy)
}

pub fn log_from_eig<T: Scalar>(e: &EigenDecomp<T>, policy: LogPolicy) -> Result<SymMatrix<T>> {
    let floor = log_floor(e.max_value());
    if policy == LogPolicy::Strict && e.min_value() <= floor {
        return Err(Error::Domain(format!(
            "log of matrix with eigenvalue {:e} at or below floor {:e}",
            e.min_value(),
            floor
        )));
    }
    Ok(e.apply(|l| l.max(floor).ln()))
}

/// Sum of singular values.
///
/// Computed from the spectrum of `sym(W)`: for a rectangular or
/// non-symmetric `W` that is half the sum of absolute eigenvalues.
pub fn trace_norm<T: Scalar>(w: &Matrix<T>) -> Result<T> {
    let symmetric = w.is_symmetric();
    let s = symmetrize(w);
    let total = sym_trace_norm(&s)?;
    Ok(if symmetric { total } else { total * T::of(0.5) })
}

/// Sum of absolute eigenvalues of a symmetric matrix.
pub fn sym_trace_norm<T: Scalar>(s: &SymMatrix<T>) -> Result<T> {
    Ok(eig_sym(s)?.values().iter().map(|l| l.abs()).sum())
}

/// Spectral norm (largest absolute eigenvalue).
pub fn spectral_norm<T: Scalar>(s: &SymMatrix<T>) -> Result<T> {
    let e = eig_sym(s)?;
    Ok(e.max_value().abs().max(e.min_value().abs()))
}

/// Frobenius inner product `A • B`.
pub fn inner<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>) -> Result<T> {
    a.inner(b)
}

/// Quantum relative entropy `Tr(X log X − X log A − X + A)`.
///
/// Null eigenvalues of `X` contribute `0 · log 0 = 0`; eigenvalues of `A`
/// are floored before the logarithm.
pub fn qre<T: Scalar>(x: &SymMatrix<T>, a: &SymMatrix<T>) -> Result<T> {
    x.check_order(a)?;
    let ex = eig_sym(x)?;
    let scale = ex.max_value().abs().max(T::one());
    if ex.min_value() < -T::of(1e-8) * scale {
        return Err(Error::Domain(format!(
            "relative entropy needs X ⪰ 0, min eigenvalue {:e}",
            ex.min_value()
        )));
    }
    let entropy: T = ex
        .values()
        .iter()
        .filter(|&&l| l > T::zero())
        .map(|&l| l * l.ln())
        .sum();
    let log_a = log_sym(a, LogPolicy::Floor)?;
    let cross = x.inner(&log_a)?;
    Ok(entropy - cross - x.trace() + a.trace())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrize_row_vector() {
        let w = Matrix::from_rows(&[[1.0, -1.0]]).unwrap();
        let s = symmetrize(&w);
        assert_eq!(s.order(), 3);
        assert_eq!(s.get(0, 1), 1.0);
        assert_eq!(s.get(0, 2), -1.0);
        assert_eq!(s.get(1, 0), 1.0);
        assert_eq!(s.get(1, 2), 0.0);
        assert_eq!(s.get(1, 1), 0.0);
    }

    #[test]
    fn symmetrize_keeps_symmetric_input() {
        let w = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let s = symmetrize(&w);
        assert_eq!(s.to_matrix(), w);
    }

    #[test]
    fn symmetrize_square_nonsymmetric_embeds() {
        let w = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let s = symmetrize(&w);
        assert_eq!(s.order(), 4);
        assert_eq!(s.get(1, 2), 3.0);
        assert_eq!(s.get(3, 1), 4.0);
        assert_eq!(s.get(0, 0), 0.0);
    }

    #[test]
    fn exp_of_identity() {
        let e = exp_sym(&SymMatrix::<f64>::identity(3)).unwrap();
        let target = SymMatrix::scaled_identity(3, std::f64::consts::E);
        assert!(e.sub(&target).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn exp_of_diagonal() {
        let e = exp_sym(&SymMatrix::from_diag(&[0.0, 2f64.ln()])).unwrap();
        assert!((e.get(0, 0) - 1.0).abs() < 1e-14);
        assert!((e.get(1, 1) - 2.0).abs() < 1e-14);
        assert_eq!(e.get(0, 1), 0.0);
    }

    #[test]
    fn strict_log_rejects_singular() {
        let m = SymMatrix::from_diag(&[1.0, 0.0]);
        assert!(matches!(log_sym(&m, LogPolicy::Strict), Err(Error::Domain(_))));
        let floored = log_sym(&m, LogPolicy::Floor).unwrap();
        assert!((floored.get(1, 1) - (1e-12f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&Matrix::<f64>::identity(2)).unwrap() - 2.0).abs() < 1e-14);
        let w = Matrix::from_rows(&[[1.0, -1.0]]).unwrap();
        assert!((trace_norm(&w).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn qre_examples() {
        let i2 = SymMatrix::<f64>::identity(2);
        let expected = 2.0 * (1.0 - 2f64.ln());
        let got = qre(&i2, &i2.scale(2.0)).unwrap();
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
        assert!((expected - 0.613706).abs() < 1e-6);
        assert!(qre(&i2, &i2).unwrap().abs() < 1e-14);
        let init = SymMatrix::<f64>::scaled_identity(8, 0.25);
        assert!(qre(&init, &init).unwrap().abs() < 1e-14);
    }

    #[test]
    fn qre_handles_null_directions() {
        let x = SymMatrix::<f64>::from_diag(&[1.0, 0.0]);
        let a = SymMatrix::from_diag(&[1.0, 1.0]);
        // 1·log 1 − 0 − 1 + 2
        assert!((qre(&x, &a).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn qre_order_mismatch() {
        let a = SymMatrix::<f64>::identity(2);
        let b = SymMatrix::<f64>::identity(3);
        assert!(matches!(qre(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn inner_with_traceless_loss_at_scaled_identity() {
        let x = SymMatrix::<f64>::scaled_identity(4, 0.5);
        let mut l = SymMatrix::zeros(4);
        l.set(0, 1, 0.7);
        l.set(2, 3, -0.7);
        assert_eq!(inner(&x, &l).unwrap(), 0.0);
    }
}
