//! Dense symmetric eigensolver.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration (the EISPACK `tred2`/`tql2` pair). Eigenvalues are returned in
//! descending order with an orthonormal set of eigenvectors stored as columns.

use super::matrix::{Matrix, SymMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solver settings. Deflation happens once an off-diagonal entry falls
/// below `tolerance` times the running norm estimate.
#[derive(Clone, Copy, Debug)]
pub struct EigenSettings {
    pub tolerance: f64,
    /// Total QL iterations allowed is `max_iter_factor * d²`.
    pub max_iter_factor: usize,
}

impl Default for EigenSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iter_factor: 100,
        }
    }
}

/// `M = V diag(λ) Vᵀ` with `λ` sorted descending.
#[derive(Clone, Debug)]
pub struct EigenDecomp<T> {
    values: Vec<T>,
    /// Column `k` is the eigenvector for `values[k]`.
    vectors: Matrix<T>,
}

impl<T: Scalar> EigenDecomp<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn vectors(&self) -> &Matrix<T> {
        &self.vectors
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn max_value(&self) -> T {
        self.values[0]
    }

    pub fn min_value(&self) -> T {
        self.values[self.values.len() - 1]
    }

    /// `V diag(g) Vᵀ` for an arbitrary weight vector `g`.
    pub fn compose(&self, weights: &[T]) -> SymMatrix<T> {
        let n = self.order();
        debug_assert_eq!(weights.len(), n);
        let v = &self.vectors;
        let mut scaled = v.clone();
        for i in 0..n {
            for k in 0..n {
                scaled.set(i, k, v.get(i, k) * weights[k]);
            }
        }
        SymMatrix::from_fn(n, |i, j| {
            scaled
                .row(i)
                .iter()
                .zip(v.row(j))
                .map(|(&a, &b)| a * b)
                .sum()
        })
    }

    /// `V diag(f(λ)) Vᵀ`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> SymMatrix<T> {
        let w: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        self.compose(&w)
    }

    /// `Vᵀ A V` for a symmetric `A`.
    pub fn rotate_into_basis(&self, a: &SymMatrix<T>) -> Matrix<T> {
        let av = a.to_matrix().matmul(&self.vectors).expect("matching orders");
        self.vectors.transpose().matmul(&av).expect("matching orders")
    }

    pub fn shifted(&self, shift: T) -> Self {
        Self {
            values: self.values.iter().map(|&l| l + shift).collect(),
            vectors: self.vectors.clone(),
        }
    }
}

/// Eigendecomposition with default settings.
pub fn eig_sym<T: Scalar>(m: &SymMatrix<T>) -> Result<EigenDecomp<T>> {
    eig_sym_with(m, EigenSettings::default())
}

pub fn eig_sym_with<T: Scalar>(m: &SymMatrix<T>, settings: EigenSettings) -> Result<EigenDecomp<T>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let n = m.order();
    let mut v: Vec<Vec<T>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    if n == 1 {
        return Ok(EigenDecomp {
            values: vec![m.get(0, 0)],
            vectors: Matrix::identity(1),
        });
    }
    tred2(&mut v, &mut d, &mut e);
    let cap = settings.max_iter_factor * n * n;
    let tol = T::of(settings.tolerance).max(T::epsilon());
    tql2(&mut v, &mut d, &mut e, tol, cap)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = Matrix::from_fn(n, n, |i, k| v[i][order[k]]);
    Ok(EigenDecomp { values, vectors })
}

fn tred2<T: Scalar>(v: &mut [Vec<T>], d: &mut [T], e: &mut [T]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[n - 1][j];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for &dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = T::zero();
                v[j][i] = T::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = T::zero();
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = T::zero();
    }
    v[n - 1][n - 1] = T::one();
    e[0] = T::zero();
}

fn tql2<T: Scalar>(v: &mut [Vec<T>], d: &mut [T], e: &mut [T], tol: T, cap: usize) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let two = T::of(2.0);
    let mut f = T::zero();
    let mut tst1 = T::zero();
    let mut iterations = 0usize;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= tol * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > cap {
                    return Err(Error::NoConvergence {
                        order: n,
                        iterations,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        let hk = row[i + 1];
                        row[i + 1] = s * row[i] + c * hk;
                        row[i] = c * row[i] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= tol * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}
