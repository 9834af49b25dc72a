//! `(β, τ)`-decompositions of the three structured comparison classes.
//!
//! A decomposition writes `sym(W) = P − N` with `P, N ⪰ 0`, every diagonal
//! entry of `P` and `N` at most `β`, and `Tr(P) + Tr(N) ≤ τ`.

use crate::error::{Error, Result};
use crate::linalg::{block_embed, eig_sym, symmetrize, Matrix, SymMatrix};
use crate::scalar::Scalar;

/// A certified `(β, τ)`-decomposition.
#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    pub positive: SymMatrix<T>,
    pub negative: SymMatrix<T>,
    pub beta: T,
    /// Guaranteed trace bound; the realized trace sum may be smaller.
    pub tau: T,
}

impl<T: Scalar> Decomposition<T> {
    pub fn order(&self) -> usize {
        self.positive.order()
    }

    /// `Tr(P) + Tr(N)`.
    pub fn realized_trace(&self) -> T {
        self.positive.trace() + self.negative.trace()
    }

    /// `P − N`.
    pub fn difference(&self) -> SymMatrix<T> {
        &self.positive - &self.negative
    }
}

/// Subset `A ⊆ [n]` defining a cut. The API is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CutSet {
    n: usize,
    bits: u64,
}

impl CutSet {
    pub const MAX_NODES: usize = 64;

    /// `members` are 1-based node labels.
    pub fn new(n: usize, members: &[usize]) -> Result<Self> {
        if n == 0 || n > Self::MAX_NODES {
            return Err(Error::InvalidParameter(format!(
                "cut needs 1 <= n <= {}, got {n}",
                Self::MAX_NODES
            )));
        }
        let mut bits = 0u64;
        for &v in members {
            if v == 0 || v > n {
                return Err(Error::IndexOutOfRange(format!("node {v} not in 1..={n}")));
            }
            bits |= 1 << (v - 1);
        }
        Ok(Self { n, bits })
    }

    /// Bit `k` set means node `k + 1` is in `A`.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > Self::MAX_NODES {
            return Err(Error::InvalidParameter(format!("bad node count {n}")));
        }
        if n < 64 && bits >> n != 0 {
            return Err(Error::IndexOutOfRange(format!("bits {bits:#x} exceed {n} nodes")));
        }
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// 1-based membership test.
    pub fn contains(&self, v: usize) -> bool {
        v >= 1 && v <= self.n && self.bits >> (v - 1) & 1 == 1
    }

    /// 1-based members in increasing order.
    pub fn members(&self) -> Vec<usize> {
        (1..=self.n).filter(|&v| self.contains(v)).collect()
    }

    /// Whether the pair `(i, j)` (1-based) crosses the cut.
    pub fn crosses(&self, i: usize, j: usize) -> bool {
        self.contains(i) != self.contains(j)
    }

    /// `w_A(k) = 1` if `k ∈ A`, else `−1`.
    pub fn sign_vector<T: Scalar>(&self) -> Vec<T> {
        (1..=self.n)
            .map(|v| if self.contains(v) { T::one() } else { -T::one() })
            .collect()
    }
}

/// Bijection `π` on `{1..n}`; stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// `mapping[i − 1] = π(i)`, 1-based values.
    pub fn new(mapping: &[usize]) -> Result<Self> {
        let n = mapping.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &v in mapping {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidParameter(format!(
                    "{mapping:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Self {
            map: mapping.iter().map(|&v| v - 1).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub(crate) fn from_zero_based(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `π(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1] + 1
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.map
    }

    /// 1-based mapping.
    pub fn mapping(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    /// Whether `i` is ranked no later than `j` (1-based), i.e. `W_π(i, j) = 1`.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.map[i - 1] <= self.map[j - 1]
    }
}

/// `W_A(i,j) = 1` iff exactly one of `i, j` lies in `A`, else `−1`.
pub fn cut_matrix<T: Scalar>(cut: &CutSet) -> SymMatrix<T> {
    SymMatrix::from_fn(cut.n, |i, j| {
        if cut.crosses(i + 1, j + 1) {
            T::one()
        } else {
            -T::one()
        }
    })
}

/// `P = 0`, `N = w_A w_Aᵀ`: a `(1, n)`-decomposition of `W_A`.
pub fn decompose_cut<T: Scalar>(cut: &CutSet) -> Decomposition<T> {
    let w = cut.sign_vector::<T>();
    Decomposition {
        positive: SymMatrix::zeros(cut.n),
        negative: SymMatrix::from_fn(cut.n, |i, j| w[i] * w[j]),
        beta: T::one(),
        tau: T::of_usize(cut.n),
    }
}

/// Splits the spectrum of `sym(W)` into its positive and negative parts.
///
/// Requires entries in `[−1, 1]`; the diagonal bound is `√p` for `p` the order
/// of `sym(W)` and the trace sum equals the trace norm of `sym(W)`.
pub fn decompose_trace_norm<T: Scalar>(w: &Matrix<T>) -> Result<Decomposition<T>> {
    if w.as_slice().iter().any(|x| x.abs() > T::one()) {
        return Err(Error::Domain("entries must lie in [-1, 1]".into()));
    }
    let s = symmetrize(w);
    let e = eig_sym(&s)?;
    let positive = e.apply(|l| l.max(T::zero()));
    let negative = e.apply(|l| (-l).max(T::zero()));
    let tau = e.values().iter().map(|l| l.abs()).sum();
    Ok(Decomposition {
        positive,
        negative,
        beta: T::of_usize(s.order()).sqrt(),
        tau,
    })
}

/// Upper-triangular all-ones matrix: `T(i,j) = 1` iff `i ≤ j`.
pub fn triangular<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if i <= j { T::one() } else { T::zero() })
}

/// Closed-form singular values `1 / (2 cos(kπ/(2n+1)))`, `k = 1..n`, ascending.
pub fn singular_values_triangular<T: Scalar>(n: usize) -> Vec<T> {
    let denom = T::of_usize(2 * n + 1);
    (1..=n)
        .map(|k| T::one() / (T::of(2.0) * (T::of_usize(k) * T::of(std::f64::consts::PI) / denom).cos()))
        .collect()
}

/// Recursive `(k+1, 4n(k+1))`-decomposition of `sym(T_n)` for `n = 2^k`.
///
/// The block rows of `sym(T_k)` in quarters of size `h = 2^(k−1)` read
/// `[0 0 T' 1; 0 0 0 T'; T'ᵀ 0 0 0; 1 T'ᵀ 0 0]`. The corner ones split as
/// `(e₁+e₄)(e₁+e₄)ᵀ ⊗ J − (e₁e₁ᵀ + e₄e₄ᵀ) ⊗ J`, and the `T'` blocks reuse the
/// previous level's `P`, `N` interleaved over blocks `{1,3}` and `{2,4}`.
pub fn decompose_triangular<T: Scalar>(k: u32) -> Decomposition<T> {
    let (positive, negative) = triangular_parts::<T>(k);
    let n = 1usize << k;
    let levels = T::of(f64::from(k) + 1.0);
    Decomposition {
        positive,
        negative,
        beta: levels,
        tau: T::of_usize(4 * n) * levels,
    }
}

fn triangular_parts<T: Scalar>(k: u32) -> (SymMatrix<T>, SymMatrix<T>) {
    if k == 0 {
        let p = SymMatrix::from_fn(2, |_, _| T::one());
        return (p, SymMatrix::identity(2));
    }
    let (prev_p, prev_n) = triangular_parts::<T>(k - 1);
    let h = 1usize << (k - 1);
    let build = |prev: &SymMatrix<T>, corner: &dyn Fn(usize, usize) -> bool| {
        SymMatrix::from_fn(4 * h, |r, c| {
            let (br, bc) = (r / h, c / h);
            let mut v = if corner(br, bc) { T::one() } else { T::zero() };
            // Blocks {1,3} and {2,4} each carry a copy of the previous level.
            if br % 2 == bc % 2 {
                v += prev.get((br / 2) * h + r % h, (bc / 2) * h + c % h);
            }
            v
        })
    };
    let outer = |b: usize| b == 0 || b == 3;
    let p = build(&prev_p, &|br, bc| outer(br) && outer(bc));
    let n = build(&prev_n, &|br, bc| br == bc && outer(br));
    (p, n)
}

/// `W_π(i,j) = 1` iff `π(i) ≤ π(j)`, else `0`.
pub fn perm_matrix<T: Scalar>(pi: &Permutation) -> Matrix<T> {
    let n = pi.len();
    Matrix::from_fn(n, n, |i, j| {
        if pi.precedes(i + 1, j + 1) {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// Decomposition of `sym(W_π)` obtained from the padded triangular
/// decomposition by taking the principal submatrix for `sym(T_n)` and
/// conjugating with the block permutation `Q_π = diag(P_π, P_π)`.
///
/// `β` and `τ` are reported for the padded size `n' = 2^k ≥ n`.
pub fn decompose_permutation<T: Scalar>(pi: &Permutation) -> Decomposition<T> {
    let n = pi.len();
    let padded = n.next_power_of_two();
    let k = padded.trailing_zeros();
    let base = decompose_triangular::<T>(k);

    // sym(T_n) sits on the first n indices of each half of sym(T_n').
    let idx: Vec<usize> = (0..n).chain(padded..padded + n).collect();
    let sub_p = base.positive.principal(&idx);
    let sub_n = base.negative.principal(&idx);

    // (Q M Qᵀ)(a, b) = M(π'(a), π'(b)) with π'(i) = π(i), π'(n+i) = n + π(i).
    let lifted: Vec<usize> = pi
        .zero_based()
        .iter()
        .copied()
        .chain(pi.zero_based().iter().map(|&v| v + n))
        .collect();
    Decomposition {
        positive: sub_p.conjugate_by_permutation(&lifted).expect("order 2n"),
        negative: sub_n.conjugate_by_permutation(&lifted).expect("order 2n"),
        beta: base.beta,
        tau: base.tau,
    }
}

/// Sylvester Hadamard matrix of order `n` (a power of two).
pub fn hadamard<T: Scalar>(n: usize) -> Result<Matrix<T>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "Hadamard order must be a power of two, got {n}"
        )));
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            T::one()
        } else {
            -T::one()
        }
    }))
}

/// Residuals of a decomposition against its defining conditions.
#[derive(Clone, Debug)]
pub struct ValidationReport<T> {
    pub symmetry_violation: T,
    pub min_eig_positive: T,
    pub min_eig_negative: T,
    /// `max_i max(P(i,i), N(i,i)) − β`, clipped below at 0.
    pub diag_excess: T,
    /// `Tr(P) + Tr(N) − τ`, clipped below at 0.
    pub trace_excess: T,
    pub realized_trace: T,
    pub max_diag: T,
    /// `‖P − N − sym(W)‖_∞`.
    pub reconstruction: T,
    pub tolerance: T,
    pub passed: bool,
}

impl<T: Scalar> ValidationReport<T> {
    pub fn failures(&self) -> Vec<&'static str> {
        let tol = self.tolerance;
        let mut out = Vec::new();
        if self.symmetry_violation > tol {
            out.push("symmetry");
        }
        if -self.min_eig_positive > tol {
            out.push("P not PSD");
        }
        if -self.min_eig_negative > tol {
            out.push("N not PSD");
        }
        if self.diag_excess > tol {
            out.push("diagonal exceeds beta");
        }
        if self.trace_excess > tol {
            out.push("trace sum exceeds tau");
        }
        if self.reconstruction > tol {
            out.push("P - N != sym(W)");
        }
        out
    }
}

/// Checks all conditions of a `(β, τ)`-decomposition of `W`.
///
/// PSD-ness is judged relative to scale: `−λ_min ≤ tol · max(1, ‖·‖_∞)`.
pub fn validate<T: Scalar>(d: &Decomposition<T>, w: &Matrix<T>, tol: T) -> Result<ValidationReport<T>> {
    // A symmetric square W may still belong to a rectangular class; the
    // decomposition order decides which embedding is meant.
    let target = if d.order() == w.rows() + w.cols() {
        block_embed(w)
    } else {
        symmetrize(w)
    };
    if d.positive.order() != target.order() || d.negative.order() != target.order() {
        return Err(Error::DimensionMismatch(format!(
            "decomposition of order {}/{} for sym(W) of order {}",
            d.positive.order(),
            d.negative.order(),
            target.order()
        )));
    }
    let symmetry_violation = [&d.positive, &d.negative]
        .iter()
        .map(|m| {
            let n = m.order();
            let mut worst = T::zero();
            for i in 0..n {
                for j in 0..i {
                    worst = worst.max((m.get(i, j) - m.get(j, i)).abs());
                }
            }
            worst
        })
        .fold(T::zero(), T::max);
    let min_eig_positive = eig_sym(&d.positive)?.min_value() / d.positive.max_abs().max(T::one());
    let min_eig_negative = eig_sym(&d.negative)?.min_value() / d.negative.max_abs().max(T::one());
    let max_diag = d
        .positive
        .diag()
        .into_iter()
        .chain(d.negative.diag())
        .fold(T::neg_infinity(), T::max);
    let diag_excess = (max_diag - d.beta).max(T::zero());
    let realized_trace = d.realized_trace();
    let trace_excess = (realized_trace - d.tau).max(T::zero());
    let reconstruction = d.difference().sub(&target)?.max_abs();
    let mut report = ValidationReport {
        symmetry_violation,
        min_eig_positive,
        min_eig_negative,
        diag_excess,
        trace_excess,
        realized_trace,
        max_diag,
        reconstruction,
        tolerance: tol,
        passed: false,
    };
    report.passed = report.failures().is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-8;

    fn assert_close(a: &SymMatrix<f64>, b: &SymMatrix<f64>, tol: f64) {
        let d = a.sub(b).unwrap().max_abs();
        assert!(d <= tol, "difference {d:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn cut_matrix_examples() {
        let empty = CutSet::new(2, &[]).unwrap();
        assert_eq!(cut_matrix::<f64>(&empty).as_slice(), &[-1.0, -1.0, -1.0, -1.0]);
        let one = CutSet::new(2, &[1]).unwrap();
        assert_eq!(cut_matrix::<f64>(&one).as_slice(), &[-1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn cut_set_validation() {
        assert!(CutSet::new(3, &[4]).is_err());
        assert!(CutSet::new(3, &[0]).is_err());
        assert!(CutSet::new(0, &[]).is_err());
        let c = CutSet::new(5, &[2, 5]).unwrap();
        assert_eq!(c.members(), vec![2, 5]);
        assert_eq!(c.bits(), 0b10010);
    }

    #[test]
    fn cut_decomposition_example() {
        let c = CutSet::new(2, &[1]).unwrap();
        let d = decompose_cut::<f64>(&c);
        assert_eq!(d.negative.as_slice(), &[1.0, -1.0, -1.0, 1.0]);
        assert_eq!(d.positive.max_abs(), 0.0);
        assert_eq!((d.beta, d.tau), (1.0, 2.0));
        let w = cut_matrix::<f64>(&c).to_matrix();
        assert!(validate(&d, &w, TOL).unwrap().passed);
    }

    #[test]
    fn empty_cut_gives_all_ones() {
        let d = decompose_cut::<f64>(&CutSet::new(4, &[]).unwrap());
        assert!(d.negative.as_slice().iter().all(|&x| x == 1.0));
        assert_eq!(d.negative.trace(), 4.0);
    }

    #[test]
    fn trace_norm_decomposition_of_swap() {
        let w = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let d = decompose_trace_norm(&w).unwrap();
        let p = SymMatrix::from_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap();
        let n = SymMatrix::from_rows(&[[0.5, -0.5], [-0.5, 0.5]]).unwrap();
        assert_close(&d.positive, &p, 1e-14);
        assert_close(&d.negative, &n, 1e-14);
        assert!((d.realized_trace() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_decomposition_of_identity() {
        let d = decompose_trace_norm(&Matrix::<f64>::identity(2)).unwrap();
        assert_close(&d.positive, &SymMatrix::identity(2), 1e-14);
        assert!(d.negative.max_abs() < 1e-14);
    }

    #[test]
    fn trace_norm_decomposition_of_row() {
        let w = Matrix::from_rows(&[[1.0, -1.0]]).unwrap();
        let d = decompose_trace_norm(&w).unwrap();
        assert!((d.realized_trace() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        let tn = crate::linalg::trace_norm(&w).unwrap();
        assert!((d.tau - 2.0 * tn).abs() < 1e-14);
        assert!(validate(&d, &w, TOL).unwrap().passed);
    }

    #[test]
    fn trace_norm_decomposition_rejects_large_entries() {
        let w = Matrix::from_rows(&[[1.5, 0.0]]).unwrap();
        assert!(matches!(decompose_trace_norm(&w), Err(Error::Domain(_))));
    }

    #[test]
    fn triangular_examples() {
        assert_eq!(triangular::<f64>(1).as_slice(), &[1.0]);
        assert_eq!(triangular::<f64>(2).as_slice(), &[1.0, 1.0, 0.0, 1.0]);
        let t3 = triangular::<f64>(3);
        let sums: Vec<f64> = (0..3).map(|i| t3.row(i).iter().sum()).collect();
        assert_eq!(sums, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn closed_form_singular_values_small() {
        let s1 = singular_values_triangular::<f64>(1);
        assert!((s1[0] - 1.0).abs() < 1e-15);
        let s2 = singular_values_triangular::<f64>(2);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s2[0] - (golden - 1.0)).abs() < 1e-12);
        assert!((s2[1] - golden).abs() < 1e-12);
    }

    #[test]
    fn triangular_base_case() {
        let d = decompose_triangular::<f64>(0);
        assert_eq!(d.positive.as_slice(), &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(d.negative.as_slice(), &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!((d.beta, d.tau), (1.0, 4.0));
    }

    #[test]
    fn triangular_level_one_by_hand() {
        // sym(T_2) with T_2 = [[1,1],[0,1]]. Quarters have size 1.
        // P = corner part [[1,0,0,1],[0,0,0,0],[0,0,0,0],[1,0,0,1]]
        //   + interleaved prev P (all ones on {0,2} and {1,3}).
        let d = decompose_triangular::<f64>(1);
        let p = SymMatrix::from_rows(&[
            [2.0, 0.0, 1.0, 1.0],
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0, 2.0],
        ])
        .unwrap();
        let n = SymMatrix::from_rows(&[
            [2.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
        ])
        .unwrap();
        assert_close(&d.positive, &p, 0.0);
        assert_close(&d.negative, &n, 0.0);
        let w = triangular::<f64>(2);
        let r = validate(&d, &w, TOL).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.reconstruction, 0.0);
        assert!(r.max_diag <= 2.0);
    }

    #[test]
    fn triangular_level_three_validates() {
        let d = decompose_triangular::<f64>(3);
        assert_eq!((d.beta, d.tau), (4.0, 128.0));
        let r = validate(&d, &triangular(8), TOL).unwrap();
        assert!(r.passed, "{r:?}");
        // Realized trace is 2n(k+2).
        assert_eq!(r.realized_trace, 80.0);
    }

    #[test]
    fn perm_matrix_examples() {
        assert_eq!(perm_matrix::<f64>(&Permutation::identity(3)), triangular(3));
        let swap = Permutation::new(&[2, 1]).unwrap();
        assert_eq!(perm_matrix::<f64>(&swap).as_slice(), &[1.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(&[1, 1]).is_err());
        assert!(Permutation::new(&[0, 1]).is_err());
        assert!(Permutation::new(&[]).is_err());
        assert_eq!(Permutation::new(&[3, 1, 2]).unwrap().apply(1), 3);
    }

    #[test]
    fn identity_permutation_matches_triangular() {
        let d = decompose_permutation::<f64>(&Permutation::identity(4));
        let t = decompose_triangular::<f64>(2);
        assert_close(&d.positive, &t.positive, 0.0);
        assert_close(&d.negative, &t.negative, 0.0);
    }

    #[test]
    fn padded_permutation_validates() {
        let pi = Permutation::new(&[3, 5, 1, 4, 2]).unwrap();
        let d = decompose_permutation::<f64>(&pi);
        assert_eq!((d.beta, d.tau), (4.0, 128.0));
        let r = validate(&d, &perm_matrix(&pi), TOL).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn conjugated_diagonal_is_permuted() {
        let pi = Permutation::new(&[2, 4, 1, 3]).unwrap();
        let base = decompose_triangular::<f64>(2);
        let d = decompose_permutation::<f64>(&pi);
        let mut a = base.positive.diag();
        let mut b = d.positive.diag();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
    }

    #[test]
    fn hadamard_examples() {
        assert_eq!(hadamard::<f64>(1).unwrap().as_slice(), &[1.0]);
        assert_eq!(hadamard::<f64>(2).unwrap().as_slice(), &[1.0, 1.0, 1.0, -1.0]);
        assert!(hadamard::<f64>(6).is_err());
        for n in [4, 8, 16, 32] {
            let h = hadamard::<f64>(n).unwrap();
            let g = h.matmul(&h.transpose()).unwrap();
            assert_eq!(g, Matrix::identity(n).scale(n as f64));
        }
    }

    #[test]
    fn corrupted_decomposition_fails_reconstruction() {
        let c = CutSet::new(4, &[1, 3]).unwrap();
        let mut d = decompose_cut::<f64>(&c);
        // Forget the negation: put w wᵀ on the positive side.
        std::mem::swap(&mut d.positive, &mut d.negative);
        let r = validate(&d, &cut_matrix::<f64>(&c).to_matrix(), TOL).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failures(), vec!["P - N != sym(W)"]);
    }

    #[test]
    fn validate_rejects_wrong_order() {
        let d = decompose_cut::<f64>(&CutSet::new(3, &[1]).unwrap());
        assert!(validate(&d, &Matrix::identity(2), TOL).is_err());
    }
}
