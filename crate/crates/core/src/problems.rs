//! The three prediction problems: their losses, learner configurations and
//! offline comparators.

use std::collections::BTreeMap;

use crate::decompose::{CutSet, Permutation};
use crate::error::{Error, Result};
use crate::linalg::{block_embed, eig_sym, trace_norm, Matrix};
use crate::omp::{OmpConfig, PredictionRange};
use crate::scalar::Scalar;

/// Shape of a per-round loss.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LossKind {
    /// `½ |x − y|`.
    AbsoluteHalved,
    /// `|x − y|`.
    Absolute,
    /// `c · x`.
    Linear,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::AbsoluteHalved => "abs_half",
            Self::Absolute => "abs",
            Self::Linear => "linear",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "abs_half" => Ok(Self::AbsoluteHalved),
            "abs" => Ok(Self::Absolute),
            "linear" => Ok(Self::Linear),
            other => Err(Error::Parse(format!("unknown loss kind '{other}'"))),
        }
    }
}

/// A convex loss of the prediction. `param` is the label for the absolute
/// kinds and the coefficient for the linear kind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossFn<T> {
    pub kind: LossKind,
    pub param: T,
}

impl<T: Scalar> LossFn<T> {
    pub fn absolute_halved(label: T) -> Self {
        Self {
            kind: LossKind::AbsoluteHalved,
            param: label,
        }
    }

    pub fn absolute(label: T) -> Self {
        Self {
            kind: LossKind::Absolute,
            param: label,
        }
    }

    pub fn linear(coefficient: T) -> Self {
        Self {
            kind: LossKind::Linear,
            param: coefficient,
        }
    }

    pub fn value(&self, x: T) -> T {
        match self.kind {
            LossKind::AbsoluteHalved => T::of(0.5) * (x - self.param).abs(),
            LossKind::Absolute => (x - self.param).abs(),
            LossKind::Linear => self.param * x,
        }
    }

    /// A subderivative at `x`; `0` at the kink of the absolute kinds.
    pub fn subgradient(&self, x: T) -> T {
        let sign = |d: T| {
            if d > T::zero() {
                T::one()
            } else if d < T::zero() {
                -T::one()
            } else {
                T::zero()
            }
        };
        match self.kind {
            LossKind::AbsoluteHalved => T::of(0.5) * sign(x - self.param),
            LossKind::Absolute => sign(x - self.param),
            LossKind::Linear => self.param,
        }
    }

    pub fn lipschitz(&self) -> T {
        match self.kind {
            LossKind::AbsoluteHalved => T::of(0.5),
            LossKind::Absolute => T::one(),
            LossKind::Linear => self.param.abs(),
        }
    }
}

/// The three comparison classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    MaxCut,
    Gambling,
    CollaborativeFiltering,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::MaxCut => "maxcut",
            Self::Gambling => "gambling",
            Self::CollaborativeFiltering => "cf",
        }
    }

    /// Whether the pair `(i, i)` is forbidden.
    pub fn distinct_pairs(self) -> bool {
        !matches!(self, Self::CollaborativeFiltering)
    }
}

/// Max-cut on `n` nodes: `(1, n)`-decomposable symmetric class, `G = ½`.
pub fn maxcut_config<T: Scalar>(n: usize, horizon: usize) -> Result<OmpConfig<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("max-cut needs n >= 2, got {n}")));
    }
    OmpConfig::new(
        n,
        n,
        true,
        T::one(),
        T::of_usize(n),
        T::of(0.5),
        horizon,
        PredictionRange::Signed,
        None,
    )
}

/// `n' = 2^k ≥ n` used by the gambling class.
pub fn gambling_padding(n: usize) -> (usize, u32) {
    let padded = n.next_power_of_two();
    (padded, padded.trailing_zeros())
}

/// Gambling on `n` teams with `β = k + 1` and `τ = 4n'(k+1)`.
///
/// The learner works on the padded `n' × n'` class, so `q = n'` and
/// `p = 2n'`; the adversary only ever queries indices up to `n`.
pub fn gambling_config<T: Scalar>(n: usize, horizon: usize) -> Result<OmpConfig<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("gambling needs n >= 2, got {n}")));
    }
    let (padded, k) = gambling_padding(n);
    let levels = T::of(f64::from(k) + 1.0);
    OmpConfig::new(
        padded,
        padded,
        false,
        levels,
        T::of_usize(4 * padded) * levels,
        T::one(),
        horizon,
        PredictionRange::Unit,
        None,
    )
}

/// Collaborative filtering on `m × n` with trace norm at most `τ₀`:
/// `β = √(m+n)`, `τ = 2τ₀`.
pub fn cf_config<T: Scalar>(m: usize, n: usize, tau0: T, g: T, horizon: usize) -> Result<OmpConfig<T>> {
    let limit = T::of_usize(m) * T::of_usize(n).sqrt();
    if !(tau0 > T::zero()) || tau0 > limit {
        return Err(Error::InvalidParameter(format!(
            "trace bound must lie in (0, m·√n] = (0, {limit}], got {tau0}"
        )));
    }
    let tau = (T::of(2.0) * tau0).max(T::one());
    OmpConfig::new(
        m,
        n,
        false,
        T::of_usize(m + n).sqrt(),
        tau,
        g,
        horizon,
        PredictionRange::Signed,
        None,
    )
}

/// One adversary move: an entry (1-based) and the loss charged on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Round<T> {
    pub i: usize,
    pub j: usize,
    pub loss: LossFn<T>,
}

/// A round together with the learner's response.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundRecord<T> {
    pub i: usize,
    pub j: usize,
    pub loss: LossFn<T>,
    pub prediction: T,
    pub learner_loss: T,
}

impl<T: Scalar> RoundRecord<T> {
    pub fn round(&self) -> Round<T> {
        Round {
            i: self.i,
            j: self.j,
            loss: self.loss,
        }
    }
}

/// Total loss of a fixed matrix on a sequence of rounds.
pub fn comparator_loss<T: Scalar>(w: &Matrix<T>, rounds: &[Round<T>]) -> T {
    rounds
        .iter()
        .map(|r| r.loss.value(w.get(r.i - 1, r.j - 1)))
        .sum()
}

fn check_indices<T: Scalar>(rounds: &[Round<T>], m: usize, n: usize) -> Result<()> {
    match rounds.iter().find(|r| r.i == 0 || r.i > m || r.j == 0 || r.j > n) {
        Some(r) => Err(Error::IndexOutOfRange(format!(
            "entry ({}, {}) outside {m}x{n}",
            r.i, r.j
        ))),
        None => Ok(()),
    }
}

fn ties<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::of(1e-9) * (T::one() + a.abs().max(b.abs()))
}

/// Largest node count accepted by [`best_cut_bruteforce`].
pub const MAX_CUT_BRUTEFORCE: usize = 20;

/// Exact best cut in hindsight by enumerating all `2^n` subsets.
///
/// Ties go to the smallest bit set.
pub fn best_cut_bruteforce<T: Scalar>(rounds: &[Round<T>], n: usize) -> Result<(CutSet, T)> {
    if n == 0 || n > MAX_CUT_BRUTEFORCE {
        return Err(Error::InvalidParameter(format!(
            "brute-force cut search supports 1..={MAX_CUT_BRUTEFORCE} nodes, got {n}"
        )));
    }
    check_indices(rounds, n, n)?;
    // Per unordered pair: total loss when the pair crosses vs. when it does not.
    let mut cross = vec![T::zero(); n * n];
    let mut same = vec![T::zero(); n * n];
    let mut constant = T::zero();
    for r in rounds {
        let (a, b) = (r.i.min(r.j) - 1, r.i.max(r.j) - 1);
        if a == b {
            constant += r.loss.value(-T::one());
            continue;
        }
        cross[a * n + b] += r.loss.value(T::one());
        same[a * n + b] += r.loss.value(-T::one());
    }
    let pair = |a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        (cross[a * n + b], same[a * n + b])
    };
    let loss_of = |bits: u64| -> T {
        let mut total = constant;
        for a in 0..n {
            for b in a + 1..n {
                let (c, s) = pair(a, b);
                total += if (bits >> a ^ bits >> b) & 1 == 1 { c } else { s };
            }
        }
        total
    };

    // Gray-code walk: flipping node v only changes pairs touching v.
    let mut bits = 0u64;
    let mut current = loss_of(0);
    let (mut best_bits, mut best) = (0u64, current);
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        for u in 0..n {
            if u == v {
                continue;
            }
            let (c, s) = pair(u, v);
            let crossing = (bits >> u ^ bits >> v) & 1 == 1;
            current += if crossing { s - c } else { c - s };
        }
        bits ^= 1 << v;
        if (current < best && !ties(current, best)) || (ties(current, best) && bits < best_bits) {
            best = current;
            best_bits = bits;
        }
    }
    // Report the exact value for the winner rather than the running sum.
    Ok((CutSet::from_bits(n, best_bits)?, loss_of(best_bits)))
}

/// Aggregated edge weights `w_ij = Σ y_t` over rounds on the unordered pair.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph<T> {
    pub n: usize,
    /// Keys `(i, j)` with `i < j`, 1-based.
    pub weights: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn weight(&self, i: usize, j: usize) -> T {
        let key = (i.min(j), i.max(j));
        self.weights.get(&key).copied().unwrap_or_else(T::zero)
    }

    pub fn total_weight(&self) -> T {
        self.weights.values().copied().sum()
    }

    pub fn cut_weight(&self, cut: &CutSet) -> T {
        self.weights
            .iter()
            .filter(|((i, j), _)| cut.crosses(*i, *j))
            .map(|(_, &w)| w)
            .sum()
    }
}

/// Sums the labels of the rounds on each unordered pair. Self-pairs are skipped.
pub fn maxcut_weights<T: Scalar>(rounds: &[Round<T>], n: usize) -> Result<WeightedGraph<T>> {
    check_indices(rounds, n, n)?;
    let mut weights = BTreeMap::new();
    for r in rounds.iter().filter(|r| r.i != r.j) {
        *weights.entry((r.i.min(r.j), r.i.max(r.j))).or_insert_with(T::zero) += r.loss.param;
    }
    Ok(WeightedGraph { n, weights })
}

/// Maximum-weight cut by enumeration; ties go to the smallest bit set.
pub fn max_weight_cut<T: Scalar>(graph: &WeightedGraph<T>) -> Result<(CutSet, T)> {
    let n = graph.n;
    if n == 0 || n > MAX_CUT_BRUTEFORCE {
        return Err(Error::InvalidParameter(format!(
            "brute-force cut search supports 1..={MAX_CUT_BRUTEFORCE} nodes, got {n}"
        )));
    }
    let mut best = (CutSet::from_bits(n, 0)?, T::zero());
    for bits in 1u64..(1u64 << n) {
        let cut = CutSet::from_bits(n, bits)?;
        let w = graph.cut_weight(&cut);
        if w > best.1 && !ties(w, best.1) {
            best = (cut, w);
        }
    }
    Ok(best)
}

/// Every cut attaining the minimum loss (up to a relative `1e−9`), in
/// increasing bit order.
pub fn optimal_cuts<T: Scalar>(rounds: &[Round<T>], n: usize) -> Result<Vec<CutSet>> {
    let (_, best) = best_cut_bruteforce(rounds, n)?;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << n) {
        let cut = CutSet::from_bits(n, bits)?;
        if ties(cut_loss(&cut, rounds), best) {
            out.push(cut);
        }
    }
    Ok(out)
}

/// Every cut attaining the maximum weight, in increasing bit order.
pub fn maximum_weight_cuts<T: Scalar>(graph: &WeightedGraph<T>) -> Result<Vec<CutSet>> {
    let (_, best) = max_weight_cut(graph)?;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << graph.n) {
        let cut = CutSet::from_bits(graph.n, bits)?;
        if ties(graph.cut_weight(&cut), best) {
            out.push(cut);
        }
    }
    Ok(out)
}

/// Loss of the cut matrix `W_A` on the rounds.
pub fn cut_loss<T: Scalar>(cut: &CutSet, rounds: &[Round<T>]) -> T {
    rounds
        .iter()
        .map(|r| {
            let w = if cut.crosses(r.i, r.j) { T::one() } else { -T::one() };
            r.loss.value(w)
        })
        .sum()
}

/// Largest team count accepted by [`best_permutation_bruteforce`].
pub const MAX_PERMUTATION_BRUTEFORCE: usize = 8;

/// Exact best permutation in hindsight over all `n!` orders.
///
/// Ties go to the lexicographically smallest mapping.
pub fn best_permutation_bruteforce<T: Scalar>(rounds: &[Round<T>], n: usize) -> Result<(Permutation, T)> {
    if n == 0 || n > MAX_PERMUTATION_BRUTEFORCE {
        return Err(Error::InvalidParameter(format!(
            "brute-force permutation search supports 1..={MAX_PERMUTATION_BRUTEFORCE} teams, got {n}"
        )));
    }
    check_indices(rounds, n, n)?;
    // Per ordered pair: total loss when W_π(i,j) is 1 vs. 0.
    let mut ahead = vec![T::zero(); n * n];
    let mut behind = vec![T::zero(); n * n];
    for r in rounds {
        let k = (r.i - 1) * n + (r.j - 1);
        ahead[k] += r.loss.value(T::one());
        behind[k] += r.loss.value(T::zero());
    }
    let active: Vec<usize> = (0..n * n).filter(|&k| ahead[k] != T::zero() || behind[k] != T::zero()).collect();
    let loss_of = |perm: &[usize]| -> T {
        active
            .iter()
            .map(|&k| {
                let (i, j) = (k / n, k % n);
                if perm[i] <= perm[j] {
                    ahead[k]
                } else {
                    behind[k]
                }
            })
            .sum()
    };

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best_perm = perm.clone();
    let mut best = loss_of(&perm);
    while next_permutation(&mut perm) {
        let l = loss_of(&perm);
        if l < best && !ties(l, best) {
            best = l;
            best_perm.clone_from(&perm);
        }
    }
    Ok((Permutation::from_zero_based(best_perm), best))
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Euclidean projection of `σ ≥ 0` onto `{Σ σ ≤ budget}`: subtract the
/// water level `θ` and clip at zero.
fn water_fill<T: Scalar>(sigma: &[T], budget: T) -> Vec<T> {
    let total: T = sigma.iter().copied().sum();
    if total <= budget {
        return sigma.to_vec();
    }
    let mut sorted = sigma.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    let mut acc = T::zero();
    let mut theta = T::zero();
    for (k, &s) in sorted.iter().enumerate() {
        acc += s;
        let level = (acc - budget) / T::of_usize(k + 1);
        if s > level {
            theta = level;
        } else {
            break;
        }
    }
    sigma.iter().map(|&s| (s - theta).max(T::zero())).collect()
}

/// Caps the singular values of `w` so that they sum to at most `budget`.
fn cap_trace_norm<T: Scalar>(w: &Matrix<T>, budget: T) -> Result<Matrix<T>> {
    let (m, n) = (w.rows(), w.cols());
    let e = eig_sym(&block_embed(w))?;
    // Positive eigenvalues of the embedding are the nonzero singular values,
    // with eigenvectors (u; v)/√2.
    let positive: Vec<usize> = (0..m + n).filter(|&k| e.values()[k] > T::zero()).collect();
    let sigma: Vec<T> = positive.iter().map(|&k| e.values()[k]).collect();
    if sigma.iter().copied().sum::<T>() <= budget {
        return Ok(w.clone());
    }
    let capped = water_fill(&sigma, budget);
    let v = e.vectors();
    let two = T::of(2.0);
    Ok(Matrix::from_fn(m, n, |i, j| {
        positive
            .iter()
            .zip(&capped)
            .map(|(&k, &s)| two * s * v.get(i, k) * v.get(m + j, k))
            .sum()
    }))
}

fn clip_unit<T: Scalar>(w: &Matrix<T>) -> Matrix<T> {
    w.map(|x| x.max(-T::one()).min(T::one()))
}

/// Feasible point of `{‖W‖_∞ ≤ 1, ‖W‖⋆ ≤ τ₀}` near `w`.
pub fn cf_feasible_point<T: Scalar>(w: &Matrix<T>, tau0: T) -> Result<Matrix<T>> {
    let mut x = clip_unit(w);
    for _ in 0..4 {
        x = clip_unit(&cap_trace_norm(&x, tau0)?);
    }
    let norm = trace_norm_rect(&x)?;
    if norm > tau0 {
        x = x.scale(tau0 / norm * (T::one() - T::of(1e-12)));
    }
    Ok(x)
}

/// Trace norm of any matrix, square symmetric inputs included.
fn trace_norm_rect<T: Scalar>(w: &Matrix<T>) -> Result<T> {
    if w.is_symmetric() {
        trace_norm(w)
    } else {
        Ok(crate::linalg::sym_trace_norm(&block_embed(w))? * T::of(0.5))
    }
}

/// Offline comparator for collaborative filtering: projected subgradient
/// descent over `{W ∈ [−1,1]^{m×n} : ‖W‖⋆ ≤ τ₀}` with step `D/√k`, where
/// `D = √(mn)` is the box diameter scale.
///
/// Every visited point is made feasible before it is scored, so the
/// returned loss is attained by the returned matrix.
pub fn best_cf_subgradient<T: Scalar>(
    rounds: &[Round<T>],
    m: usize,
    n: usize,
    tau0: T,
    iters: usize,
) -> Result<(Matrix<T>, T)> {
    check_indices(rounds, m, n)?;
    if !(tau0 >= T::zero()) {
        return Err(Error::InvalidParameter(format!("trace bound must be nonnegative, got {tau0}")));
    }
    let mut w = Matrix::zeros(m, n);
    let mut best = (w.clone(), comparator_loss(&w, rounds));
    if rounds.is_empty() || tau0 == T::zero() {
        return Ok(best);
    }
    let diameter = T::of_usize(m * n).sqrt();
    for k in 1..=iters {
        let mut grad = Matrix::zeros(m, n);
        for r in rounds {
            let (a, b) = (r.i - 1, r.j - 1);
            grad.set(a, b, grad.get(a, b) + r.loss.subgradient(w.get(a, b)));
        }
        let norm = grad.frobenius();
        if norm == T::zero() {
            break;
        }
        let step = diameter / T::of_usize(k).sqrt() / norm;
        let moved = Matrix::from_fn(m, n, |a, b| w.get(a, b) - step * grad.get(a, b));
        w = cf_feasible_point(&moved, tau0)?;
        let l = comparator_loss(&w, rounds);
        if l < best.1 {
            best = (w.clone(), l);
        }
    }
    Ok(best)
}

/// Learner against comparator over one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretReport<T> {
    pub rounds: usize,
    pub learner_loss: T,
    pub comparator_loss: T,
    pub regret: T,
    pub bound: T,
    pub within_bound: bool,
}

/// Regret of the recorded run against `comparator_loss`, checked against `bound`.
pub fn evaluate_run<T: Scalar>(records: &[RoundRecord<T>], comparator_loss: T, bound: T) -> RegretReport<T> {
    let learner_loss: T = records.iter().map(|r| r.learner_loss).sum();
    let regret = learner_loss - comparator_loss;
    RegretReport {
        rounds: records.len(),
        learner_loss,
        comparator_loss,
        regret,
        bound,
        within_bound: regret <= bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rounds(pairs: &[(usize, usize, f64)]) -> Vec<Round<f64>> {
        pairs.iter()
            .map(|&(i, j, y)| Round {
                i,
                j,
                loss: LossFn::absolute_halved(y),
            })
            .collect()
    }

    #[test]
    fn loss_values_and_subgradients() {
        let h = LossFn::absolute_halved(1.0f64);
        assert_eq!(h.value(0.0), 0.5);
        assert_eq!(h.subgradient(0.0), -0.5);
        assert_eq!(h.subgradient(1.0), 0.0);
        assert_eq!(h.lipschitz(), 0.5);
        let a = LossFn::absolute(0.0f64);
        assert_eq!(a.value(0.25), 0.25);
        assert_eq!(a.subgradient(0.25), 1.0);
        let l = LossFn::linear(-0.7f64);
        assert_eq!(l.value(2.0), -1.4);
        assert_eq!(l.subgradient(5.0), -0.7);
        assert_eq!(l.lipschitz(), 0.7);
    }

    #[test]
    fn loss_kind_names_round_trip() {
        for k in [LossKind::AbsoluteHalved, LossKind::Absolute, LossKind::Linear] {
            assert_eq!(LossKind::parse(k.name()).unwrap(), k);
        }
        assert!(LossKind::parse("huber").is_err());
    }

    #[test]
    fn maxcut_config_example() {
        let c = maxcut_config::<f64>(4, 100).unwrap();
        assert_eq!(c.order(), 8);
        assert_eq!(c.gamma(), 1.0);
        assert_eq!(c.tau / c.order() as f64, 0.5);
        let expected = 2.0 * 0.5 * (4.0f64 * 8f64.ln() * 100.0).sqrt();
        assert!((c.regret_bound() - expected).abs() < 1e-12);
        assert!(maxcut_config::<f64>(1, 10).is_err());
    }

    #[test]
    fn gambling_config_examples() {
        let c = gambling_config::<f64>(4, 10).unwrap();
        assert_eq!((c.beta, c.tau), (3.0, 48.0));
        let c = gambling_config::<f64>(5, 10).unwrap();
        assert_eq!((c.beta, c.tau, c.p), (4.0, 128.0, 16));
        assert_eq!(c.range, PredictionRange::Unit);
    }

    #[test]
    fn cf_config_examples() {
        let c = cf_config(4, 4, 8.0f64, 1.0, 10).unwrap();
        assert!((c.beta - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.tau, 16.0);
        assert!(cf_config(4, 4, 8.0f64, 1.0, 10).is_ok());
        assert!(cf_config(4, 4, 9.0f64, 1.0, 10).is_err());
    }

    #[test]
    fn best_cut_small_examples() {
        let r = rounds(&[(1, 2, 1.0), (1, 2, 1.0), (1, 2, 1.0)]);
        let (cut, loss) = best_cut_bruteforce(&r, 2).unwrap();
        assert_eq!(loss, 0.0);
        assert_eq!(cut.members(), vec![1]);
        let (cut, loss) = best_cut_bruteforce::<f64>(&[], 3).unwrap();
        assert_eq!((cut.bits(), loss), (0, 0.0));
        assert!(best_cut_bruteforce::<f64>(&[], 21).is_err());
    }

    #[test]
    fn weights_aggregate_labels() {
        let g = maxcut_weights(&rounds(&[(1, 2, 1.0)]), 2).unwrap();
        assert_eq!(g.weight(1, 2), 1.0);
        let g = maxcut_weights(&rounds(&[(1, 2, 1.0), (2, 1, -1.0)]), 2).unwrap();
        assert_eq!(g.weight(1, 2), 0.0);
    }

    #[test]
    fn permutation_oracle_examples() {
        let r: Vec<Round<f64>> = (0..3)
            .map(|_| Round {
                i: 1,
                j: 2,
                loss: LossFn::absolute(1.0),
            })
            .collect();
        let (pi, loss) = best_permutation_bruteforce(&r, 2).unwrap();
        assert_eq!(pi, Permutation::identity(2));
        assert_eq!(loss, 0.0);

        let mut r = Vec::new();
        for _ in 0..4 {
            r.push(Round { i: 1, j: 2, loss: LossFn::absolute(1.0) });
            r.push(Round { i: 1, j: 2, loss: LossFn::absolute(0.0) });
        }
        let (_, loss) = best_permutation_bruteforce(&r, 3).unwrap();
        assert_eq!(loss, 4.0);
    }

    #[test]
    fn next_permutation_is_lexicographic() {
        let mut v = vec![0, 1, 2];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn water_fill_hits_budget() {
        let s = water_fill(&[3.0f64, 1.0, 0.5], 2.0);
        assert!((s.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert_eq!(s, vec![2.0, 0.0, 0.0]);
        let s = water_fill(&[1.0f64, 1.0], 1.0);
        assert_eq!(s, vec![0.5, 0.5]);
        assert_eq!(water_fill(&[0.2f64], 1.0), vec![0.2]);
    }

    #[test]
    fn cf_single_entry_optimum() {
        let r: Vec<Round<f64>> = (0..50)
            .map(|_| Round { i: 2, j: 3, loss: LossFn::linear(-1.0) })
            .collect();
        let (w, loss) = best_cf_subgradient(&r, 3, 4, 4.0, 50).unwrap();
        assert!((loss + 50.0).abs() < 1e-9, "{loss}");
        assert!((w.get(1, 2) - 1.0).abs() < 1e-12);
        let (_, zero) = best_cf_subgradient::<f64>(&[], 3, 4, 4.0, 50).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn regret_report_arithmetic() {
        let rec = RoundRecord {
            i: 1,
            j: 2,
            loss: LossFn::absolute_halved(1.0f64),
            prediction: 0.0,
            learner_loss: 0.5,
        };
        let rep = evaluate_run(&[rec, rec], 1.0, 0.1);
        assert_eq!(rep.regret, 0.0);
        assert!(rep.within_bound);
        let rep = evaluate_run(&[rec], 2.0, 0.1);
        assert_eq!(rep.regret, -1.5);
    }
}
