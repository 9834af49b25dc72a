//! Sequence generators: the randomized lower-bound constructions and plain
//! random adversaries.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`, so a
//! sequence is a pure function of its parameters and seed on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decompose::CutSet;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::problems::{comparator_loss, cut_loss, LossFn, ProblemKind, Round};
use crate::scalar::Scalar;

/// The RNG behind every generator.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rounds chosen by an adversary for an `m × n` problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence<T> {
    pub kind: ProblemKind,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub rounds: Vec<Round<T>>,
}

impl<T: Scalar> Sequence<T> {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Index ranges, and distinct endpoints where the problem needs them.
    pub fn validate(&self) -> Result<()> {
        for (t, r) in self.rounds.iter().enumerate() {
            if r.i == 0 || r.i > self.m || r.j == 0 || r.j > self.n {
                return Err(Error::IndexOutOfRange(format!(
                    "round {}: entry ({}, {}) outside {}x{}",
                    t + 1,
                    r.i,
                    r.j,
                    self.m,
                    self.n
                )));
            }
            if self.kind.distinct_pairs() && r.i == r.j {
                return Err(Error::InvalidParameter(format!(
                    "round {}: {} needs i != j, got ({}, {})",
                    t + 1,
                    self.kind.name(),
                    r.i,
                    r.j
                )));
            }
        }
        Ok(())
    }
}

/// Max-cut lower bound: `n/2` intervals of length `2T/n`; interval `i`
/// queries the pair `(i, i + n/2)` with independent `±1` labels.
pub fn maxcut_lb<T: Scalar>(n: usize, horizon: usize, seed: u64) -> Result<Sequence<T>> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("n must be even and at least 2, got {n}")));
    }
    let half = n / 2;
    if horizon == 0 || horizon % half != 0 {
        return Err(Error::InvalidParameter(format!(
            "T must be a positive multiple of n/2 = {half}, got {horizon}; nearest valid T is {}",
            nearest_multiple(horizon, half)
        )));
    }
    let len = horizon / half;
    let mut rng = rng_for(seed);
    let mut rounds = Vec::with_capacity(horizon);
    for i in 1..=half {
        for _ in 0..len {
            let y = if rng.random::<bool>() { T::one() } else { -T::one() };
            rounds.push(Round {
                i,
                j: i + half,
                loss: LossFn::absolute_halved(y),
            });
        }
    }
    Ok(Sequence {
        kind: ProblemKind::MaxCut,
        m: n,
        n,
        seed,
        rounds,
    })
}

fn nearest_multiple(x: usize, k: usize) -> usize {
    let down = x / k * k;
    if down == 0 || x - down >= down + k - x {
        down + k
    } else {
        down
    }
}

/// Label sums `S_i` of the max-cut lower-bound intervals.
pub fn maxcut_lb_sums<T: Scalar>(seq: &Sequence<T>) -> Vec<T> {
    let half = seq.n / 2;
    let mut sums = vec![T::zero(); half];
    for r in &seq.rounds {
        sums[r.i - 1] += r.loss.param;
    }
    sums
}

/// Best cut for a max-cut lower-bound sequence: pair `(i, i + n/2)` crosses
/// iff `S_i ≥ 0`. Its loss is `Σ_i (|T_i| − |S_i|) / 2`.
pub fn maxcut_lb_comparator<T: Scalar>(seq: &Sequence<T>) -> Result<(CutSet, T)> {
    let half = seq.n / 2;
    let sums = maxcut_lb_sums(seq);
    let mut members = Vec::new();
    for (k, &s) in sums.iter().enumerate() {
        members.push(k + 1);
        if s < T::zero() {
            members.push(k + 1 + half);
        }
    }
    let cut = CutSet::new(seq.n, &members)?;
    let loss = cut_loss(&cut, &seq.rounds);
    Ok((cut, loss))
}

/// Collaborative filtering lower bound on the first `τ₀/√n` rows: one
/// interval of length `T/(τ₀√n)` per active entry (row-major), with losses
/// `σ_t G W_ij` for Rademacher `σ_t`.
pub fn cf_lb<T: Scalar>(m: usize, n: usize, tau0: T, g: T, horizon: usize, seed: u64) -> Result<Sequence<T>> {
    let rows = cf_lb_rows(m, n, tau0)?;
    let intervals = rows * n;
    if horizon == 0 || horizon % intervals != 0 {
        return Err(Error::InvalidParameter(format!(
            "T must be a positive multiple of τ₀√n = {intervals}, got {horizon}; nearest valid T is {}",
            nearest_multiple(horizon, intervals)
        )));
    }
    if !(g > T::zero()) {
        return Err(Error::InvalidParameter(format!("G must be positive, got {g}")));
    }
    let len = horizon / intervals;
    let mut rng = rng_for(seed);
    let mut rounds = Vec::with_capacity(horizon);
    for k in 0..intervals {
        let (i, j) = (k / n + 1, k % n + 1);
        for _ in 0..len {
            let sigma = if rng.random::<bool>() { T::one() } else { -T::one() };
            rounds.push(Round {
                i,
                j,
                loss: LossFn::linear(sigma * g),
            });
        }
    }
    Ok(Sequence {
        kind: ProblemKind::CollaborativeFiltering,
        m,
        n,
        seed,
        rounds,
    })
}

/// Number of active rows `τ₀/√n`; must be a positive integer no larger than `m`.
pub fn cf_lb_rows<T: Scalar>(m: usize, n: usize, tau0: T) -> Result<usize> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("empty shape {m}x{n}")));
    }
    let ratio = tau0 / T::of_usize(n).sqrt();
    let rows = ratio.round();
    if !(rows >= T::one()) || (ratio - rows).abs() > T::of(1e-9) * ratio.max(T::one()) {
        return Err(Error::InvalidParameter(format!(
            "τ₀/√n must be a positive integer, got {ratio}"
        )));
    }
    let rows = rows.to_usize().expect("small positive integer");
    if rows > m {
        return Err(Error::InvalidParameter(format!(
            "τ₀/√n = {rows} rows exceeds m = {m}"
        )));
    }
    Ok(rows)
}

/// `W*(i,j) = −sign(Σ σ_t)` over the rounds on `(i, j)` for active rows,
/// with `sign(0) = +1`, zero elsewhere; returned with its total loss.
pub fn cf_lb_comparator<T: Scalar>(seq: &Sequence<T>, tau0: T) -> Result<(Matrix<T>, T)> {
    let rows = cf_lb_rows(seq.m, seq.n, tau0)?;
    let mut sums = Matrix::<T>::zeros(seq.m, seq.n);
    for r in &seq.rounds {
        sums.set(r.i - 1, r.j - 1, sums.get(r.i - 1, r.j - 1) + r.loss.param);
    }
    let w = Matrix::from_fn(seq.m, seq.n, |i, j| {
        if i >= rows {
            T::zero()
        } else if sums.get(i, j) >= T::zero() {
            -T::one()
        } else {
            T::one()
        }
    });
    let value = comparator_loss(&w, &seq.rounds);
    Ok((w, value))
}

/// Uniformly random entries with random labels.
///
/// Max-cut gets `±1` labels with the halved absolute loss, gambling gets
/// `{0, 1}` outcomes with the absolute loss, and collaborative filtering
/// gets linear losses with coefficients uniform in `[−G, G]`. Max-cut and
/// gambling never query a diagonal entry.
pub fn random_adversary<T: Scalar>(
    kind: ProblemKind,
    m: usize,
    n: usize,
    horizon: usize,
    g: T,
    seed: u64,
) -> Result<Sequence<T>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("empty shape {m}x{n}")));
    }
    if kind.distinct_pairs() && (m != n || n < 2) {
        return Err(Error::InvalidParameter(format!(
            "{} needs a square shape with n >= 2, got {m}x{n}",
            kind.name()
        )));
    }
    let mut rng = rng_for(seed);
    let mut rounds = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let i = rng.random_range(1..=m);
        let j = if kind.distinct_pairs() {
            // Uniform over the n − 1 other nodes.
            let j = rng.random_range(1..n);
            if j >= i {
                j + 1
            } else {
                j
            }
        } else {
            rng.random_range(1..=n)
        };
        let loss = match kind {
            ProblemKind::MaxCut => {
                LossFn::absolute_halved(if rng.random::<bool>() { T::one() } else { -T::one() })
            }
            ProblemKind::Gambling => {
                LossFn::absolute(if rng.random::<bool>() { T::one() } else { T::zero() })
            }
            ProblemKind::CollaborativeFiltering => {
                let u: f64 = rng.random_range(-1.0..=1.0);
                LossFn::linear(g * T::of(u))
            }
        };
        rounds.push(Round { i, j, loss });
    }
    Ok(Sequence { kind, m, n, seed, rounds })
}
