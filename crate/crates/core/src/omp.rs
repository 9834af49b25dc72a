//! Reduction from online matrix prediction to online linear optimization.
//!
//! The learner keeps a `2p × 2p` iterate `X`. Entry `(i, j)` of the
//! predicted `m × n` matrix is read as `X(i, j+q) − X(p+i, p+j+q)`, and a
//! subderivative `g` of the round's loss becomes the 4-sparse loss matrix
//! `L` with `±g` on the two mirrored off-diagonal pairs. Each round projects
//! onto the four-constraint set `K_t` attached to the queried entry.

use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::mmw::{init_state, project_log, ConstraintSet, LinConstraint, OloState, DEFAULT_TOLERANCE};
use crate::problems::LossFn;
use crate::scalar::Scalar;

/// Slack within which an out-of-range prediction is clamped instead of
/// rejected.
pub const CLAMP_SLACK: f64 = 1e-6;

/// Interval the learner's predictions must lie in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredictionRange {
    /// `[−1, 1]`.
    Signed,
    /// `[0, 1]`.
    Unit,
}

impl PredictionRange {
    pub fn lower<T: Scalar>(self) -> T {
        match self {
            Self::Signed => -T::one(),
            Self::Unit => T::zero(),
        }
    }

    pub fn upper<T: Scalar>(self) -> T {
        T::one()
    }
}

/// `√(τ ln(2p) / (β · 4G² · T))`.
pub fn eta_default<T: Scalar>(tau: T, p: usize, beta: T, g: T, horizon: usize) -> T {
    let gamma = T::of(4.0) * g * g;
    (tau * T::of_usize(2 * p).ln() / (beta * gamma * T::of_usize(horizon))).sqrt()
}

/// `2G √(τ β ln(2p) T)`.
pub fn regret_bound<T: Scalar>(tau: T, p: usize, beta: T, g: T, horizon: usize) -> T {
    T::of(2.0) * g * (tau * beta * T::of_usize(2 * p).ln() * T::of_usize(horizon)).sqrt()
}

/// Shape and parameters of an online matrix prediction problem.
#[derive(Clone, Debug, PartialEq)]
pub struct OmpConfig<T> {
    pub m: usize,
    pub n: usize,
    pub symmetric_class: bool,
    pub q: usize,
    pub p: usize,
    pub beta: T,
    pub tau: T,
    pub g: T,
    pub horizon: usize,
    pub range: PredictionRange,
    pub eta: T,
}

impl<T: Scalar> OmpConfig<T> {
    /// Builds a config; `eta = None` selects [`eta_default`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m: usize,
        n: usize,
        symmetric_class: bool,
        beta: T,
        tau: T,
        g: T,
        horizon: usize,
        range: PredictionRange,
        eta: Option<T>,
    ) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!("empty shape {m}x{n}")));
        }
        if symmetric_class && m != n {
            return Err(Error::InvalidParameter(format!(
                "symmetric class needs a square shape, got {m}x{n}"
            )));
        }
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if !(beta >= T::one()) {
            return Err(Error::InvalidParameter(format!("beta must be at least 1, got {beta}")));
        }
        if !(g > T::zero()) || !g.is_finite() {
            return Err(Error::InvalidParameter(format!("G must be positive, got {g}")));
        }
        let (q, p) = if symmetric_class { (0, n) } else { (m, m + n) };
        if !(tau >= T::one()) || tau > T::of_usize(2 * p) * beta * (T::one() + T::of(1e-12)) {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in [1, 2p·beta] = [1, {}], got {tau}",
                T::of_usize(2 * p) * beta
            )));
        }
        let eta = match eta {
            Some(e) if e > T::zero() && e.is_finite() => e,
            Some(e) => return Err(Error::InvalidParameter(format!("eta must be positive, got {e}"))),
            None => eta_default(tau, p, beta, g, horizon),
        };
        Ok(Self {
            m,
            n,
            symmetric_class,
            q,
            p,
            beta,
            tau,
            g,
            horizon,
            range,
            eta,
        })
    }

    /// Order `N = 2p` of the learner's iterate.
    pub fn order(&self) -> usize {
        2 * self.p
    }

    /// `γ = 4G²`.
    pub fn gamma(&self) -> T {
        T::of(4.0) * self.g * self.g
    }

    pub fn eta_default(&self) -> T {
        eta_default(self.tau, self.p, self.beta, self.g, self.horizon)
    }

    /// Regret guarantee `2G √(τ β ln(2p) T)` for the prediction problem.
    pub fn regret_bound(&self) -> T {
        regret_bound(self.tau, self.p, self.beta, self.g, self.horizon)
    }

    /// `2 √(β γ τ ln(N) T)` for the underlying linear optimization problem.
    pub fn olo_regret_bound(&self) -> T {
        T::of(2.0) * self.regret_bound()
    }

    /// 0-based positions `(i, j+q, p+i, p+j+q)` read by entry `(i, j)` (1-based).
    pub fn positions(&self, i: usize, j: usize) -> Result<[usize; 4]> {
        if i == 0 || i > self.m || j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange(format!(
                "entry ({i}, {j}) outside {}x{}",
                self.m, self.n
            )));
        }
        let (r, c) = (i - 1, j - 1 + self.q);
        Ok([r, c, self.p + r, self.p + c])
    }
}

/// `X(i, j+q) − X(p+i, p+j+q)` for 1-based `(i, j)`.
pub fn predict<T: Scalar>(x: &SymMatrix<T>, i: usize, j: usize, cfg: &OmpConfig<T>) -> Result<T> {
    if x.order() != cfg.order() {
        return Err(Error::DimensionMismatch(format!(
            "iterate of order {} for a config of order {}",
            x.order(),
            cfg.order()
        )));
    }
    let [r, c, pr, pc] = cfg.positions(i, j)?;
    Ok(x.get(r, c) - x.get(pr, pc))
}

/// `g` at `(i, j+q)` and `(j+q, i)`, `−g` at `(p+i, p+j+q)` and its mirror.
pub fn loss_matrix<T: Scalar>(g: T, i: usize, j: usize, cfg: &OmpConfig<T>) -> Result<SymMatrix<T>> {
    if g.abs() > cfg.g * (T::one() + T::of(1e-12)) {
        return Err(Error::InvalidParameter(format!("|g| = {} exceeds G = {}", g.abs(), cfg.g)));
    }
    let [r, c, pr, pc] = cfg.positions(i, j)?;
    let mut l = SymMatrix::zeros(cfg.order());
    l.set(r, c, g);
    l.set(pr, pc, -g);
    Ok(l)
}

/// The four constraints of `K_t` for entry `(i, j)`: the diagonal budget,
/// both ends of the prediction range, and the trace bound.
pub fn constraints_kt<T: Scalar>(i: usize, j: usize, cfg: &OmpConfig<T>) -> Result<ConstraintSet<T>> {
    let [r, c, pr, pc] = cfg.positions(i, j)?;
    let one = T::one();
    let diag = LinConstraint::new(
        vec![(r, r, one), (c, c, one), (pr, pr, one), (pc, pc, one)],
        T::of(4.0) * cfg.beta,
    )?;
    // Off-diagonal entries count twice in A • X.
    let w = if r == c { one } else { T::of(0.5) };
    let read = |s: T| vec![(r, c, s * w), (pr, pc, -s * w)];
    let upper = LinConstraint::new(read(one), cfg.range.upper())?;
    let lower = LinConstraint::new(read(-one), -cfg.range.lower::<T>())?;
    let trace = LinConstraint::trace(cfg.order(), cfg.tau)?;
    ConstraintSet::new(cfg.order(), vec![diag, upper, lower, trace])
}

/// `diag(P, N)`.
pub fn embed_phi<T: Scalar>(d: &Decomposition<T>) -> SymMatrix<T> {
    d.positive.block_diag(&d.negative)
}

/// One round of the learner as seen from outside.
#[derive(Clone, Debug, PartialEq)]
pub struct LossEvent<T> {
    pub t: usize,
    pub i: usize,
    pub j: usize,
    /// Prediction after clamping into the range.
    pub prediction: T,
    pub g: T,
    pub loss: T,
    /// `X_t • L_t`.
    pub linear_loss: T,
    /// `X_t • L_t²`.
    pub second_moment: T,
    pub clamped: bool,
    pub sweeps: usize,
}

/// State of the learner across rounds.
#[derive(Clone, Debug)]
pub struct OmpSession<T> {
    config: OmpConfig<T>,
    olo: OloState<T>,
    /// `log Y_t`, the unprojected step carried into the next round.
    pending_log: SymMatrix<T>,
    history: Vec<LossEvent<T>>,
    tol: T,
}

impl<T: Scalar> OmpSession<T> {
    pub fn new(config: OmpConfig<T>) -> Result<Self> {
        Self::with_tolerance(config, T::of(DEFAULT_TOLERANCE))
    }

    pub fn with_tolerance(config: OmpConfig<T>, tol: T) -> Result<Self> {
        let olo = init_state(config.tau, config.order(), config.eta)?;
        let pending_log = olo.log_x().clone();
        Ok(Self {
            config,
            olo,
            pending_log,
            history: Vec::new(),
            tol,
        })
    }

    pub fn config(&self) -> &OmpConfig<T> {
        &self.config
    }

    pub fn olo(&self) -> &OloState<T> {
        &self.olo
    }

    pub fn history(&self) -> &[LossEvent<T>] {
        &self.history
    }

    pub fn into_history(self) -> Vec<LossEvent<T>> {
        self.history
    }

    /// Number of completed rounds.
    pub fn rounds_played(&self) -> usize {
        self.history.len()
    }

    /// Plays entry `(i, j)` (1-based) against `loss` and records the event.
    pub fn play(&mut self, i: usize, j: usize, loss: &LossFn<T>) -> Result<&LossEvent<T>> {
        let cfg = &self.config;
        let t = self.history.len() + 1;
        if t > cfg.horizon {
            return Err(Error::InvalidParameter(format!(
                "round {t} beyond horizon {}",
                cfg.horizon
            )));
        }
        if loss.lipschitz() > cfg.g * (T::one() + T::of(1e-12)) {
            return Err(Error::InvalidParameter(format!(
                "loss with Lipschitz constant {} exceeds G = {}",
                loss.lipschitz(),
                cfg.g
            )));
        }
        let cs = constraints_kt(i, j, cfg)?;
        let projection = project_log(&self.pending_log, &cs, self.tol)?;
        let sweeps = projection.sweeps;
        self.olo.set_iterate(projection);
        let x = self.olo.x();

        let raw = predict(x, i, j, cfg)?;
        let (lo, hi) = (cfg.range.lower::<T>(), cfg.range.upper::<T>());
        let slack = T::of(CLAMP_SLACK);
        if raw < lo - slack || raw > hi + slack || !raw.is_finite() {
            return Err(Error::Invariant(format!(
                "round {t}: prediction {raw} outside [{lo}, {hi}]"
            )));
        }
        let prediction = raw.max(lo).min(hi);
        let clamped = prediction != raw;
        if clamped {
            log::debug!("round {t}: clamped prediction {raw:e} into [{lo}, {hi}]");
        }

        let value = loss.value(prediction);
        let g = loss.subgradient(prediction);
        if g.abs() > cfg.g * (T::one() + T::of(1e-12)) {
            return Err(Error::Invariant(format!("round {t}: |g| = {} exceeds G", g.abs())));
        }
        let l = loss_matrix(g, i, j, cfg)?;
        let linear_loss = x.inner(&l)?;
        let second_moment = x.inner(&l.square())?;
        self.olo.note_step_norm(g.abs());
        self.pending_log = self.olo.log_step(&l)?;
        self.olo.next_round();

        self.history.push(LossEvent {
            t,
            i,
            j,
            prediction,
            g,
            loss: value,
            linear_loss,
            second_moment,
            clamped,
            sweeps,
        });
        Ok(self.history.last().expect("just pushed"))
    }
}

/// Value-threaded form of [`OmpSession::play`]; returns the prediction.
pub fn omp_round<T: Scalar>(
    mut session: OmpSession<T>,
    i: usize,
    j: usize,
    loss: &LossFn<T>,
) -> Result<(T, OmpSession<T>)> {
    let yhat = session.play(i, j, loss)?.prediction;
    Ok((yhat, session))
}
