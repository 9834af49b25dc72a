//! Matrix multiplicative weights over a spectraplex cut by linear constraints.
//!
//! Each round plays `X_t`, takes the exponentiated step
//! `Y = exp(log X_t − η L_t)` and projects `Y` back onto the constraint set in
//! quantum relative entropy. The projection is solved in the dual:
//! `X* = exp(log Y − Σ α_j A_j)` where `α ≥ 0` maximizes
//! `−Tr exp(log Y − Σ α_j A_j) − Σ α_j b_j`.

use crate::error::{Error, Result};
use crate::linalg::{eig_sym, log_sym, spectral_norm, EigenDecomp, LogPolicy, SymMatrix};
use crate::scalar::Scalar;

/// Default tolerance on constraint violation and complementary slackness.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Default cap on dual coordinate sweeps.
pub const MAX_SWEEPS: usize = 200;

/// `A • X ≤ b` with a sparse symmetric `A`.
///
/// An entry `(r, c, v)` with `r ≠ c` sets both `A(r, c)` and `A(c, r)` to
/// `v`, so it contributes `2 v X(r, c)` to `A • X`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinConstraint<T> {
    entries: Vec<(usize, usize, T)>,
    bound: T,
    trace: bool,
}

impl<T: Scalar> LinConstraint<T> {
    /// The bound must be at least 1, or exactly 0 for a homogeneous constraint.
    pub fn new(entries: Vec<(usize, usize, T)>, bound: T) -> Result<Self> {
        check_bound(bound)?;
        let mut merged: Vec<(usize, usize, T)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            if !v.is_finite() {
                return Err(Error::NonFinite("constraint entry"));
            }
            let (r, c) = if r <= c { (r, c) } else { (c, r) };
            match merged.iter_mut().find(|e| e.0 == r && e.1 == c) {
                Some(e) => e.2 += v,
                None => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != T::zero());
        if merged.is_empty() {
            return Err(Error::InvalidParameter("constraint matrix is zero".into()));
        }
        Ok(Self {
            entries: merged,
            bound,
            trace: false,
        })
    }

    /// `Tr(X) ≤ bound`.
    pub fn trace(order: usize, bound: T) -> Result<Self> {
        check_bound(bound)?;
        if order == 0 {
            return Err(Error::InvalidParameter("order must be positive".into()));
        }
        Ok(Self {
            entries: (0..order).map(|i| (i, i, T::one())).collect(),
            bound,
            trace: true,
        })
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn bound(&self) -> T {
        self.bound
    }

    pub fn is_trace(&self) -> bool {
        self.trace
    }

    pub fn is_homogeneous(&self) -> bool {
        self.bound == T::zero()
    }

    /// `A • X`.
    pub fn apply(&self, x: &SymMatrix<T>) -> T {
        self.entries
            .iter()
            .map(|&(r, c, v)| if r == c { v * x.get(r, r) } else { (v + v) * x.get(r, c) })
            .sum()
    }

    /// `A • X − b`.
    pub fn violation(&self, x: &SymMatrix<T>) -> T {
        self.apply(x) - self.bound
    }

    pub fn to_dense(&self, order: usize) -> SymMatrix<T> {
        let mut a = SymMatrix::zeros(order);
        for &(r, c, v) in &self.entries {
            a.set(r, c, v);
        }
        a
    }

    fn max_index(&self) -> usize {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }

    /// `A • (V diag(w) Vᵀ)`.
    fn apply_spectral(&self, e: &EigenDecomp<T>, w: &[T]) -> T {
        let v = e.vectors();
        self.entries
            .iter()
            .map(|&(r, c, a)| {
                let (vr, vc) = (v.row(r), v.row(c));
                let s: T = vr.iter().zip(vc).zip(w).map(|((&x, &y), &wk)| x * y * wk).sum();
                if r == c {
                    a * s
                } else {
                    (a + a) * s
                }
            })
            .sum()
    }

    /// `Vᵀ A V`, dense.
    fn rotated(&self, e: &EigenDecomp<T>) -> Vec<T> {
        let v = e.vectors();
        let n = e.order();
        let mut b = vec![T::zero(); n * n];
        for &(r, c, a) in &self.entries {
            let (vr, vc) = (v.row(r), v.row(c));
            for k in 0..n {
                for l in 0..n {
                    let t = if r == c {
                        vr[k] * vr[l]
                    } else {
                        vr[k] * vc[l] + vc[k] * vr[l]
                    };
                    b[k * n + l] += a * t;
                }
            }
        }
        b
    }
}

fn check_bound<T: Scalar>(bound: T) -> Result<()> {
    if bound == T::zero() || bound >= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "constraint bound must be 0 or at least 1, got {bound}"
        )))
    }
}

/// Ordered constraints on matrices of a common order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSet<T> {
    order: usize,
    constraints: Vec<LinConstraint<T>>,
}

impl<T: Scalar> ConstraintSet<T> {
    pub fn new(order: usize, constraints: Vec<LinConstraint<T>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("order must be positive".into()));
        }
        for c in &constraints {
            if c.max_index() >= order || (c.trace && c.entries.len() != order) {
                return Err(Error::DimensionMismatch(format!(
                    "constraint touches index {} in a set of order {order}",
                    c.max_index()
                )));
            }
        }
        Ok(Self { order, constraints })
    }

    /// `{X : Tr(X) ≤ τ}`.
    pub fn trace_ball(order: usize, tau: T) -> Result<Self> {
        Self::new(order, vec![LinConstraint::trace(order, tau)?])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn constraints(&self) -> &[LinConstraint<T>] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Largest `A_j • X − b_j`, or `−∞` for an empty set.
    pub fn max_violation(&self, x: &SymMatrix<T>) -> T {
        self.constraints
            .iter()
            .map(|c| c.violation(x))
            .fold(T::neg_infinity(), T::max)
    }

    pub fn is_feasible(&self, x: &SymMatrix<T>, tol: T) -> bool {
        self.max_violation(x) <= tol
    }

    fn trace_index(&self) -> Option<usize> {
        self.constraints.iter().position(|c| c.trace)
    }

    /// Upper ends of the dual box. With `τ` the trace bound (or `Tr(Y)` when
    /// the set has none), constraints with `b ≥ 1` get `3τ` and homogeneous
    /// ones `3τ + ln(3τ · order)`.
    pub fn dual_caps(&self, trace_y: T) -> Vec<T> {
        let tau = self
            .trace_index()
            .map(|k| self.constraints[k].bound)
            .unwrap_or(trace_y);
        let base = T::of(3.0) * tau;
        let widen = (base * T::of_usize(self.order)).ln().max(T::zero());
        self.constraints
            .iter()
            .map(|c| if c.is_homogeneous() { base + widen } else { base })
            .collect()
    }
}

/// Result of a relative entropy projection.
#[derive(Clone, Debug)]
pub struct Projection<T> {
    pub x: SymMatrix<T>,
    /// `log Y − Σ α_j A_j`, exact up to the floor applied to `log Y`.
    pub log_x: SymMatrix<T>,
    pub duals: Vec<T>,
    pub sweeps: usize,
    pub primal_residual: T,
    pub slackness_residual: T,
}

/// Projects `Y` onto the constraint set in quantum relative entropy.
pub fn project_qre<T: Scalar>(y: &SymMatrix<T>, cs: &ConstraintSet<T>, tol: T) -> Result<Projection<T>> {
    let h = log_sym(y, LogPolicy::Floor)?;
    project_log(&h, cs, tol)
}

/// Same as [`project_qre`] with `H = log Y` given directly.
pub fn project_log<T: Scalar>(h: &SymMatrix<T>, cs: &ConstraintSet<T>, tol: T) -> Result<Projection<T>> {
    DualSolver::new(h, cs, tol)?.solve()
}

/// `−Tr exp(log Y − Σ α_j A_j) − Σ α_j b_j`.
pub fn dual_objective<T: Scalar>(y: &SymMatrix<T>, cs: &ConstraintSet<T>, alpha: &[T]) -> Result<T> {
    let (e, _) = dual_point(y, cs, alpha)?;
    let tr: T = e.values().iter().map(|l| l.exp()).sum();
    let pay: T = cs.constraints.iter().zip(alpha).map(|(c, &a)| a * c.bound).sum();
    Ok(-tr - pay)
}

/// Gradient of [`dual_objective`]: `A_j • X(α) − b_j`.
pub fn dual_gradient<T: Scalar>(y: &SymMatrix<T>, cs: &ConstraintSet<T>, alpha: &[T]) -> Result<Vec<T>> {
    let (e, _) = dual_point(y, cs, alpha)?;
    let w: Vec<T> = e.values().iter().map(|l| l.exp()).collect();
    Ok(cs
        .constraints
        .iter()
        .map(|c| c.apply_spectral(&e, &w) - c.bound)
        .collect())
}

fn dual_point<T: Scalar>(
    y: &SymMatrix<T>,
    cs: &ConstraintSet<T>,
    alpha: &[T],
) -> Result<(EigenDecomp<T>, SymMatrix<T>)> {
    if alpha.len() != cs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} duals for {} constraints",
            alpha.len(),
            cs.len()
        )));
    }
    if y.order() != cs.order {
        return Err(Error::DimensionMismatch("Y and constraint set orders differ".into()));
    }
    let mut m = log_sym(y, LogPolicy::Floor)?;
    for (c, &a) in cs.constraints.iter().zip(alpha) {
        subtract_scaled(&mut m, c, a);
    }
    Ok((eig_sym(&m)?, m))
}

fn subtract_scaled<T: Scalar>(m: &mut SymMatrix<T>, c: &LinConstraint<T>, a: T) {
    if a == T::zero() {
        return;
    }
    for &(r, col, v) in &c.entries {
        m.add_to(r, col, -a * v);
    }
}

/// Spectral data of `X(α)` with the trace dual eliminated in closed form.
struct Point<T> {
    eig: EigenDecomp<T>,
    /// Eigenvalues of `X`, aligned with `eig`.
    x: Vec<T>,
    trace_dual: T,
}

impl<T: Scalar> Point<T> {
    fn trace_active(&self) -> bool {
        self.trace_dual > T::zero()
    }

    fn trace(&self) -> T {
        self.x.iter().copied().sum()
    }

    /// `−Σ_kl Γ_kl B_kl²` where `Γ` holds the divided differences of `exp`.
    fn curvature(&self, c: &LinConstraint<T>) -> T {
        let mu = self.eig.values();
        let n = mu.len();
        let b = c.rotated(&self.eig);
        let mut total = T::zero();
        for k in 0..n {
            for l in 0..n {
                let bkl = b[k * n + l];
                if bkl == T::zero() {
                    continue;
                }
                // Eigenvalues are descending, so the smaller one anchors expm1.
                let (hi, lo) = if k <= l { (k, l) } else { (l, k) };
                let d = mu[hi] - mu[lo];
                let gamma = if d > T::zero() {
                    self.x[lo] * d.exp_m1() / d
                } else {
                    self.x[hi]
                };
                total += gamma * bkl * bkl;
            }
        }
        -total
    }
}

struct DualSolver<'a, T> {
    h: &'a SymMatrix<T>,
    cs: &'a ConstraintSet<T>,
    tol: T,
    trace_idx: Option<usize>,
    caps: Vec<T>,
    alpha: Vec<T>,
}

impl<'a, T: Scalar> DualSolver<'a, T> {
    fn new(h: &'a SymMatrix<T>, cs: &'a ConstraintSet<T>, tol: T) -> Result<Self> {
        if h.order() != cs.order {
            return Err(Error::DimensionMismatch(format!(
                "matrix of order {} projected onto constraints of order {}",
                h.order(),
                cs.order
            )));
        }
        if !(tol > T::zero()) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
        }
        let eh = eig_sym(h)?;
        let trace_y: T = eh.values().iter().map(|l| l.exp()).sum();
        Ok(Self {
            h,
            cs,
            tol,
            trace_idx: cs.trace_index(),
            caps: cs.dual_caps(trace_y),
            alpha: vec![T::zero(); cs.len()],
        })
    }

    fn evaluate(&self) -> Result<Point<T>> {
        let mut m = self.h.clone();
        for (j, c) in self.cs.constraints.iter().enumerate() {
            if Some(j) != self.trace_idx {
                subtract_scaled(&mut m, c, self.alpha[j]);
            }
        }
        let eig = eig_sym(&m)?;
        let mu = eig.values();
        let trace_dual = match self.trace_idx {
            Some(k) => {
                let top = mu[0];
                let log_tr = top + mu.iter().map(|&l| (l - top).exp()).sum::<T>().ln();
                (log_tr - self.cs.constraints[k].bound.ln())
                    .max(T::zero())
                    .min(self.caps[k])
            }
            None => T::zero(),
        };
        let x = mu.iter().map(|&l| (l - trace_dual).exp()).collect();
        Ok(Point { eig, x, trace_dual })
    }

    fn gradient(&self, p: &Point<T>, j: usize) -> T {
        let c = &self.cs.constraints[j];
        c.apply_spectral(&p.eig, &p.x) - c.bound
    }

    /// Derivative of the profiled gradient in coordinate `j`.
    fn slope(&self, p: &Point<T>, j: usize, grad: T) -> T {
        let c = &self.cs.constraints[j];
        let mut s = p.curvature(c);
        if p.trace_active() {
            let ax = grad + c.bound;
            s += ax * ax / p.trace();
        }
        s
    }

    fn residuals(&self, p: &Point<T>) -> (T, T) {
        let mut primal = T::zero();
        let mut slack = T::zero();
        for (j, c) in self.cs.constraints.iter().enumerate() {
            let (g, a) = if Some(j) == self.trace_idx {
                (p.trace() - c.bound, p.trace_dual)
            } else {
                (self.gradient(p, j), self.alpha[j])
            };
            primal = primal.max(g);
            slack = slack.max(a * g.abs() / (T::one() + c.bound.abs()));
        }
        (primal, slack)
    }

    /// Maximizes the profiled dual along coordinate `j`.
    fn solve_coordinate(&mut self, j: usize, mut point: Point<T>) -> Result<Point<T>> {
        let cap = self.caps[j];
        let bound = self.cs.constraints[j].bound;
        let target = T::of(0.1) * self.tol * (T::one() + bound.abs()) / (T::one() + cap);
        let width_tol = T::epsilon() * T::of(16.0) * (T::one() + cap);
        let (mut lo, mut hi) = (T::zero(), cap);
        let (mut lo_known, mut hi_known) = (false, false);
        let mut a = self.alpha[j];
        let mut g = self.gradient(&point, j);
        for _ in 0..200 {
            if g.abs() <= target {
                break;
            }
            if g > T::zero() {
                lo = a;
                lo_known = true;
                if a >= cap {
                    break;
                }
            } else {
                hi = a;
                hi_known = true;
                if a <= T::zero() {
                    break;
                }
            }
            if hi - lo <= width_tol && lo_known && hi_known {
                break;
            }
            let slope = self.slope(&point, j, g);
            let newton = if slope < T::zero() { a - g / slope } else { T::nan() };
            let mut next = if newton > lo && newton < hi {
                newton
            } else if !(newton > lo) && !lo_known {
                lo
            } else if !(newton < hi) && !hi_known {
                hi
            } else {
                (lo + hi) * T::of(0.5)
            };
            if next == a {
                next = (lo + hi) * T::of(0.5);
                if next == a {
                    break;
                }
            }
            a = next;
            self.alpha[j] = a;
            point = self.evaluate()?;
            g = self.gradient(&point, j);
        }
        Ok(point)
    }

    fn solve(mut self) -> Result<Projection<T>> {
        let mut point = self.evaluate()?;
        let mut sweeps = 0;
        loop {
            let (primal, slack) = self.residuals(&point);
            if primal <= self.tol && slack <= self.tol {
                return Ok(self.finish(point, sweeps, primal, slack));
            }
            if sweeps == MAX_SWEEPS {
                return Err(Error::DualSolver {
                    sweeps,
                    primal: primal.to_f64_lossy(),
                    slackness: slack.to_f64_lossy(),
                });
            }
            sweeps += 1;
            for j in 0..self.cs.len() {
                if Some(j) != self.trace_idx {
                    point = self.solve_coordinate(j, point)?;
                }
            }
            if self.cs.constraints.iter().all(|c| c.trace) {
                // Only the closed-form coordinate: nothing more to improve.
                let (primal, slack) = self.residuals(&point);
                if primal <= self.tol && slack <= self.tol {
                    return Ok(self.finish(point, sweeps, primal, slack));
                }
                return Err(Error::DualSolver {
                    sweeps,
                    primal: primal.to_f64_lossy(),
                    slackness: slack.to_f64_lossy(),
                });
            }
        }
    }

    fn finish(mut self, point: Point<T>, sweeps: usize, primal: T, slack: T) -> Projection<T> {
        if let Some(k) = self.trace_idx {
            self.alpha[k] = point.trace_dual;
        }
        let x = point.eig.compose(&point.x);
        let mut log_x = self.h.clone();
        for (c, &a) in self.cs.constraints.iter().zip(&self.alpha) {
            subtract_scaled(&mut log_x, c, a);
        }
        Projection {
            x,
            log_x,
            duals: self.alpha,
            sweeps,
            primal_residual: primal,
            slackness_residual: slack,
        }
    }
}

/// Iterate of the online linear optimization learner.
#[derive(Clone, Debug)]
pub struct OloState<T> {
    x: SymMatrix<T>,
    log_x: SymMatrix<T>,
    eta: T,
    tau: T,
    order: usize,
    round: usize,
    max_step_norm: T,
}

/// `X_1 = (τ/N) I`.
pub fn init_state<T: Scalar>(tau: T, order: usize, eta: T) -> Result<OloState<T>> {
    if !(tau > T::zero()) || order == 0 || !(eta > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "need tau > 0, N >= 1, eta > 0; got tau={tau}, N={order}, eta={eta}"
        )));
    }
    let level = tau / T::of_usize(order);
    Ok(OloState {
        x: SymMatrix::scaled_identity(order, level),
        log_x: SymMatrix::scaled_identity(order, level.ln()),
        eta,
        tau,
        order,
        round: 1,
        max_step_norm: T::zero(),
    })
}

impl<T: Scalar> OloState<T> {
    pub fn x(&self) -> &SymMatrix<T> {
        &self.x
    }

    pub fn log_x(&self) -> &SymMatrix<T> {
        &self.log_x
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// Largest `η ‖L_t‖` seen so far.
    pub fn max_step_norm(&self) -> T {
        self.max_step_norm
    }

    /// Whether `η ‖L_t‖ ≤ 1` held in every round so far.
    pub fn step_condition_held(&self) -> bool {
        self.max_step_norm <= T::one() + T::of(1e-12)
    }

    /// `log X − η L`.
    pub fn log_step(&self, l: &SymMatrix<T>) -> Result<SymMatrix<T>> {
        self.x.check_order(l)?;
        self.log_x.axpy(-self.eta, l)
    }

    /// Records `η ‖L‖` for the precondition monitor.
    pub fn note_step_norm(&mut self, norm: T) {
        let s = self.eta * norm;
        if s > T::one() + T::of(1e-12) && self.step_condition_held() {
            log::warn!("round {}: eta * |L| = {s} exceeds 1", self.round);
        }
        self.max_step_norm = self.max_step_norm.max(s);
    }

    /// Replaces the iterate with a projection result.
    pub fn set_iterate(&mut self, p: Projection<T>) {
        self.x = p.x;
        self.log_x = p.log_x;
    }

    pub fn next_round(&mut self) {
        self.round += 1;
    }

    /// [`set_iterate`](Self::set_iterate) followed by [`next_round`](Self::next_round).
    pub fn advance(&mut self, p: Projection<T>) {
        self.set_iterate(p);
        self.next_round();
    }
}

/// `exp(log X − η L)`.
pub fn exp_step<T: Scalar>(state: &OloState<T>, l: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    Ok(eig_sym(&state.log_step(l)?)?.apply(T::exp))
}

/// One round: suffer `X • L`, then move to the projection of the
/// exponentiated step onto `cs`.
pub fn olo_round<T: Scalar>(
    mut state: OloState<T>,
    l: &SymMatrix<T>,
    cs: &ConstraintSet<T>,
) -> Result<(T, OloState<T>)> {
    let loss = state.x.inner(l)?;
    state.note_step_norm(spectral_norm(l)?);
    let h = state.log_step(l)?;
    let p = project_log(&h, cs, T::of(DEFAULT_TOLERANCE))?;
    state.advance(p);
    Ok((loss, state))
}
