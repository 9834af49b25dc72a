//! Plays a learner against a fixed sequence and measures it against the
//! best comparator in hindsight.

use std::time::{Duration, Instant};

use crate::adversaries::Sequence;
use crate::error::{Error, Result};
use crate::omp::{LossEvent, OmpConfig, OmpSession};
use crate::problems::{
    best_cf_subgradient, best_cut_bruteforce, best_permutation_bruteforce, evaluate_run, ProblemKind,
    RegretReport, Round, RoundRecord, MAX_CUT_BRUTEFORCE, MAX_PERMUTATION_BRUTEFORCE,
};
use crate::scalar::Scalar;

/// Everything observed while running a learner over a sequence.
#[derive(Clone, Debug)]
pub struct RunOutcome<T> {
    pub records: Vec<RoundRecord<T>>,
    pub events: Vec<LossEvent<T>>,
    pub cumulative_loss: T,
    pub eta: T,
    /// Largest `η ‖L_t‖` over the run.
    pub max_step_norm: T,
    pub clamps: usize,
    pub elapsed: Duration,
}

impl<T: Scalar> RunOutcome<T> {
    /// `Σ X_t • L_t`.
    pub fn linear_loss(&self) -> T {
        self.events.iter().map(|e| e.linear_loss).sum()
    }

    pub fn step_condition_held(&self) -> bool {
        self.max_step_norm <= T::one() + T::of(1e-12)
    }
}

/// Runs a fresh learner for `config` over `rounds`, calling `observe` with
/// each event and the running cumulative loss.
pub fn run_learner<T: Scalar>(
    config: OmpConfig<T>,
    rounds: &[Round<T>],
    mut observe: impl FnMut(&LossEvent<T>, T) -> Result<()>,
) -> Result<RunOutcome<T>> {
    if rounds.len() > config.horizon {
        return Err(Error::InvalidParameter(format!(
            "{} rounds exceed the horizon {}",
            rounds.len(),
            config.horizon
        )));
    }
    let start = Instant::now();
    let eta = config.eta;
    let mut session = OmpSession::new(config)?;
    let mut records = Vec::with_capacity(rounds.len());
    let mut cumulative = T::zero();
    for r in rounds {
        let event = session.play(r.i, r.j, &r.loss)?;
        cumulative += event.loss;
        observe(event, cumulative)?;
        records.push(RoundRecord {
            i: r.i,
            j: r.j,
            loss: r.loss,
            prediction: event.prediction,
            learner_loss: event.loss,
        });
    }
    let max_step_norm = session.olo().max_step_norm();
    let events = session.into_history();
    let clamps = events.iter().filter(|e| e.clamped).count();
    Ok(RunOutcome {
        records,
        events,
        cumulative_loss: cumulative,
        eta,
        max_step_norm,
        clamps,
        elapsed: start.elapsed(),
    })
}

/// How the comparator in hindsight is computed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComparatorMethod {
    /// Exhaustive search over cuts or permutations.
    BruteForce,
    /// Projected subgradient descent with this many iterations; trace bound `τ₀`.
    Subgradient { iterations: usize, tau0: f64 },
    None,
}

/// Loss of the comparator in hindsight, or `None` when not requested.
pub fn comparator_loss<T: Scalar>(seq: &Sequence<T>, method: ComparatorMethod) -> Result<Option<T>> {
    match (seq.kind, method) {
        (_, ComparatorMethod::None) => Ok(None),
        (ProblemKind::MaxCut, ComparatorMethod::BruteForce) => {
            if seq.n > MAX_CUT_BRUTEFORCE {
                return Err(Error::InvalidParameter(format!(
                    "brute-force max-cut comparator needs n <= {MAX_CUT_BRUTEFORCE}"
                )));
            }
            Ok(Some(best_cut_bruteforce(&seq.rounds, seq.n)?.1))
        }
        (ProblemKind::Gambling, ComparatorMethod::BruteForce) => {
            if seq.n > MAX_PERMUTATION_BRUTEFORCE {
                return Err(Error::InvalidParameter(format!(
                    "brute-force gambling comparator needs n <= {MAX_PERMUTATION_BRUTEFORCE}"
                )));
            }
            Ok(Some(best_permutation_bruteforce(&seq.rounds, seq.n)?.1))
        }
        (ProblemKind::CollaborativeFiltering, ComparatorMethod::Subgradient { iterations, tau0 }) => {
            let (_, loss) = best_cf_subgradient(&seq.rounds, seq.m, seq.n, T::of(tau0), iterations)?;
            Ok(Some(loss))
        }
        (kind, method) => Err(Error::InvalidParameter(format!(
            "comparator {method:?} is not available for {}",
            kind.name()
        ))),
    }
}

/// Runs the learner, computes the comparator and reports regret against
/// the configured guarantee.
pub fn run_and_evaluate<T: Scalar>(
    config: OmpConfig<T>,
    seq: &Sequence<T>,
    method: ComparatorMethod,
) -> Result<(RunOutcome<T>, Option<RegretReport<T>>)> {
    seq.validate()?;
    let bound = config.regret_bound();
    let outcome = run_learner(config, &seq.rounds, |_, _| Ok(()))?;
    let report = comparator_loss(seq, method)?.map(|c| evaluate_run(&outcome.records, c, bound));
    Ok((outcome, report))
}
