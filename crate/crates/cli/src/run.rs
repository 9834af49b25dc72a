use std::fs::File;
use std::io::BufWriter;

use matpred::adversaries::{cf_lb, maxcut_lb, random_adversary, Sequence};
use matpred::formats::{read_sequence, TraceWriter};
use matpred::harness::{comparator_loss, run_learner, ComparatorMethod};
use matpred::omp::OmpConfig;
use matpred::problems::{cf_config, evaluate_run, gambling_config, maxcut_config, ProblemKind};

use crate::config::RunConfig;
use crate::error::{usage, CliError};
use crate::{AdversaryArg, ComparatorArg};

/// What a run reports on standard output.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub rounds: usize,
    pub cumulative_loss: f64,
    pub comparator_loss: Option<f64>,
    pub regret: Option<f64>,
    pub bound: f64,
    pub eta: f64,
    pub max_step_norm: f64,
    pub step_condition_held: bool,
    pub clamps: usize,
    pub wall_time: f64,
}

pub fn learner_config(cfg: &RunConfig) -> Result<OmpConfig<f64>, CliError> {
    let mut oc = match cfg.problem {
        ProblemKind::MaxCut => maxcut_config(cfg.n, cfg.horizon)?,
        ProblemKind::Gambling => gambling_config(cfg.n, cfg.horizon)?,
        ProblemKind::CollaborativeFiltering => {
            cf_config(cfg.m, cfg.n, cfg.tau0.expect("checked in resolve"), cfg.g, cfg.horizon)?
        }
    };
    if let Some(eta) = cfg.eta {
        oc.eta = eta;
    }
    Ok(oc)
}

pub fn build_sequence(cfg: &RunConfig) -> Result<Sequence<f64>, CliError> {
    let seq = match cfg.adversary {
        AdversaryArg::Random => random_adversary(cfg.problem, cfg.m, cfg.n, cfg.horizon, cfg.g, cfg.seed)?,
        AdversaryArg::LowerBound => match cfg.problem {
            ProblemKind::MaxCut => maxcut_lb(cfg.n, cfg.horizon, cfg.seed)?,
            ProblemKind::CollaborativeFiltering => {
                cf_lb(cfg.m, cfg.n, cfg.tau0.expect("checked in resolve"), cfg.g, cfg.horizon, cfg.seed)?
            }
            ProblemKind::Gambling => return Err(usage("no lower-bound adversary for gambling")),
        },
        AdversaryArg::File => {
            let path = cfg.sequence.as_ref().expect("checked in resolve");
            let file = File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
            let rounds = read_sequence(file)?;
            if rounds.len() > cfg.horizon {
                return Err(usage(format!(
                    "{} has {} rounds, more than the horizon {}",
                    path.display(),
                    rounds.len(),
                    cfg.horizon
                )));
            }
            Sequence {
                kind: cfg.problem,
                m: cfg.m,
                n: cfg.n,
                seed: cfg.seed,
                rounds,
            }
        }
    };
    seq.validate()?;
    Ok(seq)
}

pub fn execute(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let oc = learner_config(cfg)?;
    let seq = build_sequence(cfg)?;
    let bound = oc.regret_bound();

    let mut trace = match &cfg.trace {
        Some(path) => Some(TraceWriter::new(BufWriter::new(File::create(path)?))?),
        None => None,
    };
    let outcome = run_learner(oc, &seq.rounds, |event, cum| match trace.as_mut() {
        Some(w) => w.write(event, cum),
        None => Ok(()),
    })?;

    let method = match cfg.comparator {
        ComparatorArg::Bruteforce => ComparatorMethod::BruteForce,
        ComparatorArg::Subgradient => ComparatorMethod::Subgradient {
            iterations: cfg.iterations,
            tau0: cfg.tau0.expect("checked in resolve"),
        },
        ComparatorArg::None => ComparatorMethod::None,
    };
    let comparator = comparator_loss(&seq, method)?;
    let report = comparator.map(|c| evaluate_run(&outcome.records, c, bound));
    Ok(RunSummary {
        rounds: outcome.records.len(),
        cumulative_loss: outcome.cumulative_loss,
        comparator_loss: comparator,
        regret: report.map(|r| r.regret),
        bound,
        eta: outcome.eta,
        max_step_norm: outcome.max_step_norm,
        step_condition_held: outcome.step_condition_held(),
        clamps: outcome.clamps,
        wall_time: outcome.elapsed.as_secs_f64(),
    })
}

pub fn cmd_run(cfg: &RunConfig) -> Result<(), CliError> {
    let s = execute(cfg)?;
    let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| x.to_string());
    println!("problem: {}", cfg.problem.name());
    println!("shape: {}x{}", cfg.m, cfg.n);
    println!("seed: {}", cfg.seed);
    println!("rounds: {}", s.rounds);
    println!("eta: {}", s.eta);
    println!("cumulative_loss: {}", s.cumulative_loss);
    println!("comparator_loss: {}", opt(s.comparator_loss));
    println!("regret: {}", opt(s.regret));
    println!("bound: {}", s.bound);
    println!("max_step_norm: {}", s.max_step_norm);
    println!("step_condition_held: {}", s.step_condition_held);
    println!("clamped_predictions: {}", s.clamps);
    println!("wall_time_s: {:.3}", s.wall_time);
    if let Some(regret) = s.regret {
        let within = regret <= s.bound;
        println!("within_bound: {within}");
        if !within && s.step_condition_held {
            return Err(CliError::Failed(format!(
                "invariant violated: regret {regret} exceeds the guaranteed bound {}",
                s.bound
            )));
        }
    }
    Ok(())
}
