//! Run configuration from flags and an optional `key = value` file.
//!
//! The file uses TOML syntax with the long flag names as keys, e.g.
//!
//! ```text
//! problem = "maxcut"
//! n = 8
//! horizon = 2000
//! seed = 1
//! ```

use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use matpred::problems::{ProblemKind, MAX_CUT_BRUTEFORCE, MAX_PERMUTATION_BRUTEFORCE};

use crate::error::{usage, CliError};
use crate::{AdversaryArg, ComparatorArg, ProblemArg, RunArgs};

pub const DEFAULT_SUBGRADIENT_ITERATIONS: usize = 300;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub m: usize,
    pub n: usize,
    pub horizon: usize,
    pub seed: u64,
    pub eta: Option<f64>,
    pub adversary: AdversaryArg,
    pub sequence: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub comparator: ComparatorArg,
    pub tau0: Option<f64>,
    pub g: f64,
    pub iterations: usize,
}

impl RunConfig {
    pub fn resolve(flags: RunArgs) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => read_file(path)?,
            None => RunArgs::default(),
        };
        let args = merge(flags, file);

        let problem = match args.problem.ok_or_else(|| usage("--problem is required"))? {
            ProblemArg::Maxcut => ProblemKind::MaxCut,
            ProblemArg::Gambling => ProblemKind::Gambling,
            ProblemArg::Cf => ProblemKind::CollaborativeFiltering,
        };
        let n = args.n.ok_or_else(|| usage("--n is required"))?;
        let m = args.m.unwrap_or(n);
        if problem.distinct_pairs() && m != n {
            return Err(usage(format!("{} needs m = n, got {m}x{n}", problem.name())));
        }
        let horizon = args.horizon.ok_or_else(|| usage("--horizon is required"))?;
        if horizon == 0 {
            return Err(usage("--horizon must be positive"));
        }
        if let Some(eta) = args.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(usage(format!("--eta must be positive, got {eta}")));
            }
        }
        let adversary = args.adversary.unwrap_or(AdversaryArg::Random);
        if adversary == AdversaryArg::File && args.sequence.is_none() {
            return Err(usage("--adversary file needs --sequence"));
        }
        if adversary == AdversaryArg::LowerBound && problem == ProblemKind::Gambling {
            return Err(usage("no lower-bound adversary is available for gambling"));
        }
        let tau0 = args.tau0;
        if problem == ProblemKind::CollaborativeFiltering && tau0.is_none() {
            return Err(usage("collaborative filtering needs --tau0"));
        }
        let g = match problem {
            ProblemKind::MaxCut => 0.5,
            ProblemKind::Gambling => 1.0,
            ProblemKind::CollaborativeFiltering => args.g.unwrap_or(1.0),
        };
        if problem != ProblemKind::CollaborativeFiltering && args.g.is_some_and(|v| v != g) {
            return Err(usage(format!("{} fixes G = {g}", problem.name())));
        }
        let comparator = args.comparator.unwrap_or(match problem {
            ProblemKind::MaxCut if n <= MAX_CUT_BRUTEFORCE => ComparatorArg::Bruteforce,
            ProblemKind::Gambling if n <= MAX_PERMUTATION_BRUTEFORCE => ComparatorArg::Bruteforce,
            ProblemKind::CollaborativeFiltering => ComparatorArg::Subgradient,
            _ => ComparatorArg::None,
        });
        match (problem, comparator) {
            (ProblemKind::MaxCut, ComparatorArg::Bruteforce) if n > MAX_CUT_BRUTEFORCE => {
                return Err(usage(format!("brute-force max-cut comparator needs n <= {MAX_CUT_BRUTEFORCE}")))
            }
            (ProblemKind::Gambling, ComparatorArg::Bruteforce) if n > MAX_PERMUTATION_BRUTEFORCE => {
                return Err(usage(format!(
                    "brute-force gambling comparator needs n <= {MAX_PERMUTATION_BRUTEFORCE}"
                )))
            }
            (ProblemKind::CollaborativeFiltering, ComparatorArg::Bruteforce)
            | (ProblemKind::MaxCut | ProblemKind::Gambling, ComparatorArg::Subgradient) => {
                return Err(usage(format!(
                    "comparator {comparator:?} is not available for {}",
                    problem.name()
                )))
            }
            _ => {}
        }
        Ok(Self {
            problem,
            m,
            n,
            horizon,
            seed: args.seed.unwrap_or(1),
            eta: args.eta,
            adversary,
            sequence: args.sequence,
            trace: args.trace,
            comparator,
            tau0,
            g,
            iterations: args.iterations.unwrap_or(DEFAULT_SUBGRADIENT_ITERATIONS),
        })
    }
}

fn merge(flags: RunArgs, file: RunArgs) -> RunArgs {
    RunArgs {
        config: flags.config,
        problem: flags.problem.or(file.problem),
        m: flags.m.or(file.m),
        n: flags.n.or(file.n),
        horizon: flags.horizon.or(file.horizon),
        seed: flags.seed.or(file.seed),
        eta: flags.eta.or(file.eta),
        adversary: flags.adversary.or(file.adversary),
        sequence: flags.sequence.or(file.sequence),
        trace: flags.trace.or(file.trace),
        comparator: flags.comparator.or(file.comparator),
        tau0: flags.tau0.or(file.tau0),
        g: flags.g.or(file.g),
        iterations: flags.iterations.or(file.iterations),
    }
}

fn read_file(path: &PathBuf) -> Result<RunArgs, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn parse_config(text: &str) -> Result<RunArgs, String> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.message().to_string())?;
    let mut out = RunArgs::default();
    for (key, value) in &table {
        match key.as_str() {
            "problem" => out.problem = Some(choice(key, value)?),
            "adversary" => out.adversary = Some(choice(key, value)?),
            "comparator" => out.comparator = Some(choice(key, value)?),
            "m" => out.m = Some(count(key, value)?),
            "n" => out.n = Some(count(key, value)?),
            "horizon" => out.horizon = Some(count(key, value)?),
            "iterations" => out.iterations = Some(count(key, value)?),
            "seed" => out.seed = Some(count(key, value)? as u64),
            "eta" => out.eta = Some(number(key, value)?),
            "tau0" => out.tau0 = Some(number(key, value)?),
            "g" => out.g = Some(number(key, value)?),
            "sequence" => out.sequence = Some(text_value(key, value)?.into()),
            "trace" => out.trace = Some(text_value(key, value)?.into()),
            _ => return Err(format!("unknown key '{key}'")),
        }
    }
    Ok(out)
}

fn text_value<'a>(key: &str, v: &'a toml::Value) -> Result<&'a str, String> {
    v.as_str().ok_or_else(|| format!("'{key}' must be a string"))
}

fn choice<E: ValueEnum>(key: &str, v: &toml::Value) -> Result<E, String> {
    E::from_str(text_value(key, v)?, true).map_err(|e| format!("'{key}': {e}"))
}

fn count(key: &str, v: &toml::Value) -> Result<usize, String> {
    v.as_integer()
        .and_then(|i| usize::try_from(i).ok())
        .ok_or_else(|| format!("'{key}' must be a nonnegative integer"))
}

fn number(key: &str, v: &toml::Value) -> Result<f64, String> {
    v.as_float()
        .or_else(|| v.as_integer().map(|i| i as f64))
        .ok_or_else(|| format!("'{key}' must be a number"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> RunArgs {
        RunArgs {
            problem: Some(ProblemArg::Maxcut),
            n: Some(8),
            horizon: Some(100),
            ..RunArgs::default()
        }
    }

    #[test]
    fn defaults_follow_the_problem() {
        let cfg = RunConfig::resolve(flags()).unwrap();
        assert_eq!((cfg.m, cfg.g, cfg.seed), (8, 0.5, 1));
        assert_eq!(cfg.comparator, ComparatorArg::Bruteforce);
        assert_eq!(cfg.adversary, AdversaryArg::Random);
    }

    #[test]
    fn flags_win_over_file() {
        let file = parse_config("problem = \"gambling\"\nn = 5\nseed = 7\neta = 0.25\n").unwrap();
        let merged = merge(RunArgs { seed: Some(3), ..flags() }, file);
        assert_eq!(merged.problem, Some(ProblemArg::Maxcut));
        assert_eq!(merged.seed, Some(3));
        assert_eq!(merged.eta, Some(0.25));
        assert_eq!(merged.n, Some(8));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse_config("n = -1").is_err());
        assert!(parse_config("colour = \"red\"").is_err());
        assert!(parse_config("problem = \"chess\"").is_err());
        assert!(RunConfig::resolve(RunArgs { eta: Some(0.0), ..flags() }).is_err());
        assert!(RunConfig::resolve(RunArgs { n: Some(21), comparator: Some(ComparatorArg::Bruteforce), ..flags() }).is_err());
        let cf = RunArgs { problem: Some(ProblemArg::Cf), ..flags() };
        assert!(RunConfig::resolve(cf).is_err());
    }
}
