use matpred::adversaries::{cf_lb, cf_lb_comparator, maxcut_lb, maxcut_lb_comparator, Sequence};
use matpred::harness::run_learner;
use matpred::omp::OmpConfig;
use matpred::problems::{cf_config, maxcut_config};
use rayon::prelude::*;

use crate::error::{usage, CliError};

/// `a-b` (inclusive), `a,b,c`, or a single seed.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || usage(format!("--seeds: cannot parse '{s}'"));
    let s = s.trim();
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once('-') {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

struct SeedResult {
    seed: u64,
    learner_loss: f64,
    comparator_loss: f64,
}

impl SeedResult {
    fn regret(&self) -> f64 {
        self.learner_loss - self.comparator_loss
    }
}

fn mean_sd(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.len() > 1).then(|| (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    (mean, sd)
}

fn fmt_sd(sd: Option<f64>) -> String {
    sd.map_or_else(|| "n/a".into(), |v| format!("{v:.4}"))
}

/// Runs every seed in parallel and returns results in seed order.
fn run_seeds(
    seeds: &[u64],
    config: &OmpConfig<f64>,
    make: impl Fn(u64) -> Result<(Sequence<f64>, f64), CliError> + Sync,
) -> Result<Vec<SeedResult>, CliError> {
    seeds
        .par_iter()
        .map(|&seed| {
            let (seq, comparator_loss) = make(seed)?;
            let outcome = run_learner(config.clone(), &seq.rounds, |_, _| Ok(()))?;
            Ok(SeedResult {
                seed,
                learner_loss: outcome.cumulative_loss,
                comparator_loss,
            })
        })
        .collect()
}

fn print_runs(results: &[SeedResult]) {
    for r in results {
        println!(
            "seed {}: learner_loss {:.4} comparator_loss {:.4} regret {:.4}",
            r.seed,
            r.learner_loss,
            r.comparator_loss,
            r.regret()
        );
    }
    let regrets: Vec<f64> = results.iter().map(SeedResult::regret).collect();
    let (mean, sd) = mean_sd(&regrets);
    println!("seeds: {}", results.len());
    println!("mean_regret: {mean:.4}");
    println!("sd_regret: {}", fmt_sd(sd));
}

pub fn maxcut(n: usize, horizon: usize, seeds: &[u64]) -> Result<(), CliError> {
    // Validates divisibility before any work starts.
    maxcut_lb::<f64>(n, horizon, seeds[0])?;
    let config = maxcut_config(n, horizon)?;
    let results = run_seeds(seeds, &config, |seed| {
        let seq = maxcut_lb(n, horizon, seed)?;
        let (_, best) = maxcut_lb_comparator(&seq)?;
        Ok((seq, best))
    })?;
    print_runs(&results);
    let gains: Vec<f64> = results.iter().map(|r| horizon as f64 / 2.0 - r.comparator_loss).collect();
    let (mean_gain, sd_gain) = mean_sd(&gains);
    let bound = (n as f64 * horizon as f64 / 16.0).sqrt();
    println!("mean_comparator_gain: {mean_gain:.4}");
    println!("sd_comparator_gain: {}", fmt_sd(sd_gain));
    println!("lower_bound: {bound:.4}");
    println!("gain_meets_bound: {}", mean_gain >= bound);
    Ok(())
}

pub fn cf(m: usize, n: usize, tau0: f64, g: f64, horizon: usize, seeds: &[u64]) -> Result<(), CliError> {
    if !(g > 0.0) {
        return Err(usage(format!("--g must be positive, got {g}")));
    }
    cf_lb::<f64>(m, n, tau0, g, horizon, seeds[0])?;
    let config = cf_config(m, n, tau0, g, horizon)?;
    let results = run_seeds(seeds, &config, |seed| {
        let seq = cf_lb(m, n, tau0, g, horizon, seed)?;
        let (_, value) = cf_lb_comparator(&seq, tau0)?;
        Ok((seq, value))
    })?;
    print_runs(&results);
    let values: Vec<f64> = results.iter().map(|r| r.comparator_loss).collect();
    let (mean_value, sd_value) = mean_sd(&values);
    let bound = g * (0.5 * tau0 * (n as f64).sqrt() * horizon as f64).sqrt();
    println!("mean_comparator_value: {mean_value:.4}");
    println!("sd_comparator_value: {}", fmt_sd(sd_value));
    println!("lower_bound: {bound:.4}");
    println!("gain_meets_bound: {}", -mean_value >= bound);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1-3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_seeds("4, 2").unwrap(), vec![4, 2]);
        assert_eq!(parse_seeds("9").unwrap(), vec![9]);
        assert!(parse_seeds("3-1").is_err());
        assert!(parse_seeds("a").is_err());
        assert!(parse_seeds("").is_err());
    }

    #[test]
    fn single_seed_has_no_spread() {
        assert_eq!(mean_sd(&[2.0]), (2.0, None));
        let (m, sd) = mean_sd(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((sd.unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }
}
