//! Desk-scale invariant suites.

use std::time::Instant;

use clap::ValueEnum;
use matpred::adversaries::{cf_lb, cf_lb_comparator, maxcut_lb, random_adversary, rng_for};
use matpred::decompose::{
    cut_matrix, decompose_cut, decompose_permutation, decompose_trace_norm, decompose_triangular, perm_matrix,
    triangular, validate, CutSet, Permutation,
};
use matpred::linalg::{block_embed, eig_sym, exp_sym, log_sym, qre, sym_trace_norm, trace_norm, LogPolicy, Matrix, SymMatrix};
use matpred::mmw::{project_qre, DEFAULT_TOLERANCE};
use matpred::omp::{constraints_kt, embed_phi, loss_matrix, OmpSession};
use matpred::problems::{
    best_cut_bruteforce, cut_loss, max_weight_cut, maxcut_config, maxcut_weights, ProblemKind,
};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::CliError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Linalg,
    Decompositions,
    Projection,
    Reduction,
    Oracles,
    Adversaries,
    All,
}

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Check {
    Check { pass, detail }
}

fn uniform_sym(r: &mut impl Rng, n: usize) -> SymMatrix<f64> {
    SymMatrix::from_fn(n, |_, _| r.random_range(-1.0..=1.0))
}

fn uniform(r: &mut impl Rng, m: usize, n: usize) -> Matrix<f64> {
    Matrix::from_fn(m, n, |_, _| r.random_range(-1.0..=1.0))
}

fn linalg() -> Result<Check, CliError> {
    let mut r = rng_for(1);
    let (mut recon, mut round_trip, mut spectrum, mut min_qre) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for k in 0..200 {
        let d = 1 + k % 32;
        let m = uniform_sym(&mut r, d);
        let e = eig_sym(&m)?;
        recon = recon.max(e.compose(e.values()).sub(&m)?.max_abs() / (1.0 + m.max_abs()));
        let back = log_sym(&exp_sym(&m)?, LogPolicy::Strict)?;
        round_trip = round_trip.max(back.sub(&m)?.max_abs());

        let w = uniform(&mut r, 1 + k % 5, 1 + k % 7);
        spectrum = spectrum.max((sym_trace_norm(&block_embed(&w))? - 2.0 * trace_norm(&w)?).abs());

        let a = uniform_sym(&mut r, 4).square();
        let b = uniform_sym(&mut r, 4).square().axpy(1.0, &SymMatrix::scaled_identity(4, 1e-3))?;
        min_qre = min_qre.min(qre(&a, &b)?);
    }
    Ok(check(
        recon <= 1e-8 && round_trip <= 1e-8 && spectrum <= 1e-8 && min_qre >= -1e-9,
        format!(
            "eigen reconstruction {recon:.1e}, exp/log round trip {round_trip:.1e}, \
             sym trace-norm identity {spectrum:.1e}, min relative entropy {min_qre:.1e}"
        ),
    ))
}

fn decompositions() -> Result<Check, CliError> {
    let tol = 1e-8;
    let mut r = rng_for(2);
    let mut failures = Vec::new();
    let mut count = 0;
    let mut tightness = 0.0f64;
    let mut note = |name: String, passed: bool| {
        count += 1;
        if !passed {
            failures.push(name);
        }
    };
    for n in [2usize, 4, 8, 16, 32] {
        for _ in 0..10 {
            let cut = CutSet::from_bits(n, r.random::<u64>() & ((1u64 << n) - 1))?;
            let rep = validate(&decompose_cut(&cut), &cut_matrix::<f64>(&cut).to_matrix(), tol)?;
            note(format!("cut n={n}"), rep.passed);
        }
    }
    for (m, n) in [(4usize, 6usize), (8, 8), (3, 2)] {
        for _ in 0..10 {
            let w = uniform(&mut r, m, n);
            let d = decompose_trace_norm(&w)?;
            tightness = tightness.max((d.realized_trace() - 2.0 * trace_norm(&w)?).abs());
            note(format!("trace-norm {m}x{n}"), validate(&d, &w, tol)?.passed);
        }
    }
    for k in 0..=5u32 {
        note(format!("triangular k={k}"), validate(&decompose_triangular(k), &triangular(1 << k), tol)?.passed);
    }
    for n in 1usize..=9 {
        let mut map: Vec<usize> = (1..=n).collect();
        map.shuffle(&mut r);
        let pi = Permutation::new(&map)?;
        note(format!("permutation n={n}"), validate(&decompose_permutation(&pi), &perm_matrix(&pi), tol)?.passed);
    }
    let pass = failures.is_empty() && tightness <= 1e-7;
    let detail = if failures.is_empty() {
        format!("{count} decompositions valid, trace-norm tightness {tightness:.1e}")
    } else {
        format!("{} of {count} invalid, first: {}", failures.len(), failures[0])
    };
    Ok(check(pass, detail))
}

fn projection() -> Result<Check, CliError> {
    let mut r = rng_for(3);
    let (mut primal, mut slack, mut sweeps) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..100 {
        let n = r.random_range(2..=5);
        let cfg = maxcut_config::<f64>(n, 10)?;
        let i = r.random_range(1..=n);
        let j = (i % n) + 1;
        let cs = constraints_kt(i, j, &cfg)?;
        let order = cfg.order();
        let mut y = uniform_sym(&mut r, order).scale(0.3).square().axpy(1.0, &SymMatrix::scaled_identity(order, 0.05))?;
        // Push the prediction outside the range so the range constraints bind.
        let (a, b) = (i - 1, j - 1);
        let push = r.random_range(-4.0..4.0);
        y.add_to(a, b, push);
        y.add_to(a, a, push.abs());
        y.add_to(b, b, push.abs());
        let p = project_qre(&y, &cs, DEFAULT_TOLERANCE)?;
        primal = primal.max(cs.max_violation(&p.x));
        slack = slack.max(p.slackness_residual);
        sweeps = sweeps.max(p.sweeps);
    }
    Ok(check(
        primal <= 1e-6 && slack <= 1e-5,
        format!("100 projections: max primal violation {primal:.1e}, max KKT residual {slack:.1e}, max sweeps {sweeps}"),
    ))
}

fn reduction() -> Result<Check, CliError> {
    let n = 6;
    let horizon = 200;
    let seq = random_adversary::<f64>(ProblemKind::MaxCut, n, n, horizon, 0.5, 4)?;
    let cfg = maxcut_config::<f64>(n, horizon)?;
    let cuts: Vec<CutSet> = (0..8u64).map(|b| CutSet::from_bits(n, b * 7 % 64)).collect::<Result<_, _>>()?;
    let mut session = OmpSession::new(cfg.clone())?;
    let (mut worst_feasibility, mut worst_gap) = (0.0f64, f64::INFINITY);
    for round in &seq.rounds {
        let e = session.play(round.i, round.j, &round.loss)?.clone();
        let cs = constraints_kt(round.i, round.j, &cfg)?;
        let l = loss_matrix(e.g, round.i, round.j, &cfg)?;
        for cut in &cuts {
            let phi = embed_phi(&decompose_cut::<f64>(cut));
            worst_feasibility = worst_feasibility.max(cs.max_violation(&phi));
            let wij = cut_matrix::<f64>(cut).get(round.i - 1, round.j - 1);
            let gap = (e.linear_loss - phi.inner(&l)?) - 2.0 * (e.loss - round.loss.value(wij));
            worst_gap = worst_gap.min(gap);
        }
    }
    let psd = eig_sym(session.olo().x())?.min_value();
    Ok(check(
        worst_feasibility <= 1e-9 && worst_gap >= -1e-5 && psd >= -1e-8 && session.olo().step_condition_held(),
        format!(
            "comparator feasibility {worst_feasibility:.1e}, min reduction slack {worst_gap:.1e}, \
             final min eigenvalue {psd:.1e}"
        ),
    ))
}

fn oracles() -> Result<Check, CliError> {
    let mut mismatches = 0;
    for seed in 0..100u64 {
        let n = 2 + (seed as usize % 7);
        let seq = random_adversary::<f64>(ProblemKind::MaxCut, n, n, 30, 0.5, seed)?;
        let (best, loss) = best_cut_bruteforce(&seq.rounds, n)?;
        let graph = maxcut_weights(&seq.rounds, n)?;
        let (heaviest, _) = max_weight_cut(&graph)?;
        let same_value = (cut_loss(&heaviest, &seq.rounds) - loss).abs() <= 1e-9;
        let same_weight = (graph.cut_weight(&best) - graph.cut_weight(&heaviest)).abs() <= 1e-9;
        if !(same_value && same_weight) {
            mismatches += 1;
        }
    }
    Ok(check(mismatches == 0, format!("{mismatches} mismatches over 100 max-cut sequences")))
}

fn adversaries() -> Result<Check, CliError> {
    let a = maxcut_lb::<f64>(8, 64, 11)?;
    let deterministic = a == maxcut_lb::<f64>(8, 64, 11)?;
    let blocks = a
        .rounds
        .chunks(16)
        .enumerate()
        .all(|(k, c)| c.iter().all(|r| (r.i, r.j) == (k + 1, k + 5)));
    let cf = cf_lb::<f64>(4, 4, 4.0, 1.0, 64, 11)?;
    let (w, _) = cf_lb_comparator(&cf, 4.0)?;
    let in_class = w.max_abs() <= 1.0 && trace_norm(&w)? <= 4.0 + 1e-9;
    let random = random_adversary::<f64>(ProblemKind::Gambling, 5, 5, 500, 1.0, 11)?;
    let distinct = random.rounds.iter().all(|r| r.i != r.j);
    Ok(check(
        deterministic && blocks && in_class && distinct,
        format!(
            "deterministic {deterministic}, interval blocks {blocks}, cf comparator in class {in_class}, \
             distinct pairs {distinct}"
        ),
    ))
}

pub fn cmd_verify(suite: Suite) -> Result<(), CliError> {
    let suites: Vec<(&str, fn() -> Result<Check, CliError>)> = vec![
        ("linalg", linalg),
        ("decompositions", decompositions),
        ("projection", projection),
        ("reduction", reduction),
        ("oracles", oracles),
        ("adversaries", adversaries),
    ];
    let wanted = suite.to_possible_value().expect("no skipped variants");
    let mut failed = Vec::new();
    for (name, run) in suites {
        if suite != Suite::All && wanted.get_name() != name {
            continue;
        }
        let start = Instant::now();
        let c = run()?;
        println!(
            "{name}: {} [{:.2}s] {}",
            if c.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            c.detail
        );
        if !c.pass {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("suites failed: {}", failed.join(", "))))
    }
}
