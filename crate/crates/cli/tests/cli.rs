use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn matpred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matpred"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no '{key}' in:\n{out}"))
        .to_string()
}

fn num(out: &str, key: &str) -> f64 {
    field(out, key).parse().unwrap()
}

#[test]
fn maxcut_run_reports_regret_within_bound() {
    let o = matpred(&["run", "--problem", "maxcut", "--n", "8", "--horizon", "2000", "--seed", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let bound = num(&out, "bound");
    let expected = 2.0 * 0.5 * (8.0 * 16f64.ln() * 2000.0).sqrt();
    assert_eq!(bound, expected);
    assert!(num(&out, "regret") <= (8.0 * 8f64.ln() * 2000.0).sqrt() * 2.0);
    assert_eq!(field(&out, "within_bound"), "true");
    assert_eq!(field(&out, "step_condition_held"), "true");
}

#[test]
fn traces_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        let o = matpred(&[
            "run", "--problem", "gambling", "--n", "5", "--horizon", "60", "--seed", "3", "--trace",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some("t,i,j,yhat,g,loss,cumloss"));
    assert_eq!(text.lines().count(), 61);
}

#[test]
fn usage_errors_exit_with_two() {
    let eta0 = matpred(&["run", "--problem", "maxcut", "--n", "4", "--horizon", "10", "--eta", "0"]);
    assert_eq!(eta0.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&eta0.stderr).contains("eta"));
    assert_eq!(matpred(&["run", "--n", "4", "--horizon", "10"]).status.code(), Some(2));
    assert_eq!(matpred(&["frobnicate"]).status.code(), Some(2));
    let lb = matpred(&["lowerbound", "maxcut", "--n", "8", "--horizon", "10", "--seeds", "1"]);
    assert_eq!(lb.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&lb.stderr).contains("nearest valid T is 12"));
}

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "problem = \"maxcut\"\nn = 6\nhorizon = 30\nseed = 9\ncomparator = \"none\"\n").unwrap();
    let o = matpred(&["run", "--config", cfg.to_str().unwrap(), "--seed", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(field(&out, "seed"), "4");
    assert_eq!(field(&out, "shape"), "6x6");
    assert_eq!(field(&out, "regret"), "n/a");

    fs::write(&cfg, "problem = \"maxcut\"\nsize = 6\n").unwrap();
    assert_eq!(matpred(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sequence_file_adversary_and_aborted_trace() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.csv");
    let trace = dir.path().join("trace.csv");
    // The third loss is steeper than the declared G = 1.
    fs::write(&seq, "t,i,j,kind,param\n1,1,2,linear,0.5\n2,2,1,linear,-1\n3,1,1,linear,5\n").unwrap();
    let args = |tau0: &str| {
        vec![
            "run".to_string(),
            "--problem".into(),
            "cf".into(),
            "--m".into(),
            "2".into(),
            "--n".into(),
            "2".into(),
            "--tau0".into(),
            tau0.into(),
            "--horizon".into(),
            "3".into(),
            "--adversary".into(),
            "file".into(),
            "--sequence".into(),
            seq.to_str().unwrap().into(),
            "--trace".into(),
            trace.to_str().unwrap().into(),
        ]
    };
    let o = Command::new(env!("CARGO_BIN_EXE_matpred")).args(args("1")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let text = fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.ends_with('\n'));
    assert!(text.lines().all(|l| l.split(',').count() == 7));

    fs::write(&seq, "t,i,j,kind,param\n1,1,2,linear,0.5\n2,2,1,linear,-1\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_matpred")).args(args("1")).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "rounds"), "2");
}

#[test]
fn decompose_reports_beta_and_tau() {
    let cut = stdout(&matpred(&["decompose", "cut", "--n", "8", "--set", "1,3"]));
    assert_eq!((field(&cut, "beta"), field(&cut, "tau")), ("1".into(), "8".into()));
    assert_eq!(field(&cut, "valid"), "true");

    let tri = stdout(&matpred(&["decompose", "triangular", "--k", "3"]));
    assert_eq!((field(&tri, "beta"), field(&tri, "tau")), ("4".into(), "128".into()));

    let perm = matpred(&["decompose", "permutation", "--pi", "3,1,2"]);
    assert!(perm.status.success());
    assert_eq!(field(&stdout(&perm), "beta"), "3");

    assert_eq!(matpred(&["decompose", "permutation", "--pi", "1,1"]).status.code(), Some(2));
}

#[test]
fn decompose_trace_norm_file_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("W.txt");
    fs::write(&w, "2 3\n1 0 0\n0 -1 0\n").unwrap();
    let prefix = dir.path().join("out");
    let o = matpred(&["decompose", "tracenorm", "--file", w.to_str().unwrap(), "--dump", prefix.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!((num(&out, "beta") - 5f64.sqrt()).abs() < 1e-12);
    assert!((num(&out, "tau") - 4.0).abs() < 1e-9);
    assert!((num(&out, "trace_norm") - 2.0).abs() < 1e-9);
    let p = fs::read_to_string(Path::new(&format!("{}.P.txt", prefix.display()))).unwrap();
    assert!(p.starts_with("5 5\n"));
    assert!(Path::new(&format!("{}.N.txt", prefix.display())).exists());
}

#[test]
fn lowerbound_reports_closed_form_bounds() {
    let single = stdout(&matpred(&["lowerbound", "maxcut", "--n", "4", "--horizon", "64", "--seeds", "5"]));
    assert_eq!(field(&single, "seeds"), "1");
    assert_eq!(field(&single, "sd_regret"), "n/a");
    assert!((num(&single, "lower_bound") - 4.0).abs() < 1e-9);

    let cf = matpred(&[
        "lowerbound", "cf", "--m", "2", "--n", "4", "--tau0", "4", "--g", "1", "--horizon", "64", "--seeds", "1-3",
    ]);
    assert!(cf.status.success(), "{}", String::from_utf8_lossy(&cf.stderr));
    let out = stdout(&cf);
    let expected = (0.5 * 4.0 * 2.0 * 64.0f64).sqrt();
    assert!((num(&out, "lower_bound") - expected).abs() < 1e-3);
    let seeds: Vec<&str> = out.lines().filter(|l| l.starts_with("seed ")).collect();
    assert!(seeds[0].starts_with("seed 1:") && seeds[2].starts_with("seed 3:"));
}

#[test]
fn verify_suites_pass() {
    let o = matpred(&["verify", "decompositions"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("decompositions: PASS"));
    let all = matpred(&["verify", "all"]);
    assert!(all.status.success(), "{}", stdout(&all));
    assert_eq!(stdout(&all).lines().filter(|l| l.contains(": PASS")).count(), 6);
}
