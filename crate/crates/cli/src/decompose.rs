use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use clap::Args;
use matpred::decompose::{
    cut_matrix, decompose_cut, decompose_permutation, decompose_trace_norm, decompose_triangular, perm_matrix,
    validate, CutSet, Decomposition, Permutation,
};
use matpred::formats::{read_matrix, write_matrix};
use matpred::linalg::{trace_norm, Matrix};

use crate::error::{usage, CliError};

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Validation tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Write `P` and `N` to `<PREFIX>.P.txt` and `<PREFIX>.N.txt`.
    #[arg(long, value_name = "PREFIX")]
    pub dump: Option<PathBuf>,
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| usage(format!("{what}: '{t}' is not a positive integer"))))
        .collect()
}

fn report(class: &str, d: &Decomposition<f64>, w: &Matrix<f64>, out: &OutputArgs) -> Result<(), CliError> {
    let rep = validate(d, w, out.tol)?;
    println!("class: {class}");
    println!("shape: {}x{}", w.rows(), w.cols());
    println!("order: {}", d.order());
    println!("beta: {}", d.beta);
    println!("tau: {}", d.tau);
    println!("realized_trace: {}", rep.realized_trace);
    println!("max_diagonal: {}", rep.max_diag);
    println!("reconstruction_residual: {:e}", rep.reconstruction);
    println!("symmetry_residual: {:e}", rep.symmetry_violation);
    println!("min_eigenvalue_p: {:e}", rep.min_eig_positive);
    println!("min_eigenvalue_n: {:e}", rep.min_eig_negative);
    println!("valid: {}", rep.passed);
    if let Some(prefix) = &out.dump {
        for (tag, m) in [("P", &d.positive), ("N", &d.negative)] {
            let path = with_suffix(prefix, tag);
            write_matrix(BufWriter::new(File::create(&path)?), &m.to_matrix())?;
            println!("wrote: {}", path.display());
        }
    }
    if rep.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("validation failed: {}", rep.failures().join(", "))))
    }
}

fn with_suffix(prefix: &Path, tag: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(format!(".{tag}.txt"));
    PathBuf::from(s)
}

pub fn cut(n: usize, set: &str, out: &OutputArgs) -> Result<(), CliError> {
    let members = parse_list(set, "--set")?;
    let cut = CutSet::new(n, &members)?;
    report("cut", &decompose_cut(&cut), &cut_matrix(&cut).to_matrix(), out)
}

pub fn trace_norm_file(path: &Path, out: &OutputArgs) -> Result<(), CliError> {
    let file = File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
    let w: Matrix<f64> = read_matrix(BufReader::new(file))?;
    println!("trace_norm: {}", trace_norm(&w)?);
    report("tracenorm", &decompose_trace_norm(&w)?, &w, out)
}

pub fn triangular(k: u32, out: &OutputArgs) -> Result<(), CliError> {
    if k > 8 {
        return Err(usage(format!("--k {k} is too large; at most 8")));
    }
    report(
        "triangular",
        &decompose_triangular(k),
        &matpred::decompose::triangular(1 << k),
        out,
    )
}

pub fn permutation(pi: &str, out: &OutputArgs) -> Result<(), CliError> {
    let pi = Permutation::new(&parse_list(pi, "--pi")?)?;
    report("permutation", &decompose_permutation(&pi), &perm_matrix(&pi), out)
}

pub fn hadamard(n: usize, out: &OutputArgs) -> Result<(), CliError> {
    let h = matpred::decompose::hadamard::<f64>(n)?;
    let d = decompose_trace_norm(&h)?;
    let floor = 0.25 * trace_norm(&h)? * (n as f64).sqrt();
    println!("beta_times_tau: {}", d.beta * d.tau);
    println!("quarter_tau_sqrt_n: {floor}");
    report("hadamard", &d, &h, out)
}
