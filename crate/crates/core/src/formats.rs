//! Plain-text file formats.
//!
//! Matrices: a header line `m n`, then `m` lines of `n` whitespace-separated
//! numbers. Sequences: CSV with header `t,i,j,kind,param`. Run traces: CSV
//! with header `t,i,j,yhat,g,loss,cumloss`, flushed one complete line at a
//! time.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::omp::LossEvent;
use crate::problems::{LossFn, LossKind, Round};
use crate::scalar::Scalar;

pub const SEQUENCE_HEADER: [&str; 5] = ["t", "i", "j", "kind", "param"];
pub const TRACE_HEADER: [&str; 7] = ["t", "i", "j", "yhat", "g", "loss", "cumloss"];

fn parse_num<T: Scalar>(s: &str, what: &str) -> Result<T> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: '{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{what}: '{s}' is not finite")));
    }
    Ok(T::of(v))
}

fn parse_index(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: '{s}' is not a nonnegative integer")))
}

pub fn read_matrix<T: Scalar>(reader: impl BufRead) -> Result<Matrix<T>> {
    let mut lines = reader
        .lines()
        .map(|l| l.map_err(Error::from))
        .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))??;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse(format!("header must be 'm n', got '{header}'")));
    }
    let m = parse_index(dims[0], "row count")?;
    let n = parse_index(dims[1], "column count")?;
    let mut data = Vec::with_capacity(m * n);
    for r in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {m} rows, found {r}")))??;
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {n}",
                r + 1,
                row.len()
            )));
        }
        for s in row {
            data.push(parse_num(s, "matrix entry")?);
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("trailing content after {m} rows: '{}'", extra?)));
    }
    Matrix::new(m, n, data)
}

pub fn write_matrix<T: Scalar>(mut w: impl Write, m: &Matrix<T>) -> Result<()> {
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Reads rounds; the `t` column must count up from 1.
pub fn read_sequence<T: Scalar>(reader: impl Read) -> Result<Vec<Round<T>>> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = csv.headers()?.clone();
    if header.iter().ne(SEQUENCE_HEADER) {
        return Err(Error::Parse(format!(
            "sequence header must be '{}', got '{}'",
            SEQUENCE_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rounds = Vec::new();
    for (k, rec) in csv.records().enumerate() {
        let rec = rec?;
        let t = parse_index(&rec[0], "t")?;
        if t != k + 1 {
            return Err(Error::Parse(format!("round numbers must count from 1; found {t} at row {}", k + 1)));
        }
        let kind = LossKind::parse(&rec[3])?;
        rounds.push(Round {
            i: parse_index(&rec[1], "i")?,
            j: parse_index(&rec[2], "j")?,
            loss: LossFn {
                kind,
                param: parse_num(&rec[4], "param")?,
            },
        });
    }
    Ok(rounds)
}

pub fn write_sequence<T: Scalar>(w: impl Write, rounds: &[Round<T>]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(SEQUENCE_HEADER)?;
    for (k, r) in rounds.iter().enumerate() {
        csv.write_record([
            (k + 1).to_string(),
            r.i.to_string(),
            r.j.to_string(),
            r.loss.kind.name().to_string(),
            r.loss.param.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Streams run events as CSV, flushing after each complete line.
pub struct TraceWriter<W: Write> {
    csv: csv::Writer<W>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(TRACE_HEADER)?;
        csv.flush()?;
        Ok(Self { csv })
    }

    pub fn write<T: Scalar>(&mut self, e: &LossEvent<T>, cumulative: T) -> Result<()> {
        self.csv.write_record([
            e.t.to_string(),
            e.i.to_string(),
            e.j.to_string(),
            e.prediction.to_string(),
            e.g.to_string(),
            e.loss.to_string(),
            cumulative.to_string(),
        ])?;
        self.csv.flush()?;
        Ok(())
    }
}
