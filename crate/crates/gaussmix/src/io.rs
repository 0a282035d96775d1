//! Plain-text serialization of Gaussian states and mixtures.
//!
//! Two formats, both whitespace-separated and row-major:
//!
//! * **state file** — header `n_modes <k>`, one mean line (2k entries),
//!   then 2k covariance rows of 2k entries each;
//! * **mixture file** — header `branches <b> modes <k>`, then per branch
//!   one weight line, one mean line, and 2k covariance rows.
//!
//! Floats are written with 17 significant digits, so write → read → write
//! reproduces files byte for byte. Readers skip blank lines, report errors
//! with 1-based line numbers, and validate every parsed object through the
//! same constructors the engine uses.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::mixture::GaussianMixture;
use crate::symplectic::GaussianState;
use crate::{Error, Result};

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_row<W: Write>(out: &mut W, row: impl Iterator<Item = f64>) -> Result<()> {
    let mut first = true;
    for x in row {
        if !first {
            write!(out, " ")?;
        }
        write!(out, "{}", fmt_float(x))?;
        first = false;
    }
    writeln!(out)?;
    Ok(())
}

/// Write a state in the state-file format.
pub fn write_state<W: Write>(out: &mut W, state: &GaussianState) -> Result<()> {
    writeln!(out, "n_modes {}", state.n_modes())?;
    write_row(out, state.mean().iter().copied())?;
    let cov = state.cov();
    for i in 0..cov.nrows() {
        write_row(out, cov.row(i).iter().copied())?;
    }
    Ok(())
}

/// Write a mixture in the mixture-file format.
pub fn write_mixture<W: Write>(out: &mut W, mix: &GaussianMixture) -> Result<()> {
    writeln!(out, "branches {} modes {}", mix.branches().len(), mix.n_modes())?;
    for (w, state) in mix.branches() {
        writeln!(out, "{}", fmt_float(*w))?;
        write_row(out, state.mean().iter().copied())?;
        let cov = state.cov();
        for i in 0..cov.nrows() {
            write_row(out, cov.row(i).iter().copied())?;
        }
    }
    Ok(())
}

/// Line-counting reader that skips blank lines and reports 1-based
/// positions in parse errors.
struct LineReader<R: BufRead> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> LineReader<R> {
    fn new(inner: R) -> Self {
        Self {
            lines: inner.lines(),
            line_no: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line_no,
            msg: msg.into(),
        }
    }

    /// Next non-blank line, or None at end of input.
    fn next_content(&mut self) -> Result<Option<String>> {
        for line in self.lines.by_ref() {
            let line = line?;
            self.line_no += 1;
            if !line.trim().is_empty() {
                return Ok(Some(line));
            }
        }
        Ok(None)
    }

    fn require_line(&mut self, what: &str) -> Result<String> {
        match self.next_content()? {
            Some(line) => Ok(line),
            None => Err(Error::Parse {
                line: self.line_no + 1,
                msg: format!("unexpected end of file, expected {what}"),
            }),
        }
    }

    fn require_end(&mut self) -> Result<()> {
        if self.next_content()?.is_some() {
            return Err(self.err("trailing content after the last expected row"));
        }
        Ok(())
    }

    fn parse_floats(&self, line: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
        let vals = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| self.err(format!("invalid number {tok:?} in {what}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != expected {
            return Err(self.err(format!(
                "{what} has {} entries, expected {expected}",
                vals.len()
            )));
        }
        Ok(vals)
    }

    fn read_state_body(&mut self, n_modes: usize) -> Result<GaussianState> {
        let dim = 2 * n_modes;
        let mean_line = self.require_line("a mean row")?;
        let mean = DVector::from_vec(self.parse_floats(&mean_line, dim, "mean row")?);
        let mut cov = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let row_line = self.require_line("a covariance row")?;
            let row = self.parse_floats(&row_line, dim, "covariance row")?;
            for (j, x) in row.into_iter().enumerate() {
                cov[(i, j)] = x;
            }
        }
        GaussianState::new(mean, cov)
    }
}

fn parse_header_fields<'a>(
    reader: &LineReader<impl BufRead>,
    line: &'a str,
    keywords: &[&str],
) -> Result<Vec<usize>> {
    let tokens: Vec<&'a str> = line.split_whitespace().collect();
    if tokens.len() != 2 * keywords.len() {
        return Err(reader.err(format!(
            "malformed header {line:?}, expected \"{}\"",
            keywords
                .iter()
                .map(|k| format!("{k} <count>"))
                .collect::<Vec<_>>()
                .join(" ")
        )));
    }
    let mut counts = Vec::with_capacity(keywords.len());
    for (i, kw) in keywords.iter().enumerate() {
        if tokens[2 * i] != *kw {
            return Err(reader.err(format!(
                "malformed header {line:?}, expected keyword {kw:?}"
            )));
        }
        let count: usize = tokens[2 * i + 1]
            .parse()
            .map_err(|_| reader.err(format!("invalid {kw} count {:?}", tokens[2 * i + 1])))?;
        if count == 0 {
            return Err(reader.err(format!("{kw} count must be positive")));
        }
        counts.push(count);
    }
    Ok(counts)
}

/// Read a state from the state-file format.
pub fn read_state<R: Read>(input: R) -> Result<GaussianState> {
    let mut reader = LineReader::new(BufReader::new(input));
    let header = reader.require_line("header \"n_modes <k>\"")?;
    let counts = parse_header_fields(&reader, &header, &["n_modes"])?;
    let state = reader.read_state_body(counts[0])?;
    reader.require_end()?;
    Ok(state)
}

/// Read a mixture from the mixture-file format; the normalization flag is
/// derived from the weight sum.
pub fn read_mixture<R: Read>(input: R) -> Result<GaussianMixture> {
    let mut reader = LineReader::new(BufReader::new(input));
    let header = reader.require_line("header \"branches <b> modes <k>\"")?;
    let counts = parse_header_fields(&reader, &header, &["branches", "modes"])?;
    let (n_branches, n_modes) = (counts[0], counts[1]);
    let mut branches = Vec::with_capacity(n_branches);
    for _ in 0..n_branches {
        let weight_line = reader.require_line("a branch weight")?;
        let weight = reader.parse_floats(&weight_line, 1, "branch weight")?[0];
        let state = reader.read_state_body(n_modes)?;
        branches.push((weight, state));
    }
    reader.require_end()?;
    GaussianMixture::new(branches)
}

/// Write a state to a file path.
pub fn write_state_file<P: AsRef<Path>>(path: P, state: &GaussianState) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_state(&mut out, state)?;
    out.flush()?;
    Ok(())
}

/// Read a state from a file path.
pub fn read_state_file<P: AsRef<Path>>(path: P) -> Result<GaussianState> {
    read_state(File::open(path)?)
}

/// Write a mixture to a file path.
pub fn write_mixture_file<P: AsRef<Path>>(path: P, mix: &GaussianMixture) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_mixture(&mut out, mix)?;
    out.flush()?;
    Ok(())
}

/// Read a mixture from a file path.
pub fn read_mixture_file<P: AsRef<Path>>(path: P) -> Result<GaussianMixture> {
    read_mixture(File::open(path)?)
}
