//! Line-oriented matrix archive.
//!
//! One matrix per line, fields separated by single spaces:
//!
//! ```text
//! # comment
//! 4 2 4 0000 0123
//! t 2 2 +0 0-
//! ```
//!
//! A phase record is `p N K row_1 … row_N` with each row written as K base-p
//! digits (`0-9a-z`). A ternary record uses the `t` prefix and the alphabet
//! `+ - 0`.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::algebra::{PhaseMatrix, TernaryMatrix};
use crate::error::{CcmError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Record {
    Phase(PhaseMatrix),
    Ternary(TernaryMatrix),
}

impl Record {
    pub fn as_phase(&self) -> Option<&PhaseMatrix> {
        match self {
            Record::Phase(m) => Some(m),
            Record::Ternary(_) => None,
        }
    }
}

fn digit(e: u8) -> char {
    std::char::from_digit(e as u32, 36).expect("exponent below 36")
}

impl fmt::Display for PhaseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.p(), self.n_rows(), self.n_cols())?;
        for row in self.rows() {
            let s: String = row.iter().map(|&e| digit(e)).collect();
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl fmt::Display for TernaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t {} {}", self.n_rows(), self.n_cols())?;
        for row in self.rows() {
            let s: String = row
                .iter()
                .map(|&v| match v {
                    1 => '+',
                    -1 => '-',
                    _ => '0',
                })
                .collect();
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Record::Phase(m) => m.fmt(f),
            Record::Ternary(t) => t.fmt(f),
        }
    }
}

fn perr(msg: impl Into<String>) -> CcmError {
    CcmError::Parse {
        line: 0,
        msg: msg.into(),
    }
}

fn parse_dim(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| perr(format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(format!("bad {what}")))
}

impl FromStr for Record {
    type Err = CcmError;

    fn from_str(line: &str) -> Result<Self> {
        let mut toks = line.split(' ').filter(|t| !t.is_empty());
        let head = toks.next().ok_or_else(|| perr("empty record"))?;
        let n = parse_dim(toks.next(), "row count")?;
        let k = parse_dim(toks.next(), "column count")?;
        let rows: Vec<&str> = toks.collect();
        if rows.len() != n {
            return Err(perr(format!("expected {n} rows, found {}", rows.len())));
        }
        if let Some(bad) = rows.iter().find(|r| r.chars().count() != k) {
            return Err(perr(format!("row {bad:?} does not have {k} entries")));
        }
        if head == "t" {
            let entries = rows
                .iter()
                .flat_map(|r| r.chars())
                .map(|c| match c {
                    '+' => Ok(1i8),
                    '-' => Ok(-1),
                    '0' => Ok(0),
                    other => Err(perr(format!("bad ternary symbol {other:?}"))),
                })
                .collect::<Result<Vec<i8>>>()?;
            return TernaryMatrix::new(n, k, entries).map(Record::Ternary);
        }
        let p: u32 = head.parse().map_err(|_| perr(format!("bad modulus {head:?}")))?;
        let exps = rows
            .iter()
            .flat_map(|r| r.chars())
            .map(|c| {
                c.to_digit(36)
                    .filter(|&d| d < p)
                    .map(|d| d as u8)
                    .ok_or_else(|| perr(format!("digit {c:?} invalid for modulus {p}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        PhaseMatrix::new(p, n, k, exps).map(Record::Phase)
    }
}

impl FromStr for PhaseMatrix {
    type Err = CcmError;

    fn from_str(line: &str) -> Result<Self> {
        match line.parse::<Record>()? {
            Record::Phase(m) => Ok(m),
            Record::Ternary(_) => Err(perr("expected a phase matrix, found a ternary one")),
        }
    }
}

impl FromStr for TernaryMatrix {
    type Err = CcmError;

    fn from_str(line: &str) -> Result<Self> {
        match line.parse::<Record>()? {
            Record::Ternary(t) => Ok(t),
            Record::Phase(_) => Err(perr("expected a ternary matrix, found a phase one")),
        }
    }
}

/// Parses archive text; errors carry 1-based line numbers.
pub fn parse_archive(text: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rec = line.parse::<Record>().map_err(|e| match e {
            CcmError::Parse { msg, .. } => CcmError::Parse { line: idx + 1, msg },
            other => CcmError::Parse {
                line: idx + 1,
                msg: other.to_string(),
            },
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_archive(path: impl AsRef<Path>) -> Result<Vec<Record>> {
    parse_archive(&fs::read_to_string(path)?)
}

/// Phase matrices only; ternary records are a parse error.
pub fn read_phase_archive(path: impl AsRef<Path>) -> Result<Vec<PhaseMatrix>> {
    let text = fs::read_to_string(path)?;
    parse_archive(&text)?
        .into_iter()
        .enumerate()
        .map(|(i, r)| match r {
            Record::Phase(m) => Ok(m),
            Record::Ternary(_) => Err(CcmError::Parse {
                line: i + 1,
                msg: "ternary record in a phase archive".into(),
            }),
        })
        .collect()
}

/// One record per line, in the given order.
pub fn format_archive<'a, T: fmt::Display + 'a>(records: impl IntoIterator<Item = &'a T>) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    s
}

pub fn write_archive<'a, T: fmt::Display + 'a>(
    path: impl AsRef<Path>,
    records: impl IntoIterator<Item = &'a T>,
) -> Result<()> {
    fs::write(path, format_archive(records))?;
    Ok(())
}
