//! DIMACS CNF reading and writing.
//!
//! Clauses may span several lines; each must be closed by `0`. Comment lines
//! start with `c`. The header's clause count must match the body.

use std::fmt::Write as _;
use std::io::Read;

use thiserror::Error;

use crate::formula::{Clause, Formula, Literal};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: `{token}` is not an integer literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {value} has variable index 0")]
    ZeroIndex { line: usize, value: String },
    #[error("line {line}: literal {literal} exceeds the {declared} declared variables")]
    LiteralOutOfRange { line: usize, literal: i64, declared: u32 },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: clause is missing its terminating 0")]
    MissingTerminator { line: usize },
    #[error("line {line}: header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { line: usize, declared: usize, found: usize },
    #[error("no `p cnf` header found")]
    NoHeader,
    #[error("read failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses DIMACS CNF text into a [`Formula`], keeping clause and literal
/// order.
pub fn parse_dimacs(text: &str) -> Result<Formula, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut clause_start = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::MalformedHeader {
                    line,
                    reason: "duplicate header".into(),
                });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        // `%` ends the body in some benchmark files.
        if trimmed.starts_with('%') {
            break;
        }
        let (declared, _) = header.ok_or(ParseError::MissingHeader { line })?;
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| ParseError::BadToken {
                line,
                token: token.to_string(),
            })?;
            if value == 0 {
                if token.starts_with('-') {
                    return Err(ParseError::ZeroIndex { line, value: token.to_string() });
                }
                if current.is_empty() {
                    return Err(ParseError::EmptyClause { line });
                }
                clauses.push(Clause::new(std::mem::take(&mut current)));
                continue;
            }
            if value.unsigned_abs() > u64::from(declared) {
                return Err(ParseError::LiteralOutOfRange { line, literal: value, declared });
            }
            if current.is_empty() {
                clause_start = line;
            }
            current.push(Literal::from_dimacs(value).expect("nonzero"));
        }
    }

    let (declared, count) = header.ok_or(ParseError::NoHeader)?;
    if !current.is_empty() {
        return Err(ParseError::MissingTerminator { line: clause_start });
    }
    if clauses.len() != count {
        return Err(ParseError::ClauseCountMismatch {
            line: last_line,
            declared: count,
            found: clauses.len(),
        });
    }
    Ok(Formula::new(declared, clauses).expect("literals were range-checked"))
}

pub fn read_dimacs(mut reader: impl Read) -> Result<Formula, ParseError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_dimacs(&text)
}

fn parse_header(line_text: &str, line: usize) -> Result<(u32, usize), ParseError> {
    let malformed = |reason: &str| ParseError::MalformedHeader { line, reason: reason.to_string() };
    let mut fields = line_text.split_whitespace();
    if fields.next() != Some("p") {
        return Err(malformed("expected `p cnf <vars> <clauses>`"));
    }
    if fields.next() != Some("cnf") {
        return Err(malformed("format must be `cnf`"));
    }
    let vars = fields
        .next()
        .and_then(|t| t.parse::<u32>().ok())
        .ok_or_else(|| malformed("variable count is not a nonnegative integer"))?;
    let count = fields
        .next()
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| malformed("clause count is not a nonnegative integer"))?;
    if fields.next().is_some() {
        return Err(malformed("trailing fields"));
    }
    Ok((vars, count))
}

/// Writes `p cnf <vars> <clauses>` followed by one clause per line.
pub fn emit_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses()).unwrap();
    for clause in f.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
