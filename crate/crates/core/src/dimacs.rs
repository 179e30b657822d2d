//! DIMACS CNF parsing and serialization.
//!
//! Accepted input: optional `c` comment lines, one `p cnf <vars> <clauses>`
//! header, then clauses as whitespace-separated nonzero integers terminated
//! by `0`; a clause may span lines. A `%` line ends the clause section and
//! everything after it is ignored, matching the trailer some benchmark
//! archives append. A declared clause count that disagrees with the actual
//! count is a warning, not an error; a literal above the declared variable
//! count is an error.

use std::fmt;

use thiserror::Error;

use crate::formula::{Clause, ClauseSet, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

/// A parser message anchored to a 1-based input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "line {}: {}: {}", self.line, kind, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: clause data before any 'p cnf' header")]
    ClauseBeforeHeader { line: usize },
    #[error("no 'p cnf' header found")]
    MissingHeader,
    #[error("line {line}: malformed header, expected 'p cnf <vars> <clauses>'")]
    MalformedHeader { line: usize },
    #[error("line {line}: duplicate 'p' header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: declared variable count must be positive")]
    ZeroVariables { line: usize },
    #[error("line {line}: '{token}' is not a valid literal")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {literal} references a variable above the declared count {num_vars}")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: u32,
    },
    #[error("line {line}: final clause is not terminated by 0")]
    UnterminatedClause { line: usize },
}

impl DimacsError {
    /// The 1-based line the error points at, if it has one.
    pub fn line(&self) -> Option<usize> {
        match self {
            DimacsError::MissingHeader => None,
            DimacsError::ClauseBeforeHeader { line }
            | DimacsError::MalformedHeader { line }
            | DimacsError::DuplicateHeader { line }
            | DimacsError::ZeroVariables { line }
            | DimacsError::InvalidToken { line, .. }
            | DimacsError::LiteralOutOfRange { line, .. }
            | DimacsError::UnterminatedClause { line } => Some(*line),
        }
    }
}

/// Result of a successful parse: the formula plus any warnings.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub formula: ClauseSet,
    pub warnings: Vec<Diagnostic>,
}

/// Parse DIMACS CNF from raw bytes. Invalid UTF-8 sequences become
/// replacement characters and fail token parsing, so arbitrary input yields
/// an error value rather than a panic.
pub fn parse(input: &[u8]) -> Result<Parsed, DimacsError> {
    parse_str(&String::from_utf8_lossy(input))
}

pub fn parse_str(text: &str) -> Result<Parsed, DimacsError> {
    let mut header: Option<(u32, u64, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut last_clause_line = 0usize;

    for (line_index, raw_line) in text.lines().enumerate() {
        let line_no = line_index + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line == "%" {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line: line_no });
            }
            let mut tokens = line.split_whitespace();
            tokens.next();
            let kind = tokens.next();
            let num_vars = tokens.next().and_then(|t| t.parse::<u32>().ok());
            let num_clauses = tokens.next().and_then(|t| t.parse::<u64>().ok());
            match (kind, num_vars, num_clauses, tokens.next()) {
                (Some("cnf"), Some(n), Some(m), None) => {
                    if n == 0 {
                        return Err(DimacsError::ZeroVariables { line: line_no });
                    }
                    header = Some((n, m, line_no));
                }
                _ => return Err(DimacsError::MalformedHeader { line: line_no }),
            }
            continue;
        }
        let Some((num_vars, _, _)) = header else {
            return Err(DimacsError::ClauseBeforeHeader { line: line_no });
        };
        last_clause_line = line_no;
        for token in line.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if value == 0 {
                clauses.push(Clause::new(pending.drain(..)));
            } else {
                let var = value.unsigned_abs();
                if var > u64::from(num_vars) {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: line_no,
                        literal: value,
                        num_vars,
                    });
                }
                pending.push(Literal::new(var as u32, value < 0));
            }
        }
    }

    if !pending.is_empty() {
        return Err(DimacsError::UnterminatedClause {
            line: last_clause_line,
        });
    }
    let Some((num_vars, declared, header_line)) = header else {
        return Err(DimacsError::MissingHeader);
    };
    let mut warnings = Vec::new();
    if clauses.len() as u64 != declared {
        warnings.push(Diagnostic {
            line: header_line,
            severity: Severity::Warning,
            message: format!(
                "header declares {declared} clauses but {} were read",
                clauses.len()
            ),
        });
    }
    let formula =
        ClauseSet::new(num_vars, clauses).expect("literal ranges were validated during parsing");
    Ok(Parsed { formula, warnings })
}

/// Serialize to DIMACS text: the header line, then one 0-terminated clause
/// per line with literals in sorted order.
pub fn serialize(cs: &ClauseSet) -> String {
    let mut out = format!("p cnf {} {}\n", cs.num_vars(), cs.num_clauses());
    for clause in cs.clauses() {
        for literal in clause.literals() {
            out.push_str(&literal.code().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
