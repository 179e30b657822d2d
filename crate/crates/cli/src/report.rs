//! Report types shared by the subcommands: serializable to JSON and
//! renderable as plain text.

use std::fmt;

use clap::ValueEnum;
use serde::Serialize;

use qchaos_core::amplifier::{PropositionReport, PropositionRow};

/// Outcome of a satisfiability decision; doubles as the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Sat,
    Unsat,
}

impl Decision {
    /// Solver-convention exit codes: 10 satisfiable, 20 unsatisfiable.
    pub fn exit_code(self) -> u8 {
        match self {
            Decision::Sat => 10,
            Decision::Unsat => 20,
        }
    }

    /// The conventional solution line, e.g. `s SATISFIABLE`.
    pub fn solution_line(self) -> &'static str {
        match self {
            Decision::Sat => "s SATISFIABLE",
            Decision::Unsat => "s UNSATISFIABLE",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Sat => write!(f, "SAT"),
            Decision::Unsat => write!(f, "UNSAT"),
        }
    }
}

/// How `q^2` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Dense register simulation; exact up to float rounding, needs
    /// 2^(n+1) amplitudes.
    Statevector,
    /// Exhaustive root counting; yields the exact dyadic rational.
    Counting,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Statevector => write!(f, "statevector"),
            Method::Counting => write!(f, "counting"),
        }
    }
}

/// Everything the solve pipeline measured and decided.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub file: String,
    pub n: u32,
    pub m: usize,
    /// Root count; absent on the statevector path.
    pub r: Option<u64>,
    /// `q^2` as an exact fraction (counting) or a decimal (statevector).
    pub q_squared: String,
    pub q_squared_float: f64,
    pub first_crossing: Option<usize>,
    pub decision: Decision,
    pub method: Method,
    pub a: f64,
    pub max_steps: usize,
    pub wall_time_ms: u64,
}

impl SolveReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("file: {}\n", self.file));
        out.push_str(&format!("size: {} variables, {} clauses\n", self.n, self.m));
        out.push_str(&format!("method: {}\n", self.method));
        if let Some(r) = self.r {
            out.push_str(&format!("roots: r = {r} of {} assignments\n", 1u64 << self.n));
        }
        out.push_str(&format!(
            "q^2: {} ({:e})\n",
            self.q_squared, self.q_squared_float
        ));
        match self.first_crossing {
            Some(m) => out.push_str(&format!(
                "first crossing: m* = {m} (a = {}, max steps {})\n",
                self.a, self.max_steps
            )),
            None => out.push_str(&format!(
                "first crossing: none within {} steps (a = {})\n",
                self.max_steps, self.a
            )),
        }
        out.push_str(&format!("time: {} ms\n", self.wall_time_ms));
        out.push_str(self.decision.solution_line());
        out.push('\n');
        out
    }
}

/// Ground-truth report from exhaustive enumeration alone.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub file: String,
    pub n: u32,
    pub m: usize,
    pub r: u64,
    pub total: u64,
    pub decision: Decision,
}

impl OracleReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("file: {}\n", self.file));
        out.push_str(&format!("size: {} variables, {} clauses\n", self.n, self.m));
        out.push_str(&format!(
            "roots: r = {} of {} assignments\n",
            self.r, self.total
        ));
        out.push_str(self.decision.solution_line());
        out.push('\n');
        out
    }
}

/// JSON form of a bounds-sweep row.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsRow {
    pub n: u32,
    pub x0: f64,
    pub crossing: Option<usize>,
    pub precise_crossing: Option<usize>,
    pub lower_bound: Option<f64>,
    pub lower_bound_cited: Option<f64>,
    pub upper_bound: usize,
    pub passed: bool,
}

impl From<&PropositionRow> for BoundsRow {
    fn from(row: &PropositionRow) -> Self {
        BoundsRow {
            n: row.n,
            x0: row.x0,
            crossing: row.crossing,
            precise_crossing: row.precise_crossing,
            lower_bound: row.lower_bound,
            lower_bound_cited: row.lower_bound_cited,
            upper_bound: row.upper_bound,
            passed: row.passed,
        }
    }
}

/// JSON form of a bounds sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub a: f64,
    pub k: u64,
    pub bounds_checked: bool,
    pub all_passed: bool,
    pub rows: Vec<BoundsRow>,
}

impl From<&PropositionReport> for BoundsReport {
    fn from(report: &PropositionReport) -> Self {
        BoundsReport {
            a: report.a,
            k: report.k,
            bounds_checked: report.bounds_checked,
            all_passed: report.all_passed(),
            rows: report.rows.iter().map(BoundsRow::from).collect(),
        }
    }
}

pub fn render_bounds_table(report: &PropositionReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "bounds sweep: a = {}, k = {}{}\n",
        report.a,
        report.k,
        if report.bounds_checked {
            ""
        } else {
            " (bounds not applicable at this coefficient; comparing paths only)"
        }
    ));
    out.push_str("   n   m*  reference  lower(exact)  lower(cited)  upper  status\n");
    for row in &report.rows {
        let crossing = row
            .crossing
            .map_or("-".to_string(), |m| m.to_string());
        let reference = row
            .precise_crossing
            .map_or("-".to_string(), |m| m.to_string());
        let lower = row
            .lower_bound
            .map_or("-".to_string(), |b| format!("{b:.4}"));
        let lower_cited = row
            .lower_bound_cited
            .map_or("-".to_string(), |b| format!("{b:.4}"));
        out.push_str(&format!(
            "{:>4} {:>4}  {:>9}  {:>12}  {:>12}  {:>5}  {}\n",
            row.n,
            crossing,
            reference,
            lower,
            lower_cited,
            row.upper_bound,
            if row.passed { "ok" } else { "FAIL" }
        ));
    }
    let failed = report.rows.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        out.push_str(&format!("all {} rows passed\n", report.rows.len()));
    } else {
        out.push_str(&format!(
            "{failed} of {} rows FAILED\n",
            report.rows.len()
        ));
    }
    out
}
