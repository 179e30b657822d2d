//! The work behind each subcommand, separated from argument parsing so
//! tests can drive it in-process.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qchaos_core::amplifier::{
    iterate_map, verify_propositions, AmplifierTrace, LogisticParams, PropositionReport,
    DEFAULT_A,
};
use qchaos_core::dimacs::{self, Diagnostic};
use qchaos_core::formula::{random_kcnf, ClauseSet, CompiledFormula, DEFAULT_ENUM_LIMIT};
use qchaos_core::qsim::ReducedQubitState;
use qchaos_core::StateVector64;

use crate::report::{Decision, Method, OracleReport, SolveReport};

/// Environment override for the exhaustive-enumeration variable limit.
pub const ENUM_LIMIT_ENV: &str = "QCHAOS_ENUM_LIMIT";

/// Cap on `--n-max` for bounds sweeps; each row costs `O(n)` map steps at
/// `O(n)`-bit precision.
pub const MAX_BOUNDS_N: u32 = 4096;

/// The enumeration limit, honoring [`ENUM_LIMIT_ENV`] when set.
pub fn enum_limit_from_env() -> Result<u32> {
    match std::env::var(ENUM_LIMIT_ENV) {
        Ok(text) => {
            let limit: u32 = text
                .trim()
                .parse()
                .ok()
                .filter(|&v| v >= 1)
                .with_context(|| {
                    format!("{ENUM_LIMIT_ENV} must be a positive integer, got {text:?}")
                })?;
            Ok(limit)
        }
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_ENUM_LIMIT),
        Err(err) => Err(err).context(format!("{ENUM_LIMIT_ENV} is not valid unicode")),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub a: f64,
    /// Amplifier steps; defaults to `2n` for an `n`-variable formula.
    pub max_steps: Option<usize>,
    pub method: Method,
    pub enum_limit: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            a: DEFAULT_A,
            max_steps: None,
            method: Method::Counting,
            enum_limit: DEFAULT_ENUM_LIMIT,
        }
    }
}

/// Read and parse a DIMACS file, returning the formula and any parser
/// warnings.
pub fn load_formula(path: &Path) -> Result<(ClauseSet, Vec<Diagnostic>)> {
    let bytes =
        std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed =
        dimacs::parse(&bytes).with_context(|| format!("cannot parse {}", path.display()))?;
    Ok((parsed.formula, parsed.warnings))
}

/// Compute `q^2` by the requested method. Returns the root count (counting
/// path only), a display string (exact fraction or decimal), and the float
/// value that seeds the amplifier.
pub fn measure_q_squared(
    cs: &ClauseSet,
    method: Method,
    enum_limit: u32,
) -> Result<(Option<u64>, String, f64)> {
    match method {
        Method::Counting => {
            let r = cs.count_roots_with_limit(enum_limit)?;
            let qs = ReducedQubitState::from_root_count(r, cs.num_vars());
            Ok((Some(r), qs.exact().to_string(), qs.float()))
        }
        Method::Statevector => {
            let state = StateVector64::uniform_superposition(cs.num_vars())?;
            let compiled = CompiledFormula::new(cs);
            let probability = state
                .apply_oracle(|x| compiled.satisfied(x))
                .measure_last_qubit_prob();
            Ok((None, format!("{probability:.16e}"), probability))
        }
    }
}

/// The full decision pipeline on an in-memory formula.
pub fn solve_formula(cs: &ClauseSet, label: &str, opts: &SolveOptions) -> Result<SolveReport> {
    let started = Instant::now();
    let n = cs.num_vars();
    let max_steps = opts.max_steps.unwrap_or(2 * n as usize);
    let params = LogisticParams::new(opts.a, max_steps)?;
    let (r, q_squared, q_squared_float) = measure_q_squared(cs, opts.method, opts.enum_limit)?;
    let trace = iterate_map(q_squared_float, &params)?;
    let decision = match trace.first_crossing() {
        Some(_) => Decision::Sat,
        None => Decision::Unsat,
    };
    Ok(SolveReport {
        file: label.to_string(),
        n,
        m: cs.num_clauses(),
        r,
        q_squared,
        q_squared_float,
        first_crossing: trace.first_crossing(),
        decision,
        method: opts.method,
        a: opts.a,
        max_steps,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

pub fn solve_file(path: &Path, opts: &SolveOptions) -> Result<(SolveReport, Vec<Diagnostic>)> {
    let (cs, warnings) = load_formula(path)?;
    let report = solve_formula(&cs, &path.display().to_string(), opts)?;
    Ok((report, warnings))
}

/// Ground truth by enumeration alone: satisfiable iff `r > 0`.
pub fn oracle_formula(cs: &ClauseSet, label: &str, enum_limit: u32) -> Result<OracleReport> {
    let r = cs.count_roots_with_limit(enum_limit)?;
    Ok(OracleReport {
        file: label.to_string(),
        n: cs.num_vars(),
        m: cs.num_clauses(),
        r,
        total: 1u64 << cs.num_vars(),
        decision: if r > 0 { Decision::Sat } else { Decision::Unsat },
    })
}

pub fn oracle_file(path: &Path, enum_limit: u32) -> Result<(OracleReport, Vec<Diagnostic>)> {
    let (cs, warnings) = load_formula(path)?;
    let report = oracle_formula(&cs, &path.display().to_string(), enum_limit)?;
    Ok((report, warnings))
}

/// What the trace subcommand iterates from: a formula file or a bare
/// probability.
#[derive(Debug, Clone)]
pub enum TraceSource {
    File(PathBuf),
    Probability(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    pub a: f64,
    pub max_steps: Option<usize>,
    pub method: Method,
    pub enum_limit: u32,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            a: DEFAULT_A,
            max_steps: None,
            method: Method::Counting,
            enum_limit: DEFAULT_ENUM_LIMIT,
        }
    }
}

pub fn run_trace(
    source: &TraceSource,
    opts: &TraceOptions,
) -> Result<(AmplifierTrace<f64>, Vec<Diagnostic>)> {
    let (x0, steps, warnings) = match source {
        TraceSource::Probability(q_squared) => {
            let Some(steps) = opts.max_steps else {
                bail!("--q2 runs the amplifier standalone; give --max-steps explicitly");
            };
            (*q_squared, steps, Vec::new())
        }
        TraceSource::File(path) => {
            let (cs, warnings) = load_formula(path)?;
            let (_, _, q_squared) = measure_q_squared(&cs, opts.method, opts.enum_limit)?;
            let steps = opts.max_steps.unwrap_or(2 * cs.num_vars() as usize);
            (q_squared, steps, warnings)
        }
    };
    let params = LogisticParams::new(opts.a, steps)?;
    let trace = iterate_map(x0, &params)?;
    Ok((trace, warnings))
}

/// CSV rendering of a trace: header `m,M_m`, one row per step, values with
/// 17 significant digits so the f64 round-trips exactly.
pub fn trace_csv(trace: &AmplifierTrace<f64>) -> String {
    let mut out = String::from("m,M_m\n");
    for (m, value) in trace.iter() {
        out.push_str(&format!("{m},{value:.16e}\n"));
    }
    out
}

/// Crossing-bound sweep over `n_min..=n_max` with start values `k/2^n`.
pub fn bounds_sweep(n_min: u32, n_max: u32, k: u64, a: f64) -> Result<PropositionReport> {
    if n_min == 0 {
        bail!("--n-min must be at least 1");
    }
    if n_min > n_max {
        bail!("--n-min must not exceed --n-max");
    }
    if n_max > MAX_BOUNDS_N {
        bail!("bounds sweeps cap n at {MAX_BOUNDS_N}");
    }
    if k == 0 {
        bail!("--k must be at least 1");
    }
    if k >= 1u64 << 53 {
        bail!("--k must stay below 2^53 so the start value k/2^n is exact");
    }
    let n_values: Vec<u32> = (n_min..=n_max).collect();
    Ok(verify_propositions(&n_values, k, a)?)
}

/// Deterministic random instance: identical arguments produce identical
/// bytes.
pub fn generate_kcnf(n: u32, m: usize, k: u32, seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cs = random_kcnf(n, m, k, &mut rng)?;
    Ok(format!(
        "c qchaos gen: n={n} m={m} k={k} seed={seed}\n{}",
        dimacs::serialize(&cs)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qchaos_core::formula::{Clause, Literal};

    fn three_clause_example() -> ClauseSet {
        ClauseSet::new(
            3,
            vec![
                Clause::new([Literal::positive(1), Literal::negative(2)]),
                Clause::new([Literal::negative(1)]),
                Clause::new([Literal::positive(2), Literal::negative(3)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn solve_reports_the_example_pipeline_values() {
        let cs = three_clause_example();
        let report = solve_formula(&cs, "example", &SolveOptions::default()).unwrap();
        assert_eq!(report.n, 3);
        assert_eq!(report.m, 3);
        assert_eq!(report.r, Some(1));
        assert_eq!(report.q_squared, "1/8");
        assert_eq!(report.q_squared_float, 0.125);
        assert_eq!(report.first_crossing, Some(2));
        assert_eq!(report.decision, Decision::Sat);
        assert_eq!(report.max_steps, 6);
        assert_eq!(report.decision.exit_code(), 10);
    }

    #[test]
    fn solve_statevector_method_matches_counting() {
        let cs = three_clause_example();
        let counting = solve_formula(&cs, "x", &SolveOptions::default()).unwrap();
        let dense = solve_formula(
            &cs,
            "x",
            &SolveOptions {
                method: Method::Statevector,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(dense.r, None);
        assert!((dense.q_squared_float - counting.q_squared_float).abs() < 1e-12);
        assert_eq!(dense.decision, counting.decision);
        assert_eq!(dense.first_crossing, counting.first_crossing);
    }

    #[test]
    fn unsatisfiable_formula_never_crosses() {
        let cs = ClauseSet::new(
            2,
            vec![
                Clause::new([Literal::positive(1)]),
                Clause::new([Literal::negative(1)]),
            ],
        )
        .unwrap();
        for method in [Method::Counting, Method::Statevector] {
            let report = solve_formula(
                &cs,
                "contradiction",
                &SolveOptions {
                    method,
                    ..SolveOptions::default()
                },
            )
            .unwrap();
            assert_eq!(report.q_squared_float, 0.0);
            assert_eq!(report.first_crossing, None);
            assert_eq!(report.decision, Decision::Unsat);
            assert_eq!(report.decision.exit_code(), 20);
        }
    }

    #[test]
    fn trace_csv_has_header_and_full_precision_rows() {
        let trace = iterate_map(0.125, &LogisticParams::new(DEFAULT_A, 2).unwrap()).unwrap();
        let csv = trace_csv(&trace);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "m,M_m");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1.25"));
        // Each value must round-trip exactly through the printed decimal.
        for (i, line) in lines.iter().enumerate().skip(1) {
            let (m, value) = line.split_once(',').unwrap();
            assert_eq!(m.parse::<usize>().unwrap(), i - 1);
            assert_eq!(value.parse::<f64>().unwrap(), trace.samples()[i - 1]);
        }
    }

    #[test]
    fn standalone_trace_requires_max_steps() {
        let err = run_trace(
            &TraceSource::Probability(0.125),
            &TraceOptions::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("--max-steps"));
        let (trace, warnings) = run_trace(
            &TraceSource::Probability(0.125),
            &TraceOptions {
                max_steps: Some(6),
                ..TraceOptions::default()
            },
        )
        .unwrap();
        assert!(warnings.is_empty());
        assert_eq!(trace.samples().len(), 7);
        assert_eq!(trace.first_crossing(), Some(2));
    }

    #[test]
    fn bounds_sweep_validates_arguments() {
        assert!(bounds_sweep(0, 5, 1, DEFAULT_A).is_err());
        assert!(bounds_sweep(5, 3, 1, DEFAULT_A).is_err());
        assert!(bounds_sweep(1, MAX_BOUNDS_N + 1, 1, DEFAULT_A).is_err());
        assert!(bounds_sweep(1, 5, 0, DEFAULT_A).is_err());
        assert!(bounds_sweep(1, 5, 1u64 << 53, DEFAULT_A).is_err());
        let report = bounds_sweep(1, 10, 1, DEFAULT_A).unwrap();
        assert_eq!(report.rows.len(), 10);
        assert!(report.all_passed());
    }

    #[test]
    fn generate_is_deterministic_and_reparses() {
        let a = generate_kcnf(6, 12, 3, 42).unwrap();
        let b = generate_kcnf(6, 12, 3, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_kcnf(6, 12, 3, 43).unwrap();
        assert_ne!(a, c);
        let parsed = dimacs::parse_str(&a).unwrap();
        assert!(parsed.warnings.is_empty());
        assert_eq!(parsed.formula.num_vars(), 6);
        assert_eq!(parsed.formula.num_clauses(), 12);
    }

    #[test]
    fn oracle_matches_solve_decision_on_the_example() {
        let cs = three_clause_example();
        let oracle = oracle_formula(&cs, "example", DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(oracle.r, 1);
        assert_eq!(oracle.total, 8);
        assert_eq!(oracle.decision, Decision::Sat);
    }
}
