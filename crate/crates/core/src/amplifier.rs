//! Chaotic amplification: iterate the logistic map `x -> a*x*(1 - x)` on
//! the measured ancilla probability and find the first index where the
//! value exceeds 1/2.
//!
//! The crossing comparison is strict (`value > 1/2`); an exact tie does not
//! count. With the default coefficient `a = 3.71`, a start value `1/2^n`
//! crosses within `2n` steps and no earlier than `(n - 1)/log2(a)` steps,
//! while a start value of exactly 0 stays at 0 forever; that dichotomy is
//! the decision procedure. Values recorded after the crossing sit in the
//! chaotic regime and are sensitive to rounding, so only the crossing index
//! and the pre-crossing stretch are treated as numerically meaningful.

use thiserror::Error;

use crate::precise::PreciseLogistic;
use crate::qsim::QubitDensityMatrix;
use crate::real::{as_f64, real, Real};

/// Map coefficient used by the solver pipeline.
pub const DEFAULT_A: f64 = 3.71;

/// The 4-decimal value of `log2(3.71)` checked alongside the full-precision
/// logarithm in the crossing lower bound.
pub const LOG2_A_CITED: f64 = 1.8912;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmplifierError {
    #[error("initial value {x0} lies outside [0, 1]")]
    InitialValueOutOfRange { x0: f64 },
    #[error("map coefficient {a} lies outside [0, 4], so the map would leave [0, 1]")]
    CoefficientOutOfRange { a: f64 },
    #[error("{bits} fractional bits cannot represent the initial value exactly")]
    InsufficientPrecision { bits: u32 },
}

/// Iteration parameters: coefficient `a` in [0, 4] and the number of steps
/// to record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams<T: Real> {
    a: T,
    max_steps: usize,
}

impl<T: Real> LogisticParams<T> {
    pub fn new(a: T, max_steps: usize) -> Result<Self, AmplifierError> {
        if !(a >= T::zero() && a <= real::<T>(4.0)) {
            return Err(AmplifierError::CoefficientOutOfRange { a: as_f64(a) });
        }
        Ok(LogisticParams { a, max_steps })
    }

    /// Solver defaults for an `n`-variable instance: `a = 3.71` and `2n`
    /// steps, enough for any satisfiable instance to cross.
    pub fn for_num_vars(n: u32) -> Self {
        LogisticParams {
            a: real(DEFAULT_A),
            max_steps: 2 * n as usize,
        }
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }
}

/// One validated step of the map.
pub fn logistic_step<T: Real>(x: T, a: T) -> Result<T, AmplifierError> {
    if !(a >= T::zero() && a <= real::<T>(4.0)) {
        return Err(AmplifierError::CoefficientOutOfRange { a: as_f64(a) });
    }
    if !(x >= T::zero() && x <= T::one()) {
        return Err(AmplifierError::InitialValueOutOfRange { x0: as_f64(x) });
    }
    Ok(step_unchecked(x, a))
}

#[inline]
fn step_unchecked<T: Real>(x: T, a: T) -> T {
    let next = a * x * (T::one() - x);
    // For a in [0, 4] and x in [0, 1] the product stays in [0, 1] even
    // after rounding: x*(1 - x) never rounds above 1/4 and a/4 <= 1.
    assert!(
        next >= T::zero() && next <= T::one(),
        "logistic step left [0, 1]"
    );
    next
}

/// A logistic trajectory: `samples()[m]` is the m-th iterate, starting at
/// `samples()[0] = x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifierTrace<T: Real> {
    x0: T,
    samples: Vec<T>,
    first_crossing: Option<usize>,
}

impl<T: Real> AmplifierTrace<T> {
    pub fn x0(&self) -> T {
        self.x0
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    /// Least `m` with `samples()[m] > 1/2`, if any.
    pub fn first_crossing(&self) -> Option<usize> {
        self.first_crossing
    }

    /// `(m, value)` pairs in step order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.samples.iter().copied().enumerate()
    }
}

/// Record `max_steps + 1` iterates of the map from `x0` in [0, 1].
pub fn iterate_map<T: Real>(
    x0: T,
    params: &LogisticParams<T>,
) -> Result<AmplifierTrace<T>, AmplifierError> {
    if !(x0 >= T::zero() && x0 <= T::one()) {
        return Err(AmplifierError::InitialValueOutOfRange { x0: as_f64(x0) });
    }
    let threshold = T::half();
    let mut samples = Vec::with_capacity(params.max_steps + 1);
    let mut first_crossing = None;
    let mut x = x0;
    for m in 0..=params.max_steps {
        if m > 0 {
            x = step_unchecked(x, params.a);
        }
        samples.push(x);
        if first_crossing.is_none() && x > threshold {
            first_crossing = Some(m);
        }
    }
    Ok(AmplifierTrace {
        x0,
        samples,
        first_crossing,
    })
}

/// Least `m <= max_steps` with the m-th iterate strictly above 1/2,
/// stopping at the crossing instead of recording a full trace. Agrees with
/// the index found by [`iterate_map`].
pub fn find_first_crossing<T: Real>(
    x0: T,
    params: &LogisticParams<T>,
) -> Result<Option<usize>, AmplifierError> {
    if !(x0 >= T::zero() && x0 <= T::one()) {
        return Err(AmplifierError::InitialValueOutOfRange { x0: as_f64(x0) });
    }
    let threshold = T::half();
    let mut x = x0;
    for m in 0..=params.max_steps {
        if m > 0 {
            x = step_unchecked(x, params.a);
        }
        if x > threshold {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// A trace paired with the diagonal density matrix of each step,
/// `diag((1 + M_m)/2, (1 - M_m)/2)` for iterate `M_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTrace<T: Real> {
    pub trace: AmplifierTrace<T>,
    pub states: Vec<QubitDensityMatrix<T>>,
}

/// Iterate the map on a one-qubit state, seeding the scalar iteration with
/// the `|1>` population. Each recorded state returns its iterate exactly
/// through [`QubitDensityMatrix::sigma_z`].
pub fn density_iterate<T: Real>(
    rho0: &QubitDensityMatrix<T>,
    params: &LogisticParams<T>,
) -> Result<DensityTrace<T>, AmplifierError> {
    let trace = iterate_map(rho0.p1(), params)?;
    let states = trace
        .samples()
        .iter()
        .map(|&m| QubitDensityMatrix::from_sigma_z(m).expect("iterates lie in [0, 1]"))
        .collect();
    Ok(DensityTrace { trace, states })
}

/// `tr(rho sigma_3)` with `sigma_3 = diag(1, -1)`.
pub fn expectation_sigma3<T: Real>(rho: &QubitDensityMatrix<T>) -> T {
    rho.sigma_z()
}

/// Crossing bounds for one start value `x0 = k/2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionRow {
    pub n: u32,
    pub x0: f64,
    /// Crossing index in double precision.
    pub crossing: Option<usize>,
    /// Crossing index recomputed by the fixed-point reference path.
    pub precise_crossing: Option<usize>,
    /// Strict lower bound `(n - 1)/log2(a)` with the full-precision
    /// logarithm; `None` when `a` is not the canonical 3.71.
    pub lower_bound: Option<f64>,
    /// The same bound with `log2(3.71)` replaced by [`LOG2_A_CITED`].
    pub lower_bound_cited: Option<f64>,
    /// Upper bound `2n` on the crossing index.
    pub upper_bound: usize,
    pub passed: bool,
}

/// Result of a bounds sweep. When `bounds_checked` is false the coefficient
/// is not 3.71, the bounds do not apply, and rows only compare the two
/// computation paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionReport {
    pub a: f64,
    pub k: u64,
    pub bounds_checked: bool,
    pub rows: Vec<PropositionRow>,
}

impl PropositionReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|row| row.passed)
    }
}

/// For each `n` (skipping those with `k >= 2^n`), iterate from
/// `x0 = k/2^n` and check the crossing index `m*`:
///
/// - a crossing exists and `m* <= 2n`;
/// - for `k = 1`, `m*` strictly exceeds `(n - 1)/log2(3.71)`, evaluated
///   with both the full-precision logarithm and [`LOG2_A_CITED`];
/// - the fixed-point reference path agrees with the double-precision
///   crossing to within one step.
///
/// Bound checks require the canonical `a = 3.71`; for any other
/// coefficient only the path agreement is checked. Violations mark the row
/// failed rather than returning an error. `k` should be at least 1 and
/// below `2^53` so `x0` is exact; `k = 0` never crosses.
pub fn verify_propositions(
    n_values: &[u32],
    k: u64,
    a: f64,
) -> Result<PropositionReport, AmplifierError> {
    let bounds_checked = a == DEFAULT_A;
    // Representing 2^-n needs n fractional bits, and resolving a crossing
    // after up to 2n steps needs roughly 4n more; grow beyond the default
    // when the sweep goes deep.
    let max_n = n_values.iter().copied().max().unwrap_or(0);
    let bits = PreciseLogistic::DEFAULT_BITS.max(4 * max_n + 128);
    let precise = PreciseLogistic::from_f64(a, bits)?;
    let mut rows = Vec::new();
    for &n in n_values {
        if n == 0 || (n < 64 && k >= 1u64 << n) {
            continue;
        }
        let params = LogisticParams::new(a, 2 * n as usize)?;
        let x0 = k as f64 / 2f64.powi(n as i32);
        let crossing = find_first_crossing(x0, &params)?;
        let precise_crossing = precise.trace(x0, params.max_steps())?.first_crossing();
        let (lower_bound, lower_bound_cited) = if bounds_checked {
            (
                Some((f64::from(n) - 1.0) / a.log2()),
                Some((f64::from(n) - 1.0) / LOG2_A_CITED),
            )
        } else {
            (None, None)
        };
        let paths_agree = match (crossing, precise_crossing) {
            (Some(m), Some(p)) => m.abs_diff(p) <= 1,
            (None, None) => true,
            _ => false,
        };
        let bounds_hold = match crossing {
            Some(m) => {
                let within_upper = m <= 2 * n as usize;
                let above_lower = if k == 1 {
                    let mf = m as f64;
                    mf > lower_bound.unwrap_or(f64::NEG_INFINITY)
                        && mf > lower_bound_cited.unwrap_or(f64::NEG_INFINITY)
                } else {
                    true
                };
                within_upper && above_lower
            }
            None => false,
        };
        let passed = paths_agree && (!bounds_checked || bounds_hold);
        rows.push(PropositionRow {
            n,
            x0,
            crossing,
            precise_crossing,
            lower_bound,
            lower_bound_cited,
            upper_bound: 2 * n as usize,
            passed,
        });
    }
    Ok(PropositionReport {
        a,
        k,
        bounds_checked,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn canonical(max_steps: usize) -> LogisticParams<f64> {
        LogisticParams::new(DEFAULT_A, max_steps).unwrap()
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let trace = iterate_map(0.0, &canonical(120)).unwrap();
        assert!(trace.samples().iter().all(|&x| x == 0.0));
        assert_eq!(trace.first_crossing(), None);
    }

    // The literal carries every digit of the exact decimal on purpose.
    #[allow(clippy::excessive_precision)]
    #[test]
    fn trace_from_one_eighth_matches_hand_computed_values() {
        // x1 = 3.71 * (1/8) * (7/8) = 2597/6400 exactly; the f64 value
        // rounds that decimal. x2 = 3664141061/4096000000, which is
        // 0.894565688720703125 exactly in binary.
        let trace = iterate_map(0.125, &canonical(6)).unwrap();
        assert_eq!(trace.samples()[0], 0.125);
        assert_abs_diff_eq!(trace.samples()[1], 0.40578125, epsilon = 1e-15);
        assert_abs_diff_eq!(
            trace.samples()[2],
            0.894565688720703125,
            epsilon = 1e-14
        );
        assert_eq!(trace.first_crossing(), Some(2));
    }

    #[test]
    fn crossing_is_strict() {
        // From exactly 1/2 the threshold is not crossed at step 0; one step
        // lands at 3.71/4 = 0.9275.
        let trace = iterate_map(0.5, &canonical(4)).unwrap();
        assert_eq!(trace.first_crossing(), Some(1));
        assert_abs_diff_eq!(trace.samples()[1], 0.9275, epsilon = 1e-15);
    }

    #[test]
    fn start_above_threshold_crosses_at_zero() {
        let trace = iterate_map(0.75, &canonical(4)).unwrap();
        assert_eq!(trace.first_crossing(), Some(0));
    }

    #[test]
    fn trace_has_max_steps_plus_one_samples() {
        let trace = iterate_map(0.125, &canonical(6)).unwrap();
        assert_eq!(trace.samples().len(), 7);
        assert_eq!(trace.iter().count(), 7);
        let trace = iterate_map(0.125, &canonical(0)).unwrap();
        assert_eq!(trace.samples().len(), 1);
        assert_eq!(trace.first_crossing(), None);
    }

    #[test]
    fn find_first_crossing_matches_trace() {
        for &x0 in &[0.0, 0.5, 0.125, 0.75, 1.0, 1.0 / 1024.0] {
            let params = canonical(40);
            let via_trace = iterate_map(x0, &params).unwrap().first_crossing();
            let direct = find_first_crossing(x0, &params).unwrap();
            assert_eq!(direct, via_trace, "x0 = {x0}");
        }
    }

    #[test]
    fn domain_validation() {
        assert!(matches!(
            iterate_map(-0.1, &canonical(4)),
            Err(AmplifierError::InitialValueOutOfRange { .. })
        ));
        assert!(matches!(
            iterate_map(1.1, &canonical(4)),
            Err(AmplifierError::InitialValueOutOfRange { .. })
        ));
        assert!(matches!(
            iterate_map(f64::NAN, &canonical(4)),
            Err(AmplifierError::InitialValueOutOfRange { .. })
        ));
        assert!(matches!(
            LogisticParams::new(4.1, 4),
            Err(AmplifierError::CoefficientOutOfRange { .. })
        ));
        assert!(matches!(
            LogisticParams::new(-0.1, 4),
            Err(AmplifierError::CoefficientOutOfRange { .. })
        ));
        assert!(matches!(
            logistic_step(0.5, f64::NAN),
            Err(AmplifierError::CoefficientOutOfRange { .. })
        ));
        assert_eq!(logistic_step(0.5, 4.0), Ok(1.0));
        assert_eq!(logistic_step(1.0, 3.71), Ok(0.0));
    }

    #[test]
    fn default_params_give_two_n_steps() {
        let params: LogisticParams<f64> = LogisticParams::for_num_vars(7);
        assert_eq!(params.max_steps(), 14);
        assert_eq!(params.a(), 3.71);
    }

    #[test]
    fn density_iteration_tracks_scalar_iteration() {
        let rho0 = QubitDensityMatrix::from_populations(0.875, 0.125).unwrap();
        let density = density_iterate(&rho0, &canonical(6)).unwrap();
        assert_eq!(density.states.len(), density.trace.samples().len());
        for (m, &x) in density.trace.samples().iter().enumerate() {
            let rho = &density.states[m];
            assert_eq!(expectation_sigma3(rho), x, "step {m}");
            assert_abs_diff_eq!(rho.p0() - rho.p1(), x, epsilon = 1e-15);
            assert_eq!(rho.trace(), 1.0);
        }
    }

    #[test]
    fn density_iteration_from_unsat_state_stays_at_zero() {
        let rho0 = QubitDensityMatrix::from_populations(1.0, 0.0).unwrap();
        let density = density_iterate(&rho0, &canonical(20)).unwrap();
        assert!(density.trace.samples().iter().all(|&x| x == 0.0));
        assert!(density
            .states
            .iter()
            .all(|rho| expectation_sigma3(rho) == 0.0));
        assert_eq!(density.trace.first_crossing(), None);
    }

    #[test]
    fn pre_crossing_growth_is_monotone() {
        // While x <= 1/2, each step multiplies by at least a/2 > 1.
        for n in 1..=40u32 {
            let x0 = 2f64.powi(-(n as i32));
            let trace = iterate_map(x0, &canonical(2 * n as usize)).unwrap();
            let crossing = trace.first_crossing().expect("must cross");
            for m in 0..crossing {
                let x = trace.samples()[m];
                let next = trace.samples()[m + 1];
                assert!(
                    next >= x * (DEFAULT_A / 2.0) * 0.999999,
                    "n={n} m={m}: {x} -> {next}"
                );
            }
        }
    }

    #[test]
    fn verify_propositions_canonical_sweep_passes() {
        let n_values: Vec<u32> = (1..=30).collect();
        let report = verify_propositions(&n_values, 1, DEFAULT_A).unwrap();
        assert!(report.bounds_checked);
        assert_eq!(report.rows.len(), 30);
        assert!(report.all_passed(), "rows: {:?}", report.rows);
        let row_n3 = &report.rows[2];
        assert_eq!(row_n3.crossing, Some(2));
        assert_eq!(row_n3.precise_crossing, Some(2));
        assert!(row_n3.lower_bound.unwrap() < 2.0);
        assert_eq!(row_n3.upper_bound, 6);
    }

    #[test]
    fn verify_propositions_skips_degenerate_rows() {
        let report = verify_propositions(&[1, 2, 3], 4, DEFAULT_A).unwrap();
        // k = 4 only fits below 2^n for n = 3.
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].n, 3);
        assert_eq!(report.rows[0].crossing, Some(1));
    }

    #[test]
    fn verify_propositions_off_coefficient_is_informational() {
        let report = verify_propositions(&[1, 2, 3, 4], 1, 2.0).unwrap();
        assert!(!report.bounds_checked);
        assert!(report.rows.iter().all(|r| r.lower_bound.is_none()));
        // The paths agree, so the rows pass even where no crossing exists:
        // a = 2 sends 1/2 to itself and never exceeds it.
        assert!(report.all_passed());
        assert_eq!(report.rows[0].crossing, None);
    }

    #[test]
    fn single_precision_trace_crosses_near_double_precision_index() {
        for n in 1..=10u32 {
            let x0 = 2f32.powi(-(n as i32));
            let params32: LogisticParams<f32> =
                LogisticParams::new(3.71f32, 2 * n as usize).unwrap();
            let crossing32 = find_first_crossing(x0, &params32).unwrap().unwrap();
            let crossing64 = find_first_crossing(2f64.powi(-(n as i32)), &canonical(2 * n as usize))
                .unwrap()
                .unwrap();
            assert!(
                crossing32.abs_diff(crossing64) <= 1,
                "n={n}: f32 {crossing32} vs f64 {crossing64}"
            );
        }
    }
}
