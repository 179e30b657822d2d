//! Decide CNF satisfiability by simulating a quantum oracle step and
//! amplifying the measured signal with a chaotic map.
//!
//! Pipeline: [`formula`] encodes a CNF instance and counts its satisfying
//! assignments, [`qsim`] produces the ancilla probability `q^2 = r/2^n`
//! (dense statevector or exact counting), and [`amplifier`] iterates the
//! logistic map on that probability until it crosses 1/2. [`dimacs`]
//! handles file I/O and [`precise`] provides an independent fixed-point
//! reference iteration for crossing indices.
//!
//! Floating-point code is generic over the [`Real`] scalar; the aliases
//! below pin the common instantiations.
//!
//! ```
//! use qchaos_core::formula::{Clause, ClauseSet, Literal};
//! use qchaos_core::qsim::exact_q_squared;
//! use qchaos_core::amplifier::{find_first_crossing, LogisticParams};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let cs = ClauseSet::new(2, vec![Clause::new([Literal::positive(1)])])?;
//! let q = exact_q_squared(&cs)?;            // 2/4 reduced to 1/2, exactly
//! let params = LogisticParams::for_num_vars(2);
//! let m = find_first_crossing(q.float(), &params)?;
//! assert_eq!(m, Some(1));
//! # Ok(())
//! # }
//! ```

pub mod amplifier;
pub mod dimacs;
pub mod formula;
pub mod precise;
pub mod qsim;
mod real;

pub use formula::{Assignment, Clause, ClauseSet, CompiledFormula, IndexSetFamily, Literal};
pub use real::Real;

/// Statevector in double precision.
pub type StateVector64 = qsim::StateVector<f64>;
/// Statevector in single precision.
pub type StateVector32 = qsim::StateVector<f32>;
/// One-qubit density matrix in double precision.
pub type QubitDensityMatrix64 = qsim::QubitDensityMatrix<f64>;
/// Logistic-map parameters in double precision.
pub type LogisticParams64 = amplifier::LogisticParams<f64>;
/// Amplification trace in double precision.
pub type AmplifierTrace64 = amplifier::AmplifierTrace<f64>;
