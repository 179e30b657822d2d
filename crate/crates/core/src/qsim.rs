//! Oracle-step simulation on an `n + 1` qubit register, and the exact
//! counting path for the measured ancilla probability `q^2 = r/2^n`.
//!
//! Basis convention: the amplitude at `index = x*2 + y` belongs to the
//! basis state `|x, y>`, where `x` is the n-bit assignment index (`x1` most
//! significant) and the ancilla `y` is the least-significant bit.
//!
//! The two paths to `q^2` are deliberately independent: the dense
//! statevector walks the full register, while [`exact_q_squared`] counts
//! roots and forms the dyadic rational `r/2^n` directly. The exact value is
//! authoritative; the statevector must agree with it to within the
//! scalar's tolerance.

use num_complex::Complex;
use num_rational::Ratio;
use thiserror::Error;

use crate::formula::{ClauseSet, FormulaError, DEFAULT_ENUM_LIMIT};
use crate::real::{as_f64, real, Real};

/// Default cap on `n` for the dense path; the state holds `2^(n+1)`
/// complex amplitudes.
pub const DEFAULT_STATEVECTOR_LIMIT: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("state must have at least one input qubit")]
    NoQubits,
    #[error("n = {n} exceeds the statevector limit {limit} (2^(n+1) amplitudes)")]
    StateTooLarge { n: u32, limit: u32 },
    #[error("amplitude vector has length {got}, expected 2^({n}+1) = {expected}")]
    AmplitudeLength { n: u32, expected: usize, got: usize },
    #[error("state norm {norm} is not 1 within tolerance")]
    NotNormalized { norm: f64 },
    #[error("populations ({p0}, {p1}) are not a probability pair")]
    InvalidPopulations { p0: f64, p1: f64 },
    #[error("sigma-z expectation {z} lies outside [-1, 1]")]
    InvalidBlochZ { z: f64 },
}

/// Pure state of the `n + 1` qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    n: u32,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Equal amplitude `2^(-n/2)` on every `|x, 0>`, zero on every `|x, 1>`.
    pub fn uniform_superposition(n: u32) -> Result<Self, QsimError> {
        Self::uniform_superposition_with_limit(n, DEFAULT_STATEVECTOR_LIMIT)
    }

    pub fn uniform_superposition_with_limit(n: u32, limit: u32) -> Result<Self, QsimError> {
        if n == 0 {
            return Err(QsimError::NoQubits);
        }
        if n > limit {
            return Err(QsimError::StateTooLarge { n, limit });
        }
        let dim = 1usize << (n + 1);
        let amp = (T::one() / T::from_u64(1u64 << n).expect("2^n fits")).sqrt();
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        for x in 0..1usize << n {
            amps[x << 1] = Complex::new(amp, T::zero());
        }
        Ok(StateVector { n, amps })
    }

    /// Build a state from explicit amplitudes; must be normalized.
    pub fn from_amplitudes(n: u32, amps: Vec<Complex<T>>) -> Result<Self, QsimError> {
        if n == 0 {
            return Err(QsimError::NoQubits);
        }
        let expected = 1usize << (n + 1);
        if amps.len() != expected {
            return Err(QsimError::AmplitudeLength {
                n,
                expected,
                got: amps.len(),
            });
        }
        let state = StateVector { n, amps };
        state.validate()?;
        Ok(state)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// Amplitude of `|x, y>`.
    pub fn amplitude(&self, x: u64, y: bool) -> Complex<T> {
        self.amps[((x << 1) | u64::from(y)) as usize]
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(Complex::norm_sqr).sum::<T>().sqrt()
    }

    /// Check the unit-norm invariant at this scalar's tolerance.
    pub fn validate(&self) -> Result<(), QsimError> {
        let norm = self.norm();
        if (norm - T::one()).abs() > T::norm_eps() {
            return Err(QsimError::NotNormalized {
                norm: as_f64(norm),
            });
        }
        Ok(())
    }

    /// Apply `|x, y> -> |x, y xor f(x)>`: swaps the ancilla pair of every
    /// `x` with `f(x)` true. A permutation of basis states, so it preserves
    /// the norm and is its own inverse.
    pub fn apply_oracle<F: Fn(u64) -> bool>(&self, f: F) -> Self {
        let mut amps = self.amps.clone();
        for x in 0..1u64 << self.n {
            if f(x) {
                let i = (x << 1) as usize;
                amps.swap(i, i + 1);
            }
        }
        StateVector { n: self.n, amps }
    }

    /// Probability of measuring the ancilla in `|1>`: the total squared
    /// amplitude of the `y = 1` sector.
    ///
    /// Accumulation error can push the raw sum a few ulps past 1 when every
    /// basis state is marked; the result is clamped so a probability is
    /// always returned.
    pub fn measure_last_qubit_prob(&self) -> T {
        let raw: T = self
            .amps
            .iter()
            .skip(1)
            .step_by(2)
            .map(Complex::norm_sqr)
            .sum();
        raw.min(T::one())
    }
}

/// The measured ancilla probability held both exactly and as a float.
///
/// The exact dyadic rational is authoritative. The float is the rounded
/// quotient `r as f64 / 2^n as f64`, which is exact whenever `r < 2^53`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedQubitState {
    q_squared: Ratio<u64>,
    q_squared_float: f64,
}

impl ReducedQubitState {
    /// From a root count over `n` variables: `q^2 = r / 2^n`.
    /// Panics if `r > 2^n` or `n > 62`; callers obtain `r` from root
    /// counting, which enforces both.
    pub fn from_root_count(r: u64, n: u32) -> Self {
        assert!(n <= 62, "counting path caps n at 62");
        let denom = 1u64 << n;
        assert!(r <= denom, "root count cannot exceed 2^n");
        ReducedQubitState {
            q_squared: Ratio::new(r, denom),
            q_squared_float: r as f64 / denom as f64,
        }
    }

    /// The exact value, reduced to lowest terms.
    pub fn exact(&self) -> Ratio<u64> {
        self.q_squared
    }

    pub fn float(&self) -> f64 {
        self.q_squared_float
    }

    pub fn float_as<T: Real>(&self) -> T {
        real(self.q_squared_float)
    }
}

/// Exact `q^2` for a formula via root counting.
pub fn exact_q_squared(cs: &ClauseSet) -> Result<ReducedQubitState, FormulaError> {
    exact_q_squared_with_limit(cs, DEFAULT_ENUM_LIMIT)
}

pub fn exact_q_squared_with_limit(
    cs: &ClauseSet,
    limit: u32,
) -> Result<ReducedQubitState, FormulaError> {
    let r = cs.count_roots_with_limit(limit)?;
    Ok(ReducedQubitState::from_root_count(r, cs.num_vars()))
}

/// Diagonal one-qubit density matrix `diag(p0, p1)` in the `{|0>, |1>}`
/// basis, carrying its sigma-z expectation `p0 - p1` as a stored field.
///
/// The expectation is stored rather than recomputed: a state built from a
/// trace value `M` must return exactly `M`, and for tiny `M` the rounded
/// populations `(1 +/- M)/2` no longer determine it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix<T: Real> {
    p0: T,
    p1: T,
    sigma_z: T,
}

impl<T: Real> QubitDensityMatrix<T> {
    /// From the diagonal; requires `p0, p1 >= 0` and `p0 + p1 = 1` within
    /// tolerance.
    pub fn from_populations(p0: T, p1: T) -> Result<Self, QsimError> {
        let sum_ok = (p0 + p1 - T::one()).abs() <= T::norm_eps();
        if !(p0 >= T::zero() && p1 >= T::zero() && sum_ok) {
            return Err(QsimError::InvalidPopulations {
                p0: as_f64(p0),
                p1: as_f64(p1),
            });
        }
        Ok(QubitDensityMatrix {
            p0,
            p1,
            sigma_z: p0 - p1,
        })
    }

    /// From the sigma-z expectation `z` in [-1, 1]:
    /// `diag((1 + z)/2, (1 - z)/2)`.
    pub fn from_sigma_z(z: T) -> Result<Self, QsimError> {
        if !(z >= -T::one() && z <= T::one()) {
            return Err(QsimError::InvalidBlochZ { z: as_f64(z) });
        }
        let half = T::half();
        Ok(QubitDensityMatrix {
            p0: (T::one() + z) * half,
            p1: (T::one() - z) * half,
            sigma_z: z,
        })
    }

    pub fn p0(&self) -> T {
        self.p0
    }

    pub fn p1(&self) -> T {
        self.p1
    }

    /// `tr(rho sigma_3)` with `sigma_3 = diag(1, -1)`.
    pub fn sigma_z(&self) -> T {
        self.sigma_z
    }

    pub fn trace(&self) -> T {
        self.p0 + self.p1
    }
}

/// The post-measurement one-qubit state for a given `q^2`: populations
/// `(1 - q^2, q^2)`. The `|1>` population is set to `q^2` exactly, not via
/// the expectation, so tiny probabilities survive untouched.
pub fn reduced_density<T: Real>(qs: &ReducedQubitState) -> QubitDensityMatrix<T> {
    let p1: T = qs.float_as();
    let p0 = T::one() - p1;
    QubitDensityMatrix {
        p0,
        p1,
        sigma_z: p0 - p1,
    }
}
