//! Fixed-point logistic iteration at configurable precision.
//!
//! This is the reference path for crossing indices: plain integer
//! arithmetic with one rounding per step, sharing no code with the
//! floating-point pipeline in [`crate::amplifier`]. Values are integers
//! `X` representing `x = X / 2^bits`. Each step introduces at most one
//! unit of error in the last place, and the map's derivative never exceeds
//! 4 on [0, 1], so after `m` steps the accumulated error stays below
//! `2^(2m - bits)`; the default 384 bits leave a margin of well over 100
//! bits for every sweep in this crate.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive};

use crate::amplifier::AmplifierError;

/// Logistic map `x -> a*x*(1 - x)` in fixed point, with the coefficient
/// held as an exact ratio.
#[derive(Debug, Clone)]
pub struct PreciseLogistic {
    a_num: BigUint,
    a_den: BigUint,
    bits: u32,
}

impl PreciseLogistic {
    /// Fractional bits used by the reference checks in this crate.
    pub const DEFAULT_BITS: u32 = 384;

    /// Coefficient given as the exact ratio `a_num / a_den` in [0, 4].
    pub fn from_ratio(a_num: u64, a_den: u64, bits: u32) -> Result<Self, AmplifierError> {
        if a_den == 0 || a_num > 4 * a_den {
            return Err(AmplifierError::CoefficientOutOfRange {
                a: a_num as f64 / a_den as f64,
            });
        }
        Ok(PreciseLogistic {
            a_num: a_num.into(),
            a_den: a_den.into(),
            bits,
        })
    }

    /// Coefficient taken as the exact binary value of `a`, so the map is
    /// the same one the float pipeline iterates.
    pub fn from_f64(a: f64, bits: u32) -> Result<Self, AmplifierError> {
        if !(0.0..=4.0).contains(&a) {
            return Err(AmplifierError::CoefficientOutOfRange { a });
        }
        let ratio = BigRational::from_float(a).expect("finite by the range check");
        let (numer, denom) = ratio.into_raw();
        Ok(PreciseLogistic {
            a_num: numer.to_biguint().expect("non-negative"),
            a_den: denom.to_biguint().expect("positive"),
            bits,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Iterate from the exact binary value of `x0`, recording
    /// `max_steps + 1` fixed-point values. `x0` must be representable in
    /// `bits` fractional bits; every dyadic `k/2^n` with `n <= bits` is.
    pub fn trace(&self, x0: f64, max_steps: usize) -> Result<PreciseTrace, AmplifierError> {
        if !(0.0..=1.0).contains(&x0) {
            return Err(AmplifierError::InitialValueOutOfRange { x0 });
        }
        let scale = BigUint::one() << self.bits;
        let scaled = BigRational::from_float(x0).expect("finite by the range check")
            * BigRational::from_integer(BigInt::from(scale.clone()));
        if !scaled.is_integer() {
            return Err(AmplifierError::InsufficientPrecision { bits: self.bits });
        }
        let mut x = scaled
            .to_integer()
            .to_biguint()
            .expect("non-negative by the range check");
        // x' = a*x*(1-x) with x = X/S becomes
        // X' = a_num*X*(S - X) / (a_den*S), rounded to nearest.
        let half_scale = &scale >> 1;
        let denom = &self.a_den * &scale;
        let round_add = &denom >> 1;
        let mut values = Vec::with_capacity(max_steps + 1);
        let mut first_crossing = None;
        for m in 0..=max_steps {
            if m > 0 {
                let product = &self.a_num * &x * (&scale - &x);
                x = (product + &round_add) / &denom;
                debug_assert!(x <= scale, "fixed-point step left [0, 1]");
            }
            if first_crossing.is_none() && x > half_scale {
                first_crossing = Some(m);
            }
            values.push(x.clone());
        }
        Ok(PreciseTrace {
            bits: self.bits,
            values,
            first_crossing,
        })
    }
}

/// Fixed-point trajectory: `values[m] / 2^bits` approximates the m-th
/// iterate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreciseTrace {
    bits: u32,
    values: Vec<BigUint>,
    first_crossing: Option<usize>,
}

impl PreciseTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Least `m` with the fixed-point value strictly above 1/2.
    pub fn first_crossing(&self) -> Option<usize> {
        self.first_crossing
    }

    /// The raw fixed-point value at step `m`.
    pub fn value_raw(&self, m: usize) -> &BigUint {
        &self.values[m]
    }

    /// The value at step `m` rounded to `f64`.
    pub fn value_f64(&self, m: usize) -> f64 {
        Ratio::new(
            BigInt::from(self.values[m].clone()),
            BigInt::one() << self.bits,
        )
        .to_f64()
        .expect("value fits in f64 range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // The literal carries every digit of the exact decimal on purpose.
    #[allow(clippy::excessive_precision)]
    #[test]
    fn exact_decimal_coefficient_reproduces_hand_computed_values() {
        // With a = 371/100 exactly: from 1/8, step 1 is 2597/6400 and
        // step 2 is 3664141061/4096000000; both decimals below are exact.
        let map = PreciseLogistic::from_ratio(371, 100, 384).unwrap();
        let trace = map.trace(0.125, 6).unwrap();
        assert_eq!(trace.value_f64(0), 0.125);
        assert!((trace.value_f64(1) - 0.40578125).abs() < 1e-15);
        assert!((trace.value_f64(2) - 0.894565688720703125).abs() < 1e-15);
        assert_eq!(trace.first_crossing(), Some(2));
    }

    #[test]
    fn binary_coefficient_tracks_float_pipeline() {
        use crate::amplifier::{iterate_map, LogisticParams};
        let map = PreciseLogistic::from_f64(3.71, PreciseLogistic::DEFAULT_BITS).unwrap();
        let params = LogisticParams::new(3.71f64, 8).unwrap();
        for &x0 in &[0.125, 0.5, 0.75, 2f64.powi(-20)] {
            let fixed = map.trace(x0, 8).unwrap();
            let float = iterate_map(x0, &params).unwrap();
            // Before step 5 the float pipeline has accumulated at most a
            // few ulps of error, far below this tolerance.
            for m in 0..=5 {
                assert!(
                    (fixed.value_f64(m) - float.samples()[m]).abs() < 1e-9,
                    "x0={x0} m={m}"
                );
            }
        }
    }

    #[test]
    fn zero_stays_zero() {
        let map = PreciseLogistic::from_f64(3.71, 128).unwrap();
        let trace = map.trace(0.0, 50).unwrap();
        assert_eq!(trace.len(), 51);
        assert!((0..51).all(|m| trace.value_f64(m) == 0.0));
        assert_eq!(trace.first_crossing(), None);
    }

    #[test]
    fn crossing_is_strict_in_fixed_point() {
        let map = PreciseLogistic::from_ratio(371, 100, 256).unwrap();
        let trace = map.trace(0.5, 2).unwrap();
        assert_eq!(trace.first_crossing(), Some(1));
        assert!((trace.value_f64(1) - 0.9275).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            PreciseLogistic::from_ratio(9, 2, 64),
            Err(AmplifierError::CoefficientOutOfRange { .. })
        ));
        assert!(matches!(
            PreciseLogistic::from_ratio(1, 0, 64),
            Err(AmplifierError::CoefficientOutOfRange { .. })
        ));
        assert!(matches!(
            PreciseLogistic::from_f64(f64::NAN, 64),
            Err(AmplifierError::CoefficientOutOfRange { .. })
        ));
        let map = PreciseLogistic::from_f64(3.71, 64).unwrap();
        assert!(matches!(
            map.trace(-0.5, 4),
            Err(AmplifierError::InitialValueOutOfRange { .. })
        ));
        // 2^-100 needs more than 64 fractional bits.
        assert!(matches!(
            map.trace(2f64.powi(-100), 4),
            Err(AmplifierError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn coefficient_boundaries_are_accepted() {
        let map = PreciseLogistic::from_ratio(4, 1, 64).unwrap();
        let trace = map.trace(0.5, 1).unwrap();
        assert_eq!(trace.value_f64(1), 1.0);
        let map = PreciseLogistic::from_ratio(0, 1, 64).unwrap();
        let trace = map.trace(0.5, 1).unwrap();
        assert_eq!(trace.value_f64(1), 0.0);
    }
}
