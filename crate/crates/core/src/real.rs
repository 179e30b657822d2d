//! Scalar abstraction for the floating-point pipeline.
//!
//! Everything numeric in [`crate::qsim`] and [`crate::amplifier`] is generic
//! over [`Real`] so the same code runs in `f32` or `f64`. Concrete aliases
//! for the common instantiations live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for norm and probability-sum checks at this precision.
    fn norm_eps() -> Self;

    /// Exact 1/2.
    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl Real for f32 {
    fn norm_eps() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn norm_eps() -> Self {
        1e-12
    }
}

/// Convert an `f64` constant into the scalar type. Panics only if an impl
/// cannot represent ordinary constants, which neither provided impl hits.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

pub(crate) fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
