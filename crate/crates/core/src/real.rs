//! Scalar abstraction for the numeric core.
//!
//! Everything in this crate is generic over [`Real`], implemented for `f32`
//! and `f64`. The accuracy contracts stated on individual functions are
//! given for `f64`; `f32` evaluates the same algorithms at its own epsilon.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar used by every model and solver in this crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Convert an `f64` constant into `T`.
///
/// Infallible for the two provided scalar types; `f32` rounds to nearest.
#[inline]
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 constant converts to Real")
}
