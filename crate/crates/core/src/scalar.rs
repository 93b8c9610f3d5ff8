//! Scalar abstraction: every numeric routine in the crate is generic over a
//! floating-point type implementing [`Real`].

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar (`f32` or `f64`) used throughout the crate.
pub trait Real: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {}

/// Convert an `f64` constant into the working scalar type.
#[inline]
pub fn real<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("f64 constant representable in the scalar type")
}
