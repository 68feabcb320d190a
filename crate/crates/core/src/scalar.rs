//! Scalar abstraction shared by the numeric core.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point type the library computes in.
///
/// Implemented for `f32` and `f64`. Everything that touches amplitudes, weights or energies is
/// written against this trait; the crate root exposes `f64` aliases for day-to-day use.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + FromStr
    + Default
    + Sum
    + NumAssign
    + Send
    + Sync
    + 'static
{
    /// Tolerance used for unitarity and normalization checks at this precision.
    fn check_tol() -> Self;
}

impl Real for f64 {
    fn check_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn check_tol() -> Self {
        1e-4
    }
}

/// Complex amplitude over a [`Real`] scalar.
pub type Amp<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable")
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
