//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt;

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type the geometry is computed over.
///
/// Implemented for `f64` (the default everywhere) and `f32`. Tolerances in
/// this crate are calibrated for double precision and pass through
/// [`Real::tol`], which widens them for narrower types.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + fmt::Display + fmt::LowerExp + Send + Sync + 'static
{
    /// Factor applied to double-precision tolerances.
    const TOL_SCALE: f64;

    /// Converts a literal. Panics only on non-representable input.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable in scalar type")
    }

    /// A double-precision tolerance adjusted for this scalar type.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x * Self::TOL_SCALE)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Machine epsilon of the type.
    fn epsilon() -> Self;
}

impl Real for f64 {
    const TOL_SCALE: f64 = 1.0;
    fn epsilon() -> Self {
        f64::EPSILON
    }
}

impl Real for f32 {
    const TOL_SCALE: f64 = 1e4;
    fn epsilon() -> Self {
        f32::EPSILON
    }
}
