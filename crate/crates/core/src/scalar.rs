//! Scalar abstraction for the function calculus.
//!
//! The catalog and its transform are plain one-variable real analysis, so
//! they are generic over any IEEE-style float. The matrix layer is pinned to
//! `f64` (see the crate root aliases); `f32` remains available for callers
//! that only need the scalar calculus.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by [`crate::fop`].
pub trait Real:
    Float + FromPrimitive + ToPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, for numeric literals in generic code.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }

    /// Conversion to `f64` for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
