//! Real scalar abstraction used by every dense computation in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Floating-point type the dense linear algebra is generic over.
///
/// Implemented for `f32` and `f64`. The symbolic layers (Weyl words, root
/// labels, graphs) are exact and never touch this trait.
pub trait Real: Float + FloatConst + Debug + Display + Default + Send + Sync + 'static {
    /// Smallest residual this type can reasonably certify as zero.
    const EPSILON_FLOOR: f64;

    fn of(x: f64) -> Self;

    fn as_f64(self) -> f64;
}

impl Real for f64 {
    const EPSILON_FLOOR: f64 = 1e-13;

    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const EPSILON_FLOOR: f64 = 1e-5;

    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}
