//! Scalar abstraction shared by every numeric container in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literals and tolerances.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }

    fn parse_decimal(s: &str) -> Option<Self>;
}

impl Scalar for f32 {
    fn parse_decimal(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl Scalar for f64 {
    fn parse_decimal(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}
