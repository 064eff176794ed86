//! Scalar traits shared by the symbolic and numeric layers.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};

/// Field scalar used for polynomial coefficients.
///
/// Exact rationals are the default; any type with field operations and a
/// textual form works (the proof engine needs exact equality, so floats are
/// accepted but not recommended).
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + FromStr
    + PartialEq
    + Zero
    + One
    + FromPrimitive
    + ToPrimitive
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + Debug
        + Display
        + FromStr
        + PartialEq
        + Zero
        + One
        + FromPrimitive
        + ToPrimitive
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

/// Real scalar for numeric matrix models: f32 or f64.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}
impl Real for f32 {}
impl Real for f64 {}
