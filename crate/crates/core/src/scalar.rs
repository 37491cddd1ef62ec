//! Floating-point abstraction shared by the numeric modules.
//!
//! Graph structure is integral; everything computed from it (centrality
//! scores, structural metrics, Gamma fits) is generic over [`Scalar`], which
//! is implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Convergence threshold used by iterative solvers when the caller does
    /// not supply one.
    fn default_tolerance() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_count(x: u64) -> Self {
        Self::from_u64(x).expect("count representable")
    }
}

impl Scalar for f32 {
    fn default_tolerance() -> Self {
        1e-5
    }
}

impl Scalar for f64 {
    fn default_tolerance() -> Self {
        1e-10
    }
}
