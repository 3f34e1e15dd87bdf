//! Scalar abstraction for belief arithmetic.
//!
//! Every quantity in the opinion algebra (belief mass, uncertainty, base
//! rates, evidence counts) is a plain floating-point number, so the whole
//! algebra is generic over the scalar type. Tolerances are part of the
//! scalar contract: what counts as "sums to one" or "denominator is zero"
//! depends on the precision of the type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable for opinion arithmetic (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for additivity and normalization checks.
    const UNIT_TOL: Self;
    /// Denominators below this magnitude are treated as the limit case.
    const DIV_EPS: Self;

    /// Converts a domain cardinality to a scalar.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("domain cardinality representable as scalar")
    }

    /// Lossy view for error payloads and diagnostics.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const UNIT_TOL: Self = 1e-9;
    const DIV_EPS: Self = 1e-12;
}

impl Scalar for f32 {
    const UNIT_TOL: Self = 1e-4;
    const DIV_EPS: Self = 1e-6;
}
