//! Edge weight scalar.
//!
//! Every structure in this crate is generic over the weight type. Integer
//! weights keep matching totals exact; float weights are accepted for inputs
//! that carry real-valued weights and are compared with a relative tolerance.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, NumAssignOps, ToPrimitive};

/// Scalar usable as an edge weight.
pub trait Weight:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Num
    + NumAssignOps
    + Sum
    + ToPrimitive
    + FromPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// `true` when addition and subtraction are exact (integer types).
    const EXACT: bool;

    /// Equality used by audits: exact for integers, relative for floats.
    fn approx_eq(self, other: Self) -> bool;

    /// Exact half. For integer types the caller guarantees an even value.
    fn half(self) -> Self;

    /// A valid edge weight is strictly positive (and finite for floats).
    fn is_valid_weight(self) -> bool;

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_weight_int {
    ($($t:ty),*) => {
        $(
            impl Weight for $t {
                const EXACT: bool = true;

                #[inline]
                fn approx_eq(self, other: Self) -> bool {
                    self == other
                }

                #[inline]
                fn half(self) -> Self {
                    debug_assert!(self % 2 == 0, "half of odd integer {}", self);
                    self / 2
                }

                #[inline]
                fn is_valid_weight(self) -> bool {
                    self > 0
                }
            }
        )*
    };
}

macro_rules! impl_weight_float {
    ($($t:ty),*) => {
        $(
            impl Weight for $t {
                const EXACT: bool = false;

                #[inline]
                fn approx_eq(self, other: Self) -> bool {
                    let scale = self.abs().max(other.abs()).max(1.0);
                    (self - other).abs() <= 1e-9 * scale
                }

                #[inline]
                fn half(self) -> Self {
                    self / 2.0
                }

                #[inline]
                fn is_valid_weight(self) -> bool {
                    self.is_finite() && self > 0.0
                }
            }
        )*
    };
}

impl_weight_int!(i32, i64, i128);
impl_weight_float!(f32, f64);

/// `ceil(x)` that ignores floating noise just above an integer, so that
/// `2.0 / 1e-3` rounds to 2000 rather than 2001.
pub(crate) fn ceil_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}
