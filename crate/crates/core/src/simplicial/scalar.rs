use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field used for coordinates.
///
/// Every geometric decision (rank, sign of a barycentric coordinate,
/// feasibility) is exact only when the field is; use [`crate::Rational`] for
/// anything semantic and `f64` only for export.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromStr + ToPrimitive + FromPrimitive
{
    /// Parses `"p/q"` or a plain number.
    fn parse_scalar(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => {
                let p: Self = p.trim().parse().ok()?;
                let q: Self = q.trim().parse().ok()?;
                (!q.is_zero()).then(|| p / q)
            }
            None => text.parse().ok(),
        }
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        Self::from_i64(num).expect("integer fits") / Self::from_u64(den).expect("integer fits")
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Clone + PartialOrd + Debug + Display + FromStr + ToPrimitive + FromPrimitive
{
}
