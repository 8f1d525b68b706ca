//! Working-precision abstraction over `f64` and double-double arithmetic.

use num_traits::Float;
use twofloat::TwoFloat;

pub(crate) trait Real: Float + From<f64> {
    fn quot(self, rhs: Self) -> Self;

    fn lift(x: f64) -> Self {
        <Self as From<f64>>::from(x)
    }
}

impl Real for f64 {
    fn quot(self, rhs: Self) -> Self {
        self / rhs
    }
}

impl Real for TwoFloat {
    /// `TwoFloat`'s own quotient is only accurate to `f64`; one correction
    /// step with an exact residual restores double-double accuracy.
    fn quot(self, rhs: Self) -> Self {
        let q = self / rhs;
        let r = self - q * rhs;
        q + r / rhs
    }
}
