//! Nonnegative extended reals and variable exponents.
//!
//! [`XReal`] is the range of `phi_p` and of every modular: a finite
//! nonnegative `f64` or `+inf`, never NaN. Multiplication follows the
//! measure-theoretic rule `0 * inf = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct XReal(f64);

impl XReal {
    pub const ZERO: XReal = XReal(0.0);
    pub const ONE: XReal = XReal(1.0);
    pub const INFINITY: XReal = XReal(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidXReal(value));
        }
        // -0.0 normalizes to 0.0 so equality and output stay canonical
        Ok(XReal(value + 0.0))
    }

    /// Wraps a value already known to be nonnegative; overflowed values
    /// saturate at `+inf`.
    pub(crate) fn saturating(value: f64) -> Self {
        debug_assert!(!value.is_nan() && value >= 0.0, "bad XReal {value}");
        XReal(value + 0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub fn scale(self, c: f64) -> XReal {
        self * XReal::saturating(c)
    }
}

impl Eq for XReal {}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for XReal {
    type Output = XReal;
    fn add(self, rhs: XReal) -> XReal {
        XReal(self.0 + rhs.0)
    }
}

impl Mul for XReal {
    type Output = XReal;
    fn mul(self, rhs: XReal) -> XReal {
        if self.0 == 0.0 || rhs.0 == 0.0 {
            XReal::ZERO
        } else {
            XReal(self.0 * rhs.0)
        }
    }
}

impl Sum for XReal {
    fn sum<I: Iterator<Item = XReal>>(iter: I) -> XReal {
        iter.fold(XReal::ZERO, Add::add)
    }
}

impl From<XReal> for f64 {
    fn from(x: XReal) -> f64 {
        x.0
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// A variable-exponent value in `(0, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value <= 0.0 {
            Err(Error::InvalidExponent(value))
        } else {
            Ok(Exponent(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `1/p` with `1/inf = 0`.
    pub fn recip(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// The exponent `p/q` used by the simplified modular, with `inf/inf := 1`.
    /// Callers guarantee `q <= p`.
    pub fn ratio(self, q: Exponent) -> Exponent {
        match (self.is_infinite(), q.is_infinite()) {
            (true, true) => Exponent::ONE,
            (true, false) => Exponent::INFINITY,
            _ => Exponent(self.0 / q.0),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}
