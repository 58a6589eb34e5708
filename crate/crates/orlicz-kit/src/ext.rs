//! Extended nonnegative reals `[0, ∞]` with the arithmetic conventions used
//! by modular integrals: `0·∞ = 0`, `x + ∞ = ∞`, total order.

use std::cmp::Ordering;
use std::fmt;

/// A value in `[0, ∞]`. NaN is rejected at construction, so the order is total.
#[derive(Clone, Copy, PartialEq)]
pub struct Ext(f64);

impl Ext {
    pub const ZERO: Ext = Ext(0.0);
    pub const ONE: Ext = Ext(1.0);
    pub const INF: Ext = Ext(f64::INFINITY);

    /// Wraps a nonnegative (possibly infinite) float.
    ///
    /// Panics on NaN or negative input; those indicate a bug upstream, not a
    /// recoverable condition.
    pub fn new(v: f64) -> Ext {
        assert!(!v.is_nan(), "Ext::new(NaN)");
        assert!(v >= 0.0, "Ext::new(negative: {v})");
        Ext(v)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    /// Product with the modular convention `0·∞ = 0`.
    pub fn mul(self, other: Ext) -> Ext {
        if self.is_zero() || other.is_zero() {
            return Ext::ZERO;
        }
        Ext(self.0 * other.0)
    }

    /// Sum; `x + ∞ = ∞`.
    pub fn add(self, other: Ext) -> Ext {
        Ext(self.0 + other.0)
    }

    pub fn min(self, other: Ext) -> Ext {
        if self.0 <= other.0 {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Ext) -> Ext {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }
}

impl Eq for Ext {}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<f64> for Ext {
    fn from(v: f64) -> Ext {
        Ext::new(v)
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{:.12e}", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(Ext::ZERO.mul(Ext::INF), Ext::ZERO);
        assert_eq!(Ext::INF.mul(Ext::ZERO), Ext::ZERO);
        assert_eq!(Ext::new(2.0).mul(Ext::INF), Ext::INF);
    }

    #[test]
    fn addition_saturates() {
        assert_eq!(Ext::new(3.0).add(Ext::INF), Ext::INF);
        assert_eq!(Ext::new(1.0).add(Ext::new(2.0)), Ext::new(3.0));
    }

    #[test]
    fn order_is_total_with_infinity_on_top() {
        assert!(Ext::new(1e300) < Ext::INF);
        assert!(Ext::ZERO < Ext::new(1e-300));
    }
}
