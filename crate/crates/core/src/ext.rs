//! Extended non-negative reals `[0, ∞]`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

/// A distance value: a non-negative real number or `∞`.
///
/// Backed by `f64` with `f64::INFINITY` as the distinguished infinite value.
/// NaN and negative values are rejected at construction, so the ordering is
/// total and comparisons are exact.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(0.0);
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);

    /// Returns `None` for NaN and negative inputs.
    pub fn new(value: f64) -> Option<ExtReal> {
        if value.is_nan() || value < 0.0 {
            None
        } else {
            // normalise -0.0
            Some(ExtReal(value + 0.0))
        }
    }

    /// Panics on NaN or negative input; for literals and generator output.
    pub fn finite(value: f64) -> ExtReal {
        match ExtReal::new(value) {
            Some(v) if v.is_finite() => v,
            _ => panic!("invalid finite distance {value}"),
        }
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `Some(x)` for finite values.
    pub fn to_finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Multiplication by a non-negative finite factor, with `0 · ∞ = 0`.
    pub fn scale(self, factor: f64) -> ExtReal {
        debug_assert!(factor >= 0.0 && factor.is_finite());
        if factor == 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal(self.0 * factor)
        }
    }

    /// `self ≤ r` for a finite real threshold.
    pub fn within(self, r: f64) -> bool {
        self.0 <= r
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        ExtReal(self.0 + rhs.0)
    }
}

impl From<u32> for ExtReal {
    fn from(v: u32) -> Self {
        ExtReal(f64::from(v))
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// `⌊x⌋` for finite non-negative `x` without `std`.
pub(crate) fn floor_nonneg(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x >= 4_503_599_627_370_496.0 || !x.is_finite() {
        return x;
    }
    (x as u64) as f64
}

/// `⌈x⌉` for finite non-negative `x` without `std`.
pub(crate) fn ceil_nonneg(x: f64) -> f64 {
    let f = floor_nonneg(x);
    if f < x {
        f + 1.0
    } else {
        f
    }
}
