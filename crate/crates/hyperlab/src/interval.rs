//! Certified real enclosures.
//!
//! Every quantity that depends on a truncated limit (extended Gromov
//! products, Busemann values, defect meters) is reported as a closed
//! interval together with the truncation depth that produced it.

use serde::{Deserialize, Serialize};

/// A real value with a certified lower/upper enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalValue {
    pub lower: f64,
    pub upper: f64,
    /// Truncation depth used to produce the enclosure.
    pub depth: u32,
}

impl IntervalValue {
    pub fn exact(v: f64, depth: u32) -> Self {
        IntervalValue { lower: v, upper: v, depth }
    }

    pub fn new(lower: f64, upper: f64, depth: u32) -> Self {
        debug_assert!(lower <= upper + 1e-12, "inverted interval [{lower}, {upper}]");
        IntervalValue { lower: lower.min(upper), upper, depth }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    /// Widen symmetrically by `slack` on each side.
    pub fn widen(&self, slack: f64) -> Self {
        IntervalValue { lower: self.lower - slack, upper: self.upper + slack, depth: self.depth }
    }

    pub fn add(&self, other: &Self) -> Self {
        IntervalValue {
            lower: self.lower + other.lower,
            upper: self.upper + other.upper,
            depth: self.depth.max(other.depth),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        IntervalValue {
            lower: self.lower - other.upper,
            upper: self.upper - other.lower,
            depth: self.depth.max(other.depth),
        }
    }

    pub fn neg(&self) -> Self {
        IntervalValue { lower: -self.upper, upper: -self.lower, depth: self.depth }
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        IntervalValue { lower: self.lower + s, upper: self.upper + s, depth: self.depth }
    }

    pub fn scale(&self, s: f64) -> Self {
        if s >= 0.0 {
            IntervalValue { lower: self.lower * s, upper: self.upper * s, depth: self.depth }
        } else {
            IntervalValue { lower: self.upper * s, upper: self.lower * s, depth: self.depth }
        }
    }

    /// Enclosure of |v| for v in the interval.
    pub fn abs(&self) -> Self {
        if self.lower >= 0.0 {
            *self
        } else if self.upper <= 0.0 {
            self.neg()
        } else {
            IntervalValue { lower: 0.0, upper: self.upper.max(-self.lower), depth: self.depth }
        }
    }

    /// Do two enclosures overlap?
    pub fn overlaps(&self, other: &Self) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}
