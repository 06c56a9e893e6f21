//! Intervals of the real line.
//!
//! [`Interval`] is a general interval with open/closed ends and is used for
//! domains, feasible sets and slices. [`IntervalSet`] is a closed convex
//! subset of the line (possibly empty or unbounded) and is the value type of
//! eps-subdifferentials and one-dimensional eps-normal sets.

use std::fmt;

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::tol::TOL_EQ;

/// An interval with independently open or closed ends. Infinite ends are
/// always open; the empty interval has a single canonical representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        if lo.is_nan() || hi.is_nan() || lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return Interval::EMPTY;
        }
        Interval { lo, hi, lo_closed, hi_closed }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn point(a: f64) -> Self {
        Self::closed(a, a)
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn lower(&self) -> ExtReal {
        ExtReal::from_f64(self.lo)
    }

    pub fn upper(&self) -> ExtReal {
        ExtReal::from_f64(self.hi)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn is_singleton(&self) -> bool {
        !self.is_empty() && self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.is_empty() || x.is_nan() {
            return false;
        }
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn closure(&self) -> Interval {
        if self.is_empty() {
            return *self;
        }
        Interval::new(self.lo, self.hi, true, true)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Interval::EMPTY;
        }
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// Midpoint of a bounded interval, or some interior point otherwise.
    pub fn interior_point(&self) -> Option<f64> {
        if self.is_empty() {
            return None;
        }
        Some(match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => 0.5 * (self.lo + self.hi),
            (true, false) => self.lo + 1.0,
            (false, true) => self.hi - 1.0,
            (false, false) => 0.0,
        })
    }

    /// Clips unbounded sides to `center ± reach` (used for sampling).
    pub fn finite_window(&self, center: f64, reach: f64) -> (f64, f64) {
        let lo = if self.lo.is_finite() { self.lo } else { center.min(self.hi) - reach };
        let hi = if self.hi.is_finite() { self.hi } else { center.max(self.lo) + reach };
        (lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", ExtReal::from_f64(self.lo), ExtReal::from_f64(self.hi))
    }
}

/// Relative interior of a nonempty interval: a singleton is its own relative
/// interior, anything longer becomes the open interval with the same ends.
pub fn relative_interior_interval(i: &Interval) -> Result<Interval> {
    if i.is_empty() {
        return Err(Error::EmptySet);
    }
    if i.is_singleton() {
        return Ok(*i);
    }
    Ok(Interval::open(i.lo, i.hi))
}

/// Whether `ri A ∩ ri B` is nonempty.
pub fn ri_intersect_nonempty(a: &Interval, b: &Interval) -> Result<bool> {
    let ra = relative_interior_interval(a)?;
    let rb = relative_interior_interval(b)?;
    Ok(!ra.intersect(&rb).is_empty())
}

/// A closed convex subset of the real line: empty, a point, a segment, a
/// half-line or the whole line. Unbounded sides are stored as infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSet {
    lo: f64,
    hi: f64,
}

impl IntervalSet {
    pub const EMPTY: IntervalSet = IntervalSet { lo: f64::INFINITY, hi: f64::NEG_INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Self::EMPTY;
        }
        IntervalSet { lo, hi }
    }

    pub fn point(a: f64) -> Self {
        Self::new(a, a)
    }

    pub fn real_line() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn unbounded_below(&self) -> bool {
        !self.is_empty() && self.lo == f64::NEG_INFINITY
    }

    pub fn unbounded_above(&self) -> bool {
        !self.is_empty() && self.hi == f64::INFINITY
    }

    /// The same set as an [`Interval`] (finite ends closed).
    pub fn as_interval(&self) -> Interval {
        if self.is_empty() {
            return Interval::EMPTY;
        }
        Interval::closed(self.lo, self.hi)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        !self.is_empty() && x >= self.lo - tol && x <= self.hi + tol
    }

    pub fn scale(&self, lambda: f64) -> Self {
        if self.is_empty() {
            return *self;
        }
        if lambda >= 0.0 {
            Self::new(lambda * self.lo, lambda * self.hi)
        } else {
            Self::new(lambda * self.hi, lambda * self.lo)
        }
    }

    pub fn intersect(&self, other: &IntervalSet) -> Self {
        Self::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Smallest closed interval containing both.
    pub fn hull(&self, other: &IntervalSet) -> Self {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Self::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// `self ⊆ other` with finite endpoints compared up to `tol`.
    pub fn subset_of(&self, other: &IntervalSet, tol: f64) -> bool {
        if self.is_empty() {
            return true;
        }
        if other.is_empty() {
            return false;
        }
        let lo_ok = other.lo == f64::NEG_INFINITY || (self.lo != f64::NEG_INFINITY && self.lo >= other.lo - tol);
        let hi_ok = other.hi == f64::INFINITY || (self.hi != f64::INFINITY && self.hi <= other.hi + tol);
        lo_ok && hi_ok
    }

    /// Endpoint-wise comparison; infinite ends must match exactly.
    pub fn approx_eq(&self, other: &IntervalSet, tol: f64) -> bool {
        if self.is_empty() || other.is_empty() {
            return self.is_empty() && other.is_empty();
        }
        let end = |a: f64, b: f64| if a.is_infinite() || b.is_infinite() { a == b } else { (a - b).abs() <= tol };
        end(self.lo, other.lo) && end(self.hi, other.hi)
    }

    /// Largest endpoint discrepancy (infinite if the shapes differ).
    pub fn endpoint_distance(&self, other: &IntervalSet) -> f64 {
        if self.is_empty() || other.is_empty() {
            return if self.is_empty() && other.is_empty() { 0.0 } else { f64::INFINITY };
        }
        let end = |a: f64, b: f64| {
            if a == b {
                0.0
            } else if a.is_infinite() || b.is_infinite() {
                f64::INFINITY
            } else {
                (a - b).abs()
            }
        };
        end(self.lo, other.lo).max(end(self.hi, other.hi))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        let l = if self.lo.is_finite() { '[' } else { '(' };
        let r = if self.hi.is_finite() { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", ExtReal::from_f64(self.lo), ExtReal::from_f64(self.hi))
    }
}

/// Compares two sets with the membership tolerance.
pub fn same_set(a: &IntervalSet, b: &IntervalSet) -> bool {
    a.approx_eq(b, TOL_EQ)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_interiors() {
        assert_eq!(relative_interior_interval(&Interval::closed(0.0, 1.0)).unwrap(), Interval::open(0.0, 1.0));
        assert_eq!(relative_interior_interval(&Interval::point(3.0)).unwrap(), Interval::point(3.0));
        assert_eq!(
            relative_interior_interval(&Interval::new(0.0, f64::INFINITY, true, false)).unwrap(),
            Interval::open(0.0, f64::INFINITY)
        );
        assert_eq!(relative_interior_interval(&Interval::EMPTY), Err(Error::EmptySet));
    }

    #[test]
    fn ri_qualification_cases() {
        let half = Interval::new(0.0, f64::INFINITY, true, false);
        assert!(ri_intersect_nonempty(&Interval::closed(0.0, 1.0), &half).unwrap());
        assert!(!ri_intersect_nonempty(&Interval::closed(0.0, 1.0), &Interval::closed(-1.0, 0.0)).unwrap());
        assert!(ri_intersect_nonempty(&Interval::point(0.0), &Interval::closed(-1.0, 1.0)).unwrap());
        assert!(!ri_intersect_nonempty(&Interval::point(0.0), &Interval::closed(0.0, 1.0)).unwrap());
    }

    #[test]
    fn empty_is_canonical() {
        assert_eq!(Interval::new(2.0, 1.0, true, true), Interval::EMPTY);
        assert_eq!(Interval::new(1.0, 1.0, true, false), Interval::EMPTY);
        assert!(IntervalSet::new(1.0, 0.0).is_empty());
        assert!(!Interval::closed(0.0, f64::INFINITY).hi_closed);
    }

    #[test]
    fn interval_intersection_flags() {
        let a = Interval::new(0.0, 1.0, true, false);
        let b = Interval::closed(0.5, 1.0);
        let c = a.intersect(&b);
        assert_eq!(c, Interval::new(0.5, 1.0, true, false));
        assert!(Interval::closed(0.0, 1.0).intersect(&Interval::closed(1.0, 2.0)).is_singleton());
    }

    #[test]
    fn set_relations() {
        let a = IntervalSet::new(-1.0, 1.0);
        let b = IntervalSet::new(f64::NEG_INFINITY, 2.0);
        assert!(a.subset_of(&b, 0.0));
        assert!(!b.subset_of(&a, 0.0));
        assert_eq!(a.scale(-2.0), IntervalSet::new(-2.0, 2.0));
        assert!(IntervalSet::EMPTY.subset_of(&a, 0.0));
        assert_eq!(format!("{b}"), "(-inf, 2]");
    }

    proptest::proptest! {
        #[test]
        fn ri_intersection_is_symmetric(a in -5.0f64..5.0, w in 0.0f64..3.0, b in -5.0f64..5.0, v in 0.0f64..3.0) {
            let i = Interval::closed(a, a + w);
            let j = Interval::closed(b, b + v);
            proptest::prop_assert_eq!(ri_intersect_nonempty(&i, &j).unwrap(), ri_intersect_nonempty(&j, &i).unwrap());
        }
    }
}
