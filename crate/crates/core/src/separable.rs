//! Separable functions `f(x, y) = f1(x) + f2(y)` on a box, with point overrides.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::ext_real::ExtReal;
use crate::func::{NearlyConvexFn1D, Piece};
use crate::interval::Interval;
use crate::polyhedron::Vec2;

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableFn2D {
    f1: NearlyConvexFn1D,
    f2: NearlyConvexFn1D,
    point_overrides: Vec<(Vec2, f64)>,
}

impl SeparableFn2D {
    /// Point override values must not undercut the separable value; `+inf`
    /// removes the point from the domain.
    pub fn new(f1: NearlyConvexFn1D, f2: NearlyConvexFn1D, point_overrides: Vec<(Vec2, f64)>) -> Result<Self> {
        let g = SeparableFn2D { f1, f2, point_overrides: vec![] };
        for (p, v) in &point_overrides {
            let base = g.evaluate2(*p);
            if !base.is_finite() {
                return Err(Error::InvalidArgument(format!("override point {p} outside the box")));
            }
            if v.is_nan() || ExtReal::from_f64(*v) < base {
                return Err(Error::InvalidArgument(format!("override at {p} below the separable value")));
            }
        }
        Ok(SeparableFn2D { point_overrides, ..g })
    }

    pub fn f1(&self) -> &NearlyConvexFn1D {
        &self.f1
    }

    pub fn f2(&self) -> &NearlyConvexFn1D {
        &self.f2
    }

    pub fn point_overrides(&self) -> &[(Vec2, f64)] {
        &self.point_overrides
    }

    pub fn box_x(&self) -> Interval {
        self.f1.domain()
    }

    pub fn box_y(&self) -> Interval {
        self.f2.domain()
    }

    pub fn evaluate2(&self, p: Vec2) -> ExtReal {
        if let Some((_, v)) = self.point_overrides.iter().find(|(q, _)| *q == p) {
            return ExtReal::from_f64(*v);
        }
        self.f1.evaluate(p.x) + self.f2.evaluate(p.y)
    }

    /// Overrides never change the supremum, so the conjugate splits.
    pub fn conjugate2(&self, w: Vec2) -> ExtReal {
        self.f1.conjugate(w.x) + self.f2.conjugate(w.y)
    }

    /// `y ↦ f(x, y)` as a function on the line; `None` when `x` is outside the box.
    ///
    /// Point overrides on the boundary of the `y`-range become endpoint
    /// overrides, and a removed boundary point opens that end. Overrides in
    /// the interior of the range leave the slice's infimum unchanged and are
    /// not represented.
    pub fn slice_at_x(&self, x: f64) -> Option<NearlyConvexFn1D> {
        let c = self.f1.evaluate(x).finite()?;
        Some(shifted_slice(&self.f2, c, self.point_overrides.iter().filter(|(p, _)| p.x == x).map(|(p, v)| (p.y, *v))))
    }

    /// `x ↦ f(x, y)`; `None` when `y` is outside the box.
    pub fn slice_at_y(&self, y: f64) -> Option<NearlyConvexFn1D> {
        let c = self.f2.evaluate(y).finite()?;
        Some(shifted_slice(&self.f1, c, self.point_overrides.iter().filter(|(p, _)| p.y == y).map(|(p, v)| (p.x, *v))))
    }
}

fn shifted_slice(f: &NearlyConvexFn1D, c: f64, extra: impl Iterator<Item = (f64, f64)>) -> NearlyConvexFn1D {
    let mut domain = f.domain();
    let mut overrides: Vec<(f64, f64)> = f.overrides().iter().map(|(p, v)| (*p, v + c)).collect();
    for (t, v) in extra {
        let at_lo = t == domain.lo && domain.lo_closed;
        let at_hi = t == domain.hi && domain.hi_closed;
        if !(at_lo || at_hi) {
            continue;
        }
        overrides.retain(|(p, _)| *p != t);
        if v == f64::INFINITY {
            domain = if at_lo {
                Interval::new(domain.lo, domain.hi, false, domain.hi_closed)
            } else {
                Interval::new(domain.lo, domain.hi, domain.lo_closed, false)
            };
        } else {
            overrides.push((t, v));
        }
    }
    let pieces = f
        .pieces()
        .iter()
        .map(|p| Piece::new(p.interval.intersect(&domain), Expr::add(p.expr.clone(), Expr::c(c))))
        .filter(|p| !p.interval.is_empty())
        .collect();
    NearlyConvexFn1D::new_unchecked(domain, pieces, overrides)
}
