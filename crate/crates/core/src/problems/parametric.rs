//! Parametric problems `min { f(x, y) : y ∈ G(x) }` and their optimal value
//! function `m`.

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::func::NearlyConvexFn1D;
use crate::interval::Interval;
use crate::polyhedron::{VPolyhedron2, Vec2};
use crate::problems::optimality::{minimize_on, optimality_certificate, ConstrainedProblem, MinResult, OptimalityCertificate};
use crate::search::bisect_boundary;
use crate::separable::SeparableFn2D;
use crate::tol::{TOL_EQ, TOL_EVAL};

#[derive(Debug, Clone, PartialEq)]
pub struct ParametricProblem {
    pub objective: SeparableFn2D,
    /// Graph of the constraint map; `None` means `G(x) = ℝ`.
    pub constraint: Option<VPolyhedron2>,
}

/// The box `ix × iy` as a polyhedron (unbounded sides become rays).
pub fn box_polyhedron(ix: Interval, iy: Interval) -> Result<VPolyhedron2> {
    let xs = [ix.lo, ix.hi];
    let ys = [iy.lo, iy.hi];
    let pick = |v: f64, other: f64| if v.is_finite() { v } else if other.is_finite() { other } else { 0.0 };
    let mut verts = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            verts.push(Vec2::new(pick(*x, xs[1 - i]), pick(*y, ys[1 - j])));
        }
    }
    let mut rays = Vec::new();
    if ix.hi == f64::INFINITY {
        rays.push(Vec2::new(1.0, 0.0));
    }
    if ix.lo == f64::NEG_INFINITY {
        rays.push(Vec2::new(-1.0, 0.0));
    }
    if iy.hi == f64::INFINITY {
        rays.push(Vec2::new(0.0, 1.0));
    }
    if iy.lo == f64::NEG_INFINITY {
        rays.push(Vec2::new(0.0, -1.0));
    }
    VPolyhedron2::new(verts, rays)
}

impl ParametricProblem {
    /// Checks that the constraint meets the box somewhere.
    pub fn new(objective: SeparableFn2D, constraint: Option<VPolyhedron2>) -> Result<Self> {
        if let Some(g) = &constraint {
            let b = box_polyhedron(objective.box_x(), objective.box_y())?;
            b.intersect(g).map_err(|_| Error::InfeasibleIntersection)?;
        }
        Ok(ParametricProblem { objective, constraint })
    }

    /// `G(x)`.
    pub fn slice(&self, x: f64) -> Interval {
        match &self.constraint {
            Some(g) => g.slice_x(x),
            None => Interval::real_line(),
        }
    }

    /// `(f(x, ·), G(x))`, or `None` when `x` is outside the box or `G(x)` is empty.
    pub fn slice_problem(&self, x: f64) -> Option<(NearlyConvexFn1D, Interval)> {
        let g = self.slice(x);
        if g.is_empty() {
            return None;
        }
        Some((self.objective.slice_at_x(x)?, g))
    }

    pub fn value_detail(&self, x: f64) -> Option<MinResult> {
        let (h, g) = self.slice_problem(x)?;
        minimize_on(&h, &g).ok()
    }

    /// Whether the constraint graph is the whole plane or contains the box.
    pub fn constraint_contains_box(&self) -> bool {
        match &self.constraint {
            None => true,
            Some(g) => match box_polyhedron(self.objective.box_x(), self.objective.box_y()) {
                Ok(b) => {
                    let rec = g.recession_cone();
                    b.vertices().iter().all(|v| g.contains(*v, TOL_EQ)) && b.rays().iter().all(|r| rec.contains(*r, TOL_EQ))
                }
                Err(_) => false,
            },
        }
    }
}

/// `m(x) = inf { f(x, y) : y ∈ G(x) }`, `+inf` when the slice is empty.
pub fn value_function(p: &ParametricProblem, x: f64) -> ExtReal {
    p.value_detail(x).map(|r| r.value).unwrap_or(ExtReal::PosInf)
}

/// `S_η(x̄) = { y ∈ G(x̄) : f(x̄, y) ≤ m(x̄) + η }`.
pub fn approx_solution_set(p: &ParametricProblem, xbar: f64, eta: f64) -> Result<Interval> {
    let (h, g) = p.slice_problem(xbar).ok_or(Error::ValueInfinite(xbar))?;
    let r = minimize_on(&h, &g).map_err(|_| Error::ValueInfinite(xbar))?;
    let m = r.value.finite().ok_or(Error::ValueInfinite(xbar))?;
    let level = m + eta;
    let d = h.domain().intersect(&g);
    let c = d.closure();
    let below = |y: f64| h.closure_value(y).to_f64() <= level;
    let start = r.argmin;
    let side = |end: f64, dir: f64| -> f64 {
        if end.is_finite() {
            if below(end) {
                return end;
            }
            return bisect_boundary(below, start, end, TOL_EVAL);
        }
        let mut step = 1.0;
        loop {
            let y = start + dir * step;
            if !below(y) {
                return bisect_boundary(below, start, y, TOL_EVAL);
            }
            if step > 1e12 {
                return dir * f64::INFINITY;
            }
            step *= 2.0;
        }
    };
    let lo = side(c.lo, -1.0);
    let hi = side(c.hi, 1.0);
    let keep = |y: f64| d.contains(y) && h.evaluate(y) <= ExtReal::Finite(level + TOL_EQ);
    let lo_closed = lo.is_finite() && keep(lo);
    let hi_closed = hi.is_finite() && keep(hi);
    Ok(Interval::new(lo, hi, lo_closed, hi_closed))
}

/// Certificate for `ȳ` in the slice problem at `x̄`.
pub fn parametric_certificate(p: &ParametricProblem, xbar: f64, ybar: f64, eps: f64) -> Result<OptimalityCertificate> {
    let (h, g) = p.slice_problem(xbar).ok_or(Error::ValueInfinite(xbar))?;
    let slice = ConstrainedProblem::new(h, g)?;
    optimality_certificate(&slice, ybar, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    fn on_box(e: Expr) -> NearlyConvexFn1D {
        NearlyConvexFn1D::single(Interval::closed(-1.0, 1.0), e).unwrap()
    }

    fn quad() -> ParametricProblem {
        let f = SeparableFn2D::new(on_box(Expr::sq(Expr::var())), on_box(Expr::sq(Expr::var())), vec![]).unwrap();
        ParametricProblem::new(f, None).unwrap()
    }

    fn cone() -> ParametricProblem {
        let f = SeparableFn2D::new(
            on_box(Expr::scale(0.5, Expr::abs(Expr::var()))),
            on_box(Expr::scale(1.5, Expr::abs(Expr::var()))),
            vec![(Vec2::new(0.5, 1.0), f64::INFINITY)],
        )
        .unwrap();
        let g = VPolyhedron2::new(vec![Vec2::ZERO], vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0)]).unwrap();
        ParametricProblem::new(f, Some(g)).unwrap()
    }

    #[test]
    fn value_functions() {
        assert!((value_function(&quad(), 0.5).to_f64() - 0.25).abs() < 1e-12);
        assert!((value_function(&cone(), 0.5).to_f64() - 1.0).abs() < 1e-12);
        assert_eq!(value_function(&quad(), 2.0), ExtReal::PosInf);
        assert!(quad().constraint_contains_box());
        assert!(!cone().constraint_contains_box());
    }

    #[test]
    fn solution_sets() {
        let s = approx_solution_set(&cone(), 0.0, 0.3).unwrap();
        assert!((s.lo - 0.0).abs() < 1e-12 && (s.hi - 0.2).abs() < 1e-9 && s.lo_closed && s.hi_closed);
        let s = approx_solution_set(&quad(), 0.0, 0.25).unwrap();
        assert!((s.lo + 0.5).abs() < 1e-9 && (s.hi - 0.5).abs() < 1e-9);
        let s = approx_solution_set(&quad(), 0.0, 5.0).unwrap();
        assert_eq!((s.lo, s.hi), (-1.0, 1.0));
        assert_eq!(approx_solution_set(&quad(), 3.0, 0.1), Err(Error::ValueInfinite(3.0)));
    }

    #[test]
    fn slice_certificates() {
        let c = parametric_certificate(&cone(), 0.0, 0.0, 0.0).unwrap();
        assert!(c.xi >= -1e-9 && c.xi <= 1.5 + 1e-9);
        let c = parametric_certificate(&quad(), 0.0, 0.0, 0.0).unwrap();
        assert!(c.xi.abs() < 1e-6);
        let c = parametric_certificate(&cone(), 0.0, 0.1, 0.2).unwrap();
        assert!((c.eps1 + c.eps2 - 0.2).abs() < 1e-10);
        assert_eq!(parametric_certificate(&cone(), 0.0, 0.1, 0.1), Err(Error::NotEpsSolution));
    }
}
