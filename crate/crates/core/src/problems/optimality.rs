//! Constrained minimization on the line and ε-optimality certificates.

use crate::calculus::esub::esub_membership;
use crate::calculus::normal::enormal_interval;
use crate::calculus::sum_rule::sum_rule_decompose;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::func::NearlyConvexFn1D;
use crate::interval::{ri_intersect_nonempty, Interval};
use crate::search::golden_min;
use crate::tol::{CONJ_CAP, TOL_EQ};

/// Golden-section stopping width.
pub const GOLDEN_TOL: f64 = 1e-10;

/// Infimum of a function over a set, with a (near-)minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinResult {
    pub value: ExtReal,
    pub argmin: f64,
    /// False when the infimum is only approached, e.g. at a boundary point
    /// carrying a larger override or excluded from the domain.
    pub attained: bool,
}

/// Extends an unbounded side until the convex closure starts increasing.
fn far_end(g: &impl Fn(f64) -> f64, from: f64, dir: f64) -> (f64, bool) {
    let mut step = 1.0;
    let mut prev = g(from);
    loop {
        let x = from + dir * step;
        let v = g(x);
        if v >= prev {
            return (x, true);
        }
        if v < -CONJ_CAP || step > 1e12 {
            return (x, false);
        }
        prev = v;
        step *= 2.0;
    }
}

pub fn minimize_on(f: &NearlyConvexFn1D, s: &Interval) -> Result<MinResult> {
    let d = f.domain().intersect(s);
    if d.is_empty() {
        return Err(Error::InfeasibleIntersection);
    }
    let c = d.closure();
    let g = |x: f64| f.closure_value(x).to_f64();
    let mid = d.interior_point().unwrap_or(c.lo);
    let mut hi_reached = true;
    let mut lo_reached = true;
    let hi = if c.hi.is_finite() {
        c.hi
    } else {
        let (x, ok) = far_end(&g, mid, 1.0);
        hi_reached = ok;
        x
    };
    let lo = if c.lo.is_finite() {
        c.lo
    } else {
        let (x, ok) = far_end(&g, mid, -1.0);
        lo_reached = ok;
        x
    };
    let (mut x, v) = golden_min(g, lo, hi, GOLDEN_TOL);
    if v < -CONJ_CAP {
        return Err(Error::UnboundedBelow);
    }
    for e in [c.lo, c.hi] {
        if e.is_finite() && (x - e).abs() <= TOL_EQ && g(e) <= v + TOL_EQ * (1.0 + v.abs()) {
            x = e;
        }
    }
    let actual = f.evaluate(x);
    let mut attained = d.contains(x) && actual <= ExtReal::Finite(v + TOL_EQ * (1.0 + v.abs()));
    if (x == hi && !hi_reached) || (x == lo && !lo_reached) {
        attained = false;
    }
    let value = if attained { actual } else { ExtReal::from_f64(v) };
    Ok(MinResult { value, argmin: x, attained })
}

/// Minimize `objective` over `feasible`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedProblem {
    pub objective: NearlyConvexFn1D,
    pub feasible: Interval,
}

impl ConstrainedProblem {
    pub fn new(objective: NearlyConvexFn1D, feasible: Interval) -> Result<Self> {
        let p = ConstrainedProblem { objective, feasible };
        p.minimum()?;
        Ok(p)
    }

    pub fn minimum(&self) -> Result<MinResult> {
        minimize_on(&self.objective, &self.feasible)
    }
}

pub fn is_eps_solution(p: &ConstrainedProblem, xbar: f64, eps: f64) -> Result<bool> {
    let fx = match p.objective.evaluate(xbar) {
        ExtReal::Finite(v) if p.feasible.contains(xbar) => v,
        _ => return Err(Error::InfeasiblePoint(xbar)),
    };
    let m = p.minimum()?.value.to_f64();
    Ok(fx <= m + eps + TOL_EQ)
}

/// `ξ ∈ ∂_{ε1} φ(x̄)` and `−ξ ∈ N_{ε2}(x̄; S)` with `ε1 + ε2 = ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityCertificate {
    pub eps1: f64,
    pub eps2: f64,
    pub xi: f64,
}

impl OptimalityCertificate {
    /// Re-checks both memberships with the conjugate and closed-form routines.
    pub fn verify(&self, p: &ConstrainedProblem, xbar: f64) -> Result<bool> {
        let sub = esub_membership(&p.objective, xbar, self.eps1, self.xi)?;
        let nor = enormal_interval(&p.feasible, xbar, self.eps2)?.contains(-self.xi, TOL_EQ);
        Ok(sub && nor)
    }
}

pub fn optimality_certificate(p: &ConstrainedProblem, xbar: f64, eps: f64) -> Result<OptimalityCertificate> {
    if !ri_intersect_nonempty(&p.objective.domain(), &p.feasible)? {
        return Err(Error::QualificationFailed);
    }
    if !is_eps_solution(p, xbar, eps)? {
        return Err(Error::NotEpsSolution);
    }
    let ind = NearlyConvexFn1D::indicator(p.feasible)?;
    let split = sum_rule_decompose(&p.objective, &ind, xbar, eps, 0.0)?;
    let cert = OptimalityCertificate { eps1: split.eps1, eps2: split.eps2, xi: split.xi1 };
    if !cert.verify(p, xbar)? {
        return Err(Error::NotEpsSolution);
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::func::Piece;

    fn half_line() -> Interval {
        Interval::new(0.0, f64::INFINITY, true, false)
    }

    fn opt_example() -> ConstrainedProblem {
        let phi = NearlyConvexFn1D::new(
            Interval::closed(-1.0, 1.0),
            vec![Piece::new(Interval::new(-1.0, 1.0, true, false), Expr::abs(Expr::var()))],
            vec![(1.0, 2.0)],
        )
        .unwrap();
        ConstrainedProblem::new(phi, half_line()).unwrap()
    }

    #[test]
    fn minimize_examples() {
        let q = NearlyConvexFn1D::single(Interval::closed(-10.0, 10.0), Expr::sq(Expr::var())).unwrap();
        let r = minimize_on(&q, &Interval::new(1.0, f64::INFINITY, true, false)).unwrap();
        assert_eq!((r.value, r.argmin, r.attained), (ExtReal::Finite(1.0), 1.0, true));
        let a = NearlyConvexFn1D::single(Interval::closed(-1.0, 1.0), Expr::scale(1.5, Expr::abs(Expr::var()))).unwrap();
        let r = minimize_on(&a, &half_line()).unwrap();
        assert_eq!((r.value, r.argmin), (ExtReal::Finite(0.0), 0.0));
        let ex1 = NearlyConvexFn1D::new(
            Interval::closed(0.0, 1.0),
            vec![Piece::new(Interval::new(0.0, 1.0, true, false), Expr::neg(Expr::sqrt(Expr::var())))],
            vec![(1.0, 1.0)],
        )
        .unwrap();
        let r = minimize_on(&ex1, &Interval::closed(0.0, 1.0)).unwrap();
        assert_eq!((r.value, r.argmin, r.attained), (ExtReal::Finite(-1.0), 1.0, false));
        assert_eq!(minimize_on(&q, &Interval::closed(20.0, 30.0)), Err(Error::InfeasibleIntersection));
    }

    #[test]
    fn eps_solutions() {
        let p = opt_example();
        for eps in [0.0, 0.5, 1.0, 10.0] {
            assert!(is_eps_solution(&p, 0.0, eps).unwrap());
        }
        assert!(!is_eps_solution(&p, 1.0, 1.0).unwrap());
        let q = ConstrainedProblem::new(NearlyConvexFn1D::single(Interval::real_line(), Expr::sq(Expr::var())).unwrap(), Interval::real_line()).unwrap();
        assert!(is_eps_solution(&q, 0.1, 0.01).unwrap());
        assert_eq!(is_eps_solution(&p, -0.5, 1.0), Err(Error::InfeasiblePoint(-0.5)));
    }

    #[test]
    fn certificates() {
        let p = opt_example();
        for eps in [0.0, 0.5, 1.0] {
            let c = optimality_certificate(&p, 0.0, eps).unwrap();
            assert!((c.eps1 + c.eps2 - eps).abs() < 1e-10);
            assert!(c.xi >= -1e-9);
            assert!(c.verify(&p, 0.0).unwrap());
        }
        let q = ConstrainedProblem::new(NearlyConvexFn1D::single(Interval::real_line(), Expr::sq(Expr::var())).unwrap(), Interval::real_line()).unwrap();
        let c = optimality_certificate(&q, 0.0, 0.0).unwrap();
        assert!(c.xi.abs() < 1e-6 && c.eps1.abs() < 1e-9);
        let a = ConstrainedProblem::new(NearlyConvexFn1D::single(Interval::real_line(), Expr::abs(Expr::var())).unwrap(), Interval::closed(1.0, 2.0)).unwrap();
        let c = optimality_certificate(&a, 1.0, 0.0).unwrap();
        assert!((c.xi - 1.0).abs() < 1e-6, "{c:?}");
        assert_eq!(optimality_certificate(&p, 1.0, 0.5), Err(Error::NotEpsSolution));
    }
}
