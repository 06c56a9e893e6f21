//! Brute-force ε-subdifferential by direct inequality checks on grids.

use crate::error::{Error, Result};
use crate::func::NearlyConvexFn1D;
use crate::interval::{Interval, IntervalSet};

/// Default number of sample points in the domain.
pub const ORACLE_X_GRID: usize = 4001;
/// Default number of candidate slopes.
pub const ORACLE_XI_GRID: usize = 2001;
/// Half-width used to sample unbounded domains.
pub const ORACLE_REACH: f64 = 10.0;

/// Result of a grid scan over candidate slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleInterval {
    /// Tightest interval containing every accepted grid slope.
    pub set: IntervalSet,
    pub clipped_lo: bool,
    pub clipped_hi: bool,
    /// Accepted grid slopes form one unbroken run.
    pub contiguous: bool,
    /// Spacing of the slope grid.
    pub step: f64,
}

impl OracleInterval {
    /// Replaces window-clipped ends with infinities.
    pub fn unclipped(&self) -> IntervalSet {
        if self.set.is_empty() {
            return self.set;
        }
        let lo = if self.clipped_lo { f64::NEG_INFINITY } else { self.set.lo() };
        let hi = if self.clipped_hi { f64::INFINITY } else { self.set.hi() };
        IntervalSet::new(lo, hi)
    }
}

/// Sample points of the domain: a uniform grid plus every endpoint and
/// override point that belongs to the domain.
pub fn domain_samples(f: &NearlyConvexFn1D, xbar: f64, n: usize) -> Vec<f64> {
    let d = f.domain();
    let (lo, hi) = d.finite_window(xbar, ORACLE_REACH);
    let mut xs: Vec<f64> = if n <= 1 || lo == hi {
        vec![lo]
    } else {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    };
    xs.extend(f.overrides().iter().map(|(p, _)| *p));
    xs.extend(f.knots());
    xs.push(xbar);
    xs.retain(|x| d.contains(*x));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

struct Samples {
    dx: Vec<f64>,
    dv: Vec<f64>,
}

fn samples(f: &NearlyConvexFn1D, xbar: f64, n: usize) -> Result<Samples> {
    let fx = f.evaluate(xbar).finite().ok_or(Error::OutOfDomain(xbar))?;
    let mut dx = Vec::new();
    let mut dv = Vec::new();
    for x in domain_samples(f, xbar, n) {
        if let Some(v) = f.evaluate(x).finite() {
            dx.push(x - xbar);
            dv.push(v - fx);
        }
    }
    Ok(Samples { dx, dv })
}

fn accepts(s: &Samples, eps: f64, xi: f64) -> bool {
    s.dx.iter().zip(&s.dv).all(|(d, v)| xi * d - eps <= v + 1e-12 * (1.0 + v.abs() + (xi * d).abs()))
}

/// Checks `ξ(x − x̄) − ε ≤ f(x) − f(x̄)` at every sample point.
pub fn oracle_membership(f: &NearlyConvexFn1D, xbar: f64, eps: f64, xi: f64, x_grid: usize) -> Result<bool> {
    Ok(accepts(&samples(f, xbar, x_grid)?, eps, xi))
}

pub fn oracle_esub_interval(
    f: &NearlyConvexFn1D,
    xbar: f64,
    eps: f64,
    x_grid: usize,
    xi_window: Interval,
    xi_grid: usize,
) -> Result<OracleInterval> {
    let s = samples(f, xbar, x_grid)?;
    let (a, b) = (xi_window.lo, xi_window.hi);
    if !(a.is_finite() && b.is_finite() && a <= b) || xi_grid < 2 {
        return Err(Error::InvalidArgument("slope window must be a bounded interval with at least two grid points".into()));
    }
    let step = (b - a) / (xi_grid - 1) as f64;
    let accepted: Vec<bool> = (0..xi_grid).map(|i| accepts(&s, eps, a + step * i as f64)).collect();
    let first = accepted.iter().position(|t| *t);
    let last = accepted.iter().rposition(|t| *t);
    let (set, contiguous, clipped_lo, clipped_hi) = match (first, last) {
        (Some(i), Some(j)) => (
            IntervalSet::new(a + step * i as f64, a + step * j as f64),
            accepted[i..=j].iter().all(|t| *t),
            i == 0,
            j == xi_grid - 1,
        ),
        _ => (IntervalSet::EMPTY, true, false, false),
    };
    Ok(OracleInterval { set, clipped_lo, clipped_hi, contiguous, step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::func::Piece;

    fn ex1() -> NearlyConvexFn1D {
        NearlyConvexFn1D::new(
            Interval::closed(0.0, 1.0),
            vec![Piece::new(Interval::new(0.0, 1.0, true, false), Expr::neg(Expr::sqrt(Expr::var())))],
            vec![(1.0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn ex1_small_eps() {
        let o = oracle_esub_interval(&ex1(), 0.0, 0.25, ORACLE_X_GRID, Interval::closed(-50.0, 0.0), ORACLE_XI_GRID).unwrap();
        assert!(o.clipped_lo && !o.clipped_hi && o.contiguous);
        assert!((o.set.hi() + 1.0).abs() < 2e-3 + o.step);
    }

    #[test]
    fn ex1_unit_eps() {
        let o = oracle_esub_interval(&ex1(), 0.0, 1.0, ORACLE_X_GRID, Interval::closed(-50.0, 0.0), ORACLE_XI_GRID).unwrap();
        assert!(o.clipped_lo);
        assert!(o.set.hi().abs() < 2e-3 + o.step, "{:?}", o);
    }

    #[test]
    fn abs_restricted_exact() {
        let f = NearlyConvexFn1D::single(Interval::closed(-10.0, 10.0), Expr::abs(Expr::var())).unwrap();
        let o = oracle_esub_interval(&f, 0.0, 0.0, ORACLE_X_GRID, Interval::closed(-3.0, 3.0), ORACLE_XI_GRID).unwrap();
        assert!(o.set.approx_eq(&IntervalSet::new(-1.0, 1.0), 2e-3));
    }

    #[test]
    fn smooth_point() {
        let f = NearlyConvexFn1D::single(Interval::closed(-2.0, 2.0), Expr::sq(Expr::var())).unwrap();
        let o = oracle_esub_interval(&f, 1.0, 0.0, ORACLE_X_GRID, Interval::closed(-5.0, 5.0), ORACLE_XI_GRID).unwrap();
        assert!(o.set.approx_eq(&IntervalSet::point(2.0), 2e-3), "{:?}", o);
    }
}
