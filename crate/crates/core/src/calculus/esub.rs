//! ε-subdifferentials of nearly convex functions on the line.

use crate::calculus::EtaLadder;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::func::NearlyConvexFn1D;
use crate::interval::IntervalSet;
use crate::search::bisect_boundary;
use crate::tol::{TOL_EQ, TOL_EVAL};

fn value_at(f: &NearlyConvexFn1D, xbar: f64) -> Result<f64> {
    f.evaluate(xbar).finite().ok_or(Error::OutOfDomain(xbar))
}

/// `f*(ξ) + f(x̄) − ξ x̄`, the smallest ε for which `ξ ∈ ∂_ε f(x̄)`.
pub fn esub_gap(f: &NearlyConvexFn1D, xbar: f64, xi: f64) -> Result<ExtReal> {
    let fx = value_at(f, xbar)?;
    Ok(f.conjugate(xi) + ExtReal::from_f64(fx - xi * xbar))
}

pub fn esub_membership(f: &NearlyConvexFn1D, xbar: f64, eps: f64, xi: f64) -> Result<bool> {
    Ok(esub_gap(f, xbar, xi)? <= ExtReal::Finite(eps + TOL_EQ))
}

/// `[f'_-(x̄), f'_+(x̄)]` for the closure of `f`; a side with no piece is unbounded.
fn closure_subdifferential(f: &NearlyConvexFn1D, xbar: f64) -> IntervalSet {
    let lo = f.left_derivative(xbar).unwrap_or(f64::NEG_INFINITY);
    let hi = f.right_derivative(xbar).unwrap_or(f64::INFINITY);
    if lo.is_nan() || hi.is_nan() {
        return IntervalSet::EMPTY;
    }
    IntervalSet::new(lo, hi)
}

/// `∂_ε f(x̄)`, a closed interval that may be empty or unbounded.
pub fn esub_interval(f: &NearlyConvexFn1D, xbar: f64, eps: f64) -> Result<IntervalSet> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {eps}")));
    }
    let fx = value_at(f, xbar)?;
    let cl = f.closure_value(xbar).to_f64();
    let gap = fx - cl;
    let tol = TOL_EQ * (1.0 + fx.abs());
    if gap > eps + tol {
        return Ok(IntervalSet::EMPTY);
    }
    let exact = closure_subdifferential(f, xbar);
    if gap >= eps - tol {
        return Ok(exact);
    }
    let inside = |xi: f64| esub_gap(f, xbar, xi).map(|g| g <= ExtReal::Finite(eps)).unwrap_or(false);
    let start = if exact.is_empty() { None } else { Some(0f64.max(exact.lo()).min(exact.hi())) };
    let start = match start {
        Some(s) if inside(s) => s,
        _ => {
            let dir = if f.right_derivative(xbar) == Some(f64::NEG_INFINITY) { -1.0 } else { 1.0 };
            let mut found = None;
            for k in 0..1100 {
                let c = dir * 2f64.powi(k - 30);
                if inside(c) {
                    found = Some(c);
                    break;
                }
                if !c.is_finite() {
                    break;
                }
            }
            match found {
                Some(c) => c,
                None => return Ok(IntervalSet::EMPTY),
            }
        }
    };
    let dcl = f.domain().closure();
    let lo = if xbar == dcl.lo { f64::NEG_INFINITY } else { boundary(&inside, start, -1.0) };
    let hi = if xbar == dcl.hi { f64::INFINITY } else { boundary(&inside, start, 1.0) };
    Ok(IntervalSet::new(lo, hi))
}

fn boundary<P: Fn(f64) -> bool>(inside: &P, start: f64, dir: f64) -> f64 {
    let mut step = 1.0;
    let mut last_in = start;
    loop {
        let c = start + dir * step;
        if !c.is_finite() {
            return dir * f64::INFINITY;
        }
        if !inside(c) {
            return bisect_boundary(inside, last_in, c, TOL_EVAL);
        }
        last_in = c;
        step *= 2.0;
    }
}

/// The sets along a decreasing ε ladder, ending as close to ε = 0 as the
/// ladder reaches.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderLimit {
    pub eps: Vec<f64>,
    pub sets: Vec<IntervalSet>,
    /// Endpoint distance between the last two ladder steps.
    pub delta: f64,
}

impl LadderLimit {
    pub fn last(&self) -> IntervalSet {
        *self.sets.last().expect("ladder is nonempty")
    }

    /// Whether every set contains the next one.
    pub fn is_nested(&self, tol: f64) -> bool {
        self.sets.windows(2).all(|w| w[1].subset_of(&w[0], tol))
    }
}

/// Approximates `∂f(x̄) = ⋂_{ε>0} ∂_ε f(x̄)` along `ladder`.
pub fn esub_limit(f: &NearlyConvexFn1D, xbar: f64, ladder: &EtaLadder) -> Result<LadderLimit> {
    let eps = ladder.values().to_vec();
    let sets = eps.iter().map(|e| esub_interval(f, xbar, *e)).collect::<Result<Vec<_>>>()?;
    let delta = match sets.len() {
        0 | 1 => 0.0,
        n => sets[n - 2].endpoint_distance(&sets[n - 1]),
    };
    Ok(LadderLimit { eps, sets, delta })
}

/// `∂_ε(λf)(x̄)` computed as `λ ∂_{ε/λ} f(x̄)`.
pub fn scalar_rule(f: &NearlyConvexFn1D, lambda: f64, xbar: f64, eps: f64) -> Result<IntervalSet> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::NonPositiveScalar(lambda));
    }
    Ok(esub_interval(f, xbar, eps / lambda)?.scale(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::func::Piece;
    use crate::interval::Interval;

    fn ex1() -> NearlyConvexFn1D {
        NearlyConvexFn1D::new(
            Interval::closed(0.0, 1.0),
            vec![Piece::new(Interval::new(0.0, 1.0, true, false), Expr::neg(Expr::sqrt(Expr::var())))],
            vec![(1.0, 1.0)],
        )
        .unwrap()
    }

    fn square() -> NearlyConvexFn1D {
        NearlyConvexFn1D::single(Interval::closed(-10.0, 10.0), Expr::sq(Expr::var())).unwrap()
    }

    #[test]
    fn ex1_small_eps_half_line() {
        for eps in [0.1, 0.25, 0.5] {
            let s = esub_interval(&ex1(), 0.0, eps).unwrap();
            assert!(s.unbounded_below());
            assert!((s.hi() + 1.0 / (4.0 * eps)).abs() < 1e-9, "{eps}: {s}");
        }
    }

    #[test]
    fn ex1_large_eps_half_line() {
        for eps in [1.0, 4.0] {
            let s = esub_interval(&ex1(), 0.0, eps).unwrap();
            assert!(s.unbounded_below());
            assert!((s.hi() - (eps - 1.0)).abs() < 1e-9, "{eps}: {s}");
        }
    }

    #[test]
    fn ex1_exact_is_empty() {
        assert!(esub_interval(&ex1(), 0.0, 0.0).unwrap().is_empty());
    }

    #[test]
    fn membership_matches_interval() {
        assert!(esub_membership(&ex1(), 0.0, 0.1, -2.5).unwrap());
        assert!(!esub_membership(&ex1(), 0.0, 0.1, -2.4).unwrap());
        assert!(esub_membership(&square(), 0.0, 0.0, 0.0).unwrap());
        assert!(matches!(esub_membership(&ex1(), 2.0, 0.1, 0.0), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn square_gives_root_band() {
        for eps in [0.0, 0.25, 1.0, 3.0] {
            let s = esub_interval(&square(), 0.0, eps).unwrap();
            let r = 2.0 * eps.sqrt();
            assert!(s.approx_eq(&IntervalSet::new(-r, r), 1e-9), "{eps}: {s}");
        }
    }

    #[test]
    fn limit_along_ladder() {
        let lim = esub_limit(&square(), 0.0, &EtaLadder::default()).unwrap();
        let r = 2.0 * 2f64.powi(-10);
        assert!(lim.last().approx_eq(&IntervalSet::new(-r, r), 1e-9));
        assert!(lim.is_nested(1e-9));
        assert!(lim.delta < 1e-3);
        let abs = NearlyConvexFn1D::single(Interval::real_line(), Expr::abs(Expr::var())).unwrap();
        for s in esub_limit(&abs, 0.0, &EtaLadder::default()).unwrap().sets {
            assert!(s.approx_eq(&IntervalSet::new(-1.0, 1.0), 1e-9));
        }
    }

    #[test]
    fn scalar_rule_cases() {
        let abs = NearlyConvexFn1D::single(Interval::real_line(), Expr::abs(Expr::var())).unwrap();
        let s = scalar_rule(&abs, 2.0, 0.5, 1.0).unwrap();
        assert!(s.approx_eq(&IntervalSet::new(0.0, 2.0), 1e-8), "{s}");
        let direct = esub_interval(&abs.scale(2.0).unwrap(), 0.5, 1.0).unwrap();
        assert!(s.approx_eq(&direct, 1e-8));
        for eps in [0.0, 0.5, 7.0] {
            assert!(scalar_rule(&abs, 3.0, 0.0, eps).unwrap().approx_eq(&IntervalSet::new(-3.0, 3.0), 1e-8));
        }
        let q = square();
        assert!(scalar_rule(&q, 1.0, 1.0, 0.3).unwrap().approx_eq(&esub_interval(&q, 1.0, 0.3).unwrap(), 1e-12));
        assert!(matches!(scalar_rule(&q, -1.0, 0.0, 0.1), Err(Error::NonPositiveScalar(_))));
    }
}
