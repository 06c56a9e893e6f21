//! ε-normal sets, ε-coderivatives and the epigraph bridge.

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::func::NearlyConvexFn1D;
use crate::interval::{Interval, IntervalSet};
use crate::polyhedron::{VPolyhedron2, Vec2};
use crate::tol::TOL_EQ;

/// `{ ξ : ξ (x − x̄) ≤ ε for all x ∈ Ω }` for an interval `Ω`.
pub fn enormal_interval(omega: &Interval, xbar: f64, eps: f64) -> Result<IntervalSet> {
    if !omega.contains(xbar) {
        return Err(Error::PointNotInSet);
    }
    let hi = if omega.hi == f64::INFINITY {
        0.0
    } else if omega.hi > xbar {
        eps / (omega.hi - xbar)
    } else {
        f64::INFINITY
    };
    let lo = if omega.lo == f64::NEG_INFINITY {
        0.0
    } else if omega.lo < xbar {
        -eps / (xbar - omega.lo)
    } else {
        f64::NEG_INFINITY
    };
    Ok(IntervalSet::new(lo, hi))
}

/// `w ∈ N_ε(p̄; Ω)` for a planar polyhedron.
pub fn enormal2_membership(omega: &VPolyhedron2, pbar: Vec2, eps: f64, w: Vec2) -> Result<bool> {
    if !omega.contains(pbar, TOL_EQ) {
        return Err(Error::PointNotInSet);
    }
    Ok(match omega.support(w) {
        ExtReal::Finite(s) => s - w.dot(pbar) <= eps + TOL_EQ,
        _ => false,
    })
}

/// `u ∈ D*_ε F(p̄)(v)`, i.e. `(u, −v) ∈ N_ε(p̄; gph F)`.
pub fn ecoderiv_membership(gph: &VPolyhedron2, pbar: Vec2, eps: f64, v: f64, u: f64) -> Result<bool> {
    enormal2_membership(gph, pbar, eps, Vec2::new(u, -v))
}

/// Support function of `epi f` at `(u, −t)`.
pub fn epi_support(f: &NearlyConvexFn1D, u: f64, t: f64) -> ExtReal {
    if t > 0.0 {
        match f.conjugate(u / t) {
            ExtReal::Finite(c) => ExtReal::from_f64(t * c),
            other => other,
        }
    } else if t == 0.0 {
        let d = f.domain();
        if u > 0.0 {
            ExtReal::from_f64(u * d.hi)
        } else if u < 0.0 {
            ExtReal::from_f64(u * d.lo)
        } else {
            ExtReal::ZERO
        }
    } else {
        ExtReal::PosInf
    }
}

/// `(u, −1) ∈ N_ε((x̄, f(x̄)); epi f)`.
pub fn epi_membership_check(f: &NearlyConvexFn1D, xbar: f64, eps: f64, u: f64) -> Result<bool> {
    let fx = f.evaluate(xbar).finite().ok_or(Error::OutOfDomain(xbar))?;
    let s = epi_support(f, u, 1.0);
    Ok(s + ExtReal::from_f64(fx - u * xbar) <= ExtReal::Finite(eps + TOL_EQ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::esub::esub_membership;
    use crate::expr::Expr;
    use crate::func::Piece;

    fn abs_cone() -> VPolyhedron2 {
        VPolyhedron2::new(vec![Vec2::ZERO], vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn interval_normals() {
        let half = Interval::new(0.0, f64::INFINITY, true, false);
        for eps in [0.0, 0.5, 3.0] {
            assert_eq!(enormal_interval(&half, 0.0, eps).unwrap(), IntervalSet::new(f64::NEG_INFINITY, 0.0));
            assert_eq!(enormal_interval(&Interval::point(0.0), 0.0, eps).unwrap(), IntervalSet::real_line());
        }
        assert_eq!(enormal_interval(&Interval::closed(-1.0, 1.0), 0.0, 1.0).unwrap(), IntervalSet::new(-1.0, 1.0));
        assert_eq!(enormal_interval(&Interval::closed(-1.0, 1.0), 3.0, 1.0), Err(Error::PointNotInSet));
    }

    #[test]
    fn planar_normals() {
        let c = abs_cone();
        assert!(enormal2_membership(&c, Vec2::ZERO, 0.7, Vec2::new(1.0, -1.0)).unwrap());
        assert!(!enormal2_membership(&c, Vec2::ZERO, 0.7, Vec2::new(1.0, -0.5)).unwrap());
        let sq = VPolyhedron2::rect(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert!(enormal2_membership(&sq, Vec2::new(1.0, 1.0), 0.0, Vec2::new(1.0, 1.0)).unwrap());
        assert_eq!(enormal2_membership(&c, Vec2::new(0.0, -1.0), 0.0, Vec2::ZERO), Err(Error::PointNotInSet));
    }

    #[test]
    fn coderivatives() {
        let c = abs_cone();
        assert!(ecoderiv_membership(&c, Vec2::ZERO, 0.0, 1.0, 1.0).unwrap());
        assert!(!ecoderiv_membership(&c, Vec2::ZERO, 0.0, -1.0, 0.0).unwrap());
        let epi = VPolyhedron2::new(
            vec![Vec2::new(0.0, 0.0), Vec2::new(-1.0, 1.0), Vec2::new(1.0, 1.0)],
            vec![Vec2::new(0.0, 1.0)],
        )
        .unwrap();
        assert!(ecoderiv_membership(&epi, Vec2::ZERO, 0.0, 1.0, 0.5).unwrap());
    }

    #[test]
    fn epigraph_bridge() {
        let ex1 = NearlyConvexFn1D::new(
            Interval::closed(0.0, 1.0),
            vec![Piece::new(Interval::new(0.0, 1.0, true, false), Expr::neg(Expr::sqrt(Expr::var())))],
            vec![(1.0, 1.0)],
        )
        .unwrap();
        assert!(epi_membership_check(&ex1, 0.0, 1.0, -0.25).unwrap());
        let q = NearlyConvexFn1D::single(Interval::closed(-10.0, 10.0), Expr::sq(Expr::var())).unwrap();
        assert!(epi_membership_check(&q, 1.0, 0.0, 2.0).unwrap());
        assert!(!epi_membership_check(&q, 1.0, 0.0, 0.0).unwrap());
        for u in [-3.0, -1.0, -0.3, 0.0, 0.4, 2.0] {
            for eps in [0.0, 0.1, 1.0] {
                assert_eq!(epi_membership_check(&ex1, 0.0, eps, u).unwrap(), esub_membership(&ex1, 0.0, eps, u).unwrap());
            }
        }
    }
}
