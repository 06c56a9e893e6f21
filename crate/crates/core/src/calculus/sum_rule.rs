//! Sum rule for ε-subdifferentials via attained infimal convolution of conjugates.

use crate::calculus::esub::{esub_gap, esub_membership};
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::func::NearlyConvexFn1D;
use crate::interval::ri_intersect_nonempty;
use crate::search::ternary_min;
use crate::tol::SLOPE_WINDOW;

/// `(ε1, ε2, ξ1, ξ2)` with `ξi ∈ ∂_{εi} fi(x̄)`, `ε1 + ε2 = ε`, `ξ1 + ξ2 = ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCertificate {
    pub eps1: f64,
    pub eps2: f64,
    pub xi1: f64,
    pub xi2: f64,
}

impl SplitCertificate {
    pub fn sums_to(&self, eps: f64, xi: f64, tol: f64) -> bool {
        (self.eps1 + self.eps2 - eps).abs() <= tol && (self.xi1 + self.xi2 - xi).abs() <= tol
    }
}

fn qualification(f1: &NearlyConvexFn1D, f2: &NearlyConvexFn1D) -> Result<()> {
    if ri_intersect_nonempty(&f1.domain(), &f2.domain())? {
        Ok(())
    } else {
        Err(Error::QualificationFailed)
    }
}

/// `inf { f1*(ξ1) + f2*(ξ − ξ1) }` and an attaining `ξ1`.
pub fn infimal_convolution(f1: &NearlyConvexFn1D, f2: &NearlyConvexFn1D, xi: f64) -> Result<(ExtReal, f64)> {
    qualification(f1, f2)?;
    let d1 = f1.conjugate_domain();
    let d2 = f2.conjugate_domain();
    let centre = 0.5 * xi;
    let lo = d1.lo().max(xi - d2.hi()).max(centre - SLOPE_WINDOW);
    let hi = d1.hi().min(xi - d2.lo()).min(centre + SLOPE_WINDOW);
    if d1.is_empty() || d2.is_empty() || lo > hi {
        return Ok((ExtReal::PosInf, centre));
    }
    let q = |t: f64| (f1.conjugate(t) + f2.conjugate(xi - t)).to_f64();
    let (t, v) = ternary_min(q, lo, hi);
    Ok((ExtReal::from_f64(v), t))
}

/// Splits `ξ ∈ ∂_ε(f1 + f2)(x̄)` into `ξ1 + ξ2` with `ξi ∈ ∂_{ε̄i} fi(x̄)`.
pub fn sum_rule_decompose(f1: &NearlyConvexFn1D, f2: &NearlyConvexFn1D, xbar: f64, eps: f64, xi: f64) -> Result<SplitCertificate> {
    qualification(f1, f2)?;
    let sum = f1.add(f2)?;
    if !esub_membership(&sum, xbar, eps, xi)? {
        return Err(Error::NotInSumSubdifferential { xi });
    }
    let (_, xi1) = infimal_convolution(f1, f2, xi)?;
    let xi2 = xi - xi1;
    let e1 = esub_gap(f1, xbar, xi1)?.to_f64().max(0.0);
    let e2 = esub_gap(f2, xbar, xi2)?.to_f64().max(0.0);
    let slack = 0.5 * (eps - e1 - e2);
    let (mut eps1, mut eps2) = (e1 + slack, e2 + slack);
    if eps1 < 0.0 {
        eps1 = 0.0;
        eps2 = eps;
    } else if eps2 < 0.0 {
        eps2 = 0.0;
        eps1 = eps;
    }
    if !(esub_membership(f1, xbar, eps1, xi1)? && esub_membership(f2, xbar, eps2, xi2)?) {
        return Err(Error::NotInSumSubdifferential { xi });
    }
    Ok(SplitCertificate { eps1, eps2, xi1, xi2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::func::Piece;
    use crate::interval::Interval;

    fn on(lo: f64, hi: f64, e: Expr) -> NearlyConvexFn1D {
        NearlyConvexFn1D::single(Interval::closed(lo, hi), e).unwrap()
    }

    fn ex1() -> NearlyConvexFn1D {
        NearlyConvexFn1D::new(
            Interval::closed(0.0, 1.0),
            vec![Piece::new(Interval::new(0.0, 1.0, true, false), Expr::neg(Expr::sqrt(Expr::var())))],
            vec![(1.0, 1.0)],
        )
        .unwrap()
    }

    fn root() -> NearlyConvexFn1D {
        on(0.0, 1.0, Expr::neg(Expr::sqrt(Expr::var())))
    }

    #[test]
    fn infimal_convolution_examples() {
        let q = on(-10.0, 10.0, Expr::sq(Expr::var()));
        let (v, t) = infimal_convolution(&q, &q, 2.0).unwrap();
        assert!((v.to_f64() - 0.5).abs() < 1e-9 && (t - 1.0).abs() < 1e-6);
        let a = on(-10.0, 10.0, Expr::abs(Expr::var()));
        let (v, _) = infimal_convolution(&a, &a, 0.0).unwrap();
        assert!(v.to_f64().abs() < 1e-9);
        let (v, t) = infimal_convolution(&ex1(), &root(), -2.0).unwrap();
        assert!((v.to_f64() - 0.5).abs() < 1e-9 && (t + 1.0).abs() < 1e-4, "{v} {t}");
    }

    #[test]
    fn failed_qualification() {
        let left = on(-1.0, 0.0, Expr::c(0.0));
        assert_eq!(infimal_convolution(&root(), &left, 0.0), Err(Error::QualificationFailed));
        assert_eq!(sum_rule_decompose(&root(), &left, 0.0, 1.0, 0.0), Err(Error::QualificationFailed));
    }

    #[test]
    fn sum_example_split() {
        let c = sum_rule_decompose(&ex1(), &root(), 0.0, 1.0, -1.0).unwrap();
        assert!(c.sums_to(1.0, -1.0, 1e-10));
        assert!((c.eps1 - 0.5).abs() < 1e-6 && (c.xi1 + 0.5).abs() < 1e-4, "{c:?}");
    }

    #[test]
    fn trivial_and_mixed_splits() {
        let q = on(-10.0, 10.0, Expr::sq(Expr::var()));
        let c = sum_rule_decompose(&q, &q, 0.0, 0.0, 0.0).unwrap();
        assert!(c.eps1.abs() < 1e-12 && c.eps2.abs() < 1e-12 && c.xi1.abs() < 1e-6 && c.xi2.abs() < 1e-6);
        let a = on(-10.0, 10.0, Expr::abs(Expr::var()));
        let c = sum_rule_decompose(&a, &q, 0.0, 0.5, 1.0).unwrap();
        assert!(c.sums_to(0.5, 1.0, 1e-10));
        assert!(esub_membership(&a, 0.0, c.eps1, c.xi1).unwrap());
        assert!(esub_membership(&q, 0.0, c.eps2, c.xi2).unwrap());
        assert!(matches!(sum_rule_decompose(&a, &q, 0.0, 0.0, 3.0), Err(Error::NotInSumSubdifferential { .. })));
    }
}
