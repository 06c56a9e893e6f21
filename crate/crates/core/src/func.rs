//! Nearly convex functions on the line: a convex piecewise base plus finitely
//! many boundary value overrides.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::ext_real::ExtReal;
use crate::interval::{Interval, IntervalSet};
use crate::search::{bisect_boundary, ternary_max};
use crate::tol::{CONJ_CAP, SLOPE_WINDOW, TOL_EQ, TOL_EVAL};

/// Number of grid points used by the sampled convexity check.
pub const CONVEXITY_GRID: usize = 1025;

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub interval: Interval,
    pub expr: Expr,
}

impl Piece {
    pub fn new(interval: Interval, expr: Expr) -> Self {
        Piece { interval, expr }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    EmptyDomain,
    PieceOutsideDomain,
    PieceOverlap,
    Coverage,
    NonFinite,
    Discontinuity,
    Convexity,
    OverrideNotBoundary,
    OverrideBelowClosure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub at: Option<f64>,
    pub message: String,
}

/// Outcome of [`NearlyConvexFn1D::validate`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, at: Option<f64>, message: impl Into<String>) {
        self.violations.push(Violation { kind, at, message: message.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v.at {
                Some(x) => format!("{} at x={}", v.message, x),
                None => v.message.clone(),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearlyConvexFn1D {
    domain: Interval,
    pieces: Vec<Piece>,
    overrides: Vec<(f64, f64)>,
}

impl NearlyConvexFn1D {
    /// Builds and validates.
    pub fn new(domain: Interval, pieces: Vec<Piece>, overrides: Vec<(f64, f64)>) -> Result<Self> {
        let f = Self::new_unchecked(domain, pieces, overrides);
        let report = f.validate();
        if report.is_valid() {
            Ok(f)
        } else {
            Err(Error::Validation(report))
        }
    }

    /// Builds without validation; pieces are sorted by left endpoint.
    pub fn new_unchecked(domain: Interval, mut pieces: Vec<Piece>, mut overrides: Vec<(f64, f64)>) -> Self {
        pieces.sort_by(|a, b| a.interval.lo.total_cmp(&b.interval.lo));
        overrides.sort_by(|a, b| a.0.total_cmp(&b.0));
        NearlyConvexFn1D { domain, pieces, overrides }
    }

    /// One expression on the whole domain.
    pub fn single(domain: Interval, expr: Expr) -> Result<Self> {
        Self::new(domain, vec![Piece::new(domain, expr)], vec![])
    }

    /// The indicator function of `omega` (zero on it, `+inf` elsewhere).
    pub fn indicator(omega: Interval) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::EmptySet);
        }
        Self::single(omega, Expr::c(0.0))
    }

    /// Piecewise-linear interpolation through sorted points (unchecked).
    pub fn piecewise_linear(points: &[(f64, f64)]) -> Self {
        let lo = points[0].0;
        let hi = points[points.len() - 1].0;
        let mut pieces = Vec::with_capacity(points.len().saturating_sub(1));
        for w in points.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            let s = (y1 - y0) / (x1 - x0);
            pieces.push(Piece::new(Interval::closed(x0, x1), Expr::affine(s, y0 - s * x0)));
        }
        if pieces.is_empty() {
            pieces.push(Piece::new(Interval::point(lo), Expr::c(points[0].1)));
        }
        Self::new_unchecked(Interval::closed(lo, hi), pieces, vec![])
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn overrides(&self) -> &[(f64, f64)] {
        &self.overrides
    }

    /// Same base without overrides.
    pub fn without_overrides(&self) -> Self {
        NearlyConvexFn1D { domain: self.domain, pieces: self.pieces.clone(), overrides: vec![] }
    }

    pub fn override_at(&self, x: f64) -> Option<f64> {
        self.overrides.iter().find(|(p, _)| *p == x).map(|(_, v)| *v)
    }

    /// Finite piece endpoints, sorted and deduplicated.
    pub fn knots(&self) -> Vec<f64> {
        let mut ks: Vec<f64> = self
            .pieces
            .iter()
            .flat_map(|p| [p.interval.lo, p.interval.hi])
            .filter(|v| v.is_finite())
            .collect();
        ks.sort_by(f64::total_cmp);
        ks.dedup();
        ks
    }

    pub fn evaluate(&self, x: f64) -> ExtReal {
        if !self.domain.contains(x) {
            return ExtReal::PosInf;
        }
        if let Some(v) = self.override_at(x) {
            return ExtReal::from_f64(v);
        }
        match self.pieces.iter().find(|p| p.interval.contains(x)) {
            Some(p) => ExtReal::from_f64(p.expr.value(x)),
            None => ExtReal::PosInf,
        }
    }

    /// Value of the lower semicontinuous hull, ignoring overrides.
    pub fn closure_value(&self, x: f64) -> ExtReal {
        if !self.domain.closure().contains(x) {
            return ExtReal::PosInf;
        }
        match self.pieces.iter().find(|p| p.interval.closure().contains(x)) {
            Some(p) => ExtReal::from_f64(p.expr.value(x)),
            None => ExtReal::PosInf,
        }
    }

    fn closure_f64(&self, x: f64) -> f64 {
        self.closure_value(x).to_f64()
    }

    /// Right derivative of the closure at `x`; `None` when no piece lies to
    /// the right of `x`.
    pub fn right_derivative(&self, x: f64) -> Option<f64> {
        self.pieces
            .iter()
            .find(|p| p.interval.lo <= x && x < p.interval.hi)
            .map(|p| p.expr.directional_derivative(x, 1.0))
    }

    /// Left derivative of the closure at `x`; `None` when no piece lies to
    /// the left of `x`.
    pub fn left_derivative(&self, x: f64) -> Option<f64> {
        self.pieces
            .iter()
            .find(|p| p.interval.lo < x && x <= p.interval.hi)
            .map(|p| -p.expr.directional_derivative(x, -1.0))
    }

    fn validation_window(&self) -> (f64, f64) {
        let ks = self.knots();
        let (klo, khi) = match (ks.first(), ks.last()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => (0.0, 0.0),
        };
        let reach = (khi - klo).max(10.0);
        let lo = if self.domain.lo.is_finite() { self.domain.lo } else { klo - reach };
        let hi = if self.domain.hi.is_finite() { self.domain.hi } else { khi + reach };
        (lo, hi)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        if self.domain.is_empty() {
            r.push(ViolationKind::EmptyDomain, None, "empty domain");
            return r;
        }
        let dcl = self.domain.closure();
        for p in &self.pieces {
            if p.interval.is_empty() || !dcl.contains(p.interval.lo) && p.interval.lo.is_finite()
                || !dcl.contains(p.interval.hi) && p.interval.hi.is_finite()
                || p.interval.lo < self.domain.lo
                || p.interval.hi > self.domain.hi
            {
                r.push(ViolationKind::PieceOutsideDomain, Some(p.interval.lo), format!("piece {} outside domain", p.interval));
            }
        }
        for w in self.pieces.windows(2) {
            let (a, b) = (&w[0].interval, &w[1].interval);
            if a.hi > b.lo {
                r.push(ViolationKind::PieceOverlap, Some(b.lo), "overlapping pieces");
            } else if a.hi < b.lo {
                r.push(ViolationKind::Coverage, Some(a.hi), "gap between pieces");
            } else if a.hi == b.lo {
                let (va, vb) = (w[0].expr.value(a.hi), w[1].expr.value(b.lo));
                if !close_values(va, vb) {
                    r.push(ViolationKind::Discontinuity, Some(a.hi), format!("pieces disagree ({va} vs {vb})"));
                }
                if !a.hi_closed && !b.lo_closed && self.override_at(a.hi).is_none() {
                    r.push(ViolationKind::Coverage, Some(a.hi), "point not covered");
                }
            }
        }
        if let (Some(first), Some(last)) = (self.pieces.first(), self.pieces.last()) {
            for (end, piece_end, covered) in [
                (self.domain.lo, first.interval.lo, self.domain.lo_closed && !first.interval.lo_closed),
                (self.domain.hi, last.interval.hi, self.domain.hi_closed && !last.interval.hi_closed),
            ] {
                if end.is_finite() && (end != piece_end || covered && self.override_at(end).is_none()) {
                    r.push(ViolationKind::Coverage, Some(end), "domain endpoint not covered");
                }
            }
        } else {
            r.push(ViolationKind::Coverage, None, "no pieces");
            return r;
        }
        for &(p, v) in &self.overrides {
            let is_boundary = (p == self.domain.lo && self.domain.lo_closed) || (p == self.domain.hi && self.domain.hi_closed);
            if !is_boundary {
                r.push(ViolationKind::OverrideNotBoundary, Some(p), "override is not at a domain endpoint");
                continue;
            }
            if !v.is_finite() {
                r.push(ViolationKind::NonFinite, Some(p), "override value not finite");
                continue;
            }
            let cl = self.closure_f64(p);
            if v < cl - TOL_EVAL * (1.0 + cl.abs()) {
                r.push(ViolationKind::OverrideBelowClosure, Some(p), format!("override {v} below closure value {cl}"));
            }
        }
        let (lo, hi) = self.validation_window();
        let n = CONVEXITY_GRID;
        let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let mut vals = Vec::with_capacity(n);
        for p in &self.pieces {
            for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let (a, b) = p.interval.finite_window(0.0, 10.0);
                let x = a + t * (b - a);
                if p.interval.closure().contains(x) {
                    match p.expr.eval(x) {
                        Ok(v) if v.is_finite() => {}
                        _ => r.push(ViolationKind::NonFinite, Some(x), "piece value not finite"),
                    }
                }
            }
        }
        for &x in &xs {
            vals.push(self.closure_f64(x));
        }
        for i in 1..n - 1 {
            let (a, m, b) = (vals[i - 1], vals[i], vals[i + 1]);
            if !(a.is_finite() && m.is_finite() && b.is_finite()) {
                continue;
            }
            let scale = 1.0 + a.abs().max(m.abs()).max(b.abs());
            if m > 0.5 * (a + b) + TOL_EQ * scale {
                r.push(ViolationKind::Convexity, Some(xs[i]), "midpoint convexity fails");
                break;
            }
        }
        r
    }

    /// `λ f`.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if lambda <= 0.0 || lambda.is_nan() {
            return Err(Error::NonPositiveScalar(lambda));
        }
        Ok(NearlyConvexFn1D {
            domain: self.domain,
            pieces: self.pieces.iter().map(|p| Piece::new(p.interval, Expr::scale(lambda, p.expr.clone()))).collect(),
            overrides: self.overrides.iter().map(|(p, v)| (*p, lambda * v)).collect(),
        })
    }

    /// Explicit pointwise sum.
    pub fn add(&self, other: &NearlyConvexFn1D) -> Result<Self> {
        let domain = self.domain.intersect(&other.domain);
        if domain.is_empty() {
            return Err(Error::InfeasibleIntersection);
        }
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let iv = a.interval.intersect(&b.interval).intersect(&domain);
                if !iv.is_empty() {
                    pieces.push(Piece::new(iv, Expr::add(a.expr.clone(), b.expr.clone())));
                }
            }
        }
        let mut overrides = Vec::new();
        for p in [domain.lo, domain.hi] {
            if !p.is_finite() || !domain.contains(p) || overrides.iter().any(|(q, _)| *q == p) {
                continue;
            }
            let v = self.evaluate(p) + other.evaluate(p);
            let covered = pieces.iter().find(|pc| pc.interval.contains(p));
            let needs = match covered {
                Some(pc) => ExtReal::from_f64(pc.expr.value(p)) != v,
                None => true,
            };
            if needs {
                if let ExtReal::Finite(v) = v {
                    overrides.push((p, v));
                }
            }
        }
        Ok(Self::new_unchecked(domain, pieces, overrides))
    }

    /// `f + δ_S`.
    pub fn restrict(&self, s: Interval) -> Result<Self> {
        self.add(&NearlyConvexFn1D::indicator(s)?)
    }

    fn piece_sup(&self, p: &Piece, xi: f64) -> f64 {
        let iv = p.interval.closure();
        let g = |x: f64| xi * x - p.expr.value(x);
        if iv.is_singleton() {
            return g(iv.lo);
        }
        if p.expr.is_piecewise_affine() {
            let mut pts: Vec<f64> = p.expr.kinks().into_iter().filter(|k| iv.contains(*k)).collect();
            pts.extend([iv.lo, iv.hi].into_iter().filter(|x| x.is_finite()));
            for (end, dir) in [(iv.hi, 1.0), (iv.lo, -1.0)] {
                if end.is_infinite() {
                    let far = pts.iter().copied().fold(0.0f64, |m, x| if dir > 0.0 { m.max(x) } else { m.min(x) }) + dir;
                    if xi * dir - p.expr.directional_derivative(far, dir) > 0.0 {
                        return f64::INFINITY;
                    }
                    pts.push(far);
                }
            }
            return pts.into_iter().map(g).fold(f64::NEG_INFINITY, f64::max);
        }
        let slope = |x: f64, dir: f64| xi * dir - p.expr.directional_derivative(x, dir);
        let mut lo = iv.lo;
        let mut hi = iv.hi;
        if hi == f64::INFINITY {
            let base = if lo.is_finite() { lo } else { 0.0 };
            match expand(base, 1.0, &g, &slope) {
                Some(r) => hi = r,
                None => return f64::INFINITY,
            }
        }
        if lo == f64::NEG_INFINITY {
            let base = if hi.is_finite() && iv.hi.is_finite() { hi } else { 0.0 };
            match expand(base, -1.0, &g, &slope) {
                Some(r) => lo = r,
                None => return f64::INFINITY,
            }
        }
        ternary_max(g, lo, hi).1
    }

    /// `sup_x ξx − f(x)`, computed on closure values.
    pub fn conjugate(&self, xi: f64) -> ExtReal {
        let mut best = f64::NEG_INFINITY;
        for p in &self.pieces {
            let v = self.piece_sup(p, xi);
            if v.is_nan() {
                continue;
            }
            best = best.max(v);
            if best > CONJ_CAP {
                return ExtReal::PosInf;
            }
        }
        if best == f64::NEG_INFINITY {
            return ExtReal::PosInf;
        }
        ExtReal::from_f64(best)
    }

    /// Asymptotic slope hint: a slope at an interior point of the domain.
    pub fn interior_slope(&self) -> f64 {
        let x = self.domain.interior_point().unwrap_or(self.domain.lo);
        match (self.left_derivative(x), self.right_derivative(x)) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => 0.5 * (a + b),
            (_, Some(b)) if b.is_finite() => b,
            (Some(a), _) if a.is_finite() => a,
            _ => 0.0,
        }
    }

    /// `{ ξ : f*(ξ) < ∞ }`, clipped to the slope window.
    pub fn conjugate_domain(&self) -> IntervalSet {
        let finite = |xi: f64| self.conjugate(xi).is_finite();
        let hint = self.interior_slope();
        let start = if finite(hint) {
            Some(hint)
        } else {
            let mut found = None;
            for k in 0..60 {
                let step = 2f64.powi(k - 20);
                for c in [hint + step, hint - step] {
                    if finite(c) {
                        found = Some(c);
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            found
        };
        let Some(s) = start else {
            return IntervalSet::EMPTY;
        };
        let hi = if finite(SLOPE_WINDOW) {
            f64::INFINITY
        } else {
            bisect_boundary(finite, s, SLOPE_WINDOW, TOL_EVAL)
        };
        let lo = if finite(-SLOPE_WINDOW) {
            f64::NEG_INFINITY
        } else {
            bisect_boundary(finite, s, -SLOPE_WINDOW, TOL_EVAL)
        };
        IntervalSet::new(lo, hi)
    }
}

fn close_values(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL_EVAL * (1.0 + a.abs().max(b.abs()))
}

/// Walks outward from `base` in direction `dir` until the concave objective
/// stops increasing; `None` means the supremum is unbounded.
fn expand<G: Fn(f64) -> f64, S: Fn(f64, f64) -> f64>(base: f64, dir: f64, g: &G, slope: &S) -> Option<f64> {
    let mut step = 1.0;
    loop {
        let r = base + dir * step;
        if !r.is_finite() || step > 1e300 {
            return None;
        }
        if g(r) > CONJ_CAP {
            return None;
        }
        if slope(r, dir) <= 0.0 {
            return Some(r);
        }
        step *= 2.0;
    }
}
