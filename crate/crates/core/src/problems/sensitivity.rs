//! ε-subdifferentials of optimal value functions, computed from the data
//! `f` and `G` through intersections over an η ladder.

use crate::calculus::coderiv::normal_constraints;
use crate::calculus::esub::esub_interval;
use crate::calculus::EtaLadder;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::func::NearlyConvexFn1D;
use crate::interval::{Interval, IntervalSet};
use crate::polyhedron::{HalfPlane, VPolyhedron2, Vec2};
use crate::problems::parametric::{approx_solution_set, box_polyhedron, value_function, ParametricProblem};
use crate::search::{bisect_boundary, golden_min};
use crate::tol::{SLOPE_WINDOW, TOL_EQ, TOL_EVAL};

/// Number of grid points used by [`value_function_esub_direct`].
pub const VALUE_GRID: usize = 1025;

/// Half-width used for the parameter range when the box is unbounded.
pub const VALUE_REACH: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityConfig {
    pub ladder: EtaLadder,
    /// ξ grid size used to locate a first member of each set.
    pub xi_grid: usize,
    /// Samples of `S_η(x̄)` for the unconstrained formula.
    pub y_samples: usize,
    /// Samples of `S_η(x̄)` for the constrained formula.
    pub split_y_samples: usize,
    /// Points per axis of the simplex lattice of tolerance splits.
    pub split_grid: usize,
}

impl Default for SensitivityConfig {
    fn default() -> Self {
        SensitivityConfig { ladder: EtaLadder::default(), xi_grid: 2001, y_samples: 257, split_y_samples: 9, split_grid: 65 }
    }
}

/// The set for every η and their running intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub set: IntervalSet,
    pub per_eta: Vec<(f64, IntervalSet)>,
    /// Endpoint distance between the last two running intersections.
    pub delta: f64,
}

impl SensitivityReport {
    fn from_sets(per_eta: Vec<(f64, IntervalSet)>) -> Self {
        let mut running = Vec::with_capacity(per_eta.len());
        let mut acc = IntervalSet::real_line();
        for (_, s) in &per_eta {
            acc = acc.intersect(s);
            running.push(acc);
        }
        let delta = match running.len() {
            0 | 1 => 0.0,
            n => running[n - 2].endpoint_distance(&running[n - 1]),
        };
        SensitivityReport { set: acc, per_eta, delta }
    }

    /// Whether each running intersection contains the next.
    pub fn is_monotone(&self, tol: f64) -> bool {
        let mut acc = IntervalSet::real_line();
        let mut prev = acc;
        for (_, s) in &self.per_eta {
            acc = acc.intersect(s);
            if !acc.subset_of(&prev, tol) {
                return false;
            }
            prev = acc;
        }
        true
    }
}

/// `{ ξ : φ(ξ) ≤ τ }` for a convex `φ`, located on a grid of `grid` points
/// over growing windows and refined by bisection.
pub fn convex_sublevel(phi: impl Fn(f64) -> f64, tau: f64, grid: usize) -> IntervalSet {
    let grid = grid.max(3);
    let below = |x: f64| phi(x) <= tau + TOL_EVAL * (1.0 + tau.abs());
    let mut reach = 1.0;
    let seed = loop {
        let step = 2.0 * reach / (grid - 1) as f64;
        let xs = (0..grid).map(|i| -reach + step * i as f64);
        let (best, val) = xs.map(|x| (x, phi(x))).fold((0.0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
        if val <= tau {
            break Some(best);
        }
        if val.is_finite() {
            let (x, _) = golden_min(&phi, best - step, best + step, TOL_EVAL);
            if below(x) {
                break Some(x);
            }
        }
        let at_edge = (best.abs() - reach).abs() <= step || !val.is_finite();
        if !at_edge || reach >= SLOPE_WINDOW {
            break None;
        }
        reach *= 4.0;
    };
    let Some(seed) = seed else { return IntervalSet::EMPTY };
    let side = |dir: f64| {
        let mut d = 1.0;
        loop {
            let x = seed + dir * d;
            if !below(x) {
                return bisect_boundary(below, seed, x, TOL_EVAL);
            }
            if d >= SLOPE_WINDOW {
                return dir * f64::INFINITY;
            }
            d *= 2.0;
        }
    };
    IntervalSet::new(side(-1.0), side(1.0))
}

fn samples(s: &Interval, center: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = s.finite_window(center, VALUE_REACH);
    let n = n.max(2);
    let mut ys: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    ys.push(center);
    ys
}

fn finite_value(p: &ParametricProblem, x: f64) -> Result<(f64, f64)> {
    let r = p.value_detail(x).ok_or(Error::ValueInfinite(x))?;
    let m = r.value.finite().ok_or(Error::ValueInfinite(x))?;
    Ok((m, r.argmin))
}

/// `⋂_η { ξ : ∃ y ∈ S_η(x̄), (ξ, 0) ∈ ∂_{ε+η} f(x̄, y) }` for a constraint
/// that is inactive on the box.
pub fn sensitivity_unconstrained(p: &ParametricProblem, xbar: f64, eps: f64, cfg: &SensitivityConfig) -> Result<SensitivityReport> {
    if !p.constraint_contains_box() {
        return Err(Error::InvalidArgument("constraint graph must contain the box".into()));
    }
    let (_, argmin) = finite_value(p, xbar)?;
    let f = &p.objective;
    let phi = |xi: f64| (f.conjugate2(Vec2::new(xi, 0.0)) + ExtReal::Finite(-xi * xbar)).to_f64();
    let mut per_eta = Vec::new();
    for &eta in cfg.ladder.values() {
        let s = approx_solution_set(p, xbar, eta)?;
        let fy = samples(&s, argmin, cfg.y_samples)
            .into_iter()
            .filter(|y| s.contains(*y) || *y == argmin)
            .map(|y| f.evaluate2(Vec2::new(xbar, y)).to_f64())
            .fold(f64::INFINITY, f64::min);
        let set = if fy.is_finite() { convex_sublevel(phi, eps + eta - fy, cfg.xi_grid) } else { IntervalSet::EMPTY };
        per_eta.push((eta, set));
    }
    Ok(SensitivityReport::from_sets(per_eta))
}

/// `{ ξ : (ξ, 0) ∈ ∂_ε f(x̄, ȳ) }` for an exact solution `ȳ`.
pub fn sensitivity_exact(p: &ParametricProblem, xbar: f64, eps: f64, ybar: f64, xi_grid: usize) -> Result<IntervalSet> {
    let (m, _) = finite_value(p, xbar)?;
    let f = &p.objective;
    let fy = match f.evaluate2(Vec2::new(xbar, ybar)) {
        ExtReal::Finite(v) if (v - m).abs() <= TOL_EQ * (1.0 + m.abs()) && p.slice(xbar).contains(ybar) => v,
        _ => return Err(Error::NotExactSolution),
    };
    let phi = |xi: f64| (f.conjugate2(Vec2::new(xi, 0.0)) + ExtReal::Finite(-xi * xbar)).to_f64();
    Ok(convex_sublevel(phi, eps - fy, xi_grid))
}

/// `∂_ε m(x̄)` of a piecewise-linear fit of `m` on a uniform grid.
pub fn value_function_esub_direct(p: &ParametricProblem, xbar: f64, eps: f64) -> Result<IntervalSet> {
    let (m0, _) = finite_value(p, xbar)?;
    let (lo, hi) = p.objective.box_x().finite_window(xbar, VALUE_REACH);
    let mut pts: Vec<(f64, f64)> = (0..VALUE_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (VALUE_GRID - 1) as f64)
        .filter(|x| (x - xbar).abs() > TOL_EVAL)
        .filter_map(|x| value_function(p, x).finite().map(|v| (x, v)))
        .collect();
    pts.push((xbar, m0));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let i = pts.iter().position(|q| q.0 == xbar).expect("x̄ was inserted");
    let mut j = i;
    while j > 0 && pts[j - 1].0 > pts[j].0 - 2.0 * (hi - lo) / (VALUE_GRID - 1) as f64 {
        j -= 1;
    }
    let mut k = i;
    while k + 1 < pts.len() && pts[k + 1].0 < pts[k].0 + 2.0 * (hi - lo) / (VALUE_GRID - 1) as f64 {
        k += 1;
    }
    let fit = NearlyConvexFn1D::piecewise_linear(&pts[j..=k]);
    let bx = p.objective.box_x();
    let open_lo = j == 0 && bx.lo == f64::NEG_INFINITY;
    let open_hi = k + 1 == pts.len() && bx.hi == f64::INFINITY;
    if !(open_lo || open_hi) || fit.pieces().len() < 2 {
        return esub_interval(&fit, xbar, eps);
    }
    let mut pieces = fit.pieces().to_vec();
    let last = pieces.len() - 1;
    if open_lo {
        pieces[0].interval = Interval::new(f64::NEG_INFINITY, pieces[0].interval.hi, false, true);
    }
    if open_hi {
        pieces[last].interval = Interval::new(pieces[last].interval.lo, f64::INFINITY, true, false);
    }
    let d = fit.domain();
    let dom = Interval::new(if open_lo { f64::NEG_INFINITY } else { d.lo }, if open_hi { f64::INFINITY } else { d.hi }, !open_lo, !open_hi);
    esub_interval(&NearlyConvexFn1D::new_unchecked(dom, pieces, vec![]), xbar, eps)
}

/// `{ ξ : (ξ, 0) ∈ B + N }` where `B = i1 × i2` and `N` is given by `normal`.
fn box_plus_normal(i1: &IntervalSet, i2: &IntervalSet, normal: &[HalfPlane]) -> IntervalSet {
    if i1.is_empty() || i2.is_empty() {
        return IntervalSet::EMPTY;
    }
    let mut hs = normal.to_vec();
    if i2.lo().is_finite() {
        hs.push(HalfPlane::new(Vec2::new(0.0, 1.0), -i2.lo()));
    }
    if i2.hi().is_finite() {
        hs.push(HalfPlane::new(Vec2::new(0.0, -1.0), i2.hi()));
    }
    match VPolyhedron2::from_halfplanes(&hs) {
        Ok(u) => {
            let r = u.x_range();
            IntervalSet::new(i1.lo() + r.lo, i1.hi() + r.hi)
        }
        Err(_) => IntervalSet::EMPTY,
    }
}

/// `ri(dom f) ∩ ri(gph G) ≠ ∅`.
fn qualification_holds(p: &ParametricProblem, g: &VPolyhedron2) -> bool {
    let Ok(b) = box_polyhedron(p.objective.box_x(), p.objective.box_y()) else { return false };
    match b.intersect(g) {
        Ok(c) => {
            let q = c.ri_point();
            b.in_relative_interior(q, TOL_EQ) && g.in_relative_interior(q, TOL_EQ)
        }
        Err(_) => false,
    }
}

/// A split `(a, b, γ2)` of `ε + η` at one sampled `y`.
#[derive(Debug, Clone, Copy)]
struct SplitPoint {
    y: f64,
    a: f64,
    b: f64,
    g: f64,
}

struct SplitEval<'a> {
    p: &'a ParametricProblem,
    gph: &'a VPolyhedron2,
    xbar: f64,
}

impl SplitEval<'_> {
    fn eval(&self, s: SplitPoint) -> IntervalSet {
        let f = &self.p.objective;
        let (Ok(i1), Ok(i2)) = (esub_interval(f.f1(), self.xbar, s.a), esub_interval(f.f2(), s.y, s.b)) else {
            return IntervalSet::EMPTY;
        };
        box_plus_normal(&i1, &i2, &normal_constraints(self.gph, Vec2::new(self.xbar, s.y), s.g))
    }

    /// Moves tolerance between the three parts of the split while the chosen
    /// endpoint improves.
    fn refine(&self, start: SplitPoint, step: f64, upper: bool) -> f64 {
        let key = |r: IntervalSet| if upper { r.hi() } else { -r.lo() };
        let mut best = start;
        let mut val = key(self.eval(start));
        let mut h = step / 2.0;
        for _ in 0..3 {
            let mut improved = true;
            while improved {
                improved = false;
                let c = [best.a, best.b, best.g];
                for (from, to) in [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)] {
                    let mut n = c;
                    n[from] -= h;
                    n[to] += h;
                    if n[from] < 0.0 {
                        continue;
                    }
                    let cand = SplitPoint { a: n[0], b: n[1], g: n[2], ..best };
                    let v = key(self.eval(cand));
                    if v > val + TOL_EVAL {
                        best = cand;
                        val = v;
                        improved = true;
                    }
                }
            }
            h /= 2.0;
        }
        if upper {
            val
        } else {
            -val
        }
    }
}

/// `⋂_η ⋃ { ξ : (ξ, 0) ∈ ∂_{γ1} f(x̄, y) + N_{γ2}((x̄, y); gph G) }` over
/// `y ∈ S_η(x̄)` and `γ1 + γ2 = ε + η`.
pub fn sensitivity_constrained(p: &ParametricProblem, xbar: f64, eps: f64, cfg: &SensitivityConfig) -> Result<SensitivityReport> {
    let whole;
    let gph = match &p.constraint {
        Some(g) => g,
        None => {
            whole = box_polyhedron(p.objective.box_x(), p.objective.box_y())?;
            &whole
        }
    };
    if !qualification_holds(p, gph) {
        return Err(Error::QualificationFailed);
    }
    let (_, argmin) = finite_value(p, xbar)?;
    let f = &p.objective;
    let n = cfg.split_grid.max(2) - 1;
    let ev = SplitEval { p, gph, xbar };
    let mut per_eta = Vec::new();
    for &eta in cfg.ladder.values() {
        let total = eps + eta;
        let h = total / n as f64;
        let s = approx_solution_set(p, xbar, eta)?;
        let ys: Vec<f64> = samples(&s, argmin, cfg.split_y_samples)
            .into_iter()
            .filter(|y| {
                let q = Vec2::new(xbar, *y);
                let separable = f.f1().evaluate(xbar) + f.f2().evaluate(*y);
                (s.contains(*y) || *y == argmin) && separable.is_finite() && f.evaluate2(q) == separable && gph.contains(q, TOL_EQ)
            })
            .collect();
        let a_sets: Vec<IntervalSet> = (0..=n).map(|i| esub_interval(f.f1(), xbar, h * i as f64)).collect::<Result<_>>()?;
        let mut set = IntervalSet::EMPTY;
        let mut best_hi: Option<(f64, SplitPoint)> = None;
        let mut best_lo: Option<(f64, SplitPoint)> = None;
        for &y in &ys {
            let b_sets: Vec<IntervalSet> = (0..=n).map(|j| esub_interval(f.f2(), y, h * j as f64)).collect::<Result<_>>()?;
            let normals: Vec<Vec<HalfPlane>> = (0..=n).map(|k| normal_constraints(gph, Vec2::new(xbar, y), h * k as f64)).collect();
            for (i, a_set) in a_sets.iter().enumerate() {
                for (j, b_set) in b_sets.iter().enumerate().take(n - i + 1) {
                    let k = n - i - j;
                    let r = box_plus_normal(a_set, b_set, &normals[k]);
                    if r.is_empty() {
                        continue;
                    }
                    set = set.hull(&r);
                    let sp = SplitPoint { y, a: h * i as f64, b: h * j as f64, g: h * k as f64 };
                    if best_hi.is_none_or(|(v, _)| r.hi() > v) {
                        best_hi = Some((r.hi(), sp));
                    }
                    if best_lo.is_none_or(|(v, _)| r.lo() < v) {
                        best_lo = Some((r.lo(), sp));
                    }
                }
            }
        }
        if let (Some((hi, sh)), Some((lo, sl))) = (best_hi, best_lo) {
            let hi = if hi.is_finite() { ev.refine(sh, h, true) } else { hi };
            let lo = if lo.is_finite() { ev.refine(sl, h, false) } else { lo };
            set = set.hull(&IntervalSet::new(lo, hi));
        }
        per_eta.push((eta, set));
    }
    Ok(SensitivityReport::from_sets(per_eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::separable::SeparableFn2D;

    fn on_box(e: Expr) -> NearlyConvexFn1D {
        NearlyConvexFn1D::single(Interval::closed(-1.0, 1.0), e).unwrap()
    }

    fn quad(g: Option<VPolyhedron2>) -> ParametricProblem {
        let f = SeparableFn2D::new(on_box(Expr::sq(Expr::var())), on_box(Expr::sq(Expr::var())), vec![]).unwrap();
        ParametricProblem::new(f, g).unwrap()
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

    fn near(s: IntervalSet, lo: f64, hi: f64, tol: f64) -> bool {
        s.approx_eq(&IntervalSet::new(lo, hi), tol)
    }

    #[test]
    fn sublevel_of_parabola() {
        let s = convex_sublevel(|x| (x - 3.0) * (x - 3.0), 1.0, 101);
        assert!(near(s, 2.0, 4.0, 1e-9), "{s}");
        assert!(convex_sublevel(|x| x * x + 1.0, 0.5, 101).is_empty());
        let s = convex_sublevel(|x| if x >= 0.0 { 0.0 } else { f64::INFINITY }, 0.0, 11);
        assert!(s.unbounded_above() && s.lo().abs() < 1e-9);
        let s = convex_sublevel(|x| (x - 0.123).abs(), 0.0, 11);
        assert!(near(s, 0.123, 0.123, 1e-8), "{s}");
    }

    #[test]
    fn unconstrained_quadratic() {
        let p = quad(None);
        let cfg = SensitivityConfig::default();
        let r = sensitivity_unconstrained(&p, 0.0, 0.25, &cfg).unwrap();
        assert!(near(r.set, -1.0, 1.0, 5e-3), "{}", r.set);
        assert!(r.is_monotone(1e-9) && r.delta < 5e-3);
        let r = sensitivity_unconstrained(&p, 0.0, 0.0, &cfg).unwrap();
        assert!(near(r.set, 0.0, 0.0, 5e-3), "{}", r.set);
        let e = sensitivity_exact(&p, 0.0, 0.25, 0.0, cfg.xi_grid).unwrap();
        assert!(near(e, -1.0, 1.0, 1e-6), "{e}");
        assert_eq!(sensitivity_exact(&p, 0.0, 0.25, 0.5, cfg.xi_grid), Err(Error::NotExactSolution));
        assert!(matches!(sensitivity_unconstrained(&cone(), 0.0, 0.0, &cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn exact_on_cone() {
        let e = sensitivity_exact(&cone(), 0.0, 0.0, 0.0, 2001).unwrap();
        assert!(near(e, -0.5, 0.5, 1e-9), "{e}");
    }

    #[test]
    fn direct_value_function() {
        let d = value_function_esub_direct(&quad(None), 0.0, 0.25).unwrap();
        assert!(near(d, -1.0, 1.0, 5e-3), "{d}");
        let d = value_function_esub_direct(&cone(), 0.0, 0.0).unwrap();
        assert!(near(d, -2.0, 2.0, 1e-9), "{d}");
        let d = value_function_esub_direct(&cone(), 0.0, 1.0).unwrap();
        assert!(near(d, -3.0, 3.0, 1e-9), "{d}");
        let line = NearlyConvexFn1D::single(Interval::real_line(), Expr::var()).unwrap();
        let lin = SeparableFn2D::new(line, on_box(Expr::c(0.0)), vec![]).unwrap();
        let p = ParametricProblem::new(lin, None).unwrap();
        let d = value_function_esub_direct(&p, 0.0, 0.3).unwrap();
        assert!(near(d, 1.0, 1.0, 1e-9), "{d}");
        let lin = SeparableFn2D::new(on_box(Expr::var()), on_box(Expr::c(0.0)), vec![]).unwrap();
        let d = value_function_esub_direct(&ParametricProblem::new(lin, None).unwrap(), 0.0, 0.3).unwrap();
        assert!(near(d, 0.7, 1.3, 1e-9), "{d}");
    }

    #[test]
    fn constrained_cone() {
        let cfg = SensitivityConfig::default();
        let r = sensitivity_constrained(&cone(), 0.0, 0.0, &cfg).unwrap();
        assert!(near(r.set, -2.0, 2.0, 5e-3), "{}", r.set);
        let r = sensitivity_constrained(&cone(), 0.0, 0.5, &cfg).unwrap();
        assert!(near(r.set, -2.5, 2.5, 5e-3), "{}", r.set);
    }

    #[test]
    fn constrained_with_inactive_constraint() {
        let cfg = SensitivityConfig::default();
        let g = VPolyhedron2::rect(-1.0, 1.0, -1.0, 1.0).unwrap();
        let p = quad(Some(g));
        let c = sensitivity_constrained(&p, 0.0, 0.25, &cfg).unwrap();
        let u = sensitivity_unconstrained(&p, 0.0, 0.25, &cfg).unwrap();
        assert!(c.set.approx_eq(&u.set, 5e-3), "{} {}", c.set, u.set);
    }

    #[test]
    fn qualification_failure() {
        let f = SeparableFn2D::new(on_box(Expr::var()), on_box(Expr::var()), vec![]).unwrap();
        let g = VPolyhedron2::new(vec![Vec2::new(1.0, -1.0), Vec2::new(1.0, 1.0)], vec![Vec2::new(1.0, 0.0)]).unwrap();
        let p = ParametricProblem::new(f, Some(g)).unwrap();
        assert_eq!(sensitivity_constrained(&p, 1.0, 0.1, &SensitivityConfig::default()), Err(Error::QualificationFailed));
    }
}
