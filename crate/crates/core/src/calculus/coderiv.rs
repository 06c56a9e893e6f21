//! ε-coderivatives of sums and intersections of polyhedral set-valued maps
//! given by their graphs.

use crate::calculus::normal::{ecoderiv_membership, enormal2_membership};
use crate::error::{Error, Result};
use crate::interval::{ri_intersect_nonempty, Interval};
use crate::polyhedron::{HalfPlane, VPolyhedron2, Vec2};
use crate::tol::{TOL_EQ, TOL_EVAL};

/// Number of points in the ε-split grid.
pub const SPLIT_GRID: usize = 129;
/// Bound on the size of witness functionals.
const WITNESS_BOX: f64 = 1e6;

/// `(ε1, ε2, u1, u2)` with `ui ∈ D*_{εi} Fi(x̄, ȳi)(v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoderivSplit {
    pub eps1: f64,
    pub eps2: f64,
    pub u1: f64,
    pub u2: f64,
}

fn interval_sum(a: Interval, b: Interval) -> Interval {
    Interval::closed(a.lo + b.lo, a.hi + b.hi)
}

/// Graph of `x ↦ F1(x) + F2(x)` for polyhedral graphs.
pub fn graph_sum(g1: &VPolyhedron2, g2: &VPolyhedron2) -> Result<VPolyhedron2> {
    let xr = g1.x_range().intersect(&g2.x_range());
    if xr.is_empty() {
        return Err(Error::InfeasibleIntersection);
    }
    let mut xs: Vec<f64> = g1
        .vertices()
        .iter()
        .chain(g2.vertices())
        .map(|v| v.x)
        .chain([xr.lo, xr.hi])
        .filter(|x| x.is_finite() && xr.contains(*x))
        .collect();
    if xs.is_empty() {
        xs.push(xr.interior_point().unwrap_or(0.0));
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut verts = Vec::new();
    for x in xs {
        let s = interval_sum(g1.slice_x(x), g2.slice_x(x));
        if s.lo.is_finite() {
            verts.push(Vec2::new(x, s.lo));
        }
        if s.hi.is_finite() {
            verts.push(Vec2::new(x, s.hi));
        }
        if !s.lo.is_finite() && !s.hi.is_finite() {
            verts.push(Vec2::new(x, 0.0));
        }
    }
    let (c1, c2) = (g1.recession_cone(), g2.recession_cone());
    let mut rays = Vec::new();
    for dx in [1.0, -1.0] {
        let unbounded = if dx > 0.0 { xr.hi == f64::INFINITY } else { xr.lo == f64::NEG_INFINITY };
        if !unbounded {
            continue;
        }
        let s = interval_sum(c1.slice_x(dx), c2.slice_x(dx));
        for e in [s.lo, s.hi] {
            if e.is_finite() {
                rays.push(Vec2::new(dx, e));
            }
        }
    }
    let s0 = interval_sum(c1.slice_x(0.0), c2.slice_x(0.0));
    if s0.hi == f64::INFINITY {
        rays.push(Vec2::new(0.0, 1.0));
    }
    if s0.lo == f64::NEG_INFINITY {
        rays.push(Vec2::new(0.0, -1.0));
    }
    VPolyhedron2::new(verts, rays)
}

/// `{ u1 : (u1, −v) ∈ N_ε((x̄, ȳ); gph) }` as `[lo, hi]` (possibly empty).
fn coderiv_interval(gph: &VPolyhedron2, pbar: Vec2, eps: f64, v: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut clamp = |a: f64, b: f64| {
        if a.abs() <= TOL_EVAL {
            if b < -TOL_EQ {
                lo = f64::INFINITY;
            }
        } else if a > 0.0 {
            hi = hi.min(b / a);
        } else {
            lo = lo.max(b / a);
        }
    };
    for q in gph.vertices() {
        clamp(q.x - pbar.x, eps + v * (q.y - pbar.y));
    }
    for r in gph.rays() {
        clamp(r.x, v * r.y);
    }
    (lo, hi)
}

fn split_grid(eps: f64, lo: f64, hi: f64) -> Vec<f64> {
    let n = SPLIT_GRID;
    let mut g: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    g.sort_by(|a, b| (a - 0.5 * eps).abs().total_cmp(&(b - 0.5 * eps).abs()));
    g
}

/// Splits `u ∈ D*_ε(F1 + F2)(x̄, ȳ1 + ȳ2)(v)` into parts for each map.
#[allow(clippy::too_many_arguments)]
pub fn coderiv_sum_decompose(
    g1: &VPolyhedron2,
    g2: &VPolyhedron2,
    xbar: f64,
    ybar: (f64, f64),
    eps: f64,
    v: f64,
    u: f64,
) -> Result<CoderivSplit> {
    if !ri_intersect_nonempty(&g1.x_range(), &g2.x_range())? {
        return Err(Error::QualificationFailed);
    }
    let (p1, p2) = (Vec2::new(xbar, ybar.0), Vec2::new(xbar, ybar.1));
    if !g1.contains(p1, TOL_EQ) || !g2.contains(p2, TOL_EQ) {
        return Err(Error::PointNotInSet);
    }
    let sum = graph_sum(g1, g2)?;
    if !ecoderiv_membership(&sum, Vec2::new(xbar, ybar.0 + ybar.1), eps, v, u)? {
        return Err(Error::NotInCoderivative);
    }
    let attempt = |e1: f64| -> Option<CoderivSplit> {
        let e2 = (eps - e1).max(0.0);
        let (a1, b1) = coderiv_interval(g1, p1, e1, v);
        let (a2, b2) = coderiv_interval(g2, p2, e2, v);
        let lo = a1.max(u - b2);
        let hi = b1.min(u - a2);
        if lo > hi + TOL_EQ {
            return None;
        }
        let u1 = (0.5 * u).max(lo).min(hi.max(lo));
        let split = CoderivSplit { eps1: e1, eps2: e2, u1, u2: u - u1 };
        let ok1 = ecoderiv_membership(g1, p1, e1, v, split.u1).ok()?;
        let ok2 = ecoderiv_membership(g2, p2, e2, v, split.u2).ok()?;
        (ok1 && ok2).then_some(split)
    };
    let coarse = split_grid(eps, 0.0, eps);
    if let Some(s) = coarse.iter().find_map(|e| attempt(*e)) {
        return Ok(s);
    }
    let h = eps / (SPLIT_GRID - 1) as f64;
    for c in coarse.iter().take(4) {
        let fine = split_grid(eps, (c - h).max(0.0), (c + h).min(eps));
        if let Some(s) = fine.iter().find_map(|e| attempt(*e)) {
            return Ok(s);
        }
    }
    Err(Error::NoSplitFound { resolution: SPLIT_GRID })
}

/// Per-map parts `(εi, ui, vi)` summing to `(ε, u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionWitness {
    pub eps: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionCheck {
    /// Direct membership on the intersected graph.
    pub member: bool,
    pub witness: Option<IntersectionWitness>,
}

impl IntersectionCheck {
    pub fn consistent(&self) -> bool {
        self.member == self.witness.is_some()
    }
}

/// Half-planes in `w`-space describing `N_ε(p̄; Ω)`.
pub(crate) fn normal_constraints(omega: &VPolyhedron2, pbar: Vec2, eps: f64) -> Vec<HalfPlane> {
    let mut hs: Vec<HalfPlane> = omega.vertices().iter().map(|q| HalfPlane::new(*q - pbar, eps)).collect();
    hs.extend(omega.rays().iter().map(|r| HalfPlane::new(*r, 0.0)));
    hs.retain(|h| h.a.norm() > 0.0 || h.c < 0.0);
    hs
}

fn bounding_box() -> Vec<HalfPlane> {
    vec![
        HalfPlane::new(Vec2::new(1.0, 0.0), WITNESS_BOX),
        HalfPlane::new(Vec2::new(-1.0, 0.0), WITNESS_BOX),
        HalfPlane::new(Vec2::new(0.0, 1.0), WITNESS_BOX),
        HalfPlane::new(Vec2::new(0.0, -1.0), WITNESS_BOX),
    ]
}

/// Finds `w1 ∈ N_{e1}(p̄; a)` with `w − w1 ∈ N_{e2}(p̄; b)`.
fn split_pair(a: &VPolyhedron2, b: &VPolyhedron2, pbar: Vec2, e1: f64, e2: f64, w: Vec2) -> Option<Vec2> {
    let mut hs = normal_constraints(a, pbar, e1);
    for h in normal_constraints(b, pbar, e2) {
        hs.push(HalfPlane::new(-h.a, h.c - h.a.dot(w)));
    }
    hs.extend(bounding_box());
    if hs.iter().any(|h| h.a.norm() == 0.0 && h.c < -TOL_EQ) {
        return None;
    }
    hs.retain(|h| h.a.norm() > 0.0);
    let half = 0.5 * w;
    let cand = if hs.iter().all(|h| h.contains(half, TOL_EVAL)) {
        half
    } else {
        let poly = VPolyhedron2::from_halfplanes(&hs).ok()?;
        let n = poly.vertices().len() as f64;
        poly.vertices().iter().fold(Vec2::ZERO, |acc, p| acc + (1.0 / n) * *p)
    };
    let ok1 = enormal2_membership(a, pbar, e1, cand).ok()?;
    let ok2 = enormal2_membership(b, pbar, e2, w - cand).ok()?;
    (ok1 && ok2).then_some(cand)
}

fn decompose(graphs: &[VPolyhedron2], pbar: Vec2, eps: f64, w: Vec2) -> Option<(Vec<f64>, Vec<Vec2>)> {
    match graphs.len() {
        1 => enormal2_membership(&graphs[0], pbar, eps, w).ok()?.then(|| (vec![eps], vec![w])),
        _ => {
            let rest: VPolyhedron2 = graphs[1..]
                .iter()
                .skip(1)
                .try_fold(graphs[1].clone(), |acc, g| acc.intersect(g).ok())?;
            let try_eps = |e1: f64| -> Option<(Vec<f64>, Vec<Vec2>)> {
                let e2 = (eps - e1).max(0.0);
                let w1 = split_pair(&graphs[0], &rest, pbar, e1, e2, w)?;
                let (mut es, mut ws) = decompose(&graphs[1..], pbar, e2, w - w1)?;
                es.insert(0, e1);
                ws.insert(0, w1);
                Some((es, ws))
            };
            let coarse = split_grid(eps, 0.0, eps);
            if let Some(r) = coarse.iter().find_map(|e| try_eps(*e)) {
                return Some(r);
            }
            let h = eps / (SPLIT_GRID - 1) as f64;
            coarse.iter().take(4).find_map(|c| split_grid(eps, (c - h).max(0.0), (c + h).min(eps)).into_iter().find_map(&try_eps))
        }
    }
}

/// Membership of `u` in `D*_ε F(p̄)(v)` for `gph F = ⋂ gph Fi`, with a
/// decomposition over the individual graphs when it holds.
pub fn coderiv_intersection_check(graphs: &[VPolyhedron2], pbar: Vec2, eps: f64, v: f64, u: f64) -> Result<IntersectionCheck> {
    if graphs.is_empty() || graphs.len() > 3 {
        return Err(Error::InvalidArgument("between one and three graphs are supported".into()));
    }
    let inter = graphs[1..]
        .iter()
        .try_fold(graphs[0].clone(), |acc, g| acc.intersect(g))
        .map_err(|_| Error::QualificationFailed)?;
    let c = inter.ri_point();
    if !graphs.iter().all(|g| g.in_relative_interior(c, TOL_EQ)) {
        return Err(Error::QualificationFailed);
    }
    if !graphs.iter().all(|g| g.contains(pbar, TOL_EQ)) {
        return Err(Error::PointNotInSet);
    }
    let member = ecoderiv_membership(&inter, pbar, eps, v, u)?;
    let witness = decompose(graphs, pbar, eps, Vec2::new(u, -v)).map(|(es, ws)| IntersectionWitness {
        eps: es,
        u: ws.iter().map(|w| w.x).collect(),
        v: ws.iter().map(|w| -w.y).collect(),
    });
    if member && witness.is_none() {
        return Err(Error::NoSplitFound { resolution: SPLIT_GRID });
    }
    Ok(IntersectionCheck { member, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_cone() -> VPolyhedron2 {
        VPolyhedron2::new(vec![Vec2::ZERO], vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0)]).unwrap()
    }

    fn halfplane_above(slope: f64) -> VPolyhedron2 {
        VPolyhedron2::new(vec![Vec2::ZERO], vec![Vec2::new(1.0, slope), Vec2::new(-1.0, -slope), Vec2::new(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn sum_of_cones_is_steeper_cone() {
        let s = graph_sum(&abs_cone(), &abs_cone()).unwrap();
        assert!(s.contains(Vec2::new(1.0, 2.0), 1e-12));
        assert!(!s.contains(Vec2::new(1.0, 1.9), 1e-12));
    }

    #[test]
    fn cone_sum_split() {
        let c = coderiv_sum_decompose(&abs_cone(), &abs_cone(), 0.0, (0.0, 0.0), 0.0, 2.0, 1.0).unwrap();
        assert_eq!(c, CoderivSplit { eps1: 0.0, eps2: 0.0, u1: 0.5, u2: 0.5 });
        let z = coderiv_sum_decompose(&abs_cone(), &abs_cone(), 0.0, (0.0, 0.0), 0.0, 0.0, 0.0).unwrap();
        assert_eq!(z, CoderivSplit { eps1: 0.0, eps2: 0.0, u1: 0.0, u2: 0.0 });
        assert_eq!(
            coderiv_sum_decompose(&abs_cone(), &abs_cone(), 0.0, (0.0, 0.0), 0.0, 1.0, 3.0),
            Err(Error::NotInCoderivative)
        );
    }

    #[test]
    fn truncated_sum_split_with_slack() {
        let t = VPolyhedron2::new(vec![Vec2::new(-1.0, 1.0), Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)], vec![Vec2::new(0.0, 1.0)]).unwrap();
        let c = coderiv_sum_decompose(&t, &t, 0.0, (0.0, 0.0), 1.0, 1.0, 3.0).unwrap();
        assert!((c.eps1 + c.eps2 - 1.0).abs() < 1e-12);
        assert!((c.u1 + c.u2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn intersection_cases() {
        let r = coderiv_intersection_check(&[abs_cone(), abs_cone()], Vec2::ZERO, 0.0, 1.0, 0.5).unwrap();
        assert!(r.member && r.consistent());
        let w = r.witness.unwrap();
        assert_eq!(w.v, vec![0.5, 0.5]);
        let hp = [halfplane_above(1.0), halfplane_above(-1.0)];
        for (u, v) in [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0), (0.0, -1.0), (-0.3, 0.5)] {
            let r = coderiv_intersection_check(&hp, Vec2::ZERO, 0.0, v, u).unwrap();
            assert_eq!(r.member, ecoderiv_membership(&abs_cone(), Vec2::ZERO, 0.0, v, u).unwrap());
            assert!(r.consistent());
        }
        let z = coderiv_intersection_check(&hp, Vec2::ZERO, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(z.witness.unwrap().u, vec![0.0, 0.0]);
    }
}
