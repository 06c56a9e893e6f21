//! Planar polyhedra in vertex/ray form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::interval::Interval;
use crate::tol::{TOL_EQ, TOL_EVAL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counter-clockwise rotation by a right angle.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn near(self, o: Vec2, tol: f64) -> bool {
        (self.x - o.x).abs() <= tol * (1.0 + self.x.abs().max(o.x.abs()))
            && (self.y - o.y).abs() <= tol * (1.0 + self.y.abs().max(o.y.abs()))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The closed half-plane `<a, p> <= c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub a: Vec2,
    pub c: f64,
}

impl HalfPlane {
    pub fn new(a: Vec2, c: f64) -> Self {
        HalfPlane { a, c }
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        self.a.dot(p) <= self.c + tol * (1.0 + self.c.abs())
    }
}

/// `conv(vertices) + cone(rays)` in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolyhedron2 {
    vertices: Vec<Vec2>,
    rays: Vec<Vec2>,
}

fn ray_is_new(rays: &[Vec2], r: Vec2) -> bool {
    let u = r.normalized();
    !rays.iter().any(|q| q.normalized().near(u, TOL_EVAL))
}

impl VPolyhedron2 {
    pub fn new(vertices: Vec<Vec2>, rays: Vec<Vec2>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPolyhedron("no vertices".into()));
        }
        if vertices.iter().chain(rays.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPolyhedron("non-finite coordinate".into()));
        }
        if rays.iter().any(|r| r.norm() == 0.0) {
            return Err(Error::InvalidPolyhedron("zero ray".into()));
        }
        let mut vs: Vec<Vec2> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if !vs.iter().any(|w| w.near(v, TOL_EVAL)) {
                vs.push(v);
            }
        }
        let mut rs: Vec<Vec2> = Vec::with_capacity(rays.len());
        for r in rays {
            if ray_is_new(&rs, r) {
                rs.push(r);
            }
        }
        Ok(VPolyhedron2 { vertices: vs, rays: rs })
    }

    pub fn point(p: Vec2) -> Self {
        VPolyhedron2 { vertices: vec![p], rays: vec![] }
    }

    /// Axis-aligned box `[x0,x1] x [y0,y1]`.
    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        VPolyhedron2::new(
            vec![Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)],
            vec![],
        )
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec2] {
        &self.rays
    }

    /// `sup { <w,p> : p in P }`.
    pub fn support(&self, w: Vec2) -> ExtReal {
        let wn = w.norm();
        for r in &self.rays {
            if w.dot(*r) > TOL_EVAL * wn * r.norm() {
                return ExtReal::PosInf;
            }
        }
        let m = self.vertices.iter().map(|v| w.dot(*v)).fold(f64::NEG_INFINITY, f64::max);
        ExtReal::Finite(m)
    }

    /// Candidate normal directions: every facet normal of the set is among them.
    fn candidate_normals(&self) -> Vec<Vec2> {
        let mut dirs: Vec<Vec2> = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.0, -1.0),
        ];
        let mut gens: Vec<Vec2> = self.rays.clone();
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                let d = self.vertices[j] - self.vertices[i];
                if d.norm() > 0.0 {
                    gens.push(d);
                }
            }
        }
        for d in gens {
            let u = d.normalized();
            for c in [u.perp(), -u.perp(), u, -u] {
                if ray_is_new(&dirs, c) {
                    dirs.push(c);
                }
            }
        }
        dirs
    }

    /// A half-plane description of the same set (unit normals).
    pub fn constraints(&self) -> Vec<HalfPlane> {
        self.candidate_normals()
            .into_iter()
            .filter_map(|w| self.support(w).finite().map(|c| HalfPlane::new(w, c)))
            .collect()
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        self.constraints().iter().all(|h| h.contains(p, tol))
    }

    /// `{ y : (x0, y) in P }`.
    pub fn slice_x(&self, x0: f64) -> Interval {
        slice(&self.constraints(), x0, true)
    }

    /// `{ x : (x, y0) in P }`.
    pub fn slice_y(&self, y0: f64) -> Interval {
        slice(&self.constraints(), y0, false)
    }

    /// Projection onto the first coordinate.
    pub fn x_range(&self) -> Interval {
        let hi = self.support(Vec2::new(1.0, 0.0)).to_f64();
        let lo = -self.support(Vec2::new(-1.0, 0.0)).to_f64();
        Interval::new(lo, hi, true, true)
    }

    /// A point of the relative interior.
    pub fn ri_point(&self) -> Vec2 {
        let n = self.vertices.len() as f64;
        let mut c = Vec2::ZERO;
        for v in &self.vertices {
            c = c + (1.0 / n) * *v;
        }
        for r in &self.rays {
            c = c + r.normalized();
        }
        c
    }

    pub fn in_relative_interior(&self, p: Vec2, tol: f64) -> bool {
        let cons = self.constraints();
        cons.iter().all(|h| {
            let slack = h.c - h.a.dot(p);
            if slack < -tol * (1.0 + h.c.abs()) {
                return false;
            }
            if slack > tol * (1.0 + h.c.abs()) {
                return true;
            }
            match self.support(-h.a) {
                ExtReal::Finite(s) => (-s - h.c).abs() <= tol * (1.0 + h.c.abs()),
                _ => false,
            }
        })
    }

    /// Rebuilds vertex/ray form from half-planes.
    pub fn from_halfplanes(hs: &[HalfPlane]) -> Result<Self> {
        let feasible = |p: Vec2| hs.iter().all(|h| h.contains(p, TOL_EQ));
        let mut verts = Vec::new();
        for i in 0..hs.len() {
            for j in (i + 1)..hs.len() {
                let (a, b) = (hs[i], hs[j]);
                let det = a.a.x * b.a.y - a.a.y * b.a.x;
                if det.abs() <= TOL_EVAL * a.a.norm() * b.a.norm() {
                    continue;
                }
                let p = Vec2::new((a.c * b.a.y - b.c * a.a.y) / det, (a.a.x * b.c - b.a.x * a.c) / det);
                if feasible(p) {
                    verts.push(p);
                }
            }
        }
        if verts.is_empty() {
            let mut cands = vec![Vec2::ZERO];
            for h in hs {
                let n2 = h.a.dot(h.a);
                if n2 > 0.0 {
                    cands.push((h.c / n2) * h.a);
                }
            }
            if let Some(p) = cands.into_iter().find(|p| feasible(*p)) {
                verts.push(p);
            }
        }
        if verts.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut dirs = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.0, -1.0),
        ];
        for h in hs {
            let u = h.a.normalized();
            dirs.extend([u.perp(), -u.perp(), u, -u]);
        }
        let rays: Vec<Vec2> = dirs
            .into_iter()
            .filter(|d| hs.iter().all(|h| h.a.dot(*d) <= TOL_EVAL * h.a.norm()))
            .collect();
        VPolyhedron2::new(verts, rays)
    }

    pub fn intersect(&self, other: &VPolyhedron2) -> Result<Self> {
        let mut hs = self.constraints();
        hs.extend(other.constraints());
        VPolyhedron2::from_halfplanes(&hs)
    }

    pub fn minkowski_sum(&self, other: &VPolyhedron2) -> Self {
        let mut vs = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                vs.push(*a + *b);
            }
        }
        let mut rs = self.rays.clone();
        rs.extend(other.rays.iter().copied());
        VPolyhedron2::new(vs, rs).expect("sum of valid polyhedra is valid")
    }

    /// Translate by `t`.
    pub fn shifted(&self, t: Vec2) -> Self {
        VPolyhedron2 {
            vertices: self.vertices.iter().map(|v| *v + t).collect(),
            rays: self.rays.clone(),
        }
    }

    /// The recession cone as a polyhedron with apex at the origin.
    pub fn recession_cone(&self) -> Self {
        VPolyhedron2 { vertices: vec![Vec2::ZERO], rays: self.rays.clone() }
    }
}

fn slice(hs: &[HalfPlane], t: f64, fix_x: bool) -> Interval {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for h in hs {
        let (fixed, free) = if fix_x { (h.a.x, h.a.y) } else { (h.a.y, h.a.x) };
        let rhs = h.c - fixed * t;
        if free.abs() <= TOL_EVAL {
            if rhs < -TOL_EQ * (1.0 + h.c.abs()) {
                return Interval::EMPTY;
            }
            continue;
        }
        let bound = rhs / free;
        if free > 0.0 {
            hi = hi.min(bound);
        } else {
            lo = lo.max(bound);
        }
    }
    if lo > hi {
        if lo - hi <= TOL_EQ * (1.0 + lo.abs()) {
            let m = 0.5 * (lo + hi);
            return Interval::point(m);
        }
        return Interval::EMPTY;
    }
    Interval::new(lo, hi, true, true)
}

/// Free-function form of [`VPolyhedron2::support`].
pub fn support_polyhedron(p: &VPolyhedron2, w: Vec2) -> ExtReal {
    p.support(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abs_cone() -> VPolyhedron2 {
        VPolyhedron2::new(vec![Vec2::ZERO], vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0)]).unwrap()
    }

    fn square() -> VPolyhedron2 {
        VPolyhedron2::rect(-1.0, 1.0, -1.0, 1.0).unwrap()
    }

    #[test]
    fn support_examples() {
        assert_eq!(support_polyhedron(&square(), Vec2::new(1.0, 0.0)), ExtReal::Finite(1.0));
        assert_eq!(abs_cone().support(Vec2::new(0.0, -1.0)), ExtReal::Finite(0.0));
        assert_eq!(abs_cone().support(Vec2::new(0.0, 1.0)), ExtReal::PosInf);
    }

    #[test]
    fn membership_and_slices() {
        let c = abs_cone();
        assert!(c.contains(Vec2::new(0.5, 0.5), 1e-12));
        assert!(c.contains(Vec2::new(-2.0, 3.0), 1e-12));
        assert!(!c.contains(Vec2::new(1.0, 0.5), 1e-12));
        let s = c.slice_x(0.5);
        assert_eq!((s.lo, s.hi), (0.5, f64::INFINITY));
        let sy = c.slice_y(2.0);
        assert_eq!((sy.lo, sy.hi), (-2.0, 2.0));
        assert!(c.slice_y(-1.0).is_empty());
        assert_eq!(c.x_range(), Interval::real_line());
    }

    #[test]
    fn halfplane_intersection_gives_abs_cone() {
        let up = VPolyhedron2::new(
            vec![Vec2::ZERO],
            vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, -1.0), Vec2::new(-1.0, 1.0)],
        )
        .unwrap();
        let down = VPolyhedron2::new(
            vec![Vec2::ZERO],
            vec![Vec2::new(1.0, -1.0), Vec2::new(-1.0, 1.0), Vec2::new(1.0, 1.0)],
        )
        .unwrap();
        let both = up.intersect(&down).unwrap();
        let c = abs_cone();
        for i in -10..=10 {
            for j in -10..=10 {
                let p = Vec2::new(i as f64 * 0.3, j as f64 * 0.3);
                assert_eq!(both.contains(p, 1e-9), c.contains(p, 1e-9), "{p}");
            }
        }
    }

    #[test]
    fn relative_interior() {
        let seg = VPolyhedron2::new(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)], vec![]).unwrap();
        assert!(seg.in_relative_interior(Vec2::new(0.5, 0.5), 1e-12));
        assert!(!seg.in_relative_interior(Vec2::new(1.0, 1.0), 1e-12));
        assert!(square().in_relative_interior(square().ri_point(), 1e-12));
        assert!(abs_cone().in_relative_interior(abs_cone().ri_point(), 1e-12));
    }

    #[test]
    fn minkowski_of_square_and_cone() {
        let s = square().minkowski_sum(&abs_cone());
        assert!(s.contains(Vec2::new(0.0, -1.0), 1e-12));
        assert!(!s.contains(Vec2::new(0.0, -1.5), 1e-12));
        assert_eq!(s.support(Vec2::new(1.0, -1.0)), ExtReal::Finite(2.0));
    }

    fn arb_poly() -> impl Strategy<Value = VPolyhedron2> {
        let v = (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| Vec2::new(x, y));
        let r = (-1.0..1.0f64, -1.0..1.0f64)
            .prop_filter("nonzero", |(x, y)| x.abs() + y.abs() > 1e-3)
            .prop_map(|(x, y)| Vec2::new(x, y));
        (prop::collection::vec(v, 1..6), prop::collection::vec(r, 0..3))
            .prop_map(|(vs, rs)| VPolyhedron2::new(vs, rs).unwrap())
    }

    proptest! {
        #[test]
        fn support_is_positively_homogeneous(p in arb_poly(), wx in -3.0..3.0f64, wy in -3.0..3.0f64, t in 0.01..50.0f64) {
            let w = Vec2::new(wx, wy);
            match (p.support(w), p.support(t * w)) {
                (ExtReal::Finite(a), ExtReal::Finite(b)) => prop_assert!((b - t * a).abs() <= 1e-12 * (1.0 + (t * a).abs())),
                (a, b) => prop_assert_eq!(a, b),
            }
        }

        #[test]
        fn support_is_subadditive(p in arb_poly(), a in (-3.0..3.0f64, -3.0..3.0f64), b in (-3.0..3.0f64, -3.0..3.0f64)) {
            let (w1, w2) = (Vec2::new(a.0, a.1), Vec2::new(b.0, b.1));
            if let (ExtReal::Finite(s1), ExtReal::Finite(s2), ExtReal::Finite(s)) = (p.support(w1), p.support(w2), p.support(w1 + w2)) {
                prop_assert!(s <= s1 + s2 + 1e-12 * (1.0 + s1.abs() + s2.abs()));
            }
        }

        #[test]
        fn sampled_points_respect_support(p in arb_poly(), wx in -3.0..3.0f64, wy in -3.0..3.0f64, seeds in prop::collection::vec((0.0..1.0f64, 0.0..4.0f64), 1..8)) {
            let w = Vec2::new(wx, wy);
            if let ExtReal::Finite(s) = p.support(w) {
                let n = p.vertices().len();
                for (k, (a, t)) in seeds.iter().enumerate() {
                    let i = k % n;
                    let j = (k + 1) % n;
                    let mut q = p.vertices()[i] + *a * (p.vertices()[j] - p.vertices()[i]);
                    for r in p.rays() {
                        q = q + *t * *r;
                    }
                    prop_assert!(w.dot(q) <= s + 1e-9);
                    prop_assert!(p.contains(q, 1e-9));
                }
            }
        }
    }
}
