//! The worked examples used throughout the tests, the acceptance harness
//! and the shipped problem files.

use crate::expr::Expr;
use crate::func::{NearlyConvexFn1D, Piece};
use crate::interval::Interval;
use crate::polyhedron::{VPolyhedron2, Vec2};
use crate::problems::{ConstrainedProblem, ParametricProblem};
use crate::separable::SeparableFn2D;

fn neg_sqrt(e: Expr) -> Expr {
    Expr::neg(Expr::sqrt(e))
}

fn unit_box(e: Expr) -> NearlyConvexFn1D {
    NearlyConvexFn1D::single(Interval::closed(-1.0, 1.0), e).expect("fixture is valid")
}

/// `-sqrt(x)` on `[0, 1)` with the value `1` at `x = 1`.
pub fn ex1() -> NearlyConvexFn1D {
    NearlyConvexFn1D::new(
        Interval::closed(0.0, 1.0),
        vec![Piece::new(Interval::new(0.0, 1.0, true, false), neg_sqrt(Expr::var()))],
        vec![(1.0, 1.0)],
    )
    .expect("fixture is valid")
}

/// `ex1` together with `-sqrt(x)` on `[0, 1]`.
pub fn sum_pair() -> (NearlyConvexFn1D, NearlyConvexFn1D) {
    let g = NearlyConvexFn1D::single(Interval::closed(0.0, 1.0), neg_sqrt(Expr::var())).expect("fixture is valid");
    (ex1(), g)
}

/// `-sqrt(x)` on `[0, 1]` and `-sqrt(-x)` on `[-1, 0]`, whose domains only
/// touch at the origin.
pub fn counterexample() -> (NearlyConvexFn1D, NearlyConvexFn1D) {
    let a = NearlyConvexFn1D::single(Interval::closed(0.0, 1.0), neg_sqrt(Expr::var())).expect("fixture is valid");
    let b = NearlyConvexFn1D::single(Interval::closed(-1.0, 0.0), neg_sqrt(Expr::neg(Expr::var()))).expect("fixture is valid");
    (a, b)
}

/// `|x|` on `[-1, 1)` with the value `2` at `x = 1`, minimized over `[0, ∞)`.
pub fn opt_example() -> ConstrainedProblem {
    let phi = NearlyConvexFn1D::new(
        Interval::closed(-1.0, 1.0),
        vec![Piece::new(Interval::new(-1.0, 1.0, true, false), Expr::abs(Expr::var()))],
        vec![(1.0, 2.0)],
    )
    .expect("fixture is valid");
    ConstrainedProblem::new(phi, Interval::new(0.0, f64::INFINITY, true, false)).expect("fixture is valid")
}

fn removed_corner() -> Vec<(Vec2, f64)> {
    vec![(Vec2::new(0.5, 1.0), f64::INFINITY)]
}

/// `x² + y²` on `[-1, 1]²` without the point `(1/2, 1)`, no constraint.
pub fn sens_quadratic() -> ParametricProblem {
    let f = SeparableFn2D::new(unit_box(Expr::sq(Expr::var())), unit_box(Expr::sq(Expr::var())), removed_corner()).expect("fixture is valid");
    ParametricProblem::new(f, None).expect("fixture is valid")
}

/// `|x|/2 + 3|y|/2` on `[-1, 1]²` without the point `(1/2, 1)`, subject to
/// `y ≥ |x|`.
pub fn sens_cone() -> ParametricProblem {
    let f = SeparableFn2D::new(
        unit_box(Expr::scale(0.5, Expr::abs(Expr::var()))),
        unit_box(Expr::scale(1.5, Expr::abs(Expr::var()))),
        removed_corner(),
    )
    .expect("fixture is valid");
    ParametricProblem::new(f, Some(abs_cone())).expect("fixture is valid")
}

/// Graph of `x ↦ { y : y ≥ |x| }`.
pub fn abs_cone() -> VPolyhedron2 {
    VPolyhedron2::new(vec![Vec2::ZERO], vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0)]).expect("fixture is valid")
}

/// Graph of `x ↦ { y : y ≥ slope · x }`.
pub fn halfplane_above(slope: f64) -> VPolyhedron2 {
    VPolyhedron2::new(vec![Vec2::ZERO], vec![Vec2::new(1.0, slope), Vec2::new(-1.0, -slope), Vec2::new(0.0, 1.0)]).expect("fixture is valid")
}

/// Graph of `x ↦ { y : y ≥ max(2x, -x) }`.
pub fn skew_cone() -> VPolyhedron2 {
    VPolyhedron2::new(vec![Vec2::ZERO], vec![Vec2::new(1.0, 2.0), Vec2::new(-1.0, 1.0)]).expect("fixture is valid")
}

/// Epigraph of `|x|` truncated to `[-1, 1]`.
pub fn truncated_cone() -> VPolyhedron2 {
    VPolyhedron2::new(vec![Vec2::new(-1.0, 1.0), Vec2::ZERO, Vec2::new(1.0, 1.0)], vec![Vec2::new(0.0, 1.0)]).expect("fixture is valid")
}

/// The cone graphs used by the coderivative checks.
pub fn cone_graphs() -> Vec<(&'static str, VPolyhedron2)> {
    vec![
        ("abs_cone", abs_cone()),
        ("skew_cone", skew_cone()),
        ("truncated_cone", truncated_cone()),
        ("above_x", halfplane_above(1.0)),
        ("above_neg_x", halfplane_above(-1.0)),
    ]
}
