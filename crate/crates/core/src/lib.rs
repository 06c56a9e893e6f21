//! Approximate (ε-) subdifferentials, ε-normal sets and ε-coderivatives of
//! nearly convex functions and sets on the line and in the plane, the
//! calculus rules relating them, ε-optimality certificates and sensitivity
//! of optimal value functions. Every analytic routine has a brute-force
//! counterpart used for cross-checking.

pub mod calculus;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod ext_real;
pub mod func;
pub mod interval;
pub mod polyhedron;
pub mod problems;
pub mod search;
pub mod separable;
pub mod suite;
pub mod tol;

pub use error::{Error, Result};
pub use expr::{eval_expr, Expr};
pub use ext_real::ExtReal;
pub use func::{NearlyConvexFn1D, Piece, ValidationReport};
pub use interval::{relative_interior_interval, ri_intersect_nonempty, Interval, IntervalSet};
pub use polyhedron::{support_polyhedron, HalfPlane, VPolyhedron2, Vec2};
pub use separable::SeparableFn2D;
