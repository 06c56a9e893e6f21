//! A small closed grammar of one-variable expressions.

use std::fmt;

use crate::error::{Error, Result};
use crate::tol::TOL_EVAL;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Scale(f64, Box<Expr>),
    Abs(Box<Expr>),
    Sq(Box<Expr>),
    Sqrt(Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn scale(c: f64, e: Expr) -> Expr {
        Expr::Scale(c, Box::new(e))
    }

    pub fn abs(e: Expr) -> Expr {
        Expr::Abs(Box::new(e))
    }

    pub fn sq(e: Expr) -> Expr {
        Expr::Sq(Box::new(e))
    }

    pub fn sqrt(e: Expr) -> Expr {
        Expr::Sqrt(Box::new(e))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    /// `slope * x + intercept`
    pub fn affine(slope: f64, intercept: f64) -> Expr {
        Expr::add(Expr::scale(slope, Expr::Var), Expr::Const(intercept))
    }

    /// Checked evaluation; a square root of a negative argument is an error.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Scale(c, e) => c * e.eval(x)?,
            Expr::Abs(e) => e.eval(x)?.abs(),
            Expr::Sq(e) => {
                let v = e.eval(x)?;
                v * v
            }
            Expr::Sqrt(e) => {
                let v = e.eval(x)?;
                if v < -TOL_EVAL {
                    return Err(Error::DomainError(v));
                }
                v.max(0.0).sqrt()
            }
            Expr::Neg(e) => -e.eval(x)?,
        })
    }

    /// Unchecked evaluation for hot loops: domain errors surface as NaN.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Add(a, b) => a.value(x) + b.value(x),
            Expr::Scale(c, e) => c * e.value(x),
            Expr::Abs(e) => e.value(x).abs(),
            Expr::Sq(e) => {
                let v = e.value(x);
                v * v
            }
            Expr::Sqrt(e) => {
                let v = e.value(x);
                if v < -TOL_EVAL {
                    f64::NAN
                } else {
                    v.max(0.0).sqrt()
                }
            }
            Expr::Neg(e) => -e.value(x),
        }
    }

    /// One-sided directional derivative at `x` in direction `dir` (±1),
    /// possibly infinite (e.g. `sqrt` at a zero of its argument).
    pub fn directional_derivative(&self, x: f64, dir: f64) -> f64 {
        self.dual(x, dir).1
    }

    fn dual(&self, x: f64, dir: f64) -> (f64, f64) {
        match self {
            Expr::Const(c) => (*c, 0.0),
            Expr::Var => (x, dir),
            Expr::Add(a, b) => {
                let (va, da) = a.dual(x, dir);
                let (vb, db) = b.dual(x, dir);
                (va + vb, da + db)
            }
            Expr::Scale(c, e) => {
                let (v, d) = e.dual(x, dir);
                (c * v, if *c == 0.0 { 0.0 } else { c * d })
            }
            Expr::Abs(e) => {
                let (v, d) = e.dual(x, dir);
                let dd = if v > 0.0 {
                    d
                } else if v < 0.0 {
                    -d
                } else {
                    d.abs()
                };
                (v.abs(), dd)
            }
            Expr::Sq(e) => {
                let (v, d) = e.dual(x, dir);
                (v * v, if v == 0.0 { 0.0 } else { 2.0 * v * d })
            }
            Expr::Sqrt(e) => {
                let (v, d) = e.dual(x, dir);
                if v <= 0.0 {
                    let dd = if d > 0.0 {
                        f64::INFINITY
                    } else if d == 0.0 {
                        0.0
                    } else {
                        f64::NAN
                    };
                    (0.0, dd)
                } else {
                    let s = v.sqrt();
                    (s, d / (2.0 * s))
                }
            }
            Expr::Neg(e) => {
                let (v, d) = e.dual(x, dir);
                (-v, -d)
            }
        }
    }

    /// Whether the expression is affine in `x` syntactically.
    pub fn is_affine(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => true,
            Expr::Add(a, b) => a.is_affine() && b.is_affine(),
            Expr::Scale(_, e) | Expr::Neg(e) => e.is_affine(),
            Expr::Abs(e) | Expr::Sq(e) | Expr::Sqrt(e) => e.is_constant(),
        }
    }

    /// Whether the expression is affine between the points returned by
    /// [`Expr::kinks`].
    pub fn is_piecewise_affine(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => true,
            Expr::Add(a, b) => a.is_piecewise_affine() && b.is_piecewise_affine(),
            Expr::Scale(_, e) | Expr::Neg(e) => e.is_piecewise_affine(),
            Expr::Abs(e) => e.is_affine(),
            Expr::Sq(e) | Expr::Sqrt(e) => e.is_constant(),
        }
    }

    /// Points where an `abs` of an affine argument changes sign.
    pub fn kinks(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_kinks(&mut out);
        out
    }

    fn collect_kinks(&self, out: &mut Vec<f64>) {
        match self {
            Expr::Const(_) | Expr::Var => {}
            Expr::Add(a, b) => {
                a.collect_kinks(out);
                b.collect_kinks(out);
            }
            Expr::Scale(_, e) | Expr::Neg(e) | Expr::Sq(e) | Expr::Sqrt(e) => e.collect_kinks(out),
            Expr::Abs(e) => {
                if e.is_affine() && !e.is_constant() {
                    let b = e.value(0.0);
                    let s = e.value(1.0) - b;
                    if s != 0.0 {
                        out.push(-b / s);
                    }
                }
                e.collect_kinks(out);
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Add(a, b) => a.is_constant() && b.is_constant(),
            Expr::Scale(_, e) | Expr::Neg(e) | Expr::Abs(e) | Expr::Sq(e) | Expr::Sqrt(e) => e.is_constant(),
        }
    }
}

/// Canonical infix rendering; the problem-file parser reads it back to the
/// same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => write!(f, "x"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Scale(c, e) => write!(f, "{c} * ({e})"),
            Expr::Abs(e) => write!(f, "abs({e})"),
            Expr::Sq(e) => write!(f, "({e})^2"),
            Expr::Sqrt(e) => write!(f, "sqrt({e})"),
            Expr::Neg(e) => write!(f, "-({e})"),
        }
    }
}

/// Evaluates `e` at `x` (free-function form of [`Expr::eval`]).
pub fn eval_expr(e: &Expr, x: f64) -> Result<f64> {
    e.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_evaluations() {
        assert_eq!(eval_expr(&Expr::neg(Expr::sqrt(Expr::var())), 0.25).unwrap(), -0.5);
        assert_eq!(eval_expr(&Expr::abs(Expr::var()), -2.0).unwrap(), 2.0);
        assert_eq!(eval_expr(&Expr::sq(Expr::var()), 3.0).unwrap(), 9.0);
        assert!(matches!(eval_expr(&Expr::sqrt(Expr::var()), -1.0), Err(Error::DomainError(_))));
        assert!(Expr::sqrt(Expr::var()).value(-1.0).is_nan());
    }

    #[test]
    fn one_sided_derivatives() {
        let root = Expr::neg(Expr::sqrt(Expr::var()));
        assert_eq!(root.directional_derivative(0.0, 1.0), f64::NEG_INFINITY);
        let a = Expr::abs(Expr::var());
        assert_eq!(a.directional_derivative(0.0, 1.0), 1.0);
        assert_eq!(a.directional_derivative(0.0, -1.0), 1.0);
        let q = Expr::sq(Expr::var());
        assert!((q.directional_derivative(1.5, 1.0) - 3.0).abs() < 1e-15);
        assert!((q.directional_derivative(1.5, -1.0) + 3.0).abs() < 1e-15);
        let mirrored = Expr::neg(Expr::sqrt(Expr::neg(Expr::var())));
        assert_eq!(mirrored.directional_derivative(0.0, -1.0), f64::NEG_INFINITY);
    }

    #[test]
    fn affinity() {
        assert!(Expr::affine(2.0, 1.0).is_affine());
        assert!(!Expr::abs(Expr::var()).is_affine());
        assert!(Expr::sqrt(Expr::c(4.0)).is_affine());
        let e = Expr::add(Expr::scale(1.5, Expr::abs(Expr::add(Expr::var(), Expr::c(-2.0)))), Expr::abs(Expr::var()));
        assert!(e.is_piecewise_affine());
        assert_eq!(e.kinks(), vec![2.0, 0.0]);
        assert!(!Expr::sq(Expr::var()).is_piecewise_affine());
    }
}
