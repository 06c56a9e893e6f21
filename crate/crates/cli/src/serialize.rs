//! Canonical text form of problem files. Parsing the output reproduces the
//! same objects.

use std::fmt::Write;

use ncx_core::{Expr, Interval, NearlyConvexFn1D};

use crate::model::{ParametricDef, ProblemFile, SetDef};

/// Shortest decimal that parses back to `v`, with `inf`/`-inf`.
pub fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

pub fn interval_source(i: &Interval) -> String {
    format!("{}{},{}{}", if i.lo_closed { '[' } else { '(' }, num(i.lo), num(i.hi), if i.hi_closed { ']' } else { ')' })
}

/// Fully parenthesized infix form of an expression.
pub fn expr_source(e: &Expr) -> String {
    match e {
        Expr::Const(c) => num(*c),
        Expr::Var => "x".into(),
        Expr::Add(a, b) => format!("({} + {})", expr_source(a), expr_source(b)),
        Expr::Scale(c, a) => format!("({} * {})", num(*c), expr_source(a)),
        Expr::Abs(a) => format!("abs({})", expr_source(a)),
        Expr::Sq(a) => format!("({})^2", expr_source(a)),
        Expr::Sqrt(a) => format!("sqrt({})", expr_source(a)),
        Expr::Neg(a) => format!("-({})", expr_source(a)),
    }
}

fn write_function(out: &mut String, name: &str, f: &NearlyConvexFn1D) {
    let _ = writeln!(out, "function {name}");
    let _ = writeln!(out, "domain {}", interval_source(&f.domain()));
    for p in f.pieces() {
        let _ = writeln!(out, "on {}: {}", interval_source(&p.interval), expr_source(&p.expr));
    }
    for (x, v) in f.overrides() {
        let _ = writeln!(out, "at {}: {}", num(*x), num(*v));
    }
}

fn write_set(out: &mut String, name: &str, s: &SetDef) {
    let _ = writeln!(out, "set {name}");
    match s {
        SetDef::Interval(i) => {
            let _ = writeln!(out, "interval {}", interval_source(i));
        }
        SetDef::Polyhedron(p) => {
            let _ = writeln!(out, "polyhedron");
            for v in p.vertices() {
                let _ = writeln!(out, "vertex {} {}", num(v.x), num(v.y));
            }
            for r in p.rays() {
                let _ = writeln!(out, "ray {} {}", num(r.x), num(r.y));
            }
        }
    }
}

fn write_parametric(out: &mut String, name: &str, p: &ParametricDef) {
    let _ = writeln!(out, "parametric {name}");
    let _ = writeln!(out, "f1 {}", p.f1);
    let _ = writeln!(out, "f2 {}", p.f2);
    if let Some(g) = &p.graph {
        let _ = writeln!(out, "graph {g}");
    }
    for (q, v) in &p.overrides {
        let _ = writeln!(out, "override {} {}: {}", num(q.x), num(q.y), num(*v));
    }
}

pub fn serialize_problem_file(file: &ProblemFile) -> String {
    let mut out = String::new();
    let mut blocks = Vec::new();
    for (n, f) in &file.functions {
        let mut b = String::new();
        write_function(&mut b, n, f);
        blocks.push(b);
    }
    for (n, s) in &file.sets {
        let mut b = String::new();
        write_set(&mut b, n, s);
        blocks.push(b);
    }
    for (n, p) in &file.parametrics {
        let mut b = String::new();
        write_parametric(&mut b, n, p);
        blocks.push(b);
    }
    out.push_str(&blocks.join("\n"));
    out
}
