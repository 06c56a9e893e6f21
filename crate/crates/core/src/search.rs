//! One-dimensional search kernels.

use crate::tol::{TERNARY_ITERS, TERNARY_WIDTH};

/// Maximizes a concave `g` on `[a, b]` by ternary search.
///
/// Returns `(argmax, max)`. Equal probe values shrink from both sides, which
/// keeps plateaus from stalling the search. Non-finite probes are treated as
/// `-inf`.
pub fn ternary_max<F: Fn(f64) -> f64>(g: F, a: f64, b: f64) -> (f64, f64) {
    let val = |x: f64| {
        let v = g(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let (mut lo, mut hi) = (a, b);
    for _ in 0..TERNARY_ITERS {
        if hi - lo <= TERNARY_WIDTH * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let (v1, v2) = (val(m1), val(m2));
        if v1 < v2 {
            lo = m1;
        } else if v1 > v2 {
            hi = m2;
        } else {
            lo = m1;
            hi = m2;
        }
    }
    let mut best = (0.5 * (lo + hi), val(0.5 * (lo + hi)));
    for x in [a, b, lo, hi] {
        let v = val(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Minimizes a convex `g` on `[a, b]` by ternary search.
pub fn ternary_min<F: Fn(f64) -> f64>(g: F, a: f64, b: f64) -> (f64, f64) {
    let (x, v) = ternary_max(
        |t| {
            let v = g(t);
            if v.is_nan() {
                f64::NEG_INFINITY
            } else {
                -v
            }
        },
        a,
        b,
    );
    (x, -v)
}

/// Golden-section minimization of a unimodal `g` on `[a, b]` to width `tol`.
pub fn golden_min<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        }
        iters += 1;
    }
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let v = g(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// Bisection on a predicate with `pred(inside) == true` and
/// `pred(outside) == false`; returns the last point known to satisfy it.
pub fn bisect_boundary<P: Fn(f64) -> bool>(pred: P, inside: f64, outside: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (inside, outside);
    for _ in 0..400 {
        if (b - a).abs() <= tol * (1.0 + a.abs().min(b.abs())) {
            break;
        }
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if pred(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}
