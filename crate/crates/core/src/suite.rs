//! Randomized invariant suites over a fixed-seed catalog of nearly convex
//! functions. Every suite is deterministic and reports one [`CheckResult`].

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{
    coderiv_intersection_check, coderiv_sum_decompose, ecoderiv_membership, enormal_interval, epi_membership_check, esub_interval, esub_limit,
    esub_membership, graph_sum, oracle_esub_interval, oracle_membership, scalar_rule, sum_rule_decompose, EtaLadder,
};
use crate::error::Error;
use crate::expr::Expr;
use crate::ext_real::ExtReal;
use crate::fixtures;
use crate::func::{NearlyConvexFn1D, Piece};
use crate::interval::{Interval, IntervalSet};
use crate::polyhedron::Vec2;
use crate::problems::{
    is_eps_solution, optimality_certificate, sensitivity_constrained, sensitivity_exact, sensitivity_unconstrained,
    value_function, value_function_esub_direct, ConstrainedProblem, SensitivityConfig,
};
use crate::tol::TOL_EQ;

pub const SUITE_SEED: u64 = 20_240_917;
pub const SUITE_SIZE: usize = 100;

/// Grid sizes used by the oracle suite.
pub const SUITE_X_GRID: usize = 2001;
pub const SUITE_XI_GRID: usize = 401;

#[derive(Debug, Clone)]
pub struct CatalogFn {
    pub label: String,
    pub f: NearlyConvexFn1D,
}

fn add(a: Expr, b: Expr) -> Expr {
    Expr::add(a, b)
}

fn shifted(c: f64) -> Expr {
    add(Expr::var(), Expr::c(-c))
}

fn random_fn(rng: &mut ChaCha8Rng, kind: usize) -> CatalogFn {
    let lo = rng.gen_range(-3.0..-0.5);
    let hi = rng.gen_range(0.5..3.0);
    let dom = Interval::closed(lo, hi);
    let b = rng.gen_range(-1.0..1.0);
    let (label, pieces) = match kind {
        0 => {
            let a = rng.gen_range(0.05..0.5);
            let c = rng.gen_range(lo..hi);
            let e = add(Expr::scale(a, Expr::sq(shifted(c))), Expr::scale(b, Expr::var()));
            (format!("quadratic a={a:.3} c={c:.3} b={b:.3}"), vec![Piece::new(dom, e)])
        }
        1 => {
            let s = rng.gen_range(0.1..2.0);
            let c = rng.gen_range(lo..hi);
            let e = add(Expr::scale(s, Expr::abs(shifted(c))), Expr::scale(b, Expr::var()));
            (format!("abs s={s:.3} c={c:.3} b={b:.3}"), vec![Piece::new(dom, e)])
        }
        2 => {
            let c = rng.gen_range(0.2..1.5);
            let e = add(Expr::scale(-c, Expr::sqrt(shifted(lo))), Expr::scale(b, Expr::var()));
            (format!("sqrt c={c:.3} b={b:.3}"), vec![Piece::new(dom, e)])
        }
        _ => {
            let k = rng.gen_range(lo + 0.2..hi - 0.2);
            let s1 = rng.gen_range(-2.0..1.0);
            let s2 = s1 + rng.gen_range(0.0..2.0);
            let a = rng.gen_range(0.0..0.5);
            let v = rng.gen_range(-1.0..1.0);
            let left = Expr::affine(s1, v - s1 * k);
            let right = add(Expr::scale(a, Expr::sq(shifted(k))), Expr::affine(s2, v - s2 * k));
            let pieces = vec![Piece::new(Interval::new(lo, k, true, false), left), Piece::new(Interval::closed(k, hi), right)];
            (format!("two-piece k={k:.3} s1={s1:.3} s2={s2:.3} a={a:.3}"), pieces)
        }
    };
    let base = NearlyConvexFn1D::new(dom, pieces.clone(), vec![]).expect("catalog function is valid");
    let mut overrides = Vec::new();
    if rng.gen_bool(0.3) {
        let x = if rng.gen_bool(0.5) { lo } else { hi };
        overrides.push((x, base.evaluate(x).to_f64() + rng.gen_range(0.1..1.0)));
    }
    let tag = if overrides.is_empty() { String::new() } else { format!(" override@{:.3}", overrides[0].0) };
    let f = NearlyConvexFn1D::new(dom, pieces, overrides).expect("catalog function is valid");
    CatalogFn { label: format!("[{lo:.3},{hi:.3}] {label}{tag}"), f }
}

/// `n` catalog functions drawn with a ChaCha8 generator seeded by `seed`.
pub fn catalog(seed: u64, n: usize) -> Vec<CatalogFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| random_fn(&mut rng, i % 4)).collect()
}

/// Points of the domain: both endpoints and three interior points.
fn test_points(f: &NearlyConvexFn1D) -> Vec<f64> {
    let d = f.domain();
    let mut xs = vec![d.lo];
    xs.extend(interior_points(f));
    xs.push(d.hi);
    xs
}

fn interior_points(f: &NearlyConvexFn1D) -> Vec<f64> {
    let d = f.domain();
    [0.25, 0.5, 0.8].iter().map(|t| d.lo + t * (d.hi - d.lo)).collect()
}

/// Outcome of one invariant suite.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed deviation, where meaningful.
    pub worst: f64,
    /// First failing case.
    pub detail: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<28} cases={:<6} failures={:<4} worst={:.3e}", self.name, self.cases, self.failures, self.worst)?;
        if !self.detail.is_empty() {
            write!(f, " first_failure={}", self.detail)?;
        }
        Ok(())
    }
}

struct Tally {
    r: CheckResult,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { r: CheckResult { name, cases: 0, failures: 0, worst: 0.0, detail: String::new() } }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.r.cases += 1;
        if !ok {
            self.r.failures += 1;
            if self.r.detail.is_empty() {
                self.r.detail = what();
            }
        }
    }

    fn worst(&mut self, d: f64) {
        if d.is_finite() && d > self.r.worst {
            self.r.worst = d;
        }
    }

    fn done(self) -> CheckResult {
        self.r
    }
}

const EPS_LADDER: [f64; 5] = [0.0, 0.1, 0.5, 1.0, 2.0];

pub fn eps_monotonicity(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("eps_monotonicity");
    for c in cat {
        for x in test_points(&c.f) {
            let sets: Vec<_> = EPS_LADDER.iter().map(|e| esub_interval(&c.f, x, *e)).collect();
            for (i, w) in sets.windows(2).enumerate() {
                let ok = matches!((&w[0], &w[1]), (Ok(a), Ok(b)) if a.subset_of(b, TOL_EQ));
                t.check(ok, || format!("{} x={x:.4} eps={}", c.label, EPS_LADDER[i + 1]));
            }
        }
    }
    t.done()
}

pub fn nonemptiness(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("nonempty_on_ri");
    for c in cat {
        for x in interior_points(&c.f) {
            for eps in [0.01, 0.1, 1.0] {
                let ok = esub_interval(&c.f, x, eps).is_ok_and(|s| !s.is_empty());
                t.check(ok, || format!("{} x={x:.4} eps={eps}", c.label));
            }
        }
    }
    t.done()
}

/// Slope window around the analytic set, wide enough to see both ends.
fn oracle_window(s: &IntervalSet) -> Interval {
    let (lo, hi) = match (s.lo().is_finite(), s.hi().is_finite()) {
        (true, true) => (s.lo() - 1.0, s.hi() + 1.0),
        (true, false) => (s.lo() - 1.0, s.lo() + 10.0),
        (false, true) => (s.hi() - 10.0, s.hi() + 1.0),
        (false, false) => (-10.0, 10.0),
    };
    Interval::closed(lo, hi)
}

pub fn oracle_agreement(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("oracle_vs_analytic");
    for c in cat {
        let d = c.f.domain();
        for x in [d.lo, 0.5 * (d.lo + d.hi)] {
            for eps in [0.1, 1.0] {
                let Ok(s) = esub_interval(&c.f, x, eps) else {
                    t.check(false, || format!("{} x={x:.4} eps={eps} analytic error", c.label));
                    continue;
                };
                let w = oracle_window(&s);
                let Ok(o) = oracle_esub_interval(&c.f, x, eps, SUITE_X_GRID, w, SUITE_XI_GRID) else {
                    t.check(false, || format!("{} x={x:.4} eps={eps} oracle error", c.label));
                    continue;
                };
                let tol = 3.0 * o.step;
                let end_ok = |analytic: f64, oracle: f64, clipped: bool| {
                    if analytic.is_finite() {
                        !clipped && (analytic - oracle).abs() <= tol
                    } else {
                        clipped
                    }
                };
                if s.lo().is_finite() && !o.set.is_empty() {
                    t.worst((s.lo() - o.set.lo()).abs());
                }
                if s.hi().is_finite() && !o.set.is_empty() {
                    t.worst((s.hi() - o.set.hi()).abs());
                }
                if s.is_empty() {
                    t.check(o.set.is_empty(), || format!("{} x={x:.4} eps={eps} analytic=empty oracle={}", c.label, o.set));
                    continue;
                }
                let ok = !o.set.is_empty() && o.contiguous && end_ok(s.lo(), o.set.lo(), o.clipped_lo) && end_ok(s.hi(), o.set.hi(), o.clipped_hi);
                t.check(ok, || format!("{} x={x:.4} eps={eps} analytic={s} oracle={}", c.label, o.set));
            }
        }
    }
    t.done()
}

pub fn scalar_rule_equality(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("scalar_rule");
    for c in cat {
        for x in test_points(&c.f) {
            for lambda in [0.5, 2.0, 3.0] {
                for eps in [0.0, 0.3, 1.0] {
                    let lhs = c.f.scale(lambda).and_then(|g| esub_interval(&g, x, eps));
                    let rhs = scalar_rule(&c.f, lambda, x, eps);
                    let ok = match (&lhs, &rhs) {
                        (Ok(a), Ok(b)) => {
                            t.worst(a.endpoint_distance(b));
                            a.approx_eq(b, 1e-8)
                        }
                        _ => false,
                    };
                    t.check(ok, || format!("{} x={x:.4} lambda={lambda} eps={eps} {lhs:?} {rhs:?}", c.label));
                }
            }
        }
    }
    t.done()
}

pub fn epigraph_bridge(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("epigraph_bridge");
    for c in cat {
        for x in test_points(&c.f) {
            for eps in [0.0, 0.2, 1.0] {
                for k in 0..=20 {
                    let u = -5.0 + 0.5 * k as f64;
                    let a = epi_membership_check(&c.f, x, eps, u);
                    let b = esub_membership(&c.f, x, eps, u);
                    t.check(a.is_ok() && a == b, || format!("{} x={x:.4} eps={eps} u={u}", c.label));
                }
            }
        }
    }
    t.done()
}

pub fn indicator_bridge(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("indicator_bridge");
    for c in cat {
        let d = c.f.domain();
        let sets = [
            d,
            Interval::new(d.lo, f64::INFINITY, true, false),
            Interval::new(f64::NEG_INFINITY, d.hi, false, true),
            Interval::point(d.lo),
        ];
        for omega in sets {
            let ind = NearlyConvexFn1D::indicator(omega).expect("interval is nonempty");
            for x in [d.lo, 0.5 * (d.lo + d.hi), d.hi].into_iter().filter(|x| omega.contains(*x)) {
                for eps in [0.0, 0.3, 2.0] {
                    let (a, b) = (enormal_interval(&omega, x, eps), esub_interval(&ind, x, eps));
                    let ok = match (&a, &b) {
                        (Ok(a), Ok(b)) => {
                            t.worst(a.endpoint_distance(b));
                            a.approx_eq(b, TOL_EQ)
                        }
                        _ => false,
                    };
                    t.check(ok, || format!("omega={omega} x={x:.4} eps={eps} {a:?} {b:?}"));
                }
            }
        }
    }
    t.done()
}

pub fn fenchel_young(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("fenchel_young");
    for c in cat {
        let d = c.f.domain();
        for i in 0..=20 {
            let x = d.lo + (d.hi - d.lo) * i as f64 / 20.0;
            let Some(fx) = c.f.evaluate(x).finite() else { continue };
            for k in 0..=20 {
                let xi = -5.0 + 0.5 * k as f64;
                let gap = c.f.conjugate(xi) + ExtReal::Finite(fx - xi * x);
                let g = gap.to_f64();
                t.worst((-g).max(0.0));
                t.check(g >= -1e-8, || format!("{} x={x:.4} xi={xi} gap={g:e}", c.label));
            }
        }
    }
    t.done()
}

/// `[f'_-(x̄), f'_+(x̄)]` with missing one-sided derivatives read as unbounded.
fn exact_subdifferential(f: &NearlyConvexFn1D, x: f64) -> IntervalSet {
    let lo = f.left_derivative(x).unwrap_or(f64::NEG_INFINITY);
    let hi = f.right_derivative(x).unwrap_or(f64::INFINITY);
    IntervalSet::new(lo, hi)
}

pub fn ladder_convergence(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("ladder_convergence");
    let ladder = EtaLadder::default();
    for c in cat {
        for x in interior_points(&c.f) {
            let Ok(lim) = esub_limit(&c.f, x, &ladder) else {
                t.check(false, || format!("{} x={x:.4} error", c.label));
                continue;
            };
            let exact = exact_subdifferential(&c.f, x);
            let last = lim.last();
            t.worst(lim.delta);
            let ok = lim.delta < 1e-3 && lim.is_nested(TOL_EQ) && exact.subset_of(&last, TOL_EQ) && last.endpoint_distance(&exact) < 1e-2;
            t.check(ok, || format!("{} x={x:.4} delta={:e} last={last} exact={exact}", c.label, lim.delta));
        }
    }
    t.done()
}

fn window_points(s: &IntervalSet) -> Vec<f64> {
    if s.is_empty() {
        return vec![];
    }
    let center = if s.lo().is_finite() { s.lo() } else if s.hi().is_finite() { s.hi() } else { 0.0 };
    let (lo, hi) = s.as_interval().finite_window(center, 5.0);
    [0.1, 0.5, 0.9].iter().map(|t| lo + t * (hi - lo)).collect()
}

pub fn sum_rule_soundness(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("sum_rule_soundness");
    let xbar = 0.0;
    for pair in cat.windows(2) {
        let (f1, f2) = (&pair[0].f, &pair[1].f);
        let label = || format!("{} + {}", pair[0].label, pair[1].label);
        let Ok(h) = f1.add(f2) else {
            t.check(false, || format!("{} materialize", label()));
            continue;
        };
        for eps in [0.1, 0.5] {
            let set = esub_interval(&h, xbar, eps).unwrap_or(IntervalSet::EMPTY);
            for xi in window_points(&set) {
                let ok = match sum_rule_decompose(f1, f2, xbar, eps, xi) {
                    Ok(c) => {
                        c.sums_to(eps, xi, 1e-10)
                            && oracle_membership(f1, xbar, c.eps1, c.xi1, SUITE_X_GRID).unwrap_or(false)
                            && oracle_membership(f2, xbar, c.eps2, c.xi2, SUITE_X_GRID).unwrap_or(false)
                    }
                    Err(_) => false,
                };
                t.check(ok, || format!("{} eps={eps} xi={xi:.6}", label()));
            }
            let (e1, e2) = (0.3 * eps, 0.7 * eps);
            let s1 = esub_interval(f1, xbar, e1).unwrap_or(IntervalSet::EMPTY);
            let s2 = esub_interval(f2, xbar, e2).unwrap_or(IntervalSet::EMPTY);
            for (a, b) in window_points(&s1).into_iter().zip(window_points(&s2)) {
                let ok = esub_membership(&h, xbar, eps, a + b).unwrap_or(false);
                t.check(ok, || format!("{} easy direction eps={eps} xi1={a:.6} xi2={b:.6}", label()));
            }
        }
    }
    t.done()
}

pub fn eps_solution_equivalence(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("eps_solution_equivalence");
    for c in cat {
        let Ok(p) = ConstrainedProblem::new(c.f.clone(), Interval::real_line()) else {
            t.check(false, || format!("{} problem", c.label));
            continue;
        };
        for x in test_points(&c.f) {
            for eps in [0.0, 0.1, 0.5] {
                let a = is_eps_solution(&p, x, eps);
                let b = esub_interval(&c.f, x, eps).map(|s| s.contains(0.0, TOL_EQ));
                t.check(a.is_ok() && a == b, || format!("{} x={x:.4} eps={eps} {a:?} {b:?}", c.label));
            }
        }
    }
    t.done()
}

pub fn certificate_soundness(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("certificate_soundness");
    for c in cat {
        let d = c.f.domain();
        let w = d.hi - d.lo;
        let s = Interval::closed(d.lo + 0.2 * w, d.hi - 0.3 * w);
        let Ok(p) = ConstrainedProblem::new(c.f.clone(), s) else {
            t.check(false, || format!("{} problem", c.label));
            continue;
        };
        let mut xs: Vec<f64> = vec![s.lo, s.lo + 0.3 * (s.hi - s.lo), s.lo + 0.6 * (s.hi - s.lo), s.hi];
        if let Ok(m) = p.minimum() {
            xs.push(m.argmin);
        }
        for x in xs {
            for eps in [0.1, 1.0] {
                let sol = is_eps_solution(&p, x, eps);
                let ok = match optimality_certificate(&p, x, eps) {
                    Ok(cert) => {
                        let raw = oracle_membership(&p.objective, x, cert.eps1, cert.xi, SUITE_X_GRID).unwrap_or(false);
                        let nor = enormal_interval(&s, x, cert.eps2).is_ok_and(|n| n.contains(-cert.xi, TOL_EQ));
                        raw && nor && (cert.eps1 + cert.eps2 - eps).abs() <= 1e-10 && sol == Ok(true)
                    }
                    Err(Error::NotEpsSolution) => sol == Ok(false),
                    Err(_) => false,
                };
                t.check(ok, || format!("{} S={s} x={x:.4} eps={eps}", c.label));
            }
        }
    }
    t.done()
}

pub fn cone_invariance(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("cone_invariance");
    for c in cat {
        let a = c.f.domain().lo;
        let cones = [
            Interval::new(a, f64::INFINITY, true, false),
            Interval::new(f64::NEG_INFINITY, a, false, true),
            Interval::point(a),
            Interval::real_line(),
        ];
        for omega in cones {
            let base = enormal_interval(&omega, a, 0.0);
            for eps in [0.5, 1.0, 5.0] {
                let n = enormal_interval(&omega, a, eps);
                t.check(base.is_ok() && n == base, || format!("omega={omega} eps={eps}"));
            }
        }
    }
    t.done()
}

fn parametric_catalog(cat: &[CatalogFn]) -> Vec<(String, crate::problems::ParametricProblem)> {
    use crate::problems::ParametricProblem;
    use crate::separable::SeparableFn2D;
    let mut out = vec![("sens_quadratic".to_string(), fixtures::sens_quadratic()), ("sens_cone".to_string(), fixtures::sens_cone())];
    for (i, pair) in cat.chunks(2).enumerate() {
        let [a, b] = pair else { continue };
        let Ok(f) = SeparableFn2D::new(a.f.without_overrides(), b.f.without_overrides(), vec![]) else { continue };
        let g = if i % 2 == 0 { None } else { Some(fixtures::halfplane_above(if i % 4 == 1 { 0.5 } else { -0.5 })) };
        if let Ok(p) = ParametricProblem::new(f, g) {
            out.push((format!("{} | {}", a.label, b.label), p));
        }
    }
    out
}

pub fn value_function_convexity(cat: &[CatalogFn]) -> CheckResult {
    let mut t = Tally::new("value_function_convexity");
    const N: usize = 257;
    for (label, p) in parametric_catalog(cat) {
        let (lo, hi) = p.objective.box_x().finite_window(0.0, 10.0);
        let xs: Vec<f64> = (0..N).map(|i| lo + (hi - lo) * i as f64 / (N - 1) as f64).collect();
        let ms: Vec<ExtReal> = xs.iter().map(|x| value_function(&p, *x)).collect();
        for k in [1, 8, 32] {
            for i in 0..N.saturating_sub(2 * k) {
                let (a, m, b) = (ms[i], ms[i + k], ms[i + 2 * k]);
                if !(a.is_finite() && m.is_finite() && b.is_finite()) {
                    continue;
                }
                let excess = m.to_f64() - 0.5 * (a.to_f64() + b.to_f64());
                t.worst(excess.max(0.0));
                t.check(excess <= 1e-7, || format!("{label} x={:.4} k={k} excess={excess:e}", xs[i + k]));
            }
        }
    }
    t.done()
}

/// Sensitivity routines on the two parametric fixtures: ladder
/// monotonicity, exact ⊆ unconstrained, and agreement with the direct
/// value-function computation.
pub fn sensitivity_consistency() -> CheckResult {
    let mut t = Tally::new("sensitivity_consistency");
    let cfg = SensitivityConfig::default();
    let quad = fixtures::sens_quadratic();
    for eps in [0.0, 0.25, 1.0] {
        let direct = value_function_esub_direct(&quad, 0.0, eps);
        let un = sensitivity_unconstrained(&quad, 0.0, eps, &cfg);
        let ex = sensitivity_exact(&quad, 0.0, eps, 0.0, cfg.xi_grid);
        let ok = match (&direct, &un, &ex) {
            (Ok(d), Ok(u), Ok(e)) => {
                t.worst(u.set.endpoint_distance(d).max(e.endpoint_distance(d)));
                u.is_monotone(TOL_EQ) && e.subset_of(&u.set, TOL_EQ) && u.set.approx_eq(d, 5e-3) && e.approx_eq(d, 5e-3)
            }
            _ => false,
        };
        t.check(ok, || format!("sens_quadratic eps={eps} direct={direct:?} unconstrained={:?} exact={ex:?}", un.as_ref().map(|r| r.set)));
    }
    let cone = fixtures::sens_cone();
    for eps in [0.0, 0.5] {
        let direct = value_function_esub_direct(&cone, 0.0, eps);
        let con = sensitivity_constrained(&cone, 0.0, eps, &cfg);
        let ok = match (&direct, &con) {
            (Ok(d), Ok(c)) => {
                t.worst(c.set.endpoint_distance(d));
                c.is_monotone(TOL_EQ) && c.set.approx_eq(d, 5e-3)
            }
            _ => false,
        };
        t.check(ok, || format!("sens_cone eps={eps} direct={direct:?} constrained={:?}", con.as_ref().map(|r| r.set)));
    }
    t.done()
}

const FUNCTIONAL_GRID: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

pub fn coderivative_sum(split_eps: &[f64]) -> CheckResult {
    let mut t = Tally::new("coderivative_sum");
    let graphs = fixtures::cone_graphs();
    for (i, (n1, g1)) in graphs.iter().enumerate() {
        for (n2, g2) in graphs.iter().skip(i) {
            let Ok(sum) = graph_sum(g1, g2) else {
                t.check(false, || format!("{n1}+{n2} graph sum"));
                continue;
            };
            for &eps in split_eps {
                for &v in &FUNCTIONAL_GRID {
                    for &u in &FUNCTIONAL_GRID {
                        let direct = ecoderiv_membership(&sum, Vec2::ZERO, eps, v, u).unwrap_or(false);
                        let ok = match coderiv_sum_decompose(g1, g2, 0.0, (0.0, 0.0), eps, v, u) {
                            Ok(s) => {
                                let m1 = ecoderiv_membership(g1, Vec2::ZERO, s.eps1, v, s.u1).unwrap_or(false);
                                let m2 = ecoderiv_membership(g2, Vec2::ZERO, s.eps2, v, s.u2).unwrap_or(false);
                                let zero_exact = !(v == 0.0 && u == 0.0) || (s.u1 == 0.0 && s.u2 == 0.0);
                                direct && m1 && m2 && zero_exact && (s.eps1 + s.eps2 - eps).abs() <= 1e-12 && (s.u1 + s.u2 - u).abs() <= 1e-12
                            }
                            Err(Error::NotInCoderivative) => !direct,
                            Err(_) => false,
                        };
                        t.check(ok, || format!("{n1}+{n2} eps={eps} v={v} u={u}"));
                    }
                }
            }
        }
    }
    t.done()
}

pub fn coderivative_intersection(split_eps: &[f64]) -> CheckResult {
    let mut t = Tally::new("coderivative_intersection");
    let graphs = fixtures::cone_graphs();
    for (i, (n1, g1)) in graphs.iter().enumerate() {
        for (n2, g2) in graphs.iter().skip(i) {
            let pair = [g1.clone(), g2.clone()];
            for &eps in split_eps {
                for &v in &FUNCTIONAL_GRID {
                    for &u in &FUNCTIONAL_GRID {
                        let ok = match coderiv_intersection_check(&pair, Vec2::ZERO, eps, v, u) {
                            Ok(r) => {
                                let parts_ok = r.witness.as_ref().is_none_or(|w| {
                                    let sums = (w.eps.iter().sum::<f64>() - eps).abs() <= 1e-9
                                        && (w.u.iter().sum::<f64>() - u).abs() <= 1e-9
                                        && (w.v.iter().sum::<f64>() - v).abs() <= 1e-9;
                                    let each = (0..2).all(|k| ecoderiv_membership(&pair[k], Vec2::ZERO, w.eps[k], w.v[k], w.u[k]).unwrap_or(false));
                                    let zero_exact = !(v == 0.0 && u == 0.0) || w.u.iter().chain(&w.v).all(|z| *z == 0.0);
                                    sums && each && zero_exact
                                });
                                r.consistent() && parts_ok
                            }
                            Err(_) => false,
                        };
                        t.check(ok, || format!("{n1}∩{n2} eps={eps} v={v} u={u}"));
                    }
                }
            }
        }
    }
    t.done()
}

/// Every suite, in a fixed order.
pub fn run_all() -> Vec<CheckResult> {
    let cat = catalog(SUITE_SEED, SUITE_SIZE);
    vec![
        eps_monotonicity(&cat),
        nonemptiness(&cat),
        oracle_agreement(&cat),
        scalar_rule_equality(&cat),
        epigraph_bridge(&cat),
        indicator_bridge(&cat),
        fenchel_young(&cat),
        ladder_convergence(&cat),
        sum_rule_soundness(&cat),
        eps_solution_equivalence(&cat),
        certificate_soundness(&cat),
        cone_invariance(&cat),
        value_function_convexity(&cat),
        sensitivity_consistency(),
        coderivative_sum(&[0.0, 0.5]),
        coderivative_intersection(&[0.0, 0.5]),
    ]
}

/// One line per suite followed by a summary line.
pub fn report(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    s.push_str(&format!("SUMMARY {passed}/{} suites passed\n", results.len()));
    s
}
