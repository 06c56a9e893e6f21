//! Shared numerical tolerances.

/// Endpoint and set-membership comparisons.
pub const TOL_EQ: f64 = 1e-9;

/// Raw arithmetic noise (piece continuity, ray signs, dedup).
pub const TOL_EVAL: f64 = 1e-12;

/// Conjugate values above this are reported as `+inf`.
pub const CONJ_CAP: f64 = 1e15;

/// Half-width of the default search window for slopes.
pub const SLOPE_WINDOW: f64 = 1e9;

/// Endpoint tolerance for bisection on set boundaries.
pub const TOL_ENDPOINT: f64 = 1e-8;

/// Relative stopping width for the piecewise ternary search.
pub const TERNARY_WIDTH: f64 = 1e-12;

/// Iteration cap for the piecewise ternary search.
pub const TERNARY_ITERS: usize = 100;

/// Relative closeness test used for dedup and equality checks.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
