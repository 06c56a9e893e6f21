//! Subcommands of the `ncx` tool.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncx_core::calculus::{
    coderiv_intersection_check, coderiv_sum_decompose, enormal2_membership, enormal_interval, esub_interval, oracle_esub_interval, sum_rule_decompose,
};
use ncx_core::problems::{
    optimality_certificate, sensitivity_constrained, sensitivity_exact, sensitivity_unconstrained, value_function, value_function_esub_direct,
    ConstrainedProblem, ParametricProblem,
};
use ncx_core::{suite, ExtReal, Interval, IntervalSet, NearlyConvexFn1D, VPolyhedron2, Vec2};

use crate::config::{OutputFormat, RunConfig, Table, DEFAULT_RANGE_GRID, DEFAULT_X_GRID};
use crate::error::{usage, CliError};
use crate::model::{ProblemFile, SetDef};
use crate::numfmt::{fmt_flag, fmt_num, fmt_set};
use crate::parse::parse_problem_file;
use crate::plot::{emit_plot, Chart, Series};

#[derive(Debug, Parser)]
#[command(name = "ncx", version, about = "Approximate subdifferentials, normal sets and sensitivity of nearly convex problems")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Problem file.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Write an SVG chart to this path.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// Depth k of the tolerance ladder 1, 1/2, ..., 2^-k.
    #[arg(long, global = true, default_value_t = crate::config::DEFAULT_ETA_DEPTH)]
    pub eta_depth: u32,
    /// Sample grid size of the command.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Slope window `a,b` scanned by the brute-force check.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi_window: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoderivOp {
    Sum,
    Intersection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SensMethod {
    Auto,
    Unconstrained,
    Exact,
    Constrained,
    Direct,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Values f(x). Columns: x,value.
    Eval {
        #[arg(long = "fn")]
        func: Option<String>,
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
    },
    /// Conjugate values f*(xi). Columns: xi,conjugate.
    Conjugate {
        #[arg(long = "fn")]
        func: Option<String>,
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
    },
    /// eps-subdifferential. Columns: x_bar,eps,lo,hi,unbounded_below,unbounded_above.
    Esub {
        #[arg(long = "fn")]
        func: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, required = true, value_delimiter = ',')]
        eps: Vec<f64>,
        /// Append brute-force columns oracle_lo,oracle_hi,clipped_lo,clipped_hi.
        #[arg(long)]
        oracle: bool,
    },
    /// eps-normal set of an interval (x_bar,eps,lo,hi,unbounded_below,unbounded_above)
    /// or membership test for a polyhedron (x,y,eps,u,v,member).
    Normal {
        #[arg(long)]
        set: Option<String>,
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        #[arg(long, required = true, value_delimiter = ',')]
        eps: Vec<f64>,
        /// Functional `u,v` tested against a polyhedron.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        dir: Option<Vec<f64>>,
    },
    /// Sum-rule split. Columns: x_bar,eps,xi,eps1,eps2,xi1,xi2.
    Sumrule {
        /// Two function names `A,B`.
        #[arg(long = "fn", value_delimiter = ',')]
        func: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, required = true, value_delimiter = ',')]
        eps: Vec<f64>,
        /// Slope to split; defaults to a member of the sum's set.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<f64>,
    },
    /// Coderivative sum split (eps,v,u,eps1,eps2,u1,u2) or intersection
    /// check (eps,v,u,member,map,eps_i,u_i,v_i).
    Coderiv {
        #[arg(long, value_enum)]
        op: CoderivOp,
        /// Graph names.
        #[arg(long, required = true, value_delimiter = ',')]
        set: Vec<String>,
        /// `x` for a sum, `x,y` for an intersection.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        /// Values `y1,y2` of the two maps at x for a sum.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Option<Vec<f64>>,
        #[arg(long, required = true, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        v: f64,
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
    },
    /// Optimality certificate. Columns: x_bar,eps,eps1,eps2,xi.
    CheckOpt {
        #[arg(long = "fn")]
        func: Option<String>,
        #[arg(long)]
        set: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, required = true, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Optimal value function. Columns: x,m,attained.
    ValueFn {
        #[arg(long)]
        problem: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
        /// Uniform sample `a,b` with `--grid` points.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        range: Option<Vec<f64>>,
    },
    /// eps-subdifferential of the optimal value function.
    /// Columns: x_bar,eps,lo,hi,unbounded_below,unbounded_above,delta.
    Sens {
        #[arg(long)]
        problem: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, required = true, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, value_enum, default_value_t = SensMethod::Auto)]
        method: SensMethod,
        /// Exact solution used by `--method exact`; defaults to the computed minimizer.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
    },
    /// Runs every invariant suite and prints a pass/fail table.
    Verify,
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_subcommand<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run_cli(&cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run_cli(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok((stdout, code)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn run_config(c: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig { grid: c.grid, eta_depth: c.eta_depth, format: c.format, plot: c.plot.clone(), ..RunConfig::default() };
    if let Some(w) = &c.xi_window {
        if w.len() != 2 {
            return Err(usage("--xi-window takes two numbers a,b"));
        }
        cfg.xi_window = Interval::closed(w[0], w[1]);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load(path: Option<&Path>) -> Result<ProblemFile, CliError> {
    let path = path.ok_or_else(|| usage("--file is required"))?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    Ok(parse_problem_file(&text)?)
}

/// The entry called `name`, or the only entry of its kind when no name is given.
fn pick<'a, T>(items: &'a [(String, T)], name: Option<&str>, kind: &str, flag: &str) -> Result<&'a T, CliError> {
    match name {
        Some(n) => items.iter().find(|(k, _)| k == n).map(|(_, v)| v).ok_or_else(|| usage(format!("no {kind} named `{n}`"))),
        None if items.len() == 1 => Ok(&items[0].1),
        None => Err(usage(format!("{flag} is required when the file defines {} {kind}s", items.len()))),
    }
}

fn set_cells(s: &IntervalSet) -> Vec<String> {
    if s.is_empty() {
        return vec![String::new(), String::new(), fmt_flag(false), fmt_flag(false)];
    }
    vec![fmt_num(s.lo()), fmt_num(s.hi()), fmt_flag(s.unbounded_below()), fmt_flag(s.unbounded_above())]
}

/// Set-valued tables gain a readable `set` column in text mode.
fn set_table(header: &[&str], format: OutputFormat) -> Table {
    let mut t = Table::new(header);
    if format == OutputFormat::Text {
        t.header.push("set".into());
    }
    t
}

fn push_set_row(t: &mut Table, mut row: Vec<String>, s: &IntervalSet, format: OutputFormat) {
    if format == OutputFormat::Text {
        row.push(fmt_set(s));
    }
    t.push(row);
}

fn bar(x: f64, s: &IntervalSet) -> Option<(f64, f64, f64)> {
    (!s.is_empty()).then(|| (x, s.lo(), s.hi()))
}

fn write_plot(cfg: &RunConfig, chart: Chart) -> Result<(), CliError> {
    if let Some(path) = &cfg.plot {
        emit_plot(path, &chart).map_err(|source| CliError::Plot { path: path.clone(), source })?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let cfg = run_config(&cli.common)?;
    if let Command::Verify = cli.command {
        let results = suite::run_all();
        let code = if results.iter().all(|r| r.passed()) { 0 } else { 1 };
        return Ok((suite::report(&results), code));
    }
    let file = load(cli.common.file.as_deref())?;
    let table = match &cli.command {
        Command::Eval { func, at } => eval(&file, func.as_deref(), at)?,
        Command::Conjugate { func, at } => conjugate(&file, func.as_deref(), at)?,
        Command::Esub { func, at, eps, oracle } => esub(&file, &cfg, func.as_deref(), *at, eps, *oracle)?,
        Command::Normal { set, at, eps, dir } => normal(&file, &cfg, set.as_deref(), at, eps, dir.as_deref())?,
        Command::Sumrule { func, at, eps, xi } => sumrule(&file, func, *at, eps, *xi)?,
        Command::Coderiv { op, set, at, y, eps, v, u } => coderiv(&file, *op, set, at, y.as_deref(), eps, *v, *u)?,
        Command::CheckOpt { func, set, at, eps } => check_opt(&file, func.as_deref(), set.as_deref(), *at, eps)?,
        Command::ValueFn { problem, at, range } => value_fn(&file, &cfg, problem.as_deref(), at.as_deref(), range.as_deref())?,
        Command::Sens { problem, at, eps, method, y } => sens(&file, &cfg, problem.as_deref(), *at, eps, *method, *y)?,
        Command::Verify => unreachable!("handled above"),
    };
    Ok((table.render(cfg.format), 0))
}

fn function<'a>(file: &'a ProblemFile, name: Option<&str>) -> Result<&'a NearlyConvexFn1D, CliError> {
    pick(&file.functions, name, "function", "--fn")
}

fn eval(file: &ProblemFile, name: Option<&str>, at: &[f64]) -> Result<Table, CliError> {
    let f = function(file, name)?;
    let mut t = Table::new(&["x", "value"]);
    for x in at {
        t.push(vec![fmt_num(*x), fmt_num(f.evaluate(*x).to_f64())]);
    }
    Ok(t)
}

fn conjugate(file: &ProblemFile, name: Option<&str>, at: &[f64]) -> Result<Table, CliError> {
    let f = function(file, name)?;
    let mut t = Table::new(&["xi", "conjugate"]);
    for xi in at {
        t.push(vec![fmt_num(*xi), fmt_num(f.conjugate(*xi).to_f64())]);
    }
    Ok(t)
}

fn esub(file: &ProblemFile, cfg: &RunConfig, name: Option<&str>, x: f64, eps: &[f64], oracle: bool) -> Result<Table, CliError> {
    let f = function(file, name)?;
    let mut header = vec!["x_bar", "eps", "lo", "hi", "unbounded_below", "unbounded_above"];
    if oracle {
        header.extend(["oracle_lo", "oracle_hi", "clipped_lo", "clipped_hi"]);
    }
    let mut t = set_table(&header, cfg.format);
    let mut bars = Vec::new();
    for e in eps {
        let s = esub_interval(f, x, *e)?;
        let mut row = vec![fmt_num(x), fmt_num(*e)];
        row.extend(set_cells(&s));
        if oracle {
            let o = oracle_esub_interval(f, x, *e, cfg.grid_or(DEFAULT_X_GRID), cfg.xi_window, cfg.xi_grid)?;
            let mut cells = set_cells(&o.set);
            cells.truncate(2);
            row.extend(cells);
            row.extend([fmt_flag(o.clipped_lo), fmt_flag(o.clipped_hi)]);
        }
        bars.extend(bar(*e, &s));
        push_set_row(&mut t, row, &s, cfg.format);
    }
    let series = [Series::Bars { label: "eps-subdifferential".into(), bars }];
    write_plot(cfg, Chart { title: &format!("eps-subdifferential at x = {}", fmt_num(x)), x_label: "eps", y_label: "slope", series: &series })?;
    Ok(t)
}

fn normal(file: &ProblemFile, cfg: &RunConfig, name: Option<&str>, at: &[f64], eps: &[f64], dir: Option<&[f64]>) -> Result<Table, CliError> {
    match pick(&file.sets, name, "set", "--set")? {
        SetDef::Interval(omega) => {
            let [x] = at else { return Err(usage("--at takes one number for an interval set")) };
            let mut t = set_table(&["x_bar", "eps", "lo", "hi", "unbounded_below", "unbounded_above"], cfg.format);
            for e in eps {
                let s = enormal_interval(omega, *x, *e)?;
                let mut row = vec![fmt_num(*x), fmt_num(*e)];
                row.extend(set_cells(&s));
                push_set_row(&mut t, row, &s, cfg.format);
            }
            Ok(t)
        }
        SetDef::Polyhedron(omega) => {
            let [x, y] = at else { return Err(usage("--at takes x,y for a polyhedron")) };
            let Some([u, v]) = dir else { return Err(usage("--dir u,v is required for a polyhedron")) };
            let mut t = Table::new(&["x", "y", "eps", "u", "v", "member"]);
            for e in eps {
                let m = enormal2_membership(omega, Vec2::new(*x, *y), *e, Vec2::new(*u, *v))?;
                t.push(vec![fmt_num(*x), fmt_num(*y), fmt_num(*e), fmt_num(*u), fmt_num(*v), fmt_flag(m)]);
            }
            Ok(t)
        }
    }
}

/// A member of `∂_ε(f1 + f2)(x̄)` to split when none is given.
fn default_slope(f1: &NearlyConvexFn1D, f2: &NearlyConvexFn1D, x: f64, eps: f64) -> f64 {
    let Some(s) = f1.add(f2).ok().and_then(|g| esub_interval(&g, x, eps).ok()) else { return 0.0 };
    match (s.lo().is_finite(), s.hi().is_finite()) {
        (true, true) => 0.5 * (s.lo() + s.hi()),
        (true, false) => s.lo(),
        (false, true) => s.hi(),
        (false, false) => 0.0,
    }
}

fn sumrule(file: &ProblemFile, names: &[String], x: f64, eps: &[f64], xi: Option<f64>) -> Result<Table, CliError> {
    let [a, b] = names else { return Err(usage("--fn takes two names A,B")) };
    let (f1, f2) = (function(file, Some(a))?, function(file, Some(b))?);
    let mut t = Table::new(&["x_bar", "eps", "xi", "eps1", "eps2", "xi1", "xi2"]);
    for e in eps {
        let xi = xi.unwrap_or_else(|| default_slope(f1, f2, x, *e));
        let c = sum_rule_decompose(f1, f2, x, *e, xi)?;
        t.push([x, *e, xi, c.eps1, c.eps2, c.xi1, c.xi2].iter().map(|v| fmt_num(*v)).collect());
    }
    Ok(t)
}

fn graph<'a>(file: &'a ProblemFile, name: &str) -> Result<&'a VPolyhedron2, CliError> {
    match pick(&file.sets, Some(name), "set", "--set")? {
        SetDef::Polyhedron(g) => Ok(g),
        SetDef::Interval(_) => Err(usage(format!("set `{name}` is not a polyhedron"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn coderiv(file: &ProblemFile, op: CoderivOp, names: &[String], at: &[f64], y: Option<&[f64]>, eps: &[f64], v: f64, u: f64) -> Result<Table, CliError> {
    let graphs = names.iter().map(|n| graph(file, n).cloned()).collect::<Result<Vec<_>, _>>()?;
    match op {
        CoderivOp::Sum => {
            let [g1, g2] = graphs.as_slice() else { return Err(usage("--set takes two graphs for a sum")) };
            let [x] = at else { return Err(usage("--at takes one number for a sum")) };
            let Some([y1, y2]) = y else { return Err(usage("--y y1,y2 is required for a sum")) };
            let mut t = Table::new(&["eps", "v", "u", "eps1", "eps2", "u1", "u2"]);
            for e in eps {
                let s = coderiv_sum_decompose(g1, g2, *x, (*y1, *y2), *e, v, u)?;
                t.push([*e, v, u, s.eps1, s.eps2, s.u1, s.u2].iter().map(|c| fmt_num(*c)).collect());
            }
            Ok(t)
        }
        CoderivOp::Intersection => {
            if graphs.len() < 2 {
                return Err(usage("--set takes at least two graphs for an intersection"));
            }
            let [x, y] = at else { return Err(usage("--at takes x,y for an intersection")) };
            let mut t = Table::new(&["eps", "v", "u", "member", "map", "eps_i", "u_i", "v_i"]);
            for e in eps {
                let c = coderiv_intersection_check(&graphs, Vec2::new(*x, *y), *e, v, u)?;
                let lead = vec![fmt_num(*e), fmt_num(v), fmt_num(u), fmt_flag(c.member)];
                match &c.witness {
                    Some(w) => {
                        for (i, name) in names.iter().enumerate() {
                            let mut row = lead.clone();
                            row.extend([name.clone(), fmt_num(w.eps[i]), fmt_num(w.u[i]), fmt_num(w.v[i])]);
                            t.push(row);
                        }
                    }
                    None => {
                        let mut row = lead;
                        row.extend([String::new(), String::new(), String::new(), String::new()]);
                        t.push(row);
                    }
                }
            }
            Ok(t)
        }
    }
}

fn check_opt(file: &ProblemFile, fname: Option<&str>, sname: Option<&str>, x: f64, eps: &[f64]) -> Result<Table, CliError> {
    let f = function(file, fname)?;
    let s = match pick(&file.sets, sname, "set", "--set")? {
        SetDef::Interval(i) => *i,
        SetDef::Polyhedron(_) => return Err(usage("the feasible set must be an interval")),
    };
    let p = ConstrainedProblem::new(f.clone(), s)?;
    let mut t = Table::new(&["x_bar", "eps", "eps1", "eps2", "xi"]);
    for e in eps {
        let c = optimality_certificate(&p, x, *e)?;
        t.push([x, *e, c.eps1, c.eps2, c.xi].iter().map(|v| fmt_num(*v)).collect());
    }
    Ok(t)
}

fn problem<'a>(file: &'a ProblemFile, name: Option<&str>) -> Result<&'a ParametricProblem, CliError> {
    Ok(&pick(&file.parametrics, name, "parametric problem", "--problem")?.problem)
}

fn value_fn(file: &ProblemFile, cfg: &RunConfig, name: Option<&str>, at: Option<&[f64]>, range: Option<&[f64]>) -> Result<Table, CliError> {
    let p = problem(file, name)?;
    let xs: Vec<f64> = match (at, range) {
        (Some(xs), None) => xs.to_vec(),
        (None, Some([a, b])) if a.is_finite() && b.is_finite() && a <= b => {
            let n = cfg.grid_or(DEFAULT_RANGE_GRID);
            (0..n).map(|i| if i + 1 == n { *b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
        }
        (None, Some(_)) => return Err(usage("--range takes two finite numbers a,b with a <= b")),
        _ => return Err(usage("give exactly one of --at or --range")),
    };
    let mut t = Table::new(&["x", "m", "attained"]);
    let mut points = Vec::new();
    for x in &xs {
        let m = value_function(p, *x);
        let attained = p.value_detail(*x).is_some_and(|r| r.attained);
        if let ExtReal::Finite(v) = m {
            points.push((*x, v));
        }
        t.push(vec![fmt_num(*x), fmt_num(m.to_f64()), fmt_flag(attained)]);
    }
    let series = [Series::Line { label: "m(x)".into(), points }];
    write_plot(cfg, Chart { title: "optimal value function", x_label: "x", y_label: "m(x)", series: &series })?;
    Ok(t)
}

fn sens(file: &ProblemFile, cfg: &RunConfig, name: Option<&str>, x: f64, eps: &[f64], method: SensMethod, y: Option<f64>) -> Result<Table, CliError> {
    let p = problem(file, name)?;
    let method = match method {
        SensMethod::Auto if p.constraint_contains_box() => SensMethod::Unconstrained,
        SensMethod::Auto => SensMethod::Constrained,
        m => m,
    };
    let sc = cfg.sensitivity();
    let mut t = set_table(&["x_bar", "eps", "lo", "hi", "unbounded_below", "unbounded_above", "delta"], cfg.format);
    let mut bars = Vec::new();
    for e in eps {
        let (s, delta) = match method {
            SensMethod::Unconstrained => {
                let r = sensitivity_unconstrained(p, x, *e, &sc)?;
                (r.set, r.delta)
            }
            SensMethod::Constrained => {
                let r = sensitivity_constrained(p, x, *e, &sc)?;
                (r.set, r.delta)
            }
            SensMethod::Exact => {
                let ybar = match y {
                    Some(y) => y,
                    None => p.value_detail(x).ok_or(ncx_core::Error::ValueInfinite(x))?.argmin,
                };
                (sensitivity_exact(p, x, *e, ybar, sc.xi_grid)?, 0.0)
            }
            SensMethod::Direct => (value_function_esub_direct(p, x, *e)?, 0.0),
            SensMethod::Auto => unreachable!("resolved above"),
        };
        let mut row = vec![fmt_num(x), fmt_num(*e)];
        row.extend(set_cells(&s));
        row.push(fmt_num(delta));
        bars.extend(bar(*e, &s));
        push_set_row(&mut t, row, &s, cfg.format);
    }
    let series = [Series::Bars { label: "eps-subdifferential of m".into(), bars }];
    write_plot(cfg, Chart { title: &format!("sensitivity at x = {}", fmt_num(x)), x_label: "eps", y_label: "slope", series: &series })?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn run(args: &[&str]) -> Outcome {
        run_subcommand(std::iter::once("ncx").chain(args.iter().copied()))
    }

    #[test]
    fn esub_row() {
        let o = run(&["esub", "--file", &fixture("ex1.ncx"), "--fn", "phi", "--at", "0", "--eps", "0.1,0.5,1"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(o.stdout, "x_bar,eps,lo,hi,unbounded_below,unbounded_above\n0,0.1,-inf,-2.5,1,0\n0,0.5,-inf,-0.5,1,0\n0,1,-inf,0,1,0\n");
    }

    #[test]
    fn empty_set_row() {
        let o = run(&["esub", "--file", &fixture("ex1.ncx"), "--at", "0", "--eps", "0"]);
        assert_eq!(o.stdout.lines().nth(1), Some("0,0,,,0,0"));
    }

    #[test]
    fn negative_arguments() {
        let o = run(&["eval", "--file", &fixture("opt3.ncx"), "--at", "-0.5,0.25"]);
        assert_eq!(o.stdout, "x,value\n-0.5,0.5\n0.25,0.25\n");
    }

    #[test]
    fn error_codes() {
        assert_eq!(run(&["esub", "--file", &fixture("ex1.ncx"), "--at", "5", "--eps", "1"]).code, 1);
        assert_eq!(run(&["esub", "--file", &fixture("ex1.ncx"), "--fn", "nope", "--at", "0", "--eps", "1"]).code, 2);
        assert_eq!(run(&["esub", "--file", "/nonexistent.ncx", "--at", "0", "--eps", "1"]).code, 2);
        assert_eq!(run(&["frobnicate"]).code, 2);
        assert_eq!(run(&["--help"]).code, 0);
    }
}
