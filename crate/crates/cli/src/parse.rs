//! Parser for the line-oriented problem-file format.

use ncx_core::problems::ParametricProblem;
use ncx_core::{Expr, Interval, NearlyConvexFn1D, Piece, SeparableFn2D, VPolyhedron2, Vec2};
use thiserror::Error;

use crate::model::{ParametricDef, ProblemFile, SetDef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: ncx_core::Error },
}

type PResult<T> = Result<T, ParseError>;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line }
    }

    fn err_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: pos + 1, message: message.into() }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        self.err_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_after(&self, offset: usize) -> Option<char> {
        self.chars[self.pos + offset..].iter().copied().find(|c| !c.is_whitespace())
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
        }
    }

    fn word(&mut self) -> PResult<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok((start, self.chars[start..self.pos].iter().collect()))
    }

    fn name(&mut self) -> PResult<String> {
        let (start, w) = self.word()?;
        let ok = w.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
        if !ok {
            return Err(self.err_at(start, format!("invalid name '{w}'")));
        }
        Ok(w)
    }

    /// A decimal literal, `inf` or `-inf`.
    fn number(&mut self) -> PResult<f64> {
        self.skip_ws();
        let start = self.pos;
        let at = |p: usize| self.chars.get(p).copied();
        let mut p = self.pos;
        if matches!(at(p), Some('-') | Some('+')) {
            p += 1;
        }
        if self.chars[p..].starts_with(&['i', 'n', 'f']) {
            self.pos = p + 3;
            return Ok(if at(start) == Some('-') { f64::NEG_INFINITY } else { f64::INFINITY });
        }
        while at(p).is_some_and(|c| c.is_ascii_digit() || c == '.') {
            p += 1;
        }
        if matches!(at(p), Some('e') | Some('E')) {
            let mut q = p + 1;
            if matches!(at(q), Some('-') | Some('+')) {
                q += 1;
            }
            if at(q).is_some_and(|c| c.is_ascii_digit()) {
                p = q;
                while at(p).is_some_and(|c| c.is_ascii_digit()) {
                    p += 1;
                }
            }
        }
        let s: String = self.chars[start..p].iter().collect();
        match s.parse::<f64>() {
            Ok(v) => {
                self.pos = p;
                Ok(v)
            }
            Err(_) => Err(self.err_at(start, "expected a number")),
        }
    }

    fn finite(&mut self) -> PResult<f64> {
        let start = self.pos;
        let v = self.number()?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.err_at(start, "expected a finite number"))
        }
    }

    fn interval(&mut self) -> PResult<Interval> {
        let lo_closed = match self.peek() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(self.err("expected '[' or '('")),
        };
        self.pos += 1;
        let lo = self.number()?;
        self.expect(',')?;
        let hi = self.number()?;
        let hi_closed = match self.peek() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(self.err("expected ']' or ')'")),
        };
        self.pos += 1;
        if lo.is_infinite() && lo_closed || hi.is_infinite() && hi_closed {
            return Err(self.err("infinite endpoints must be open"));
        }
        if lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(self.err("empty interval"));
        }
        Ok(Interval::new(lo, hi, lo_closed, hi_closed))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?.0;
        loop {
            if self.eat('+') {
                acc = Expr::add(acc, self.term()?.0);
            } else if self.eat('-') {
                acc = Expr::add(acc, Expr::neg(self.term()?.0));
            } else {
                return Ok(acc);
            }
        }
    }

    /// A product; the flag carries the value of a bare numeric literal.
    fn term(&mut self) -> PResult<(Expr, Option<f64>)> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            let star = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = match (acc.1, rhs.1) {
                (Some(c), _) => (Expr::scale(c, rhs.0), None),
                (None, Some(c)) => (Expr::scale(c, acc.0), None),
                (None, None) => return Err(self.err_at(star, "a product needs a numeric factor")),
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<(Expr, Option<f64>)> {
        if self.peek() == Some('-') {
            if self.peek_after(1).is_some_and(|c| c.is_ascii_digit() || c == '.') {
                return self.postfix();
            }
            self.pos += 1;
            return Ok((Expr::neg(self.unary()?.0), None));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<(Expr, Option<f64>)> {
        let mut acc = self.primary()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            let at = self.pos;
            if self.finite()? != 2.0 {
                return Err(self.err_at(at, "only ^2 is supported"));
            }
            acc = (Expr::sq(acc.0), None);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> PResult<(Expr, Option<f64>)> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok((e, None))
            }
            Some(c) if c.is_ascii_digit() || c == '.' || c == '-' => {
                let v = self.finite()?;
                Ok((Expr::c(v), Some(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let (start, w) = self.word()?;
                match w.as_str() {
                    "x" => Ok((Expr::var(), None)),
                    "abs" | "sqrt" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        Ok((if w == "abs" { Expr::abs(e) } else { Expr::sqrt(e) }, None))
                    }
                    _ => Err(self.err_at(start, format!("unknown identifier '{w}'"))),
                }
            }
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses a standalone expression in the infix syntax.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut c = Cursor::new(text, 1);
    let e = c.expr()?;
    c.finish()?;
    Ok(e)
}

struct FunctionDraft {
    line: usize,
    domain: Option<Interval>,
    pieces: Vec<Piece>,
    overrides: Vec<(f64, f64)>,
}

enum SetDraft {
    Empty,
    Interval(Interval),
    Polyhedron(Vec<Vec2>, Vec<Vec2>),
}

/// A name used on `(line, column)`.
type Ref = (usize, usize, String);

struct ParametricDraft {
    line: usize,
    f1: Option<Ref>,
    f2: Option<Ref>,
    graph: Option<Ref>,
    overrides: Vec<(Vec2, f64)>,
}

enum Section {
    Function(String, FunctionDraft),
    Set(String, usize, SetDraft),
    Parametric(String, ParametricDraft),
}

fn function_line(c: &mut Cursor, kw: &str, kw_at: usize, d: &mut FunctionDraft) -> PResult<()> {
    match kw {
        "domain" => {
            if d.domain.is_some() {
                return Err(c.err_at(kw_at, "duplicate domain"));
            }
            d.domain = Some(c.interval()?);
        }
        "on" => {
            let iv = c.interval()?;
            c.expect(':')?;
            d.pieces.push(Piece::new(iv, c.expr()?));
        }
        "at" => {
            let x = c.finite()?;
            c.expect(':')?;
            let v = c.number()?;
            d.overrides.push((x, v));
        }
        _ => return Err(c.err_at(kw_at, format!("unknown function entry '{kw}'"))),
    }
    Ok(())
}

fn set_line(c: &mut Cursor, kw: &str, kw_at: usize, d: &mut SetDraft) -> PResult<()> {
    match (kw, &mut *d) {
        ("interval", SetDraft::Empty) => *d = SetDraft::Interval(c.interval()?),
        ("polyhedron", SetDraft::Empty) => *d = SetDraft::Polyhedron(vec![], vec![]),
        ("vertex" | "ray", SetDraft::Polyhedron(vs, rs)) => {
            let p = Vec2::new(c.finite()?, c.finite()?);
            if kw == "vertex" {
                vs.push(p);
            } else {
                rs.push(p);
            }
        }
        ("interval" | "polyhedron", _) => return Err(c.err_at(kw_at, "set already has a kind")),
        ("vertex" | "ray", _) => return Err(c.err_at(kw_at, "vertex and ray lines need a preceding 'polyhedron'")),
        _ => return Err(c.err_at(kw_at, format!("unknown set entry '{kw}'"))),
    }
    Ok(())
}

fn parametric_line(c: &mut Cursor, kw: &str, kw_at: usize, d: &mut ParametricDraft) -> PResult<()> {
    let slot = match kw {
        "f1" => &mut d.f1,
        "f2" => &mut d.f2,
        "graph" => &mut d.graph,
        "override" => {
            let p = Vec2::new(c.finite()?, c.finite()?);
            c.expect(':')?;
            let v = c.number()?;
            d.overrides.push((p, v));
            return Ok(());
        }
        _ => return Err(c.err_at(kw_at, format!("unknown parametric entry '{kw}'"))),
    };
    if slot.is_some() {
        return Err(c.err_at(kw_at, format!("duplicate '{kw}'")));
    }
    c.skip_ws();
    let at = c.pos;
    *slot = Some((c.line, at + 1, c.name()?));
    Ok(())
}

fn invalid(line: usize) -> impl Fn(ncx_core::Error) -> FileError {
    move |source| FileError::Invalid { line, source }
}

fn build_function(name: &str, d: FunctionDraft) -> Result<NearlyConvexFn1D, FileError> {
    let domain = d.domain.ok_or_else(|| ParseError { line: d.line, col: 1, message: format!("function '{name}' has no domain line") })?;
    if d.pieces.is_empty() {
        return Err(ParseError { line: d.line, col: 1, message: format!("function '{name}' has no pieces") }.into());
    }
    NearlyConvexFn1D::new(domain, d.pieces, d.overrides).map_err(invalid(d.line))
}

fn build_parametric(file: &ProblemFile, name: &str, d: ParametricDraft) -> Result<ParametricDef, FileError> {
    let missing = |what: &str| ParseError { line: d.line, col: 1, message: format!("parametric '{name}' has no '{what}' line") };
    let lookup = |slot: &Option<Ref>, what: &str| -> Result<(String, NearlyConvexFn1D), FileError> {
        let (line, col, n) = slot.clone().ok_or_else(|| missing(what))?;
        match file.function(&n) {
            Some(f) => Ok((n, f.clone())),
            None => Err(ParseError { line, col, message: format!("unknown function '{n}'") }.into()),
        }
    };
    let (f1n, f1) = lookup(&d.f1, "f1")?;
    let (f2n, f2) = lookup(&d.f2, "f2")?;
    let graph = match &d.graph {
        None => None,
        Some((line, col, n)) => match file.set(n) {
            Some(SetDef::Polyhedron(p)) => Some((n.clone(), p.clone())),
            _ => return Err(ParseError { line: *line, col: *col, message: format!("'{n}' is not a polyhedron set") }.into()),
        },
    };
    let f = SeparableFn2D::new(f1, f2, d.overrides.clone()).map_err(invalid(d.line))?;
    let problem = ParametricProblem::new(f, graph.as_ref().map(|g| g.1.clone())).map_err(invalid(d.line))?;
    Ok(ParametricDef { f1: f1n, f2: f2n, graph: graph.map(|g| g.0), overrides: d.overrides, problem })
}

/// Parses and validates a whole problem file.
pub fn parse_problem_file(text: &str) -> Result<ProblemFile, FileError> {
    let mut sections: Vec<Section> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut c = Cursor::new(content, line);
        if c.peek().is_none() {
            continue;
        }
        let (kw_at, kw) = c.word()?;
        match kw.as_str() {
            "function" | "set" | "parametric" => {
                c.skip_ws();
                let at = c.pos;
                let name = c.name()?;
                if names.contains(&name) {
                    return Err(c.err_at(at, format!("duplicate name '{name}'")).into());
                }
                names.push(name.clone());
                sections.push(match kw.as_str() {
                    "function" => Section::Function(name, FunctionDraft { line, domain: None, pieces: vec![], overrides: vec![] }),
                    "set" => Section::Set(name, line, SetDraft::Empty),
                    _ => Section::Parametric(name, ParametricDraft { line, f1: None, f2: None, graph: None, overrides: vec![] }),
                });
            }
            _ => match sections.last_mut() {
                Some(Section::Function(_, d)) => function_line(&mut c, &kw, kw_at, d)?,
                Some(Section::Set(_, _, d)) => set_line(&mut c, &kw, kw_at, d)?,
                Some(Section::Parametric(_, d)) => parametric_line(&mut c, &kw, kw_at, d)?,
                None => return Err(c.err_at(kw_at, "expected 'function', 'set' or 'parametric'").into()),
            },
        }
        c.finish()?;
    }
    if sections.is_empty() {
        return Err(ParseError { line: 1, col: 1, message: "empty problem file".into() }.into());
    }
    let mut file = ProblemFile::default();
    let mut pending = Vec::new();
    for s in sections {
        match s {
            Section::Function(name, d) => {
                let f = build_function(&name, d)?;
                file.functions.push((name, f));
            }
            Section::Set(name, line, d) => {
                let set = match d {
                    SetDraft::Empty => return Err(ParseError { line, col: 1, message: format!("set '{name}' is empty") }.into()),
                    SetDraft::Interval(iv) => SetDef::Interval(iv),
                    SetDraft::Polyhedron(vs, rs) => SetDef::Polyhedron(VPolyhedron2::new(vs, rs).map_err(invalid(line))?),
                };
                file.sets.push((name, set));
            }
            Section::Parametric(name, d) => pending.push((name, d)),
        }
    }
    for (name, d) in pending {
        let p = build_parametric(&file, &name, d)?;
        file.parametrics.push((name, p));
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncx_core::fixtures;

    fn fixture(name: &str) -> String {
        std::fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    #[test]
    fn expressions() {
        assert_eq!(parse_expr("-sqrt(x)").unwrap(), Expr::neg(Expr::sqrt(Expr::var())));
        assert_eq!(parse_expr("x^2").unwrap(), Expr::sq(Expr::var()));
        assert_eq!(parse_expr("0.5 * abs(x)").unwrap(), Expr::scale(0.5, Expr::abs(Expr::var())));
        assert_eq!(parse_expr("x * -2").unwrap(), Expr::scale(-2.0, Expr::var()));
        assert_eq!(parse_expr("x - 1").unwrap(), Expr::add(Expr::var(), Expr::neg(Expr::c(1.0))));
        assert_eq!(parse_expr("-(x)^2").unwrap(), Expr::neg(Expr::sq(Expr::var())));
        assert_eq!(parse_expr("1e-3 + x").unwrap(), Expr::add(Expr::c(1e-3), Expr::var()));
        let e = parse_expr("x * x").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
        assert_eq!(parse_expr("x^3").unwrap_err().col, 3);
        assert_eq!(parse_expr("exp(x)").unwrap_err().col, 1);
        assert!(parse_expr("abs(x").is_err());
    }

    #[test]
    fn fixtures_match_the_library_examples() {
        let f = parse_problem_file(&fixture("ex1.ncx")).unwrap();
        assert_eq!(f.function("phi"), Some(&fixtures::ex1()));
        let s = parse_problem_file(&fixture("sum.ncx")).unwrap();
        let (a, b) = fixtures::sum_pair();
        assert_eq!((s.function("phi1"), s.function("phi2")), (Some(&a), Some(&b)));
        let c = parse_problem_file(&fixture("counter.ncx")).unwrap();
        let (a, b) = fixtures::counterexample();
        assert_eq!((c.function("phi1"), c.function("phi2")), (Some(&a), Some(&b)));
        let o = parse_problem_file(&fixture("opt3.ncx")).unwrap();
        let p = fixtures::opt_example();
        assert_eq!(o.function("phi"), Some(&p.objective));
        assert_eq!(o.set("S"), Some(&SetDef::Interval(p.feasible)));
        let e = parse_problem_file(&fixture("ex4.ncx")).unwrap();
        assert_eq!(e.parametric("Q").unwrap().problem, fixtures::sens_quadratic());
        assert_eq!(e.parametric("P").unwrap().problem, fixtures::sens_cone());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_problem_file("").unwrap_err();
        assert_eq!(e, FileError::Parse(ParseError { line: 1, col: 1, message: "empty problem file".into() }));
        let e = parse_problem_file("# only a comment\n\n").unwrap_err();
        assert!(matches!(e, FileError::Parse(ParseError { line: 1, col: 1, .. })));
        let e = parse_problem_file("function f\ndomain [0,1]\non [0,1] x\n").unwrap_err();
        assert!(matches!(e, FileError::Parse(ParseError { line: 3, col: 10, .. })), "{e:?}");
        let e = parse_problem_file("function f\ndomain [0,1]\nslope 2\n").unwrap_err();
        assert!(matches!(e, FileError::Parse(ParseError { line: 3, col: 1, .. })), "{e:?}");
        let e = parse_problem_file("function f\ndomain [0,1]\non [0,1]: x\nfunction f\n").unwrap_err();
        assert!(matches!(e, FileError::Parse(ParseError { line: 4, col: 10, .. })), "{e:?}");
        let e = parse_problem_file("parametric P\nf1 a\nf2 a\n").unwrap_err();
        assert!(matches!(e, FileError::Parse(ParseError { line: 2, col: 4, .. })), "{e:?}");
        let e = parse_problem_file("domain [0,1]\n").unwrap_err();
        assert!(matches!(e, FileError::Parse(ParseError { line: 1, col: 1, .. })));
    }

    #[test]
    fn concave_piece_is_a_validation_error() {
        let e = parse_problem_file("function f\ndomain [0,1]\non [0,1]: sqrt(x)\n").unwrap_err();
        assert!(matches!(e, FileError::Invalid { line: 1, source: ncx_core::Error::Validation(_) }), "{e:?}");
    }
}
