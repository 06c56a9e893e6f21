use ncx_cli::{expr_source, parse_expr, parse_problem_file, serialize_problem_file};
use ncx_core::Expr;
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn number() -> impl Strategy<Value = f64> {
    prop_oneof![(-20i32..20).prop_map(|k| k as f64 * 0.25), -1e6f64..1e6, Just(1e-9), Just(-3.5e12)]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::var()), number().prop_map(Expr::c)];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (number(), inner.clone()).prop_map(|(c, e)| Expr::scale(c, e)),
            inner.clone().prop_map(Expr::abs),
            inner.clone().prop_map(Expr::sq),
            inner.clone().prop_map(Expr::sqrt),
            inner.prop_map(Expr::neg),
        ]
    })
}

/// A convex piece `c|x - d| + s x + k` or `c (x - d)^2 + k` on `[lo, hi]`.
fn function_source() -> impl Strategy<Value = String> {
    (-5i32..0, 1i32..6, 0usize..2, 0.0f64..3.0, -2.0f64..2.0, -2.0f64..2.0, -3.0f64..3.0, proptest::option::of(1.0f64..9.0)).prop_map(
        |(lo, hi, kind, c, d, s, k, over)| {
            let (lo, hi) = (lo as f64, hi as f64);
            let body = if kind == 0 { format!("{c} * abs(x - {}) + {s} * x + {k}", -d) } else { format!("{c} * (x + {})^2 + {k}", -d) };
            let mut src = format!("domain [{lo},{hi}]\non [{lo},{hi}): {body}\n");
            if let Some(v) = over {
                src += &format!("at {hi}: {}\n", v * 1e3);
            } else {
                src = src.replace(&format!("{hi}): "), &format!("{hi}]: "));
            }
            src
        },
    )
}

fn file_source() -> impl Strategy<Value = String> {
    (proptest::collection::vec(function_source(), 1..4), proptest::option::of((-5.0f64..0.0, 0.0f64..5.0)), any::<bool>()).prop_map(
        |(funcs, interval, with_param)| {
            let mut out = String::from("# generated\n");
            for (i, f) in funcs.iter().enumerate() {
                out += &format!("function f{i}\n{f}\n");
            }
            if let Some((a, b)) = interval {
                out += &format!("set S\ninterval [{a},{b})\n\n");
            }
            out += "set G\npolyhedron\nvertex 0 0\nray 1 1\nray -1 1\n\n";
            if with_param {
                let last = funcs.len() - 1;
                out += &format!("parametric P\nf1 f0\nf2 f{last}\ngraph G\noverride 0.5 0.5: inf\n");
            }
            out
        },
    )
}

#[test]
fn fixtures_round_trip() {
    for name in ["ex1.ncx", "sum.ncx", "counter.ncx", "opt3.ncx", "ex4.ncx"] {
        let a = parse_problem_file(&fixture(name)).unwrap();
        let text = serialize_problem_file(&a);
        let b = parse_problem_file(&text).unwrap();
        assert_eq!(a, b, "{name}");
        assert_eq!(serialize_problem_file(&b), text, "{name}");
    }
}

proptest! {
    #[test]
    fn expressions_round_trip(e in expr()) {
        let text = expr_source(&e);
        prop_assert_eq!(parse_expr(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn files_round_trip(src in file_source()) {
        let a = parse_problem_file(&src).unwrap();
        let text = serialize_problem_file(&a);
        let b = parse_problem_file(&text).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(serialize_problem_file(&b), text);
    }
}
