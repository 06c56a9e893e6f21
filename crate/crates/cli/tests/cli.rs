use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ncx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncx")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    let ok = ncx(&["check-opt", "--file", &fixture("opt3.ncx"), "--at", "0", "--eps", "0.5"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("x_bar,eps,eps1,eps2,xi\n0,0.5,"));

    let domain = ncx(&["sumrule", "--file", &fixture("counter.ncx"), "--fn", "phi1,phi2", "--at", "0", "--eps", "1"]);
    assert_eq!(domain.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&domain.stderr).contains("qualification"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ncx");
    std::fs::write(&bad, "function f\ndomain [0,1]\non [0,1]: sqrt(x)\n").unwrap();
    let invalid = ncx(&["eval", "--file", bad.to_str().unwrap(), "--at", "0"]);
    assert_eq!(invalid.status.code(), Some(2));

    std::fs::write(&bad, "function f\ndomain [0,1\n").unwrap();
    let parse = ncx(&["eval", "--file", bad.to_str().unwrap(), "--at", "0"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));

    assert_eq!(ncx(&["eval", "--at", "0"]).status.code(), Some(2));
    assert_eq!(ncx(&["esub", "--file", &fixture("ex1.ncx"), "--at", "2", "--eps", "1"]).status.code(), Some(1));
}

#[test]
fn repeated_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|k| {
            let plot = dir.path().join(format!("v{k}.svg"));
            let o = ncx(&["value-fn", "--file", &fixture("ex4.ncx"), "--problem", "P", "--range", "-1,1", "--grid", "9", "--plot", plot.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0));
            (o.stdout, std::fs::read(plot).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let csv = String::from_utf8(runs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().nth(1), Some("-1,2,1"));
    assert_eq!(csv.lines().nth(5), Some("0,0,1"));
    let svg = String::from_utf8(runs[0].1.clone()).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
}

#[test]
fn sens_rows() {
    let o = ncx(&["sens", "--file", &fixture("ex4.ncx"), "--problem", "Q", "--at", "0", "--eps", "1", "--method", "direct"]);
    assert_eq!(stdout(&o), "x_bar,eps,lo,hi,unbounded_below,unbounded_above,delta\n0,1,-2,2,0,0,0\n");
    let o = ncx(&["sens", "--file", &fixture("ex4.ncx"), "--problem", "P", "--at", "0", "--eps", "1", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[-3.00000095367,3.00000095367]"), "{}", stdout(&o));
}

#[test]
fn normal_and_coderivative() {
    let o = ncx(&["normal", "--file", &fixture("opt3.ncx"), "--set", "S", "--at", "0", "--eps", "0,2"]);
    assert_eq!(stdout(&o), "x_bar,eps,lo,hi,unbounded_below,unbounded_above\n0,0,-inf,0,1,0\n0,2,-inf,0,1,0\n");
    let o = ncx(&["coderiv", "--file", &fixture("ex4.ncx"), "--op", "sum", "--set", "G,G", "--at", "0", "--y", "0,0", "--eps", "0", "--v", "0", "--u", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().nth(1), Some("0,0,0,0,0,0,0"));
}
