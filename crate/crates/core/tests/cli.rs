use std::fs;
use std::path::Path;

use gdlp::cli::run;

fn gdlp(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["gdlp"];
    argv.extend_from_slice(args);
    let out = run(argv);
    (out.status, out.output)
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn reduce_then_solve_single_clause() {
    let dir = tempfile::tempdir().unwrap();
    let sat = path(dir.path(), "in.sat");
    fs::write(&sat, "p e1p3sat 3 1\n0 1 2\n").unwrap();
    let out = path(dir.path(), "out.gdlp");
    let (st, text) = gdlp(&["reduce", "--stage", "three", &sat, "-o", &out]);
    assert_eq!(st, 0, "{text}");
    assert!(text.contains("stage: three"));
    assert!(fs::read_to_string(&out).unwrap().starts_with("gdlp v1\n"));

    let w = path(dir.path(), "w.txt");
    let (st, text) = gdlp(&["solve", &out, "-o", &w]);
    assert_eq!((st, text.as_str()), (0, "result: yes\n"));
    let (st, text) = gdlp(&["verify", &out, &w]);
    assert_eq!((st, text.as_str()), (0, "result: yes\n"));
    let (st, _) = gdlp(&["solve", "--no-prune", &out]);
    assert_eq!(st, 0);
}

#[test]
fn unsatisfiable_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let sat = path(dir.path(), "in.sat");
    fs::write(&sat, "p e1p3sat 1 1\n0 0 0\n").unwrap();
    let g = path(dir.path(), "t.gdlp");
    assert_eq!(gdlp(&["reduce", &sat, "-o", &g]).0, 0);
    let (st, text) = gdlp(&["solve", &g]);
    assert_eq!((st, text.as_str()), (1, "result: no\n"));
    let (st, text) = gdlp(&["sat-solve", &sat]);
    assert_eq!((st, text.as_str()), (1, "result: no\n"));
    let (st, text) = gdlp(&["solve", "--no-prune", "--budget", "10", &g]);
    assert_eq!(st, 3);
    assert!(text.contains("budget"));
    let (st, _) = gdlp(&["solve", "--khat", "2", &g]);
    assert_eq!(st, 2);
}

#[test]
fn roundtrip_summary() {
    let (st, text) = gdlp(&["roundtrip", "--n", "3", "--m", "2", "--samples", "200", "--seed", "42", "--stage", "six"]);
    assert_eq!(st, 0);
    assert!(text.contains("agree: 200/200"));
    assert_eq!(
        text,
        gdlp(&["roundtrip", "--n", "3", "--m", "2", "--samples", "200", "--seed", "42", "--stage", "six"]).1
    );
}

#[test]
fn input_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let sat = path(dir.path(), "bad.sat");
    fs::write(&sat, "p e1p3sat 3 2\n0 1 2\n0 x 2\n").unwrap();
    let (st, text) = gdlp(&["sat-solve", &sat]);
    assert_eq!(st, 2);
    assert!(text.contains("line 3"), "{text}");
    assert_eq!(gdlp(&["solve", "--frobnicate", &sat]).0, 2);
    assert_eq!(gdlp(&["sat-solve", &path(dir.path(), "missing.sat")]).0, 2);
    let g = path(dir.path(), "bad.gdlp");
    fs::write(&g, "gdlp v1\ndegree 3\nkhat 1\nbase plain (0 5)\ntarget ()\n").unwrap();
    let (st, text) = gdlp(&["solve", &g]);
    assert_eq!(st, 2);
    assert!(text.contains("line 4"), "{text}");
}

#[test]
fn graph_stage_and_route() {
    let dir = tempfile::tempdir().unwrap();
    let sat = path(dir.path(), "in.sat");
    fs::write(&sat, "p e1p3sat 3 1\n0 1 2\n").unwrap();
    let r = path(dir.path(), "g.route");
    assert_eq!(gdlp(&["reduce", "--stage", "graph", &sat, "-o", &r]).0, 0);
    let p = path(dir.path(), "p.txt");
    let (st, text) = gdlp(&["route", &r, "-o", &p]);
    assert_eq!((st, text.as_str()), (0, "result: yes\n"));
    assert_eq!(gdlp(&["verify", &r, &p]), (0, "result: yes\n".to_string()));
    let mut lines: Vec<String> = fs::read_to_string(&p).unwrap().lines().map(String::from).collect();
    lines.swap(0, 1);
    fs::write(&p, lines.join("\n")).unwrap();
    assert_eq!(gdlp(&["verify", &r, &p]).0, 1);
}

#[test]
fn benes_and_gadgets() {
    let (st, text) = gdlp(&["benes", "--size", "6", "--target", "(0 1 2 3 4 5)"]);
    assert_eq!(st, 0);
    assert!(text.contains("switches: 15"));
    assert!(text.contains("middle-crosses: 1"));
    let (st, text) = gdlp(&["benes", "--size", "3"]);
    assert_eq!(st, 0);
    assert_eq!(text.lines().filter(|l| l.starts_with("switch ")).count(), 3);
    let (st, text) = gdlp(&["gadget-check"]);
    assert!(text.contains("chain-3: match"));
    assert!(text.contains("double: mismatch"));
    assert_eq!(st, 1);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sat = path(dir.path(), "in.sat");
    fs::write(&sat, "p e1p3sat 4 2\n0 1 2\n1 2 3\n").unwrap();
    let a = path(dir.path(), "a.gdlp");
    let b = path(dir.path(), "b.gdlp");
    gdlp(&["reduce", "--stage", "four", &sat, "-o", &a]);
    gdlp(&["reduce", "--stage", "four", &sat, "-o", &b]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(gdlp(&["solve", &a]), gdlp(&["solve", &b]));
}
