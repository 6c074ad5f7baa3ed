use std::process::{Command, Output};

fn nomrw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nomrw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_alpha_example() {
    let o = nomrw(&["check-alpha", "a#X,b#X,c#X", "lam([a]app(a,X))", "lam([b]app(b,(a c).X))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
    let o = nomrw(&["check-alpha", "", "[a]X", "[b]X"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fresh_and_errors() {
    assert_eq!(nomrw(&["fresh", "a#X", "a", "f(X, [a]a)"]).status.code(), Some(0));
    assert_eq!(nomrw(&["fresh", "", "a", "f(X)"]).status.code(), Some(1));
    let o = nomrw(&["check-alpha", "", "f(", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:3"));
    assert_eq!(nomrw(&["normalize", "--theory", "no-such-theory.nrs", "", "a"]).status.code(), Some(2));
}

#[test]
fn check_closed_lambda() {
    let o = nomrw(&["check-closed", "--theory", "lambda.nrs"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for r in ["beta", "sub_var", "sub_eps", "sub_app", "sub_lam"] {
        assert!(text.contains(&format!("{r}: closed")), "{text}");
    }
}

#[test]
fn t_unify_differentiation() {
    let args = [
        "t-unify",
        "--theory",
        "diff.nrs",
        "--depth",
        "8",
        "y#G |- lam([z]diff(lam([y]plus(sin(F),G)),z))",
        "|- lam([z]cos(z))",
    ];
    let o = nomrw(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("solution: y#G |- [F -> y]  (valid)"), "{text}");

    let mut json_args = vec!["--json"];
    json_args.extend(args);
    let a = nomrw(&json_args);
    let b = nomrw(&json_args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let sol = &v["solutions"][0];
    assert_eq!(sol["context"], serde_json::json!(["y#G"]));
    assert_eq!(sol["substitution"]["F"], "y");
    assert_eq!(sol["verified"], "valid");
    assert_eq!(sol["derivation"][1]["step"]["rule"], "diff_plus");
}

#[test]
fn unify_and_match() {
    let o = nomrw(&["--json", "unify", "f(X, a)", "f(b, Y)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["solutions"][0]["substitution"]["X"], "b");
    assert_eq!(nomrw(&["unify", "X", "f(X)"]).status.code(), Some(1));
    assert_eq!(nomrw(&["match", "[a]X", "[b]b"]).status.code(), Some(0));
    assert_eq!(nomrw(&["match", "f(X, X)", "f(a, b)"]).status.code(), Some(1));
}

#[test]
fn rewrite_normalize_narrow() {
    let o = nomrw(&["rewrite", "--theory", "lambda", "--closed", "--steps", "3", "", "app(lam([a]a), b)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("beta at []"));
    let o = nomrw(&["--json", "normalize", "--theory", "lambda", "", "app(lam([a]a), b)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["term"], "b");
    let o = nomrw(&["--json", "narrow", "--theory", "forall2", "--depth", "3", "--closed", "", "pair(forall([a]X), X)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(v["depth_limited"], true);
    let o = nomrw(&["--json", "narrow", "--theory", "forall2", "--depth", "9", "--closed", "--basic", "", "pair(forall([a]X), X)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
}
