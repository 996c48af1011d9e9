use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, Output) {
    let out = Command::new(env!("CARGO_BIN_EXE_leviflat")).args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let json = if args.contains(&"--pretty") {
        Value::Null
    } else {
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
    };
    (code, json, out)
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn complexify_generator() {
    let (code, v, out) = run(&["complexify", "--expr", "~z3*z2-~z2*z3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["complexified"], "w3*z2-w2*z3");
    assert_eq!(v["command"], "complexify");
    assert!(out.stderr.is_empty());
}

#[test]
fn classify_ordinary_point() {
    let (code, v, _) = run(&["classify", "--model", "ex1.lf", "--at", "0,1,1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], serde_json::json!({"classification": "ordinary", "codim": 1}));
}

#[test]
fn classify_degenerate_point() {
    let (_, v, _) = run(&["classify", "--model", "ex1", "--at", "5,0,0,0"]);
    assert_eq!(v["result"]["classification"], "degenerate");
    assert_eq!(v["result"]["codim"], 0);
}

#[test]
fn examples_all_green() {
    for name in ["ex1", "ex2", "ex3-circle"] {
        let (code, v, out) = run(&["example", name]);
        assert_eq!(code, 0, "{name}: {v}");
        assert_eq!(v["result"]["all_green"], true);
        assert!(out.stderr.is_empty());
    }
}

#[test]
fn report_shape_and_determinism() {
    let args = ["segre", "--model", "ex2", "--at=-2,1,1,0"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    for key in ["schema_version", "command", "inputs", "result", "certificates", "timings"] {
        assert!(a.get(key).is_some(), "missing {key}");
    }
    assert_eq!(without_timings(a), without_timings(b));
}

#[test]
fn exit_codes() {
    // verified false: only one leaf passes through this point
    let (code, v, _) = run(&["multileaf", "--model", "ex1", "--at", "0,1,5,0"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["count"], 1);

    let (code, v, out) = run(&["segre", "--model", "ex1", "--at", "1,0,0,1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "input_error");
    assert!(!out.stderr.is_empty());

    let (code, _, _) = run(&["icomp", "--model", "no/such/file.lf"]);
    assert_eq!(code, 2);

    let (code, v, _) = run(&["icomp", "--model", "ex3-circle", "--budget", "1"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "budget_exceeded");

    let out = Command::new(env!("CARGO_BIN_EXE_leviflat")).args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn model_file_from_disk() {
    let dir = std::env::temp_dir().join(format!("leviflat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("plane.lf");
    std::fs::write(&path, "levi-flat N=2 n=1\n[generators]\nhermitian: (z2 - ~z2)*(-1/2*i)\n").unwrap();
    let (code, v, _) = run(&["icomp", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dimension"], 2);

    std::fs::write(&path, "levi-flat N=2 n=1\n[generators]\nhermitian: (z2 - ~z2)*(-1/2*i)\n[extra]\n").unwrap();
    let (code, v, _) = run(&["icomp", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("unknown section"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn foliation_commands() {
    let (code, v, _) = run(&["tangent", "--model", "ex1"]);
    assert_eq!((code, &v["result"]["tangent"]), (0, &Value::Bool(true)));
    let (code, v, _) = run(&["first-integral", "--model", "ex1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["is_first_integral"], true);
    let (code, _, _) = run(&["level-set", "--model", "ex1"]);
    assert_eq!(code, 0);
    let (code, v, _) = run(&["restrict", "--model", "ex1", "--expr", "z1 - z2 - z3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["singular_codim"], 2);
    let (code, v, _) = run(&["web", "--model", "ex2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["order"], 2);
    let (code, v, _) = run(&["tangent", "--model", "ex2"]);
    assert_eq!(code, 2, "ex2 has no foliation section: {v}");
}

#[test]
fn point_commands() {
    let (code, v, _) = run(&["cr", "--model", "ex1", "--at", "(0, 1, 1, 0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["cr_dimension"], 2);
    let (code, v, _) = run(&["multileaf", "--model", "ex2", "--at=-2,1,1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 2);
    let (code, v, _) = run(&["sd-locus", "--model", "ex1", "--order", "lex"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["codim"], 2);
    assert_eq!(v["inputs"]["order"], "lex");
    let (code, v, _) = run(&["check-levi", "--model", "ex2", "--samples", "3", "--seed", "7"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 3);
}

#[test]
fn pretty_output() {
    let (code, _, out) = run(&["classify", "--model", "ex1", "--at", "0,1,1,0", "--pretty"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classification: ordinary"), "{text}");
}
