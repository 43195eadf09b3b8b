use std::path::PathBuf;
use std::process::{Command, Output};

use cuntz_core::wr::{build_w, WOptions};
use cuntz_core::{FiniteRing, Mat, RingSpec};
use serde_json::Value;
use sha2::{Digest, Sha256};

fn cuntz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuntz")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--out", "json"]);
    let o = cuntz(&a);
    (code(&o), serde_json::from_slice(&o.stdout).unwrap_or(Value::Null))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cuntz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn node_id(dot: &str, label: &str) -> String {
    let needle = format!("[label=\"{label}\"]");
    let line = dot.lines().find(|l| l.contains(&needle)).unwrap_or_else(|| panic!("{label} missing:\n{dot}"));
    line.trim().split_whitespace().next().unwrap().to_string()
}

#[test]
fn w_of_zmod4_draws_the_incomparable_pair() {
    let o = cuntz(&["compute-w", "--ring", "zmod4", "--kmax", "2", "--out", "dot"]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph") && dot.trim_end().ends_with('}'));
    let z4 = FiniteRing::zmod(4).unwrap();
    let w = build_w(&z4, 2, &WOptions::default()).unwrap();
    let diag22 = w.class_of(&Mat::parse(&z4, "[[2,0],[0,2]]").unwrap()).unwrap();
    let a = node_id(&dot, &w.classes[diag22].to_string());
    let b = node_id(&dot, "[[1]]");
    let dashed = |x: &str, y: &str| dot.contains(&format!("{x} -> {y} [dir=none, style=dashed"));
    assert!(dashed(&a, &b) || dashed(&b, &a), "{dot}");
}

#[test]
fn precsim_exit_codes() {
    let yes = cuntz(&["precsim", "--ring", "gf2", "--a", "[[1]]", "--b", "[[1,0],[0,0]]"]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).starts_with("true"));
    let no = cuntz(&["precsim", "--ring", "gf2", "--a", "[[1,0],[0,1]]", "--b", "[[1]]"]);
    assert_eq!(code(&no), 1);
    assert_eq!(code(&cuntz(&["precsim", "--ring", "nonsense", "--a", "[[1]]", "--b", "[[1]]"])), 2);
    assert_eq!(code(&cuntz(&["precsim", "--ring", "gf2", "--a", "[[1]", "--b", "[[1]]"])), 2);
    assert_eq!(code(&cuntz(&["precsim", "--ring", "gf2"])), 2);
    let (c, v) = json(&["precsim", "--ring", "zmod4", "--a", "[[2]]", "--b", "[[1]]", "--relation", "malcolmson"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "true");
}

#[test]
fn diagonalize_certificate() {
    let (c, v) = json(&["diagonalize", "--ring", "zmod4", "--a", "[[2,2],[2,2]]"]);
    assert_eq!(c, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["certificate"]["d"]["entries"], "[[2,0],[0,0]]");
    assert_eq!(v["verdict"], "true");
    assert!(v["result"]["certificate"]["row_ops"].is_array());
}

#[test]
fn unknown_is_not_false() {
    // One stored stage and an open tail: nothing to factor through.
    let o = cuntz(&["seq-compact", "--ring", "gf2", "--seq", "[[1]]"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("unknown"));
    let (c, v) = json(&["seq-compact", "--ring", "zmod4", "--seq", "[[2]] | | [[1]]"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"], "false");
    assert_eq!(v["certificate"], "cap_relative");
}

#[test]
fn json_is_deterministic() {
    let args = [
        "states", "--ring", "product(gf2,gf3)", "--variant", "sylvester", "--samples", "64", "--seed", "7",
    ];
    let a = cuntz(&[&args[..], &["--out", "json"]].concat());
    let b = cuntz(&[&args[..], &["--out", "json", "--jobs", "2"]].concat());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let w1 = cuntz(&["compute-w", "--ring", "zmod4", "--out", "json"]);
    let w2 = cuntz(&["compute-w", "--ring", "zmod4", "--out", "json"]);
    assert_eq!(w1.stdout, w2.stdout);
}

#[test]
fn states_emit_rational_pairs() {
    let (c, v) = json(&["states", "--monoid", "nsd", "--bound", "2", "--unit", "(1,0)"]);
    assert_eq!(c, 0);
    let verts = v["result"]["vertices"].as_array().unwrap();
    assert_eq!(verts.len(), 2);
    for coord in verts[0].as_array().unwrap() {
        assert_eq!(coord.as_array().unwrap().len(), 2);
    }
}

#[test]
fn run_file_and_manifest() {
    let cfg = scratch("w.conf");
    std::fs::write(&cfg, "# W of Z/4\nverb = compute-w\nring = zmod4\nk_max = 2\nout = json\n").unwrap();
    let man = scratch("w.manifest.json");
    let via_file = cuntz(&["run", cfg.to_str().unwrap(), "--manifest", man.to_str().unwrap()]);
    assert_eq!(code(&via_file), 0);
    let direct = cuntz(&["compute-w", "--ring", "zmod4", "--kmax", "2", "--out", "json"]);
    assert_eq!(via_file.stdout, direct.stdout);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&man).unwrap()).unwrap();
    let spec = RingSpec::parse("zmod4").unwrap().to_file_string();
    assert_eq!(m["ring_spec"], spec.as_str());
    assert_eq!(m["ring_spec_sha256"], hex::encode(Sha256::digest(spec.as_bytes())).as_str());
    assert_eq!(m["bounds"]["k_max"], 2);
    assert_eq!(m["schema_version"], 1);

    let bad = scratch("bad.conf");
    std::fs::write(&bad, "ring = zmod4\n").unwrap();
    assert_eq!(code(&cuntz(&["run", bad.to_str().unwrap()])), 2);
}

#[test]
fn ring_file_input() {
    let f = scratch("f4.ring");
    std::fs::write(&f, RingSpec::parse("matrix(gf2,2)").unwrap().to_file_string()).unwrap();
    let o = cuntz(&["compute-v", "--ring", f.to_str().unwrap(), "--kmax", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn diagram_only_where_defined() {
    assert_eq!(code(&cuntz(&["shift", "st", "--mono", "x1", "--out", "dot"])), 2);
    let o = cuntz(&["compute-lambda", "--monoid", "lambda(N)", "--bound", "2", "--out", "dot"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("->"));
}

#[test]
fn sequence_verbs() {
    let seq = "[[1]] [[1],[0]] | [[1,0]]";
    let o = cuntz(&["seq-validate", "--ring", "gf2", "--seq", seq]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let bad = cuntz(&["seq-validate", "--ring", "gf2", "--seq", "[[1]] [[0],[0]] | [[1,0]]"]);
    assert_eq!(code(&bad), 1);
    let (c, v) = json(&["seq-to-idem", "--ring", "zmod4", "--seq", "[[1]] [[1]] | auto | auto", "--splitting"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["splitting"]["identity"], true);
    let (c, v) = json(&["idem-to-seq", "--ring", "gf2", "--idem", "[[1,0],[0,0]]"]);
    assert_eq!(c, 0);
    assert!(v["result"]["sequence"]["tail"]["stabilized"].is_object());
    let o = cuntz(&[
        "seq-sup", "--ring", "gf2", "--seq", "[[1]] | | [[1]]", "--seq", "[[1,0],[0,1]] | | [[1,0],[0,1]]", "--close",
    ]);
    assert_eq!(code(&o), 0);
    let (c, _) = json(&["seq-compact", "--ring", "gf2", "--seq", "[[1,0],[0,0]] | | [[1,0],[0,0]]"]);
    assert_eq!(c, 0);
}

#[test]
fn cu_verbs() {
    assert_eq!(code(&cuntz(&["check-cu", "--monoid", "N"])), 1);
    assert_eq!(code(&cuntz(&["check-cu", "--monoid", "Nbar^2"])), 0);
    let (c, v) = json(&["compacts", "--ring", "gf2"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["compact"].as_array().unwrap().len(), 3);
    let (c, v) = json(&["s-unital", "--ring", "ideal(zmod4,[2])", "--n", "1"]);
    assert_eq!(c, 1);
    assert!(v["result"]["levels"][0]["counterexample"].is_object());
}

#[test]
fn shift_verbs() {
    assert_eq!(stdout(&cuntz(&["shift", "nf", "--word", "x2 x0 x1"])), "x0 x1\n");
    assert_eq!(stdout(&cuntz(&["shift", "mul", "--p", "x0 + x1", "--q", "x0"])), "x0^2 + x0\n");
    assert_eq!(stdout(&cuntz(&["shift", "st", "--mono", "x2^3"])), "2\n");
    let over = cuntz(&["shift", "mul", "--p", "x0^3", "--q", "x0", "--degree", "3"]);
    assert_eq!(code(&over), 2);
    let (c, v) = json(&["shift", "compact-search", "--vars", "1", "--degree", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["complete"], true);
    let partial = cuntz(&["shift", "compact-search", "--vars", "2", "--degree", "2", "--candidates", "5"]);
    assert_eq!(code(&partial), 3);
    assert!(stdout(&partial).contains("(partial)"));
}
