use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn brunnian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brunnian"))
        .args(args)
        .env_remove("BRUNNIAN_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_string()
}

const BORROMEAN: &str = "A(1,3) A(2,3) A(1,3)' A(2,3)'";

#[test]
fn mu_examples() {
    let o = brunnian(&["mu", "--strands", "3", "--braid", BORROMEAN, "--index", "1,2,3"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "1"));
    let o = brunnian(&["mu", "--strands", "3", "--braid", "", "--index", "1,2,3"]);
    assert_eq!(stdout(&o), "0");
    let o = brunnian(&["mu", "--strands", "3", "--braid", BORROMEAN, "--index", "1,1,3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("repeated"));
    let o = brunnian(&["mu", "--strands", "3", "--braid", "s7", "--index", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = brunnian(&["mu", "--strands", "3", "--braid", "(((", "--index", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let o = brunnian(&["verify", "--n", "2", "--invariant", "conway:a4", "--family", "powers:1:-3..3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["pass"], 7);
    assert_eq!(v["coefficients"]["1|1"], 1);
    assert_eq!(v["order"], serde_json::json!(["1"]));
    let predicted: Vec<i64> = v["rows"].as_array().unwrap().iter().map(|r| r["predicted"].as_i64().unwrap()).collect();
    assert_eq!(predicted, vec![9, 4, 1, 0, 1, 4, 9]);
    assert_eq!(v["vanishing"]["summary"]["fail"], 0);

    let o = brunnian(&["verify", "--n", "2", "--invariant", "conway:a2", "--family", "powers:1:-2..2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"]["1|1"], 0);

    let o = brunnian(&["verify", "--n", "2", "--invariant", "conway:a4", "--family", "powers:1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = brunnian(&["verify", "--n", "2", "--invariant", "jones", "--family", "unlink"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tree_reduce_examples() {
    let o = brunnian(&["tree-reduce", "(4 (1 (2 3)))"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coords"], serde_json::json!([1, 0]));
    // the same comb with the cyclic order at one vertex flipped
    let o = brunnian(&["tree-reduce", "(4 ((2 3) 1))"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coords"], serde_json::json!([-1, 0]));
    let o = brunnian(&["tree-reduce", "((1 3) (2 4))"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coords"], serde_json::json!([0, -1]));
    assert_eq!(brunnian(&["tree-reduce", "(1 2"]).status.code(), Some(2));
}

#[test]
fn other_commands() {
    let o = brunnian(&["conway", "--strands", "2", "--braid", "s1 s1 s1"]);
    assert_eq!(stdout(&o), "[1,0,1]");
    let o = brunnian(&["conway", "--strands", "2", "--braid", "s1 s1", "--engine", "skein"]);
    assert_eq!(stdout(&o), "[0,1]");
    let o = brunnian(&["conway", "--pd", r#"{"components":2,"crossings":[]}"#]);
    assert_eq!(stdout(&o), "[]");
    let o = brunnian(&["conway", "--pd", r#"{"components":1,"crossings":[]}"#, "--engine", "det"]);
    assert_eq!(o.status.code(), Some(2));

    let o = brunnian(&["milnor-link", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["crossings"], 12);
    let braid = v["braid"].as_str().unwrap().to_string();
    let o = brunnian(&["brunnian-check", "--strands", "3", "--braid", &braid]);
    assert_eq!(o.status.code(), Some(0));
    let o = brunnian(&["mu", "--strands", "3", "--braid", &braid, "--index", "1,2,3"]);
    assert_eq!(stdout(&o), "1");
    let o = brunnian(&["brunnian-check", "--strands", "3", "--braid", "A(1,2)"]);
    assert_eq!(o.status.code(), Some(1));
    let o = brunnian(&["brunnian-check", "--strands", "3", "--braid", "s1"]);
    assert_eq!(o.status.code(), Some(3));

    let o = brunnian(&["basis", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["basis"][1]["sigma"], "21");
    assert_eq!(v["basis"][1]["tree"], "(4 (2 (1 3)))");
}

fn entries(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for sub in fs::read_dir(dir).unwrap() {
        let sub = sub.unwrap().path();
        if sub.is_dir() {
            out.extend(fs::read_dir(&sub).unwrap().map(|e| e.unwrap().path()));
        }
    }
    out
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["verify", "--n", "2", "--invariant", "conway:a4", "--family", "powers:1:-2..2 conj:1:3:2", "--cache-dir", d];
    let cold = brunnian(&args);
    assert_eq!(cold.status.code(), Some(0));
    let stored = entries(dir.path());
    assert!(!stored.is_empty());
    assert!(stored.iter().all(|p| p.extension().is_some_and(|e| e == "json")));
    let warm = brunnian(&args);
    assert_eq!(cold.stdout, warm.stdout);
    let uncached = brunnian(&args[..args.len() - 2]);
    assert_eq!(cold.stdout, uncached.stdout);

    let mut checked: Vec<&str> = args.to_vec();
    checked.extend(["--verify-cache", "1"]);
    assert_eq!(brunnian(&checked).stdout, cold.stdout);

    // a tampered entry is caught by sampling
    for p in &stored {
        let text = fs::read_to_string(p).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["value"] = "[7]".into();
        fs::write(p, v.to_string()).unwrap();
    }
    assert_eq!(brunnian(&checked).status.code(), Some(1));

    let empty = tempfile::tempdir().unwrap();
    let e = empty.path().to_str().unwrap();
    brunnian(&["conway", "--strands", "2", "--braid", "s1 s1", "--cache-dir", e, "--no-cache"]);
    assert!(entries(empty.path()).is_empty());
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_brunnian"))
        .args(["conway", "--strands", "3", "--braid", BORROMEAN])
        .env("BRUNNIAN_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "[0,0,0,0,1]");
    assert_eq!(entries(dir.path()).len(), 1);
}

#[test]
fn concurrent_processes_share_a_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap().to_string();
    let children: Vec<_> = (0..4)
        .map(|_| {
            Command::new(env!("CARGO_BIN_EXE_brunnian"))
                .args(["verify", "--n", "2", "--invariant", "conway:a4", "--family", "powers:1:-2..2", "--cache-dir", &d])
                .stdout(std::process::Stdio::piped())
                .spawn()
                .unwrap()
        })
        .collect();
    let outs: Vec<Output> = children.into_iter().map(|c| c.wait_with_output().unwrap()).collect();
    assert!(outs.iter().all(|o| o.status.code() == Some(0) && o.stdout == outs[0].stdout));
    for p in entries(dir.path()) {
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
        assert!(v["value"].is_string());
    }
}
