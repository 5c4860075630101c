use std::io::Write;
use std::process::{Command, Output, Stdio};

fn reebtop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reebtop")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn omega_search_example() {
    let o = reebtop(&["omega", "--presentation", "gens: a,b ; rels: [a,[a,b]], [b,[a,b]]", "--search"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("2"));

    let o = reebtop(&["--json", "omega", "--family", "circle-bundle-rank2g", "--g", "3", "--e", "-1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["omega"], 6);
}

#[test]
fn simulate_circle_bundle_dot() {
    let o = reebtop(&["simulate", "--builder", "circle-bundle", "--g", "2", "--e", "-1", "--dot"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("// cycle_rank=2 delta2=6 "), "{out}");
    assert!(out.contains("digraph reeb {"));
    assert_eq!(out.matches("deg=2").count(), 6);
}

#[test]
fn heisenberg_estimate_is_exact() {
    let o = reebtop(&["bounds", "estimate", "--profile", "heisenberg"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Δ₂ = 4 (exact)"));
    let o = reebtop(&["--json", "bounds", "estimate", "--profile", "heisenberg"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["lower"].as_i64(), v["upper"].as_i64(), v["exact"].as_bool()), (Some(4), Some(4), Some(true)));
}

#[test]
fn exit_codes() {
    assert_eq!(reebtop(&["--no-such-flag"]).status.code(), Some(2));
    assert_eq!(reebtop(&["omega"]).status.code(), Some(2));
    assert_eq!(reebtop(&["--help"]).status.code(), Some(0));
    assert_eq!(reebtop(&["omega", "--presentation", "gens: a ; rels:"]).status.code(), Some(1));
    assert_eq!(reebtop(&["bounds", "estimate", "--profile", "nowhere"]).status.code(), Some(1));
    let o = reebtop(&["--json", "word", "x y"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn script_from_stdin_and_graph_round_trip() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_reebtop"))
        .args(["--json", "simulate", "--script", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"h0\nh2 split @c1 (0,0)  # two spheres\nh1 merge @c1 @c2\nh3 @c1\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cycle_rank"], 1);

    let dir = std::env::temp_dir().join(format!("reebtop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.json");
    std::fs::write(&path, v["graph"].to_string()).unwrap();
    let o = reebtop(&["reeb", path.to_str().unwrap(), "--profile", "s2xs1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("cycle_rank=1"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn deterministic_with_seed() {
    let args = ["--seed", "11", "closure", "--relators", "a^2 b^3", "--probe", "b", "--samples", "50"];
    assert_eq!(stdout(&reebtop(&args)), stdout(&reebtop(&args)));
    assert!(stdout(&reebtop(&args)).contains("seed 11"));
}

#[test]
fn verify_alias_runs_every_check() {
    let o = reebtop(&["verify-paper"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("14/14 passed"));
}
