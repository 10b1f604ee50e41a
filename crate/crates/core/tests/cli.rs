use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn rpp(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rpp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn rpp");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

#[test]
fn seq1d_round_trip_with_errors() {
    let dir = tempfile::tempdir().unwrap();
    let pat = path(dir.path(), "s.rpp");
    let o = rpp(&["gen", "rps1d", "--d", "4", "--m", "6", "--nR", "12", "-o", &pat], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("positions: 70664"));

    for (pos, seed) in [("0", 1), ("1234", 2), ("70518", 3)] {
        let seed = seed.to_string();
        let w = rpp(&["window", "--pattern", &pat, "--pos", pos, "--flips", "1", "--seed", &seed], None);
        assert!(w.status.success());
        let l = rpp(&["locate", "--pattern", &pat, "--window", "-", "--json"], Some(&stdout(&w)));
        assert!(l.status.success());
        let v: serde_json::Value = serde_json::from_slice(&l.stdout).unwrap();
        assert_eq!(v["position"].as_str(), Some(pos));
        assert_eq!(v["errors"], 1);
    }

    let v = rpp(&["verify", "--file", &pat, "--json"], None);
    assert_eq!(v.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["min_distance"].as_u64().unwrap() >= 4);
}

#[test]
fn locate_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let pat = path(dir.path(), "s.rpp");
    assert!(rpp(&["gen", "rps1d", "--d", "4", "--m", "6", "--nR", "12", "-o", &pat], None).status.success());
    let w = rpp(&["window", "--pattern", &pat, "--pos", "500", "--flips", "20", "--seed", "9"], None);
    let l = rpp(&["locate", "--pattern", &pat], Some(&stdout(&w)));
    assert_eq!(l.status.code(), Some(4));
    let bad = rpp(&["locate", "--pattern", &pat], Some("0101\n"));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn array_region_and_locate() {
    let dir = tempfile::tempdir().unwrap();
    let pat = path(dir.path(), "a.rpp");
    let o = rpp(&["gen", "rpa2d", "--d", "2", "--m", "6", "--n1", "2", "--n2", "108", "-o", &pat], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = rpp(&["verify", "--file", &pat], None);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));

    let w = rpp(&["window", "--pattern", &pat, "--row", "123456789", "--col", "987654321"], None);
    assert!(w.status.success());
    let l = rpp(&["locate", "--pattern", &pat, "--json"], Some(&stdout(&w)));
    assert!(l.status.success(), "{}", String::from_utf8_lossy(&l.stderr));
    let r: serde_json::Value = serde_json::from_slice(&l.stdout).unwrap();
    assert_eq!(r["row"].as_str(), Some("123456789"));
    assert_eq!(r["col"].as_str(), Some("987654321"));
}

#[test]
fn lazy_array_sampled_verify() {
    let dir = tempfile::tempdir().unwrap();
    let pat = path(dir.path(), "r.rpp");
    let o = rpp(&["gen", "rank2d", "--d", "2", "--m", "4", "--n1", "44", "--n2", "72", "--lazy", "-o", &pat], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let args = ["verify", "--file", &pat, "--rows", "0..60", "--cols", "0..90", "--samples", "300", "--seed", "5", "--json"];
    let a = rpp(&args, None);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = rpp(&args, None);
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["seed"], 5);
    assert_eq!(report["pairs"], 300);
}

#[test]
fn verify_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let pat = path(dir.path(), "e.rpp");
    assert!(rpp(&["gen", "exact", "--n", "6", "--d", "4", "-o", &pat], None).status.success());
    assert_eq!(rpp(&["verify", "--file", &pat], None).status.code(), Some(0));
    assert_eq!(rpp(&["verify", "--file", &pat, "--d", "5"], None).status.code(), Some(3));
}

#[test]
fn qary_generators_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, extra) in [
        ("qary-ta", vec!["--q", "8", "--k", "2"]),
        ("qary-tb", vec!["--q", "16", "--k", "1"]),
        ("crps", vec!["--n", "4", "--p", "5", "--r", "7"]),
        ("exact", vec!["--n", "4", "--d", "4", "--q", "5"]),
    ] {
        let pat = path(dir.path(), &format!("{kind}.rpp"));
        let mut args = vec!["gen", kind, "-o", &pat];
        args.extend(extra);
        let o = rpp(&args, None);
        assert!(o.status.success(), "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let v = rpp(&["verify", "--file", &pat], None);
        assert_eq!(v.status.code(), Some(0), "{kind}: {}", stdout(&v));
    }
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--construction", "rps1d", "--d", "4", "--m", "6", "--nR", "12", "--e-max", "2", "--trials", "50", "--seed", "11", "--json"];
    let a = rpp(&args, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, rpp(&args, None).stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["seed"], 11);
    assert_eq!(r["rows"][1]["success"], 50);
    assert_eq!(rpp(&["simulate", "--construction", "rps1d", "--d", "4", "--m", "6", "--e-max", "1"], None).status.code(), Some(2));
}

#[test]
fn search_table_output() {
    let o = rpp(&["search", "--table", "5"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    let row5 = text.lines().find(|l| l.trim_start().starts_with("5 |")).unwrap();
    let cells: Vec<&str> = row5.split('|').nth(1).unwrap().split_whitespace().collect();
    assert_eq!(cells, ["14", "7", "6", "6"]);
}
