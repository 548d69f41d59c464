use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn specs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn corset(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corset"))
        .args(args)
        .arg("--out")
        .arg(out)
        .current_dir(specs())
        .env_remove("CORSET_BUDGET")
        .output()
        .unwrap()
}

fn table(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn qc5_example() {
    let tmp = tempfile::tempdir().unwrap();
    let out = corset(&["qc5", "--spec", "f2_rel_a.json", "--subgroup", "b", "--nmax", "8"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = table(&tmp.path().join("qc5.csv"));
    assert_eq!(rows[0], ["n", "kappa", "pairs"]);
    assert_eq!(rows.len(), 9);
    assert!(rows[1..].iter().all(|r| r[1] == "0"));
    let m = manifest(tmp.path());
    assert_eq!(m["results"]["verdict"], "consistent-with-quasiconvex");
    assert_eq!(m["spec"]["subgroups"][0]["generators"][0], "b");
    assert_eq!(m["spec"]["params"]["nmax"], 8);
}

#[test]
fn sandwich_example() {
    let tmp = tempfile::tempdir().unwrap();
    let out = corset(&["sandwich", "--spec", "z_star_heis.json", "--subgroup", "t,z", "--N", "6"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = table(&tmp.path().join("sandwich.csv"));
    assert_eq!(rows[0], ["n", "f", "f_bar", "delta"]);
    let delta: Vec<&str> = rows[1..].iter().map(|r| r[3].as_str()).collect();
    assert_eq!(delta, ["0", "1", "2", "3", "4", "5", "6"]);
    let m = manifest(tmp.path());
    assert_eq!(m["results"]["C"], "1");
    assert_eq!(m["results"]["holds"], "true");
}

#[test]
fn every_file_carries_the_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = corset(&["build-coned", "--spec", "z2_rel_ab.json", "--radius", "2"], tmp.path());
    assert!(out.status.success());
    for name in ["coned.csv", "coned.dot"] {
        let text = fs::read_to_string(tmp.path().join(name)).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.ends_with("command=build-coned"), "{name}: {first}");
        assert!(text.contains("params={\"budget\":500000,\"margin\":2,\"n\":4,\"radius\":2}"));
    }
    let m = manifest(tmp.path());
    assert_eq!(m["results"]["cone_vertices"], "10");
    assert!(m["outputs"]["coned.csv"].as_str().unwrap().len() == 64);
}

#[test]
fn closure_needs_no_group() {
    let tmp = tempfile::tempdir().unwrap();
    let out = corset(&["closure", "--f", "0,1,1,1,1"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let fbar: Vec<String> = table(&tmp.path().join("closure.csv"))[1..].iter().map(|r| r[2].clone()).collect();
    assert_eq!(fbar, ["0", "1", "2", "3", "4"]);
}

#[test]
fn fineness_and_close_cosets() {
    let tmp = tempfile::tempdir().unwrap();
    let out = corset(&["fineness", "--spec", "z2_rel_ab.json", "--ns", "2,4"], tmp.path());
    assert!(out.status.success());
    let counts: Vec<String> = table(&tmp.path().join("fineness.csv"))[1..].iter().map(|r| r[3].clone()).collect();
    assert_eq!(counts[1], "86");
    let out = corset(&["close-cosets", "--spec", "f2_close_cosets.json"], tmp.path());
    assert!(out.status.success());
    assert_eq!(manifest(tmp.path())["results"]["l_prime"], "1");
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, r#"{"group": {"kind": "free", "rank": 2}, "colour": 1}"#).unwrap();
    let bad = bad.to_str().unwrap();
    let o = tmp.path().join("o");
    assert_eq!(code(&corset(&["delta", "--spec", bad], &o)), 2);
    assert_eq!(code(&corset(&["bcp", "--spec", "z2_rel_a.json", "--lambda", "5"], &o)), 2);
    assert_eq!(code(&corset(&["qc5", "--spec", "z2.json"], &o)), 2);
    assert_eq!(code(&corset(&["delta", "--spec", "z2.json", "--mode", "fast"], &o)), 2);
    assert_eq!(code(&corset(&["qc5", "--spec", "f2_rel_a.json", "--radius", "3", "--nmax", "6"], &o)), 4);
    assert_eq!(code(&corset(&["qc3", "--spec", "f2_rel_a.json", "--subgroup", "b", "--depth", "3"], &o)), 4);
    assert_eq!(code(&corset(&["delta", "--spec", "z2.json", "--budget", "10"], &o)), 3);
    let env = Command::new(env!("CARGO_BIN_EXE_corset"))
        .args(["delta", "--spec", "z2.json", "--out"])
        .arg(&o)
        .current_dir(specs())
        .env("CORSET_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&env), 3);
    // a path along a in ℤ² rel ⟨a⟩ is 2-close to both ⟨a⟩ and b⟨a⟩
    let inv = corset(&["saturation", "--spec", "z2_rel_a.json", "--word", "a^4", "--epsilon", "2"], &o);
    assert_eq!(code(&inv), 5);
    assert!(String::from_utf8_lossy(&inv.stderr).contains("deep in"));
}
