use std::process::{Command, Output};

fn isola(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isola")).args(args).env_remove("ISOLA_PRECISION").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn p2_root() {
    let o = isola(&["beta1", "roots", "--p", "2", "--from", "0.5", "--to", "3"]);
    assert!(o.status.success());
    let roots: Vec<f64> = stdout(&o).lines().map(|l| l.trim().parse().unwrap()).collect();
    assert_eq!(roots.len(), 1);
    assert!((roots[0] - 1.84940).abs() < 1e-3);
}

#[test]
fn identities_report() {
    let o = isola(&["identities", "--check", "C", "--pmax", "20"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("C(p)=p(p+1)^2/3 verified exactly"));
    let o = isola(&["identities", "--check", "A", "--pmax", "30"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = isola(&["identities", "--check", "sums", "--lmax", "60"]);
    assert!(o.status.success());
}

#[test]
fn stokes_json_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for f in [&a, &b] {
        let o = isola(&["stokes", "expand", "--order", "5", "--depth", "1", "--out", f.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["eta[1][1]"].as_str().map(|s| s.parse::<f64>().unwrap()), Some(1.0));
    assert!(v.get("psi[5][5]").is_some());
}

#[test]
fn exact_json_encodes_graded_rationals() {
    let o = isola(&["stokes", "expand", "--order", "2", "--exact"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // η₂^{[2]} = (3 − t²)/(4t³)
    let e = &v["eta[2][2]"];
    assert_eq!(e["g"], 0);
    assert_eq!(e["num"], serde_json::json!(["3", "0", "-1"]));
    assert_eq!(e["den"], serde_json::json!(["0", "0", "0", "4"]));
    assert_eq!(v["psi[1][1]"]["g"], 1);
}

#[test]
fn linearize_writes_coefficients() {
    let o = isola(&["linearize", "--order", "3", "--depth", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.get("p[3][3]").is_some() && v.get("a[2][2]").is_some() && v.get("f[2]").is_some());
}

#[test]
fn mode_is_required() {
    assert!(!isola(&["stokes", "expand", "--order", "3"]).status.success());
    assert!(!isola(&["stokes", "expand", "--order", "3", "--exact", "--depth", "1"]).status.success());
    assert!(!isola(&["beta1", "roots", "--p", "2", "--from", "3", "--to", "1"]).status.success());
    assert!(!isola(&["frobnicate"]).status.success());
}

#[test]
fn excluded_depth_fails_only_when_strict() {
    let args = ["collision", "--p", "3", "--depth", "10"];
    assert!(isola(&args).status.success());
    let mut strict = vec!["--strict"];
    strict.extend(args);
    assert_eq!(isola(&strict).status.code(), Some(3));
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_isola"))
        .args(["beta1", "eval", "--p", "2", "--depth", "1"])
        .env("ISOLA_PRECISION", "32")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least 53"));
}

#[test]
fn isola_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("isola.csv");
    let o = isola(&[
        "spectrum", "isola", "--p", "2", "--depth", "1", "--eps", "0.05", "--samples", "8", "--csv",
        f.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&f).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mu,re_plus,im_plus,re_minus,im_minus"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert!(rows.len() >= 8);
    for r in rows {
        assert!(r[1] > 0.0 && (r[1] + r[3]).abs() < 1e-10 && (r[2] - r[4]).abs() < 1e-10);
    }
}

#[test]
fn verify_exit_status_tracks_outcome() {
    let o = isola(&["verify", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("[PASS]"));
    let o = isola(&["verify", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));
}
