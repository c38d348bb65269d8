//! End-to-end tests of the binary: file formats, exit codes, report shape,
//! byte stability, and the closed generate-reanalyze loop.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gausep"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gausep-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_v_file(dir: &Path, name: &str, v: &[[f64; 4]; 4]) -> PathBuf {
    let flat: Vec<f64> = v.iter().flatten().copied().collect();
    let body = serde_json::json!({ "V": flat });
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&body).unwrap()).unwrap();
    path
}

fn standard_v(a: f64, b: f64, c1: f64, c2: f64) -> [[f64; 4]; 4] {
    [
        [a, 0.0, c1, 0.0],
        [0.0, a, 0.0, c2],
        [c1, 0.0, b, 0.0],
        [0.0, c2, 0.0, b],
    ]
}

fn tmsv(r: f64) -> [[f64; 4]; 4] {
    let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
    standard_v(ch, ch, sh, -sh)
}

fn run_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report must be valid JSON")
}

#[test]
fn analyze_vacuum() {
    let dir = tmp_dir("vacuum");
    let path = write_v_file(&dir, "vacuum.json", &standard_v(0.5, 0.5, 0.0, 0.0));
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = run_json(&out);
    assert_eq!(rep["verdict"]["physical"], Value::Bool(true));
    assert_ne!(rep["verdict"]["separable"], "no");
    assert!((rep["certificate"]["r1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((rep["certificate"]["r2"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(rep["consistent"], Value::Bool(true));
}

#[test]
fn analyze_tmsv_is_entangled_with_witness() {
    let dir = tmp_dir("tmsv");
    let path = write_v_file(&dir, "tmsv.json", &tmsv(0.5));
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = run_json(&out);
    assert_eq!(rep["verdict"]["separable"], "no");
    assert_eq!(rep["certificate"], Value::Null);
    let wv = rep["witness"]["value"].as_f64().expect("witness present");
    assert!(wv < -1e-10, "witness value {wv}");
    // the root search must refuse the state
    assert_eq!(rep["dgcz"]["root"], Value::Null);
    assert_eq!(rep["dgcz"]["consistent"], Value::Bool(true));
}

#[test]
fn analyze_separable_with_cross_checks() {
    let dir = tmp_dir("sep");
    let path = write_v_file(&dir, "sep.json", &standard_v(1.0, 1.0, 0.6, 0.3));
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rep = run_json(&out);
    assert_eq!(rep["verdict"]["separable"], "yes");
    assert!(rep["certificate"].is_object());
    let r1 = rep["certificate"]["r1"].as_f64().unwrap();
    assert!((r1 - 1.3660254037844386).abs() < 1e-10);
    assert!(rep["dgcz"]["root"].as_f64().is_some());
    assert_eq!(rep["dgcz"]["conditions_pass"], Value::Bool(true));
    assert_eq!(rep["dgcz"]["consistent"], Value::Bool(true));
    assert_eq!(rep["simon"]["consistent"], Value::Bool(true));
    assert_eq!(rep["consistent"], Value::Bool(true));
    assert_eq!(rep["witness"], Value::Null);
}

#[test]
fn analyze_rejects_malformed_input() {
    let dir = tmp_dir("malformed");
    let path = dir.join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(&path, r#"{"V": [1.0, 2.0]}"#).unwrap();
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // asymmetric matrix
    let mut v = standard_v(1.0, 1.0, 0.3, 0.1);
    v[0][1] = 0.5;
    let path = write_v_file(&dir, "asym.json", &v);
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().arg("analyze").arg(dir.join("missing.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_unphysical_exits_3_with_report() {
    let dir = tmp_dir("unphys");
    let path = write_v_file(&dir, "unphys.json", &standard_v(0.4, 1.0, 0.0, 0.0));
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let rep = run_json(&out);
    assert_eq!(rep["verdict"]["physical"], Value::Bool(false));
    assert_eq!(rep["verdict"]["separable"], "no");
    assert_eq!(rep["certificate"], Value::Null);

    // negative-definite block: not a state at all
    let path = write_v_file(&dir, "notastate.json", &standard_v(-0.5, 1.0, 0.0, 0.0));
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn analyze_reports_are_byte_stable() {
    let dir = tmp_dir("stable");
    let path = write_v_file(&dir, "s.json", &standard_v(1.2, 0.9, 0.4, -0.2));
    let a = bin().arg("analyze").arg(&path).arg("--seed").arg("7").output().unwrap();
    let b = bin().arg("analyze").arg(&path).arg("--seed").arg("7").output().unwrap();
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_blocks_and_dgcz_convention() {
    let dir = tmp_dir("conv");
    // blocks form of the half-convention matrix
    let blocks = serde_json::json!({
        "blocks": {
            "A": [1.0, 0.0, 0.0, 1.0],
            "B": [1.0, 0.0, 0.0, 1.0],
            "C": [0.6, 0.0, 0.0, 0.3]
        }
    });
    let pb = dir.join("blocks.json");
    std::fs::write(&pb, serde_json::to_string(&blocks).unwrap()).unwrap();
    let out_blocks = bin().arg("analyze").arg(&pb).output().unwrap();
    assert_eq!(out_blocks.status.code(), Some(0));

    // the doubled matrix read back through the dgcz convention
    let doubled = standard_v(2.0, 2.0, 1.2, 0.6);
    let pd = write_v_file(&dir, "doubled.json", &doubled);
    let out_dgcz = bin()
        .arg("analyze")
        .arg(&pd)
        .arg("--convention")
        .arg("dgcz")
        .output()
        .unwrap();
    assert_eq!(out_dgcz.status.code(), Some(0));

    let (ra, rb) = (run_json(&out_blocks), run_json(&out_dgcz));
    for key in ["a", "b", "c1", "c2"] {
        assert_eq!(
            ra["standard_form"][key].as_f64().unwrap(),
            rb["standard_form"][key].as_f64().unwrap(),
            "{key} differs between input routes"
        );
    }
    assert_eq!(ra["verdict"]["separable"], rb["verdict"]["separable"]);
}

#[test]
fn region_scan_columns_and_gap() {
    let dir = tmp_dir("scan");
    let out_path = dir.join("scan.csv");
    let out = bin()
        .args(["region-scan", "1.0", "1.0", "--t-steps", "10", "--grid", "150"])
        .arg("--output")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,c1sq_bound,grid_max_bound,r1,r2,rel_gap"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    let last = rows.last().unwrap();
    assert!((last[0] - 1.0).abs() < 1e-15);
    assert!((last[1] - 0.25).abs() < 1e-12, "bound at t=1: {}", last[1]);
    assert!((last[3] - 1.0).abs() < 1e-12 && (last[4] - 1.0).abs() < 1e-12);
    for row in &rows {
        assert!(row[5] <= 1e-6, "rel gap {} at t = {}", row[5], row[0]);
    }

    // vacuum-floor variances: every bound is zero
    let out = bin()
        .args(["region-scan", "0.5", "0.5", "--t-steps", "4", "--grid", "50"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for line in String::from_utf8(out.stdout).unwrap().lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(cols[1].abs() < 1e-15 && cols[2].abs() < 1e-15);
    }
}

#[test]
fn random_state_round_trip_and_determinism() {
    let base = tmp_dir("rand");
    for (kind, expect) in [
        ("separable", "yes"),
        ("entangled", "no"),
        ("boundary", "boundary"),
    ] {
        let dir = base.join(kind);
        let out = bin()
            .args(["random-state", kind, "--count", "5", "--seed", "42"])
            .arg("--output")
            .arg(&dir)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        for i in 0..5 {
            let path = dir.join(format!("state_{i:03}.json"));
            let out = bin().arg("analyze").arg(&path).output().unwrap();
            assert_eq!(out.status.code(), Some(0));
            let rep = run_json(&out);
            assert_eq!(
                rep["verdict"]["separable"], expect,
                "{kind} state {i} reanalyzed as {:?}",
                rep["verdict"]["separable"]
            );
            if kind == "entangled" {
                assert!(rep["witness"]["value"].as_f64().unwrap() < 0.0);
            }
        }
    }
    // determinism: identical seeds give identical bytes
    let (d1, d2) = (base.join("det1"), base.join("det2"));
    for d in [&d1, &d2] {
        let out = bin()
            .args(["random-state", "separable", "--count", "3", "--seed", "9"])
            .arg("--output")
            .arg(d)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    for i in 0..3 {
        let name = format!("state_{i:03}.json");
        assert_eq!(
            std::fs::read(d1.join(&name)).unwrap(),
            std::fs::read(d2.join(&name)).unwrap()
        );
    }
}

#[test]
fn sample_p_reports_z_scores() {
    let dir = tmp_dir("sample");
    // degenerate vacuum P-function: exact reconstruction
    let vac = write_v_file(&dir, "vac.json", &standard_v(0.5, 0.5, 0.0, 0.0));
    let out = bin()
        .args(["sample-p"])
        .arg(&vac)
        .args(["--n", "100000", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rep = run_json(&out);
    assert_eq!(rep["max_abs_z"].as_f64().unwrap(), 0.0);

    let sep = write_v_file(&dir, "sep.json", &standard_v(1.0, 1.0, 0.6, 0.3));
    let out = bin()
        .args(["sample-p"])
        .arg(&sep)
        .args(["--n", "200000", "--seed", "11"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rep = run_json(&out);
    assert!(rep["max_abs_z"].as_f64().unwrap() <= 5.0);

    // no certificate for an entangled state
    let ent = write_v_file(&dir, "tmsv.json", &tmsv(0.5));
    let out = bin().args(["sample-p"]).arg(&ent).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
