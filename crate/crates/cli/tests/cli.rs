use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nrecur_cli::{decode, export_trace, import_trace, TraceFormat};
use serde_json::Value;
use tempfile::TempDir;

fn nrecur(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrecur"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(out: &Path) -> Value {
    let text = fs::read_to_string(out.join("report.json")).expect("report written");
    serde_json::from_str(&text).expect("valid json")
}

#[test]
fn chain_m6_halves_down_to_zero() {
    let dir = TempDir::new().unwrap();
    let o = nrecur(&["--mode", "chain", "--m", "6"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["chain"]["periods"], serde_json::json!([442, 26, 1]));
    assert_eq!(r["chain"]["zero_fixed_point"], true);
    assert_eq!(r["all_passed"], true);
}

#[test]
fn verify_m6_passes() {
    let dir = TempDir::new().unwrap();
    let o = nrecur(&["--m", "6"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    let claims = r["claims"].as_array().unwrap();
    assert!(claims.len() > 10);
    assert!(claims.iter().all(|c| c["passed"] == true));
}

#[test]
fn cycle_csv_for_perturbed_system() {
    let dir = TempDir::new().unwrap();
    let o = nrecur(
        &["--mode", "cycle", "--m", "6", "--system", "z", "--d", "0"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("cycles.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("m,system,d,i,T_measured,P_measured,T_predicted,P_predicted,match")
    );
    let row: Vec<&str> = lines.next().unwrap().rsplitn(6, ',').collect();
    assert_eq!(row[..5], ["true", "26", "139", "26", "139"]);
}

#[test]
fn simulated_lane_trace_round_trips() {
    let dir = TempDir::new().unwrap();
    let o = nrecur(
        &[
            "--mode", "simulate", "--m", "6", "--system", "x", "-i", "0", "--steps", "90",
            "--emit-traces",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let memory = report(dir.path())["systems"][0]["memory"].as_u64().unwrap() as usize;
    let path = dir.path().join("traces").join("x_m_6_i_0.bits");
    let trace = import_trace(&path, TraceFormat::TextBits).unwrap();
    assert_eq!(trace.len(), memory + 90);
    let ones: Vec<usize> = (0..90).filter(|&t| trace[t]).collect();
    assert_eq!(ones, [2, 19, 36, 53, 70, 87]);

    for format in [TraceFormat::TextBits, TraceFormat::RunLength] {
        let copy = dir.path().join(format!("copy.{}", format.extension()));
        export_trace(&trace, 7, &copy, format).unwrap();
        assert_eq!(import_trace(&copy, format).unwrap(), trace);
    }
}

#[test]
fn run_length_traces_from_cycle_mode() {
    let dir = TempDir::new().unwrap();
    let o = nrecur(
        &[
            "--mode", "cycle", "--m", "6", "--system", "z", "--d", "1", "--emit-traces",
            "--trace-format", "run-length",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    let row = &r["cycles"][0]["report"];
    let steps = row["measured_transient"].as_u64().unwrap() + row["measured_period"].as_u64().unwrap();
    let text = fs::read_to_string(dir.path().join("traces").join("z_m_6_d_1.rle")).unwrap();

    let shape = TempDir::new().unwrap();
    nrecur(
        &["--mode", "construct", "--m", "6", "--system", "z", "--d", "1"],
        shape.path(),
    );
    let memory = report(shape.path())["systems"][0]["memory"].as_u64().unwrap();
    // The trace starts with the initial window.
    assert_eq!(decode(&text, TraceFormat::RunLength).unwrap().len() as u64, memory + steps);
}

#[test]
fn exhausted_budget_exits_one_with_report() {
    let dir = TempDir::new().unwrap();
    let o = nrecur(
        &["--mode", "cycle", "--m", "6", "--system", "y", "--budget", "100"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let r = report(dir.path());
    assert_eq!(r["all_passed"], false);
    assert!(!r["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn configuration_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(nrecur(&["--mode", "cycle"], dir.path()).status.code(), Some(2));
    assert_eq!(nrecur(&["--m", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(
        nrecur(&["--m", "6", "--claims", "nonsense"], dir.path()).status.code(),
        Some(2)
    );
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "m = 6\nunknown = 1\n").unwrap();
    let o = nrecur(&["--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(
        &cfg,
        "m = 6\nmode = \"cycle\"\nsystem = \"w\"\nd = [0, 1]\n",
    )
    .unwrap();
    let o = nrecur(&["--config", cfg.to_str().unwrap(), "--d", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    let rows = r["cycles"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["d"], 1);
    assert_eq!(r["config"]["system"], "w");
}

#[test]
fn claim_filter_narrows_verify() {
    let dir = TempDir::new().unwrap();
    let o = nrecur(&["--m", "6", "--claims", "prop1,chain"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    let ids: Vec<&str> = r["claims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["claim"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["prop1", "chain"]);
}
