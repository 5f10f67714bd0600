use std::path::PathBuf;
use std::process::{Command, Output};

use zeroerr::channels::n_channel;
use zeroerr::io::read_channel;
use zeroerr::{AnyChannel, Rational};

fn zeroerr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeroerr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zeroerr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn channel_round_trip() {
    let path = scratch("n3.json");
    let o = zeroerr(&["channel", "--family", "Nm", "--m", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "inputs: 6\noutputs: 12\n");
    let back = read_channel(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, AnyChannel::Rational(n_channel::<Rational>(3).unwrap()));

    let o = zeroerr(&["channel", "--family", "custom", "--from", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_channel(&stdout(&o)).unwrap(), back);
}

#[test]
fn channel_shapes() {
    for (family, m, summary) in [("Mm", "3", "inputs: 6\noutputs: 21"), ("identity", "4", "inputs: 4\noutputs: 4")] {
        let o = zeroerr(&["channel", "--family", family, "--m", m]);
        assert_eq!(o.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&o.stderr).contains(summary));
    }
}

#[test]
fn channel_csv() {
    let o = zeroerr(&["--csv", "channel", "--family", "Nm", "--m", "2"]);
    let text = stdout(&o);
    assert!(text.starts_with("input,output,p\n"));
    assert_eq!(text.lines().count(), 1 + 4 * 6);
    let o = zeroerr(&["behavior", "pr", "--csv", "--float"]);
    assert!(stdout(&o).contains("0,0,0,0,0.5\n"));
}

#[test]
fn capacity_reports() {
    let o = zeroerr(&["capacity", "nm:3"]);
    assert_eq!(stdout(&o), "vertices: 6\nalpha: 1\ncapacity_bits: 0\ncomplete: true\n");
    let o = zeroerr(&["capacity", "mm:3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["alpha"], 1);
    let o = zeroerr(&["capacity", "identity:8"]);
    assert!(stdout(&o).contains("capacity_bits: 3\n"));
}

#[test]
fn success_modes() {
    let o = zeroerr(&["success", "--channel", "nm:3", "--box", "pm:3", "--protocol", "nm-protocol:3", "--exact", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["success"], "1/1");
    assert_eq!(v["zero_error"], true);

    let o = zeroerr(&["success", "--channel", "mm:3", "--box", "i3322-table", "--protocol", "mm-protocol:3"]);
    assert!(stdout(&o).starts_with("success: 6/7\n"));
    let o = zeroerr(&["--float", "success", "--channel", "mm:3", "--box", "i3322-table", "--protocol", "mm-protocol:3"]);
    assert!(stdout(&o).starts_with("success: 0.857142857143\n"));

    let o = zeroerr(&["success", "--channel", "nm:3", "--box", "cglmp", "--protocol", "nm-protocol:3"]);
    assert!(stdout(&o).starts_with("success: 0.900783423063\nzero_error: false"));

    let run = || zeroerr(&["success", "--channel", "nm:3", "--box", "cglmp", "--protocol", "nm-protocol:3", "--mc", "20000", "11"]);
    let (a, b) = (run(), run());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("trials: 20000"));
}

#[test]
fn tensor_power_specs() {
    let o = zeroerr(&["success", "--channel", "nm:2^2", "--box", "pm:2^2", "--protocol", "nm-protocol:2^2"]);
    assert!(stdout(&o).starts_with("success: 1/1\nzero_error: true"));
}

#[test]
fn searches() {
    let o = zeroerr(&["search-classical", "--channel", "nm:3", "-k", "2"]);
    assert!(stdout(&o).starts_with("success: 7/8\n"));
    let path = scratch("found.json");
    let o = zeroerr(&["search-assisted", "--channel", "nm:2", "--box", "pr", "-k", "2", "--out", path.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("result: found\n"));
    let o = zeroerr(&["success", "--channel", "nm:2", "--box", "pr", "--protocol", path.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("success: 1/1\n"));
    let o = zeroerr(&["search-assisted", "--channel", "nm:2", "--box", "trivial", "-k", "2"]);
    assert!(stdout(&o).starts_with("result: NONE\n"));
}

#[test]
fn graph_exports() {
    let o = zeroerr(&["graph", "nm:2", "--dimacs"]);
    assert!(stdout(&o).starts_with("p edge 4 6\n"));
    let o = zeroerr(&["graph", "mm:3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vertices"], 6);
}

#[test]
fn behavior_from_quantum_file() {
    let path = scratch("cglmp-model.json");
    let json = zeroerr::io::quantum_to_json(&zeroerr::quantum::make_cglmp_model());
    std::fs::write(&path, serde_json::to_string(&json).unwrap()).unwrap();
    let o = zeroerr(&["behavior", "--quantum", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-signaling: true"));
    assert!(matches!(zeroerr::io::read_behavior(&stdout(&o)).unwrap(), zeroerr::AnyBehavior::Float(_)));
}

#[test]
fn exit_codes() {
    assert_eq!(zeroerr(&[]).status.code(), Some(2));
    assert_eq!(zeroerr(&["channel", "--family", "Qm", "--m", "3"]).status.code(), Some(2));
    assert_eq!(zeroerr(&["channel", "--family", "Nm", "--m", "1"]).status.code(), Some(2));
    assert_eq!(zeroerr(&["success", "--channel", "nm:3", "--box", "pm:2", "--protocol", "nm-protocol:3"]).status.code(), Some(2));
    assert_eq!(zeroerr(&["capacity", "/no/such/channel.json"]).status.code(), Some(3));
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(zeroerr(&["capacity", bad.to_str().unwrap()]).status.code(), Some(3));
    let o = zeroerr(&["channel", "--family", "Nm", "--m", "3", "--out", "/no/such/dir/n3.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_paper_report() {
    let o = zeroerr(&["verify-paper", "--json", "--slow"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["provenance"].as_str().is_some_and(|p| !p.is_empty())));
    let failed: Vec<&str> = checks.iter().filter(|c| c["pass"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    // Exit status follows the report.
    assert_eq!(o.status.code(), Some(if failed.is_empty() { 0 } else { 1 }));
    assert!(checks.iter().any(|c| c["name"] == "search-n2-p2"));
}
