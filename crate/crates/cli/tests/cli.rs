use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rlcongest(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rlcongest"))
        .current_dir(dir)
        .env_remove("RLCONGEST_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

#[test]
fn gen_cycle_file() {
    let tmp = tempfile::tempdir().unwrap();
    let out = rlcongest(tmp.path(), &["gen", "--family", "cycle", "--n", "6", "--out", "g"]);
    assert_eq!(code(&out), 0);
    let text = read(tmp.path(), "g/graph.txt");
    assert_eq!(text.lines().next(), Some("6 6"));
    assert_eq!(text.lines().count(), 7);
    assert!(tmp.path().join("g/manifest.json").exists());
}

#[test]
fn env_var_sets_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_rlcongest"))
        .current_dir(tmp.path())
        .env("RLCONGEST_OUT_DIR", "from-env")
        .args(["gen", "--family", "path", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(tmp.path().join("from-env/graph.txt").exists());
}

/// Every graph file `gen` writes is accepted by the commands that read graphs.
#[test]
fn format_closure() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let gens: [(&str, &[&str]); 4] = [
        ("plain.txt", &["--family", "er", "--n", "24", "--p", "0.2", "--seed", "4", "--largest-component"]),
        ("ids.json", &["--family", "connected", "--n", "20", "--m", "40", "--ids"]),
        ("hub.json", &["--family", "cycle", "--n", "9", "--virtual-node"]),
        ("overlay.json", &["--family", "connected", "--n", "20", "--m", "30", "--overlay", "1.0", "--seed", "2"]),
    ];
    for (name, args) in gens {
        let mut full = vec!["gen", "--name", name, "--out", "graphs"];
        full.extend_from_slice(args);
        assert_eq!(code(&rlcongest(dir, &full)), 0, "gen {name}");
    }
    for name in ["plain.txt", "ids.json", "overlay.json"] {
        let graph = format!("graphs/{name}");
        for algo in ["flood", "upcast", "downcast", "wl", "global"] {
            let out = rlcongest(dir, &["sim", "--algo", algo, "--w", "2", "--graph", &graph, "--out", "sim"]);
            assert_eq!(code(&out), 0, "{algo} on {name}: {}", String::from_utf8_lossy(&out.stderr));
        }
        for variant in ["wl", "kwl", "kfwl", "gdwl"] {
            let out = rlcongest(dir, &["wl", "--variant", variant, "--graph", &graph, "--out", "wl"]);
            assert_eq!(code(&out), 0, "{variant} on {name}");
        }
    }
    let out = rlcongest(dir, &["sim", "--algo", "vnode", "--graph", "graphs/hub.json", "--out", "v"]);
    assert_eq!(code(&out), 0);
    let out = rlcongest(dir, &["sim", "--algo", "vedge", "--w", "4", "--graph", "graphs/overlay.json", "--out", "e"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn sim_wl_writes_colors_log_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    rlcongest(dir, &["gen", "--family", "path", "--n", "3"]);
    fs::write(dir.join("x.txt"), "1\n1\n1\n").unwrap();
    let out = rlcongest(dir, &["sim", "--algo", "wl", "--w", "2", "--graph", "graph.txt", "--colors", "x.txt", "--out", "r"]);
    assert_eq!(code(&out), 0);
    assert_eq!(read(dir, "r/colors.txt"), "1\n2\n1\n");
    assert!(read(dir, "r/rounds.csv").starts_with("round,edge_u,edge_v,direction,words"));
    let manifest: serde_json::Value = serde_json::from_str(&read(dir, "r/manifest.json")).unwrap();
    assert_eq!(manifest["status"], "ok");
    assert_eq!(manifest["command"], "sim");
}

#[test]
fn replaying_a_manifest_reproduces_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    rlcongest(dir, &["gen", "--family", "er", "--n", "30", "--p", "0.2", "--seed", "9", "--largest-component"]);
    let runs: [&[&str]; 3] = [
        &["sim", "--algo", "wl", "--w", "3", "--graph", "graph.txt", "--out", "first"],
        &["gadget", "build", "--n", "4", "--m", "10", "--seed", "5", "--out", "first"],
        &["locality", "--count", "6", "--seed", "3", "--out", "first"],
    ];
    for args in runs {
        let _ = fs::remove_dir_all(dir.join("first"));
        let _ = fs::remove_dir_all(dir.join("again"));
        assert_eq!(code(&rlcongest(dir, args)), 0);
        let out = rlcongest(dir, &["replay", "--manifest", "first/manifest.json", "--out", "again"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let manifest: serde_json::Value = serde_json::from_str(&read(dir, "first/manifest.json")).unwrap();
        for file in manifest["outputs"].as_array().unwrap() {
            let file = file.as_str().unwrap();
            assert_eq!(fs::read(dir.join("first").join(file)).unwrap(), fs::read(dir.join("again").join(file)).unwrap(), "{file}");
        }
    }
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    assert_eq!(code(&rlcongest(dir, &["gen", "--family", "cycle", "--n", "5", "--bogus"])), 1);
    assert_eq!(code(&rlcongest(dir, &["sim", "--algo", "wl", "--graph", "missing.txt"])), 1);
    assert_eq!(code(&rlcongest(dir, &["gen", "--family", "cycle", "--n", "2"])), 1);
    // a cycle file has no virtual node
    rlcongest(dir, &["gen", "--family", "cycle", "--n", "5"]);
    assert_eq!(code(&rlcongest(dir, &["sim", "--algo", "vnode", "--graph", "graph.txt"])), 1);
    // distinct colors on trees exceed the wl round bound
    let out = rlcongest(
        dir,
        &["scan", "--algo", "wl", "--colors", "distinct", "--n", "64", "--m-factor", "0", "--w", "1", "--seeds", "1", "--out", "s"],
    );
    assert_eq!(code(&out), 2);
    let manifest: serde_json::Value = serde_json::from_str(&read(dir, "s/manifest.json")).unwrap();
    assert_eq!(manifest["status"], "violation");
    assert_eq!(read(dir, "s/scan.csv").lines().count(), 2, "partial CSV is kept");
    assert_eq!(code(&rlcongest(dir, &["--help"])), 0);
}

#[test]
fn gadget_verify_reports_biconditional() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    for (a, b) in [("0110", "0110"), ("0110", "0111")] {
        rlcongest(dir, &["gadget", "build", "--n", "2", "--m", "4", "--a", a, "--b", b, "--out", "gg"]);
        let out = rlcongest(dir, &["gadget", "verify", "--gadget", "gg/gadget.json", "--out", "vv"]);
        assert_eq!(code(&out), 0);
        let v: serde_json::Value = serde_json::from_str(&read(dir, "vv/verify.json")).unwrap();
        assert_eq!(v["w_colors_agree"], a == b);
        assert_eq!(v["biconditional_holds"], true);
    }
    // uniform colors are not a WL refinement of the gadget coloring
    let n = read(dir, "gg/colors.txt").lines().count();
    fs::write(dir.join("y.txt"), "1\n".repeat(n)).unwrap();
    let out = rlcongest(dir, &["gadget", "verify", "--gadget", "gg/gadget.json", "--colors", "y.txt", "--out", "vv"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn locality_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let out = rlcongest(dir, &["locality", "--count", "10", "--seed", "1", "--out", "loc"]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("edge task accuracy: 1.0000"), "{stdout}");
    let out = rlcongest(dir, &["report", "--input", "loc/graphs.csv", "--out", "rep"]);
    assert_eq!(code(&out), 0);
    assert!(read(dir, "rep/summary.csv").contains("component_n,10,"));
}

#[test]
fn empty_scan_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let out = rlcongest(tmp.path(), &["scan", "--algo", "wl", "--n", "--out", "s"]);
    assert_eq!(code(&out), 0);
    assert_eq!(read(tmp.path(), "s/scan.csv").lines().count(), 1);
}

#[test]
fn vnode_scan_on_stars_tracks_degree_over_width() {
    let tmp = tempfile::tempdir().unwrap();
    let out = rlcongest(tmp.path(), &["scan", "--algo", "vnode", "--family", "star", "--n", "16,32,64", "--seeds", "1", "--out", "s"]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&read(tmp.path(), "s/scan_summary.json")).unwrap();
    let slope = summary["fitted"][0].as_f64().unwrap();
    assert!(slope > 0.5 && slope <= 2.0, "slope {slope}");
}

/// On one graph, the width-dependent share of the rounds halves per doubling
/// of `w`: fitting `rounds = b * m / w + c` leaves `rounds - c` halving to
/// within 25%.
#[test]
fn wl_scan_width_term_halves() {
    let tmp = tempfile::tempdir().unwrap();
    let out = rlcongest(
        tmp.path(),
        &["scan", "--algo", "wl", "--n", "64", "--m-factor", "4", "--seeds", "1", "--w", "1,2,4,8", "--out", "s"],
    );
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_path(tmp.path().join("s/scan.csv")).unwrap();
    let points: Vec<(f64, f64)> = reader
        .deserialize::<BTreeMap<String, String>>()
        .map(|row| {
            let row = row.unwrap();
            let m: f64 = row["m"].parse().unwrap();
            let w: f64 = row["w"].parse().unwrap();
            (m / w, row["rounds"].parse().unwrap())
        })
        .collect();
    assert_eq!(points.len(), 4);
    let k = points.len() as f64;
    let (mx, my) = (points.iter().map(|p| p.0).sum::<f64>() / k, points.iter().map(|p| p.1).sum::<f64>() / k);
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let intercept = my - sxy / sxx * mx;
    for pair in points.windows(2) {
        let ratio = (pair[0].1 - intercept) / (pair[1].1 - intercept);
        assert!((1.5..=2.5).contains(&ratio), "ratio {ratio} for {pair:?}, intercept {intercept}");
    }
}
