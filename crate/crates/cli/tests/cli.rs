use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_girg-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn error_kind(out: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    v["error"]["kind"].as_str().expect("kind").to_string()
}

fn csv_rows(bytes: &[u8]) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(bytes).records().map(|r| r.unwrap()).collect()
}

#[test]
fn reruns_with_same_seed_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut blobs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let out = run(&[
            "qk",
            "--seed",
            "11",
            "--trials",
            "3000",
            "--deterministic",
            "--out",
            path.to_str().unwrap(),
            "--set",
            "ds=1,4",
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let manifest = std::fs::read_to_string(dir.path().join(format!("{name}.manifest.json"))).unwrap();
        blobs.push((std::fs::read(&path).unwrap(), manifest.replace(name, "")));
    }
    assert_eq!(blobs[0], blobs[1]);
    let m: serde_json::Value = serde_json::from_str(&blobs[0].1).unwrap();
    assert_eq!(m["scenario"], "qk");
    assert_eq!(m["seed"], 11);
    assert!(m.get("created_unix").is_none());
    assert_eq!(m["config"]["ds"], "1,4");
}

#[test]
fn different_seeds_differ() {
    let a = run(&["triangle-cond", "--seed", "1", "--trials", "4000", "--set", "ds=2"]);
    let b = run(&["triangle-cond", "--seed", "2", "--trials", "4000", "--set", "ds=2"]);
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn manifest_has_timestamp_unless_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = run(&["bounds", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.csv.manifest.json")).unwrap()).unwrap();
    assert!(m["created_unix"].as_u64().unwrap() > 0);
    assert_eq!(m["core_version"], m["version"]);
}

#[test]
fn tv_curve_refuses_large_n_before_computing() {
    let out = run(&["tv-curve", "--set", "n=7", "--set", "weights=1,1,1,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "infeasible");
    assert!(out.stdout.is_empty());
}

#[test]
fn errors_are_json_on_stderr() {
    let cases: [(&[&str], &str); 5] = [
        (&["no-such-scenario"], "usage"),
        (&["qk", "--set", "bogus=1"], "unknown_key"),
        (&["qk", "--set", "beta=1.5"], "invalid_value"),
        (&["qk", "--set", "noequals"], "usage"),
        (&["covariance", "--trials", "100"], "invalid_value"),
    ];
    for (args, kind) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_kind(&out), kind, "{args:?}");
    }
    let out = run(&["qk", "--config", "/nonexistent/girg.conf"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "io");
}

#[test]
fn star_cond_checks_precondition() {
    let out = run(&["star-cond", "--set", "n=10", "--set", "ds=1", "--set", "ratio=3"]);
    assert_eq!(error_kind(&out), "infeasible");
}

#[test]
fn flags_override_config_file_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(
        &conf,
        "# triangle closure\nscenario = triangle-cond\ntrials = 2000\narcs = 0.9\nds = 1, 2\nseed = 5\n",
    )
    .unwrap();
    let c = conf.to_str().unwrap();
    let rows = csv_rows(&run(&["triangle-cond", "--config", c]).stdout);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| &r[0] == "0.9" && &r[4] == "2000"));

    let rows = csv_rows(&run(&["triangle-cond", "--config", c, "--trials", "1000", "--set", "ds=8"]).stdout);
    assert_eq!(rows.len(), 1);
    assert_eq!((&rows[0][1], &rows[0][4]), ("8", "1000"));

    let wrong = run(&["qk", "--config", c]);
    assert_eq!(error_kind(&wrong), "invalid_value");

    std::fs::write(&conf, "trials 5\n").unwrap();
    assert_eq!(error_kind(&run(&["qk", "--config", c])), "config_syntax");
}

#[test]
fn bounds_columns_are_consistent() {
    let rows = csv_rows(&run(&["bounds", "--set", "ds=1,2,4", "--set", "ks=3"]).stdout);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let lo: f64 = r[7].parse().unwrap();
        let hi: f64 = r[8].parse().unwrap();
        assert!(lo <= hi);
    }
    let uniform: Vec<f64> = rows.iter().map(|r| r[10].parse().unwrap()).collect();
    assert!(uniform[0] <= 1.0 && uniform.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn generate_round_trips_through_edge_list_reader() {
    let out = run(&["generate", "--seed", "3", "--set", "n=300"]);
    assert!(out.status.success());
    let (header, g) = girg_core::samplers::read_edge_list(&out.stdout[..]).unwrap();
    assert_eq!(header.n, 300);
    assert_eq!(header.seed, 3);
    assert!(g.edge_count() > 0);
}

#[test]
fn covariance_reports_theory_column() {
    let rows = csv_rows(
        &run(&[
            "covariance",
            "--trials",
            "20000",
            "--set",
            "spaces=hypercube",
            "--set",
            "pairings=shared",
        ])
        .stdout,
    );
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][1], "shared");
    let theory: f64 = rows[0][5].parse().unwrap();
    assert!((theory - 1.0 / 180.0).abs() < 1e-15);
}

#[test]
fn sweep_scenarios_fit_slopes() {
    let rows = csv_rows(
        &run(&[
            "table1-sweep",
            "--set",
            "ns=2^8..2^10",
            "--set",
            "graphs=4",
            "--set",
            "ks=3",
        ])
        .stdout,
    );
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][7], rows[2][7]);
    assert!(!rows[0][7].is_empty());

    let rows = csv_rows(
        &run(&[
            "table3-sweep",
            "--set",
            "ns=256,512,1024",
            "--set",
            "graphs=4",
            "--set",
            "betas=2.5",
        ])
        .stdout,
    );
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[7].parse::<u64>().unwrap() >= 2));
}

#[test]
fn help_and_version_exit_cleanly() {
    assert!(run(&["--help"]).status.success());
    let v = run(&["--version"]);
    assert!(v.status.success());
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
}
