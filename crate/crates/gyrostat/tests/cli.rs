use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gyrostat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gyrostat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

#[test]
fn classify_prints_case_and_verdict() {
    let o = gyrostat(&["classify", "--abc", "1,2,3", "--axis", "0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "case ii: Stable");

    let o = gyrostat(&["classify", "--abc", "1,1,3", "--axis", "1,1,0"]);
    assert_eq!(stdout(&o).trim(), "case vi: Unstable");

    let o = gyrostat(&["classify", "--abc", "1,1,1", "--axis", "0.6,-0.8,0"]);
    assert_eq!(stdout(&o).trim(), "case i: Stable");
}

#[test]
fn classify_rejects_non_axis() {
    let o = gyrostat(&["classify", "--abc", "1,2,3", "--axis", "1,1,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a permanent rotation axis"), "{}", stderr(&o));
}

#[test]
fn help_on_every_subcommand() {
    for sub in ["simulate", "spectrum", "classify", "attain", "fit-decay", "preset", "checkpoint-info"] {
        let o = gyrostat(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(stdout(&o).contains("Usage"), "{sub}");
    }
    assert_eq!(gyrostat(&["--help"]).status.code(), Some(0));
    assert_eq!(gyrostat(&[]).status.code(), Some(1));
}

#[test]
fn attain_substitution_examples() {
    let o = gyrostat(&["attain", "--abc", "1,2,3", "--omega0", "0,0,2", "--E0", "0"]);
    assert_eq!(stdout(&o).trim(), "GuaranteedMaxAxis");
    let o = gyrostat(&["attain", "--abc", "1,2,3", "--omega0", "0,0,0", "--E0", "1"]);
    assert_eq!(stdout(&o).trim(), "NoGuarantee");
    let o = gyrostat(&["attain", "--abc", "1,3,3", "--omega0", "0,1,0", "--E0", "0.5"]);
    assert_eq!(stdout(&o).trim(), "GuaranteedDegenerateSubspace");
    let o = gyrostat(&["attain", "--abc", "1,2,3", "--omega0", "0,0,1", "--E0", "-1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fit_decay_on_synthetic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("decay.csv");
    let mut text = String::from("t,y\n");
    for i in 0..=400 {
        let t = i as f64 * 0.1;
        text.push_str(&format!("{t},{}\n", 2.0 * (-0.5 * t).exp()));
    }
    std::fs::write(&path, text).unwrap();
    let o = gyrostat(&["fit-decay", path.to_str().unwrap(), "--column", "y"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("rate 0.5"), "{out}");
    let rate: f64 = out.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((rate - 0.5).abs() < 1e-6);

    let o = gyrostat(&["fit-decay", path.to_str().unwrap(), "--column", "z"]);
    assert_eq!(o.status.code(), Some(1));
    let o = gyrostat(&["fit-decay", dir.path().join("missing.csv").to_str().unwrap(), "--column", "y"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn constant_series_has_no_decay_window() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    std::fs::write(&path, "t,y\n0,1\n1,1\n2,1\n3,1\n4,1\n").unwrap();
    let o = gyrostat(&["fit-decay", path.to_str().unwrap(), "--column", "y"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("window"), "{}", stderr(&o));
}

#[test]
fn unknown_preset_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    let o = gyrostat(&["preset", "spinning-top", "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    for name in ["kelvin-stable", "kelvin-unstable", "soda-can", "zhukovsky-longrun"] {
        assert!(err.contains(name), "{err}");
    }
    assert!(!dir.path().join("x").exists());
}

#[test]
fn simulate_then_inspect_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let scenario = scenarios().join("quick.toml");
    let o = gyrostat(&["simulate", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("timeseries.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "t,om_x,om_y,om_z,M_norm,a_x,a_y,a_z,E,scriptE,G,V,l2v,h1v,E1,energy_residual"
    );
    let o = gyrostat(&["checkpoint-info", out.join("final.lgy").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("grid 8x8x8"));

    let bad = dir.path().join("bad.lgy");
    std::fs::write(&bad, b"NOPE0000").unwrap();
    let o = gyrostat(&["checkpoint-info", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("magic"));
}

#[test]
fn invalid_scenario_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenarios().join("quick.toml")).unwrap();
    let bad_order = dir.path().join("order.toml");
    std::fs::write(&bad_order, text.replace("[1.0, 2.0, 3.0]", "[3.0, 2.0, 1.0]")).unwrap();
    let o = gyrostat(&["simulate", bad_order.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("A <= B <= C"), "{}", stderr(&o));

    let bad_key = dir.path().join("key.toml");
    std::fs::write(&bad_key, text.replace("t_end = 2.0", "t_end = 2.0\ntend = 3.0")).unwrap();
    let o = gyrostat(&["simulate", bad_key.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 13"), "{}", stderr(&o));

    let o = gyrostat(&["simulate", dir.path().join("none.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn spectrum_report_for_case_ii() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.toml");
    std::fs::write(
        &scenario,
        "[cavity]\ndims = [1.0, 1.0, 1.0]\ngrid = [8, 8, 8]\n[inertia]\nmoments = [1.0, 2.0, 3.0]\n\
         [sim]\nnu = 0.05\nomega0 = [0.0, 0.0, 1.0]\n[spectrum]\nmodes = 16\n",
    )
    .unwrap();
    let report = dir.path().join("eig.json");
    let o = gyrostat(&["spectrum", scenario.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("case ii: Stable"));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"verdict\": \"AllPositive\""), "{text}");
    assert!(text.contains("\"zero_multiplicity\": 1"), "{text}");
}

#[test]
fn bundled_scenarios_parse() {
    let mut n = 0;
    for entry in std::fs::read_dir(scenarios()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let s = gyrostat::scenario::load_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(gyrostat::scenario::parse_scenario(&s.to_toml()).unwrap(), s);
            n += 1;
        }
    }
    assert!(n >= 4);
}
