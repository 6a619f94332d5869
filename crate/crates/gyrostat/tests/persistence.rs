use std::path::Path;

use gyrostat::checkpoint::Checkpoint;
use gyrostat::scenario::{parse_scenario, DtSpec, Format, Scenario};
use gyrostat::simulate::{checkpoint_name, simulate, FINAL_CHECKPOINT, TIMESERIES_FILE};

const DT: f64 = 0.005;

fn scenario(dir: &Path, steps: u64) -> Scenario {
    let mut s = parse_scenario(
        "[cavity]\ndims = [1.0, 1.0, 1.0]\ngrid = [8, 8, 8]\n[inertia]\nmoments = [1.0, 2.0, 3.0]\n\
         [sim]\nnu = 0.05\nomega0 = [0.0, 0.0, 1.0]\n\
         [ic]\nseed = 9\nv_amplitude = 0.8\nomega_delta = [0.1, -0.05, 0.02]\n",
    )
    .unwrap();
    s.sim.dt = DtSpec::Fixed(DT);
    s.sim.t_end = steps as f64 * DT;
    s.sim.sample_every = 50;
    s.output.dir = dir.to_path_buf();
    s.output.formats = vec![Format::Csv, Format::Checkpoint];
    s
}

#[test]
fn same_scenario_gives_identical_csv_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    simulate(&scenario(a.path(), 200)).unwrap();
    simulate(&scenario(b.path(), 200)).unwrap();
    let ca = std::fs::read(a.path().join(TIMESERIES_FILE)).unwrap();
    let cb = std::fs::read(b.path().join(TIMESERIES_FILE)).unwrap();
    assert!(!ca.is_empty());
    assert_eq!(ca, cb);
    let fa = std::fs::read(a.path().join(FINAL_CHECKPOINT)).unwrap();
    let fb = std::fs::read(b.path().join(FINAL_CHECKPOINT)).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn restart_reproduces_uninterrupted_run() {
    let full = tempfile::tempdir().unwrap();
    let mut s = scenario(full.path(), 1000);
    s.sim.checkpoint_every = 500;
    let whole = simulate(&s).unwrap();
    assert_eq!(whole.result.final_state.step, 1000);

    let first = tempfile::tempdir().unwrap();
    let half = simulate(&scenario(first.path(), 500)).unwrap();
    assert_eq!(half.result.final_state.step, 500);
    // The mid-run checkpoint of the long run is the end state of the short one.
    assert_eq!(
        std::fs::read(full.path().join(checkpoint_name(500))).unwrap(),
        std::fs::read(first.path().join(FINAL_CHECKPOINT)).unwrap()
    );

    let second = tempfile::tempdir().unwrap();
    let mut resumed = scenario(second.path(), 1000);
    resumed.ic.restart = Some(first.path().join(FINAL_CHECKPOINT));
    let rest = simulate(&resumed).unwrap();
    assert_eq!(rest.result.final_state, whole.result.final_state);
    assert_eq!(
        std::fs::read(full.path().join(FINAL_CHECKPOINT)).unwrap(),
        std::fs::read(second.path().join(FINAL_CHECKPOINT)).unwrap()
    );
}

#[test]
fn checkpoint_file_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    simulate(&scenario(dir.path(), 20)).unwrap();
    let path = dir.path().join(FINAL_CHECKPOINT);
    let again = dir.path().join("again.lgy");
    Checkpoint::read(&path).unwrap().write(&again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn zero_step_run_writes_header_and_initial_row() {
    let dir = tempfile::tempdir().unwrap();
    let first = simulate(&scenario(dir.path(), 10)).unwrap();
    let out = tempfile::tempdir().unwrap();
    let mut s = scenario(out.path(), 10);
    s.ic.restart = Some(dir.path().join(FINAL_CHECKPOINT));
    s.sim.t_end = first.result.final_state.t;
    let r = simulate(&s).unwrap();
    assert_eq!(r.result.final_state.step, 10);
    let csv = std::fs::read_to_string(out.path().join(TIMESERIES_FILE)).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn restart_against_a_different_setup_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    simulate(&scenario(dir.path(), 5)).unwrap();
    let out = tempfile::tempdir().unwrap();
    let mut s = scenario(out.path(), 10);
    s.sim.nu = 0.06;
    s.ic.restart = Some(dir.path().join(FINAL_CHECKPOINT));
    let err = simulate(&s).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("nu"), "{err}");
}
