use std::path::Path;
use std::process::Command;

use flapwing::harness::config::SweepSpec;
use flapwing::harness::export::{self, Format, Table};
use flapwing::harness::{self, hover_trim, run_cutout_study, run_sweep, StudyConfig};
use flapwing::kinematics::WingKinematics;
use flapwing::power::{gf_to_newtons, newtons_to_gf};
use flapwing::ubet::{simulate_cycle, AeroEnvironment, SolverSettings};
use flapwing::wing::presets;

fn quick_solver() -> SolverSettings {
    SolverSettings {
        steps_per_cycle: 120,
        ..SolverSettings::default()
    }
}

fn quick_config() -> StudyConfig {
    StudyConfig {
        solver: quick_solver(),
        ..StudyConfig::default()
    }
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_flapwing"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, config: &StudyConfig) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, config.to_json_string().unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn degenerate_sweep_matches_direct_simulation() {
    let config = quick_config();
    let sweep = run_sweep(&config, 1).unwrap();
    assert_eq!(sweep.rows.len(), 1);
    let direct = simulate_cycle(
        &config.wing.build().unwrap(),
        &config.kinematics.build().unwrap(),
        &config.environment,
        &config.solver,
    )
    .unwrap();
    let row = &sweep.rows[0];
    assert!((row.mean_lift_gf - newtons_to_gf(direct.mean_lift)).abs() <= 1e-12 * row.mean_lift_gf);
    assert!((row.aero_power_w - direct.mean_aero_power).abs() <= 1e-12 * row.aero_power_w);
}

#[test]
fn trim_frequency_falls_with_area() {
    let mut config = quick_config();
    config.sweep = SweepSpec {
        areas_cm2: Some(vec![20.1, 25.5, 31.4]),
        target_lifts_gf: Some(vec![15.8]),
        ..SweepSpec::default()
    };
    let sweep = run_sweep(&config, 0).unwrap();
    assert!(sweep.failures.is_empty());
    let f: Vec<f64> = sweep.rows.iter().map(|r| r.frequency_hz).collect();
    assert!(f[0] > f[1] && f[1] > f[2], "{f:?}");
    for r in &sweep.rows {
        assert!((r.mean_lift_gf / 15.8 - 1.0).abs() < 0.005);
    }
}

#[test]
fn failing_points_are_recorded_not_dropped() {
    let mut config = quick_config();
    config.sweep = SweepSpec {
        target_lifts_gf: Some(vec![15.8, 1e6]),
        ..SweepSpec::default()
    };
    let sweep = run_sweep(&config, 2).unwrap();
    assert_eq!(sweep.rows.len(), 1);
    assert_eq!(sweep.failures.len(), 1);
    assert_eq!(sweep.failures[0].point.index, 1);
    assert!(
        sweep.failures[0].reason.contains("bracket"),
        "{}",
        sweep.failures[0].reason
    );
}

#[test]
fn empty_axis_is_a_config_error() {
    let mut config = quick_config();
    config.sweep.amplitudes_deg = Some(vec![]);
    assert!(matches!(run_sweep(&config, 1), Err(flapwing::Error::Config(_))));
}

#[test]
fn trim_boundary_and_monotonicity() {
    let wing = presets::rectangular_reference();
    let kin = WingKinematics::twisted_reference(190f64.to_radians(), 17.3).unwrap();
    let env = AeroEnvironment::default();
    let s = quick_solver();
    let lift_lo = simulate_cycle(&wing, &kin.with_frequency(10.0).unwrap(), &env, &s)
        .unwrap()
        .mean_lift;
    let at_lo = hover_trim(&wing, &kin, &env, &s, lift_lo, [10.0, 30.0], 0.005).unwrap();
    assert_eq!(at_lo.frequency, 10.0);
    assert_eq!(at_lo.iterations, 0);

    let target = gf_to_newtons(15.8);
    let base = hover_trim(&wing, &kin, &env, &s, target, [5.0, 60.0], 0.005).unwrap();
    let heavier = hover_trim(&wing, &kin, &env, &s, 1.2 * target, [5.0, 60.0], 0.005).unwrap();
    assert!(heavier.frequency > base.frequency);
    assert!(base.iterations <= 60);
    assert!(matches!(
        hover_trim(&wing, &kin, &env, &s, 1e3, [5.0, 60.0], 0.005),
        Err(flapwing::Error::NotBracketed { .. })
    ));
}

#[test]
fn cutout_deltas_grow_with_removed_span() {
    let wing = presets::rectangular_reference();
    let kin = WingKinematics::twisted_reference(190f64.to_radians(), 17.3).unwrap();
    let env = AeroEnvironment::default();
    let s = quick_solver();
    let none = run_cutout_study(&wing, &kin, &env, &s, 0.0, 17.3).unwrap();
    assert_eq!(none.comparison.lift_change, 0.0);
    assert_eq!(none.comparison.power_change, 0.0);
    let quarter = run_cutout_study(&wing, &kin, &env, &s, 0.25, 17.3).unwrap();
    let half = run_cutout_study(&wing, &kin, &env, &s, 0.5, 17.3).unwrap();
    assert!(half.comparison.lift_change.abs() > quarter.comparison.lift_change.abs());
    assert!(half.comparison.power_change.abs() > quarter.comparison.power_change.abs());
    let table = quarter.spanwise_table();
    assert_eq!(
        table.columns,
        [
            "span_fraction",
            "lift_intact",
            "lift_modified",
            "power_intact",
            "power_modified"
        ]
    );
    assert_eq!(table.len(), 20);
}

#[test]
fn exported_tables_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let empty = Table::new(["a", "b"]);
    let path = dir.path().join("empty.csv");
    export::export(&empty, Format::Csv, &path, serde_json::json!({})).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n");

    let mut table = Table::new(["x", "y"]);
    table.push(vec![1.0 / 3.0, -2.5e-17]);
    table.push(vec![f64::NAN, 12345.678901234567]);
    let path = dir.path().join("t.csv");
    export::export(&table, Format::Csv, &path, serde_json::json!({})).unwrap();
    let back = Table::read_csv(&path).unwrap();
    let expected = table.rounded();
    assert_eq!(back.columns, expected.columns);
    for (a, b) in back.rows.iter().zip(&expected.rows) {
        for (x, y) in a.iter().zip(b) {
            assert!(x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()));
        }
    }
}

#[test]
fn sweep_json_carries_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let (_, written) = harness::run_sweep_command(&quick_config(), 1, dir.path()).unwrap();
    assert!(written.iter().any(|p| p.ends_with("sweep.json")));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["metadata"]["solver"]["steps_per_cycle"], 120);
    assert!(doc["metadata"]["generated_unix_s"].is_u64());
    assert_eq!(doc["data"]["table"]["columns"][0], "amplitude_deg");
}

#[test]
fn repeated_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = quick_config();
    config.sweep.amplitudes_deg = Some(vec![120.0, 190.0]);
    config.sweep.frequencies_hz = Some(vec![12.0, 18.0]);
    harness::run_sweep_command(&config, 4, &dir.path().join("a")).unwrap();
    harness::run_sweep_command(&config, 4, &dir.path().join("b")).unwrap();
    assert_eq!(
        std::fs::read(dir.path().join("a/sweep.csv")).unwrap(),
        std::fs::read(dir.path().join("b/sweep.csv")).unwrap()
    );
}

#[test]
fn cli_subcommands_write_their_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();
    let config = write_config(dir.path(), &quick_config());

    for (args, file) in [
        (vec!["simulate"], "simulate_timeseries.csv"),
        (vec!["sweep"], "sweep.csv"),
        (vec!["trim", "--target-gf", "15.8"], "trim.json"),
        (vec!["cutout-study"], "cutout_spanwise.csv"),
        (vec!["control-sim", "--seed", "3"], "control_trace.csv"),
    ] {
        let mut full = vec!["--config", config.as_str(), "--out", out_s, "--steps", "72"];
        full.extend(args.iter());
        let o = cli(&full);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(out.join(file).exists(), "{file}");
    }
    let header = std::fs::read_to_string(out.join("control_trace.csv")).unwrap();
    assert!(header.starts_with("t_s,psi_true_deg,psi_est_deg,omega_dps,control_output\n"));

    let samples = dir.path().join("samples.csv");
    let mut text = String::from("t_s,angle_deg\n");
    for i in 0..100 {
        let t = i as f64 / (100.0 * 20.0);
        text += &format!("{t},{}\n", 10.0 + 30.0 * (2.0 * std::f64::consts::PI * 20.0 * t).sin());
    }
    std::fs::write(&samples, text).unwrap();
    let o = cli(&[
        "fit-kinematics",
        "--samples",
        samples.to_str().unwrap(),
        "--frequency",
        "20",
        "--out",
        out_s,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fit: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("fit.json")).unwrap()).unwrap();
    assert!((fit["data"]["series"]["a0_deg"].as_f64().unwrap() - 10.0).abs() < 1e-9);
    assert!((fit["data"]["series"]["b_deg"][0].as_f64().unwrap() - 30.0).abs() < 1e-9);
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"wing\": 3}").unwrap();
    assert_eq!(
        cli(&["--config", bad.to_str().unwrap(), "simulate"]).status.code(),
        Some(1)
    );

    let mut config = quick_config();
    config.sweep.target_lifts_gf = Some(vec![1e6]);
    let path = write_config(dir.path(), &config);
    let out = dir.path().join("o");
    let o = cli(&["--config", &path, "--out", out.to_str().unwrap(), "sweep"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(out.join("sweep_failures.csv").exists());

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let under_file = blocker.join("out");
    let path = write_config(dir.path(), &quick_config());
    let o = cli(&["--config", &path, "--out", under_file.to_str().unwrap(), "simulate"]);
    assert_eq!(o.status.code(), Some(3));

    assert_eq!(cli(&["--steps", "3", "simulate"]).status.code(), Some(1));
}

#[test]
fn bundled_config_loads() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs/wing_study.json");
    let config = StudyConfig::load(&path).unwrap();
    let axes = config.axes().unwrap();
    assert_eq!(
        axes.amplitudes_deg.len() * axes.areas_cm2.len() * axes.cutout_fractions.len(),
        12
    );
    let wing = config.wing.build().unwrap();
    assert!((wing.area() * 1e4 - 25.5).abs() < 1e-9);
    assert!(config.power.is_some() && config.control.is_some());
}
