//! Batch studies over the solver: config parsing, parameter sweeps, hover
//! trim, the inboard-cutout comparison and plot-ready exports.
//!
//! Each `run_*` command writes its outputs under an output directory and
//! returns the paths it wrote. Output files and their CSV headers:
//!
//! | command | files | CSV columns |
//! |---|---|---|
//! | simulate | `simulate_summary.json`, `simulate_spanwise.csv`, `simulate_timeseries.csv`, `budget.json` (with a `power` block) | `span_fraction,lift_n,power_w`; `t_s,lift_n,eta_force_n,lift_translational_n,lift_added_mass_n,lift_rotational_n,power_w` |
//! | sweep | `sweep.csv`, `sweep.json`, `sweep_failures.csv` (when any point failed) | see [`sweep::SWEEP_COLUMNS`] |
//! | trim | `trim.json` | |
//! | cutout-study | `cutout_report.json`, `cutout_spanwise.csv` | see [`cutout::SPANWISE_COLUMNS`] |
//! | control-sim | `control_trace.csv` | `t_s,psi_true_deg,psi_est_deg,omega_dps,control_output` |
//! | fit-kinematics | `fit.json` | |

pub mod config;
pub mod cutout;
pub mod export;
pub mod sweep;

use std::path::{Path, PathBuf};

use serde_json::json;

pub use config::StudyConfig;
pub use cutout::{run_cutout_study, CutoutReport};
pub use export::{Format, Table};
pub use sweep::{hover_trim, run_sweep, SweepResult, TrimResult};

use crate::control::{simulate_closed_loop, ControlConfig, TraceSample};
use crate::error::{Error, Result};
use crate::kinematics::{fit_fourier, load_samples_csv, FourierFit};
use crate::power::{
    decompose, gf_to_newtons, inertial_power, newtons_to_gf, MotorElectrical, PowerBudget, WingMassModel,
};
use crate::ubet::{simulate_cycle, CycleResult};

/// Process exit codes of the command-line tool.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const COMPUTE: i32 = 2;
    pub const IO: i32 = 3;
}

/// Exit code for an error surfaced by a command.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io { .. } | Error::Csv { .. } => exit_code::IO,
        Error::Config(_) | Error::InvalidPlanform(_) | Error::InvalidKinematics(_) | Error::Json(_) => {
            exit_code::CONFIG
        }
        _ => exit_code::COMPUTE,
    }
}

fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

pub fn spanwise_table(result: &CycleResult) -> Table {
    let mut t = Table::new(["span_fraction", "lift_n", "power_w"]);
    for i in 0..result.span_fractions.len() {
        t.push(vec![
            result.span_fractions[i],
            result.spanwise_lift[i],
            result.spanwise_power[i],
        ]);
    }
    t
}

pub fn time_series_table(result: &CycleResult) -> Table {
    let mut t = Table::new([
        "t_s",
        "lift_n",
        "eta_force_n",
        "lift_translational_n",
        "lift_added_mass_n",
        "lift_rotational_n",
        "power_w",
    ]);
    for s in &result.time_series {
        t.push(vec![
            s.t,
            s.forces.total_zeta(),
            s.forces.total_eta(),
            s.forces.zeta.translational,
            s.forces.zeta.added_mass,
            s.forces.zeta.rotational,
            s.power,
        ]);
    }
    t
}

pub fn control_trace_table(trace: &[TraceSample]) -> Table {
    let mut t = Table::new(["t_s", "psi_true_deg", "psi_est_deg", "omega_dps", "control_output"]);
    for s in trace {
        t.push(vec![
            s.t_s,
            s.psi_true.to_degrees(),
            s.psi_est.to_degrees(),
            s.omega.to_degrees(),
            s.control_output,
        ]);
    }
    t
}

/// Power budget for a simulated cycle from the config's `power` block.
pub fn power_budget_for(config: &StudyConfig, result: &CycleResult) -> Result<Option<PowerBudget>> {
    let Some(spec) = &config.power else {
        return Ok(None);
    };
    let wing = config.wing.build()?;
    let kin = config.kinematics.build()?;
    let elements = wing.discretize(config.solver.sections)?;
    let wings = if config.solver.pair { 2 } else { 1 };
    let mass = WingMassModel::from_blade_elements(&elements, spec.wing_mass_kg, wings)?;
    let inertial = inertial_power(&mass, &kin, config.solver.steps_per_cycle)?;
    let motor = MotorElectrical::new(spec.motor_resistance_ohm)?;
    Ok(Some(decompose(
        spec.input_power_w,
        spec.current_a,
        &motor,
        result.mean_aero_power,
        inertial.rectified_mean,
    )?))
}

pub fn run_simulate(config: &StudyConfig, out_dir: &Path) -> Result<(CycleResult, Vec<PathBuf>)> {
    config.validate()?;
    let wing = config.wing.build()?;
    let kin = config.kinematics.build()?;
    let result = simulate_cycle(&wing, &kin, &config.environment, &config.solver)?;

    let mut written = Vec::new();
    let summary = json!({
        "mean_lift_n": result.mean_lift,
        "mean_lift_gf": newtons_to_gf(result.mean_lift),
        "mean_aero_power_w": result.mean_aero_power,
        "lift_to_aero_power_gf_per_w": result.lift_to_aero_power().ok(),
        "induced_velocity_m_s": result.induced_velocity,
        "induced_solution": result.induced,
        "reynolds": result.reynolds,
        "frequency_hz": result.frequency,
        "area_cm2": wing.area() * 1e4,
        "aspect_ratio": wing.aspect_ratio(),
        "stroke_amplitude_deg": kin.amplitude().to_degrees(),
    });
    let metadata = json!({
        "solver_version": env!("CARGO_PKG_VERSION"),
        "solver": config.solver,
        "environment": config.environment,
    });
    let path = out_path(out_dir, "simulate_summary.json");
    export::write_json(&path, &export::json_document(metadata.clone(), summary))?;
    written.push(path);

    let path = out_path(out_dir, "simulate_spanwise.csv");
    export::export(&spanwise_table(&result), Format::Csv, &path, metadata.clone())?;
    written.push(path);
    let path = out_path(out_dir, "simulate_timeseries.csv");
    export::export(&time_series_table(&result), Format::Csv, &path, metadata.clone())?;
    written.push(path);

    if let Some(budget) = power_budget_for(config, &result)? {
        let path = out_path(out_dir, "budget.json");
        export::write_json(&path, &export::json_document(metadata, serde_json::to_value(budget)?))?;
        written.push(path);
    }
    Ok((result, written))
}

pub fn run_sweep_command(config: &StudyConfig, workers: usize, out_dir: &Path) -> Result<(SweepResult, Vec<PathBuf>)> {
    let result = run_sweep(config, workers)?;
    let mut written = Vec::new();
    let path = out_path(out_dir, "sweep.csv");
    export::export(&result.to_table(), Format::Csv, &path, result.metadata.clone())?;
    written.push(path);

    let mut metadata = result.metadata.clone();
    metadata["generated_unix_s"] = json!(std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0));
    let payload = json!({
        "table": result.to_table().to_json_value(),
        "failures": result.failures,
    });
    let path = out_path(out_dir, "sweep.json");
    export::write_json(&path, &export::json_document(metadata, payload))?;
    written.push(path);

    if !result.failures.is_empty() {
        let path = out_path(out_dir, "sweep_failures.csv");
        export::export(&result.failures_table(), Format::Csv, &path, result.metadata.clone())?;
        written.push(path);
    }
    Ok((result, written))
}

/// Trims the config's wing and kinematics to `target_gf` of lift.
pub fn run_trim(
    config: &StudyConfig,
    target_gf: f64,
    bounds: Option<[f64; 2]>,
    out_dir: &Path,
) -> Result<(TrimResult, Vec<PathBuf>)> {
    config.validate()?;
    let axes = config.axes()?;
    let wing = config.wing.build()?;
    let kin = config.kinematics.build()?;
    let trim = hover_trim(
        &wing,
        &kin,
        &config.environment,
        &config.solver,
        gf_to_newtons(target_gf),
        bounds.unwrap_or(axes.trim_bounds_hz),
        axes.trim_tolerance,
    )?;
    let payload = json!({
        "target_lift_gf": target_gf,
        "frequency_hz": trim.frequency,
        "mean_lift_gf": newtons_to_gf(trim.lift),
        "aero_power_w": trim.result.mean_aero_power,
        "induced_velocity_m_s": trim.result.induced_velocity,
        "reynolds": trim.result.reynolds,
        "iterations": trim.iterations,
        "area_cm2": wing.area() * 1e4,
    });
    let metadata = sweep::run_metadata(config, &axes);
    let path = out_path(out_dir, "trim.json");
    export::write_json(&path, &export::json_document(metadata, payload))?;
    Ok((trim, vec![path]))
}

pub fn run_cutout_command(config: &StudyConfig, out_dir: &Path) -> Result<(CutoutReport, Vec<PathBuf>)> {
    config.validate()?;
    let report = run_cutout_study(
        &config.wing.build()?,
        &config.kinematics.build()?,
        &config.environment,
        &config.solver,
        config.cutout_study.span_fraction,
        config.cutout_study.frequency_hz,
    )?;
    let metadata = json!({
        "solver_version": env!("CARGO_PKG_VERSION"),
        "solver": config.solver,
        "environment": config.environment,
    });
    let mut written = Vec::new();
    let path = out_path(out_dir, "cutout_report.json");
    export::write_json(
        &path,
        &export::json_document(metadata.clone(), serde_json::to_value(&report)?),
    )?;
    written.push(path);
    let path = out_path(out_dir, "cutout_spanwise.csv");
    export::export(&report.spanwise_table(), Format::Csv, &path, metadata)?;
    written.push(path);
    Ok((report, written))
}

pub fn run_control_command(
    config: &StudyConfig,
    seed: u64,
    out_dir: &Path,
) -> Result<(Vec<TraceSample>, Vec<PathBuf>)> {
    let control = config.control.clone().unwrap_or_default();
    control.validate().map_err(|e| Error::Config(e.to_string()))?;
    let trace = simulate_closed_loop(control.initial_plant(), &control, seed)?;
    let path = out_path(out_dir, "control_trace.csv");
    export::export(&control_trace_table(&trace), Format::Csv, &path, json!({}))?;
    Ok((trace, vec![path]))
}

/// Fits a Fourier series to `t_s, angle_deg` samples and writes the
/// coefficients in degrees.
pub fn run_fit_command(
    samples_csv: &Path,
    frequency: f64,
    harmonics: usize,
    out_dir: &Path,
) -> Result<(FourierFit, Vec<PathBuf>)> {
    let samples = load_samples_csv(samples_csv)?;
    let fit = fit_fourier(&samples, frequency, harmonics)?;
    let payload = json!({
        "frequency_hz": frequency,
        "series": fit.series.to_spec(),
        "residual_rms_deg": fit.residual_rms.to_degrees(),
        "samples": samples.len(),
    });
    let path = out_path(out_dir, "fit.json");
    export::write_json(&path, &export::json_document(json!({"source": samples_csv}), payload))?;
    Ok((fit, vec![path]))
}

/// Default control-loop config, exposed for examples.
pub fn default_control() -> ControlConfig {
    ControlConfig::default()
}
