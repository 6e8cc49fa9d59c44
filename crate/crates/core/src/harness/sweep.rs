use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{StudyConfig, SweepAxes};
use super::export::Table;
use crate::error::{Error, Result};
use crate::kinematics::WingKinematics;
use crate::power::{gf_to_newtons, lift_to_power, newtons_to_gf};
use crate::ubet::{simulate_cycle, AeroEnvironment, CycleResult, SolverSettings};
use crate::wing::WingGeometry;

pub const MAX_TRIM_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrimResult {
    pub frequency: f64,
    pub lift: f64,
    pub iterations: usize,
    pub result: CycleResult,
}

/// Bisects the flapping frequency in `bounds` until the cycle-mean lift is
/// within `tolerance` (relative) of `target_lift` (N). The kinematics are
/// time-rescaled; their shape is unchanged.
pub fn hover_trim(
    wing: &WingGeometry,
    template: &WingKinematics,
    env: &AeroEnvironment,
    settings: &SolverSettings,
    target_lift: f64,
    bounds: [f64; 2],
    tolerance: f64,
) -> Result<TrimResult> {
    let [mut lo, mut hi] = bounds;
    if !(target_lift > 0.0) || !(lo > 0.0 && hi > lo) || !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "trim needs target > 0, 0 < f_lo < f_hi and tolerance > 0; got {target_lift}, {bounds:?}, {tolerance}"
        )));
    }
    let run = |f: f64| -> Result<CycleResult> { simulate_cycle(wing, &template.with_frequency(f)?, env, settings) };
    let close = |lift: f64| (lift - target_lift).abs() < tolerance * target_lift;

    let at_lo = run(lo)?;
    if close(at_lo.mean_lift) {
        return Ok(TrimResult {
            frequency: lo,
            lift: at_lo.mean_lift,
            iterations: 0,
            result: at_lo,
        });
    }
    let at_hi = run(hi)?;
    if close(at_hi.mean_lift) {
        return Ok(TrimResult {
            frequency: hi,
            lift: at_hi.mean_lift,
            iterations: 0,
            result: at_hi,
        });
    }
    if !(at_lo.mean_lift < target_lift && target_lift < at_hi.mean_lift) {
        return Err(Error::NotBracketed {
            target: target_lift,
            lift_lo: at_lo.mean_lift,
            lift_hi: at_hi.mean_lift,
        });
    }
    let mut best: Option<(f64, CycleResult)> = None;
    for iteration in 1..=MAX_TRIM_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let r = run(mid)?;
        if close(r.mean_lift) {
            return Ok(TrimResult {
                frequency: mid,
                lift: r.mean_lift,
                iterations: iteration,
                result: r,
            });
        }
        if r.mean_lift < target_lift {
            lo = mid;
        } else {
            hi = mid;
        }
        best = Some((mid, r));
    }
    let (f, r) = best.expect("at least one bisection step");
    Err(Error::InvalidArgument(format!(
        "trim stalled at {f} Hz with lift error {:.3e} after {MAX_TRIM_ITERATIONS} iterations",
        r.mean_lift / target_lift - 1.0
    )))
}

/// One grid point, by axis value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub index: usize,
    pub amplitude_deg: f64,
    pub area_cm2: f64,
    pub cutout: f64,
    /// Prescribed frequency, or NaN when trimming to `target_lift_gf`.
    pub frequency_hz: f64,
    pub target_lift_gf: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub frequency_hz: f64,
    pub mean_lift_gf: f64,
    pub aero_power_w: f64,
    pub induced_velocity: f64,
    pub reynolds: f64,
    /// NaN when the aerodynamic power is not positive.
    pub lift_to_power_gf_per_w: f64,
    pub induced_iterations: usize,
    pub negative_thrust: bool,
    pub trim_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub point: SweepPoint,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
    pub metadata: Value,
}

pub const SWEEP_COLUMNS: [&str; 12] = [
    "amplitude_deg",
    "area_cm2",
    "cutout",
    "frequency_hz",
    "target_lift_gf",
    "mean_lift_gf",
    "aero_power_w",
    "induced_velocity_m_s",
    "reynolds",
    "lift_to_power_gf_per_w",
    "induced_iterations",
    "negative_thrust",
];

impl SweepResult {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(SWEEP_COLUMNS);
        for r in &self.rows {
            t.push(vec![
                r.point.amplitude_deg,
                r.point.area_cm2,
                r.point.cutout,
                r.frequency_hz,
                r.point.target_lift_gf.unwrap_or(f64::NAN),
                r.mean_lift_gf,
                r.aero_power_w,
                r.induced_velocity,
                r.reynolds,
                r.lift_to_power_gf_per_w,
                r.induced_iterations as f64,
                if r.negative_thrust { 1.0 } else { 0.0 },
            ]);
        }
        t
    }

    pub fn failures_table(&self) -> Table {
        let mut t = Table::new([
            "index",
            "amplitude_deg",
            "area_cm2",
            "cutout",
            "frequency_hz",
            "target_lift_gf",
        ]);
        for f in &self.failures {
            let p = &f.point;
            t.push(vec![
                p.index as f64,
                p.amplitude_deg,
                p.area_cm2,
                p.cutout,
                p.frequency_hz,
                p.target_lift_gf.unwrap_or(f64::NAN),
            ]);
        }
        t
    }
}

/// Grid points in lexicographic order: amplitude, area, cutout, then
/// frequency (or target lift).
pub fn grid_points(axes: &SweepAxes) -> Vec<SweepPoint> {
    let inner: Vec<(f64, Option<f64>)> = match &axes.target_lifts_gf {
        Some(targets) => targets.iter().map(|&t| (f64::NAN, Some(t))).collect(),
        None => axes.frequencies_hz.iter().map(|&f| (f, None)).collect(),
    };
    let mut points = Vec::new();
    for &amplitude_deg in &axes.amplitudes_deg {
        for &area_cm2 in &axes.areas_cm2 {
            for &cutout in &axes.cutout_fractions {
                for &(frequency_hz, target_lift_gf) in &inner {
                    points.push(SweepPoint {
                        index: points.len(),
                        amplitude_deg,
                        area_cm2,
                        cutout,
                        frequency_hz,
                        target_lift_gf,
                    });
                }
            }
        }
    }
    points
}

fn evaluate_point(
    point: &SweepPoint,
    base_wing: &WingGeometry,
    base_kin: &WingKinematics,
    config: &StudyConfig,
    axes: &SweepAxes,
) -> Result<SweepRow> {
    let wing = base_wing
        .intact()
        .scaled_to_area(point.area_cm2 * 1e-4)?
        .apply_inboard_cutout(point.cutout)?;
    let kin = base_kin.with_amplitude(point.amplitude_deg.to_radians())?;
    let (result, trim_iterations) = match point.target_lift_gf {
        Some(gf) => {
            let trim = hover_trim(
                &wing,
                &kin,
                &config.environment,
                &config.solver,
                gf_to_newtons(gf),
                axes.trim_bounds_hz,
                axes.trim_tolerance,
            )?;
            (trim.result, trim.iterations)
        }
        None => (
            simulate_cycle(
                &wing,
                &kin.with_frequency(point.frequency_hz)?,
                &config.environment,
                &config.solver,
            )?,
            0,
        ),
    };
    Ok(SweepRow {
        point: *point,
        frequency_hz: result.frequency,
        mean_lift_gf: newtons_to_gf(result.mean_lift),
        aero_power_w: result.mean_aero_power,
        induced_velocity: result.induced_velocity,
        reynolds: result.reynolds,
        lift_to_power_gf_per_w: lift_to_power(result.mean_lift, result.mean_aero_power).unwrap_or(f64::NAN),
        induced_iterations: result.induced.map_or(0, |s| s.iterations),
        negative_thrust: result.induced.is_some_and(|s| s.negative_thrust),
        trim_iterations,
    })
}

pub fn run_metadata(config: &StudyConfig, axes: &SweepAxes) -> Value {
    json!({
        "solver_version": env!("CARGO_PKG_VERSION"),
        "solver": config.solver,
        "environment": config.environment,
        "axes": axes,
    })
}

/// Evaluates every grid point on `workers` threads (0 = rayon default).
/// Output order and values do not depend on the worker count; failing points
/// are recorded, not dropped.
pub fn run_sweep(config: &StudyConfig, workers: usize) -> Result<SweepResult> {
    config.validate()?;
    let axes = config.axes()?;
    let base_wing = config.wing.build()?;
    let base_kin = config.kinematics.build()?;
    let points = grid_points(&axes);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let outcomes: Vec<Result<SweepRow>> = pool.install(|| {
        points
            .par_iter()
            .map(|p| evaluate_point(p, &base_wing, &base_kin, config, &axes))
            .collect()
    });

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (point, outcome) in points.iter().zip(outcomes) {
        match outcome {
            Ok(row) => rows.push(row),
            Err(e) => {
                log::warn!("sweep point {} failed: {e}", point.index);
                failures.push(SweepFailure {
                    point: *point,
                    reason: e.to_string(),
                });
            }
        }
    }
    Ok(SweepResult {
        rows,
        failures,
        metadata: run_metadata(config, &axes),
    })
}
