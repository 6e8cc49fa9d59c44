use serde::Serialize;

use super::export::Table;
use crate::error::Result;
use crate::kinematics::WingKinematics;
use crate::power::newtons_to_gf;
use crate::ubet::{compare_wings, simulate_cycle, AeroEnvironment, CycleResult, SolverSettings, WingComparison};
use crate::wing::WingGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleSummary {
    pub area_cm2: f64,
    pub mean_lift_gf: f64,
    pub aero_power_w: f64,
    pub induced_velocity: f64,
    pub reynolds: f64,
}

impl CycleSummary {
    fn new(wing: &WingGeometry, r: &CycleResult) -> Self {
        Self {
            area_cm2: wing.area() * 1e4,
            mean_lift_gf: newtons_to_gf(r.mean_lift),
            aero_power_w: r.mean_aero_power,
            induced_velocity: r.induced_velocity,
            reynolds: r.reynolds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutoutReport {
    pub span_fraction: f64,
    pub frequency_hz: f64,
    pub intact: CycleSummary,
    pub modified: CycleSummary,
    pub comparison: WingComparison,
    #[serde(skip)]
    pub intact_result: CycleResult,
    #[serde(skip)]
    pub modified_result: CycleResult,
}

pub const SPANWISE_COLUMNS: [&str; 5] = [
    "span_fraction",
    "lift_intact",
    "lift_modified",
    "power_intact",
    "power_modified",
];

impl CutoutReport {
    /// Per-element cycle-mean lift (N) and power (W) of both wings.
    pub fn spanwise_table(&self) -> Table {
        let a = &self.intact_result;
        let b = &self.modified_result;
        let mut t = Table::new(SPANWISE_COLUMNS);
        for i in 0..a.span_fractions.len() {
            t.push(vec![
                a.span_fractions[i],
                a.spanwise_lift[i],
                b.spanwise_lift[i],
                a.spanwise_power[i],
                b.spanwise_power[i],
            ]);
        }
        t
    }
}

/// Runs the intact wing and the same wing with the inboard `span_fraction`
/// of membrane removed, at identical kinematics played at `frequency`.
pub fn run_cutout_study(
    wing: &WingGeometry,
    kin: &WingKinematics,
    env: &AeroEnvironment,
    settings: &SolverSettings,
    span_fraction: f64,
    frequency: f64,
) -> Result<CutoutReport> {
    let intact = wing.intact();
    let modified = intact.apply_inboard_cutout(span_fraction)?;
    let kin = kin.with_frequency(frequency)?;
    let intact_result = simulate_cycle(&intact, &kin, env, settings)?;
    let modified_result = simulate_cycle(&modified, &kin, env, settings)?;
    Ok(CutoutReport {
        span_fraction,
        frequency_hz: frequency,
        intact: CycleSummary::new(&intact, &intact_result),
        modified: CycleSummary::new(&modified, &modified_result),
        comparison: compare_wings(&intact_result, &modified_result)?,
        intact_result,
        modified_result,
    })
}
