//! Intact wing versus the same wing with inboard membrane removed, at
//! identical kinematics, with the spanwise lift and power split.

use flapwing::harness::run_cutout_study;
use flapwing::{presets, AeroEnvironment, SolverSettings, WingKinematics};

fn main() -> flapwing::Result<()> {
    let wing = presets::rectangular_reference();
    let kin = WingKinematics::twisted_reference(190f64.to_radians(), 17.3)?;
    let env = AeroEnvironment::default();
    let settings = SolverSettings::default();

    for frac in [0.1, 0.25, 0.5] {
        let c = run_cutout_study(&wing, &kin, &env, &settings, frac, 17.3)?.comparison;
        println!(
            "cutout {:3.0}%: lift {:+6.2}%, aero power {:+6.2}%, lift/power {:+6.2}%",
            frac * 100.0,
            c.lift_change * 100.0,
            c.power_change * 100.0,
            c.ratio_change * 100.0
        );
    }

    let report = run_cutout_study(&wing, &kin, &env, &settings, 0.25, 17.3)?;
    println!("\n{}", report.spanwise_table().to_csv_string());
    Ok(())
}
