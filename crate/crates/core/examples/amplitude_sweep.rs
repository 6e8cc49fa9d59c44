//! Stroke amplitude and wing area sweep at a common lift: every point is
//! trimmed in frequency to 15.8 gf and the lift-to-power ratios compared.

use flapwing::harness::config::SweepSpec;
use flapwing::harness::{run_sweep, StudyConfig};

fn main() -> flapwing::Result<()> {
    let config = StudyConfig {
        sweep: SweepSpec {
            amplitudes_deg: Some(vec![120.0, 150.0, 190.0]),
            areas_cm2: Some(vec![20.1, 25.5, 31.4]),
            target_lifts_gf: Some(vec![15.8]),
            trim_tolerance: Some(1e-4),
            ..SweepSpec::default()
        },
        ..StudyConfig::default()
    };
    let result = run_sweep(&config, 0)?;
    println!("{:>6} {:>6} {:>8} {:>8} {:>8}", "amp", "cm2", "f_Hz", "P_W", "gf/W");
    for r in &result.rows {
        println!(
            "{:6.0} {:6.1} {:8.2} {:8.3} {:8.3}",
            r.point.amplitude_deg, r.point.area_cm2, r.frequency_hz, r.aero_power_w, r.lift_to_power_gf_per_w
        );
    }
    for f in &result.failures {
        println!("point {} failed: {}", f.point.index, f.reason);
    }
    Ok(())
}
