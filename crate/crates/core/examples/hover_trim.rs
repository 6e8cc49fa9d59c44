//! Flapping frequency needed to hover a 15.8 g vehicle on the tapered wing
//! pair with its inboard quarter of membrane removed (23.7 cm² total).

use flapwing::harness::hover_trim;
use flapwing::{gf_to_newtons, newtons_to_gf, presets, AeroEnvironment, SolverSettings, WingKinematics};

fn main() -> flapwing::Result<()> {
    let wing = presets::tapered_reference().apply_inboard_cutout(0.25)?;
    let kin = WingKinematics::twisted_reference(190f64.to_radians(), 17.3)?;
    let env = AeroEnvironment::default();
    let settings = SolverSettings::default();

    for mass_g in [13.0, 15.8, 19.0] {
        let trim = hover_trim(&wing, &kin, &env, &settings, gf_to_newtons(mass_g), [5.0, 60.0], 0.005)?;
        println!(
            "{mass_g:5.1} g: {:.2} Hz ({} bisections), lift {:.2} gf, aero power {:.3} W",
            trim.frequency,
            trim.iterations,
            newtons_to_gf(trim.lift),
            trim.result.mean_aero_power
        );
    }
    Ok(())
}
