//! One flapping cycle of the 25.5 cm² rectangular wing pair at 190° and
//! 17.3 Hz: cycle means, the induced-velocity solve and the lift history.

use flapwing::{newtons_to_gf, presets, simulate_cycle, AeroEnvironment, SolverSettings, WingKinematics};

fn main() -> flapwing::Result<()> {
    let wing = presets::rectangular_reference();
    let kin = WingKinematics::twisted_reference(190f64.to_radians(), 17.3)?;
    let r = simulate_cycle(&wing, &kin, &AeroEnvironment::default(), &SolverSettings::default())?;

    println!("Re                 {:.0}", r.reynolds);
    println!("induced velocity   {:.3} m/s", r.induced_velocity);
    if let Some(s) = r.induced {
        println!(
            "fixed point        {} iterations, residual {:.1e}",
            s.iterations, s.residual
        );
    }
    println!("mean lift          {:.2} gf", newtons_to_gf(r.mean_lift));
    println!("aero power         {:.3} W", r.mean_aero_power);
    println!("lift / aero power  {:.2} gf/W", r.lift_to_aero_power()?);

    println!("\n  t/T   lift_gf  (transl / added / rot)");
    let period = 1.0 / r.frequency;
    for s in r.time_series.iter().step_by(60) {
        let z = s.forces.zeta;
        println!(
            "{:5.2} {:9.2}  ({:.2} / {:.2} / {:.2})",
            s.t / period,
            newtons_to_gf(s.forces.total_zeta()),
            newtons_to_gf(z.translational),
            newtons_to_gf(z.added_mass),
            newtons_to_gf(z.rotational)
        );
    }
    Ok(())
}
