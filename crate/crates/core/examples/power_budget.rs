//! Splits a measured electrical input into Joule loss, aerodynamic and
//! inertial power and the flapping-mechanism residual.

use flapwing::power::{decompose, inertial_power, shunt_current, MotorElectrical, WingMassModel};
use flapwing::{presets, simulate_cycle, AeroEnvironment, SolverSettings, WingKinematics};

fn main() -> flapwing::Result<()> {
    let wing = presets::rectangular_reference();
    let kin = WingKinematics::twisted_reference(190f64.to_radians(), 17.3)?;
    let settings = SolverSettings::default();
    let aero = simulate_cycle(&wing, &kin, &AeroEnvironment::default(), &settings)?;

    // Shunt reading: 3.7 V supply, 3.5 V after a 0.2 ohm shunt.
    let shunt = shunt_current(3.7, 3.5, 0.2)?;
    let p_in = 3.7 * shunt.current_a;

    let mass = WingMassModel::from_blade_elements(&wing.discretize(settings.sections)?, 0.12e-3, 2)?;
    let inertial = inertial_power(&mass, &kin, settings.steps_per_cycle)?;
    let budget = decompose(
        p_in,
        shunt.current_a,
        &MotorElectrical::new(0.6)?,
        aero.mean_aero_power,
        inertial.rectified_mean,
    )?;

    println!("current            {:.3} A", shunt.current_a);
    println!("inertial (signed)  {:.2e} W", inertial.signed_mean);
    println!("{}", serde_json::to_string_pretty(&budget).unwrap());
    if budget.inconsistent {
        println!("modelled terms exceed the measured input");
    }
    Ok(())
}
