//! Yaw heading step with a noisy, biased gyro: the filtered rate feeds the
//! PD law while the integrated heading slowly drifts away from the truth.

use flapwing::control::{closed_loop_eigenvalues, simulate_closed_loop, ControlConfig};

fn main() -> flapwing::Result<()> {
    let config = ControlConfig {
        gyro_sigma_dps: 1.5,
        gyro_bias_dps: 0.5,
        duration_s: 6.0,
        ..ControlConfig::default()
    };
    let [a, b] = closed_loop_eigenvalues(&config);
    println!("loop poles {a:.2}, {b:.2}");

    let trace = simulate_closed_loop(config.initial_plant(), &config, 42)?;
    println!("{:>5} {:>9} {:>9} {:>9}", "t_s", "psi_deg", "est_deg", "u");
    for s in trace.iter().step_by(50) {
        println!(
            "{:5.2} {:9.3} {:9.3} {:9.3}",
            s.t_s,
            s.psi_true.to_degrees(),
            s.psi_est.to_degrees(),
            s.control_output
        );
    }
    Ok(())
}
