use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flapwing::harness::{self, exit_code, StudyConfig};
use flapwing::Error;

#[derive(Parser, Debug)]
#[command(name = "flapwing", version, about = "Flapping-wing blade-element studies")]
struct Cli {
    /// Study config (JSON). Built-in defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Sweep worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Time steps per flapping cycle; overrides `solver.steps_per_cycle`.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Gyro-noise seed for control-sim.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a Fourier series to a `t_s,angle_deg` CSV.
    FitKinematics {
        /// CSV with columns `t_s,angle_deg`.
        #[arg(long)]
        samples: PathBuf,
        /// Flapping frequency of the samples (Hz).
        #[arg(long)]
        frequency: f64,
        /// Number of harmonics to fit.
        #[arg(long, default_value_t = flapwing::kinematics::DEFAULT_HARMONICS)]
        harmonics: usize,
    },
    /// Simulate one flapping cycle.
    Simulate,
    /// Evaluate the config's sweep grid.
    Sweep,
    /// Find the frequency that produces a target lift.
    Trim {
        /// Target cycle-mean lift of the wing pair (gram-force).
        #[arg(long)]
        target_gf: f64,
        /// Lower frequency bound (Hz); defaults to `sweep.trim_bounds_hz`.
        #[arg(long, requires = "f_hi")]
        f_lo: Option<f64>,
        /// Upper frequency bound (Hz).
        #[arg(long, requires = "f_lo")]
        f_hi: Option<f64>,
    },
    /// Compare the intact wing with an inboard cutout.
    CutoutStudy,
    /// Closed-loop yaw step response.
    ControlSim,
}

fn load_config(cli: &Cli) -> Result<StudyConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => StudyConfig::load(path)?,
        None => StudyConfig::default(),
    };
    if let Some(steps) = cli.steps {
        config.solver.steps_per_cycle = steps;
        config.validate()?;
    }
    if let Some(out) = &cli.out {
        config.output.dir = out.clone();
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let config = load_config(cli)?;
    let out = config.output.dir.clone();
    let written = match &cli.command {
        Command::FitKinematics {
            samples,
            frequency,
            harmonics,
        } => {
            let (fit, written) = harness::run_fit_command(samples, *frequency, *harmonics, &out)?;
            println!("residual rms {:.6} deg", fit.residual_rms.to_degrees());
            written
        }
        Command::Simulate => {
            let (r, written) = harness::run_simulate(&config, &out)?;
            println!(
                "lift {:.4} gf, aero power {:.4} W, V_i {:.4} m/s, Re {:.0}",
                flapwing::newtons_to_gf(r.mean_lift),
                r.mean_aero_power,
                r.induced_velocity,
                r.reynolds
            );
            written
        }
        Command::Sweep => {
            let (r, written) = harness::run_sweep_command(&config, cli.workers, &out)?;
            println!("{} points ok, {} failed", r.rows.len(), r.failures.len());
            if r.rows.is_empty() && !r.failures.is_empty() {
                for path in &written {
                    println!("wrote {}", path.display());
                }
                return Ok(exit_code::COMPUTE);
            }
            written
        }
        Command::Trim { target_gf, f_lo, f_hi } => {
            let bounds = f_lo.zip(*f_hi).map(|(a, b)| [a, b]);
            let (trim, written) = harness::run_trim(&config, *target_gf, bounds, &out)?;
            println!(
                "trim frequency {:.4} Hz after {} iterations",
                trim.frequency, trim.iterations
            );
            written
        }
        Command::CutoutStudy => {
            let (report, written) = harness::run_cutout_command(&config, &out)?;
            let c = &report.comparison;
            println!(
                "lift {:+.3}%, aero power {:+.3}%, lift/power {:+.3}%",
                100.0 * c.lift_change,
                100.0 * c.power_change,
                100.0 * c.ratio_change
            );
            written
        }
        Command::ControlSim => {
            let (trace, written) = harness::run_control_command(&config, cli.seed, &out)?;
            if let Some(last) = trace.last() {
                println!("final heading {:.4} deg", last.psi_true.to_degrees());
            }
            written
        }
    };
    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(exit_code::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::exit_code_for(&e) as u8)
        }
    }
}
