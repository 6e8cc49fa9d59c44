//! Gyro-only yaw stabilization: low-pass filtered yaw rate, heading by
//! integration of the filtered rate, and a PD law on heading and rate.
//! A single-axis inertia plant closes the loop for demonstration.

use std::f64::consts::TAU;

use nalgebra::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// First-order IIR low-pass, `y_k = (1 − β) y_{k−1} + β x_k`, starting from rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowPass {
    beta: f64,
    dt: f64,
    output: f64,
}

impl LowPass {
    pub fn new(beta: f64, dt: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) || !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "filter coefficient must lie in (0, 1] and dt > 0, got {beta} and {dt}"
            )));
        }
        Ok(Self { beta, dt, output: 0.0 })
    }

    /// RC-equivalent filter with cutoff `cutoff_hz` sampled every `dt` seconds.
    pub fn from_cutoff(cutoff_hz: f64, dt: f64) -> Result<Self> {
        if !(cutoff_hz > 0.0) || !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cutoff and dt must be > 0, got {cutoff_hz} Hz and {dt} s"
            )));
        }
        let rc = 1.0 / (TAU * cutoff_hz);
        Self::new(dt / (rc + dt), dt)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Time for the step-response error to fall by a factor e.
    pub fn time_constant(&self) -> f64 {
        if self.beta >= 1.0 {
            0.0
        } else {
            -self.dt / (1.0 - self.beta).ln()
        }
    }

    pub fn output(&self) -> f64 {
        self.output
    }

    pub fn update(&mut self, x: f64) -> f64 {
        self.output = (1.0 - self.beta) * self.output + self.beta * x;
        self.output
    }
}

/// Heading update `ψ_t = ψ_{t−1} + ω Δt`.
pub fn integrate_yaw(previous: f64, rate: f64, dt: f64) -> f64 {
    previous + rate * dt
}

/// `y = k_p (ψ_d − ψ) + k_d (ω_d − ω_f)`.
pub fn yaw_control(
    gains: &YawGains,
    heading_setpoint: f64,
    heading: f64,
    rate_setpoint: f64,
    filtered_rate: f64,
) -> f64 {
    gains.kp * (heading_setpoint - heading) + gains.kd * (rate_setpoint - filtered_rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YawGains {
    pub kp: f64,
    pub kd: f64,
}

/// Controller state: filtered gyro rate and integrated heading estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct YawState {
    pub gains: YawGains,
    pub filter: LowPass,
    pub heading_estimate: f64,
    pub heading_setpoint: f64,
    pub rate_setpoint: f64,
    pub dt: f64,
}

impl YawState {
    pub fn new(gains: YawGains, cutoff_hz: f64, dt: f64) -> Result<Self> {
        if !gains.kp.is_finite() || !gains.kd.is_finite() {
            return Err(Error::InvalidArgument("controller gains must be finite".into()));
        }
        Ok(Self {
            gains,
            filter: LowPass::from_cutoff(cutoff_hz, dt)?,
            heading_estimate: 0.0,
            heading_setpoint: 0.0,
            rate_setpoint: 0.0,
            dt,
        })
    }

    pub fn filtered_rate(&self) -> f64 {
        self.filter.output()
    }

    /// Consumes one gyro sample and returns the control output.
    pub fn step(&mut self, gyro_rate: f64) -> f64 {
        let rate = self.filter.update(gyro_rate);
        self.heading_estimate = integrate_yaw(self.heading_estimate, rate, self.dt);
        self.output()
    }

    pub fn output(&self) -> f64 {
        yaw_control(
            &self.gains,
            self.heading_setpoint,
            self.heading_estimate,
            self.rate_setpoint,
            self.filter.output(),
        )
    }
}

/// Rigid single-axis yaw plant `J ω̇ = torque + disturbance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantState {
    pub heading: f64,
    pub rate: f64,
    pub inertia: f64,
    pub disturbance_torque: f64,
}

impl PlantState {
    pub fn at_rest(inertia: f64) -> Self {
        Self {
            heading: 0.0,
            rate: 0.0,
            inertia,
            disturbance_torque: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetpointStep {
    pub t_s: f64,
    pub psi_deg: f64,
}

/// Closed-loop demonstration settings. Angles in config are degrees; the
/// loop itself runs in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControlConfig {
    pub kp: f64,
    pub kd: f64,
    pub cutoff_hz: f64,
    pub dt_s: f64,
    /// Yaw inertia (kg m²).
    pub inertia: f64,
    /// Torque per unit control output (N m).
    pub plant_gain: f64,
    pub gyro_sigma_dps: f64,
    pub gyro_bias_dps: f64,
    pub initial_rate_dps: f64,
    pub disturbance_torque: f64,
    pub duration_s: f64,
    pub setpoints: Vec<SetpointStep>,
}

impl Default for ControlConfig {
    fn default() -> Self {
        Self {
            kp: 25.0,
            kd: 8.0,
            cutoff_hz: 10.0,
            dt_s: 0.01,
            inertia: 2.0e-6,
            plant_gain: 2.0e-6,
            gyro_sigma_dps: 0.0,
            gyro_bias_dps: 0.0,
            initial_rate_dps: 0.0,
            disturbance_torque: 0.0,
            duration_s: 5.0,
            setpoints: vec![SetpointStep {
                t_s: 0.5,
                psi_deg: 30.0,
            }],
        }
    }
}

impl ControlConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_s > 0.0) || !(self.duration_s >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "dt must be > 0 and duration >= 0, got {} and {}",
                self.dt_s, self.duration_s
            )));
        }
        if !(self.inertia > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "inertia must be > 0, got {}",
                self.inertia
            )));
        }
        if !(self.gyro_sigma_dps >= 0.0) {
            return Err(Error::InvalidArgument("gyro noise sigma must be >= 0".into()));
        }
        Ok(())
    }

    pub fn gains(&self) -> YawGains {
        YawGains {
            kp: self.kp,
            kd: self.kd,
        }
    }

    /// Plant at zero heading spinning at the configured initial rate.
    pub fn initial_plant(&self) -> PlantState {
        PlantState {
            heading: 0.0,
            rate: self.initial_rate_dps.to_radians(),
            inertia: self.inertia,
            disturbance_torque: self.disturbance_torque,
        }
    }

    /// Heading setpoint (rad) in force at time `t`.
    pub fn setpoint_at(&self, t: f64) -> f64 {
        self.setpoints
            .iter()
            .rfind(|s| s.t_s <= t)
            .map_or(0.0, |s| s.psi_deg.to_radians())
    }
}

/// Eigenvalues of the unfiltered continuous loop
/// `J ψ̈ = −g (k_p ψ + k_d ψ̇)`.
pub fn closed_loop_eigenvalues(config: &ControlConfig) -> [Complex<f64>; 2] {
    let a = config.plant_gain * config.kd / config.inertia;
    let b = config.plant_gain * config.kp / config.inertia;
    let disc = Complex::new(a * a - 4.0 * b, 0.0).sqrt();
    [(-a + disc) / 2.0, (-a - disc) / 2.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub t_s: f64,
    pub psi_true: f64,
    pub psi_est: f64,
    pub omega: f64,
    pub control_output: f64,
}

/// Steps the plant and controller together for `config.duration_s`.
pub fn simulate_closed_loop(plant: PlantState, config: &ControlConfig, seed: u64) -> Result<Vec<TraceSample>> {
    config.validate()?;
    if !(plant.inertia > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "inertia must be > 0, got {}",
            plant.inertia
        )));
    }
    let dt = config.dt_s;
    let mut controller = YawState::new(config.gains(), config.cutoff_hz, dt)?;
    let mut plant = plant;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, config.gyro_sigma_dps.to_radians())
        .map_err(|e| Error::InvalidArgument(format!("gyro noise: {e}")))?;
    let bias = config.gyro_bias_dps.to_radians();

    let steps = (config.duration_s / dt).round() as usize;
    let mut trace = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 * dt;
        let gyro = plant.rate + bias + noise.sample(&mut rng);
        controller.heading_setpoint = config.setpoint_at(t);
        let output = controller.step(gyro);
        trace.push(TraceSample {
            t_s: t,
            psi_true: plant.heading,
            psi_est: controller.heading_estimate,
            omega: plant.rate,
            control_output: output,
        });

        let torque = config.plant_gain * output + plant.disturbance_torque;
        plant.rate += torque / plant.inertia * dt;
        plant.heading += plant.rate * dt;
        if !plant.rate.is_finite() || !plant.heading.is_finite() || plant.heading.abs() > 1e6 {
            return Err(Error::Diverged { step: k });
        }
    }
    Ok(trace)
}
