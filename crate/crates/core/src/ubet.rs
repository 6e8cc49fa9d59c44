//! Unsteady blade-element aerodynamics: per-section translational, added-mass
//! and rotational forces, the empirical coefficient model, the momentum
//! coupling for induced velocity, and cycle-averaged lift and power.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{geometric_aoa, RotationState, WingKinematics};
use crate::wing::{BladeElement, WingGeometry, DEFAULT_SECTIONS};

/// Default time steps per flapping cycle.
pub const DEFAULT_STEPS: usize = 720;
/// Fewest time steps per cycle the solver accepts.
pub const MIN_STEPS: usize = 36;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeroEnvironment {
    #[serde(rename = "density_kg_m3")]
    pub density: f64,
    #[serde(rename = "kinematic_viscosity_m2_s")]
    pub kinematic_viscosity: f64,
}

impl Default for AeroEnvironment {
    fn default() -> Self {
        Self {
            density: 1.225,
            kinematic_viscosity: 1.5e-5,
        }
    }
}

impl AeroEnvironment {
    pub fn new(density: f64, kinematic_viscosity: f64) -> Result<Self> {
        let env = Self {
            density,
            kinematic_viscosity,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.density > 0.0) || !(self.kinematic_viscosity > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "air density and viscosity must be > 0, got {} and {}",
                self.density, self.kinematic_viscosity
            )));
        }
        Ok(())
    }
}

/// Reynolds-dependent factors of the lift and drag coefficient fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientModel {
    lift_amplitude: f64,
    drag_base: f64,
    drag_amplitude: f64,
}

impl CoefficientModel {
    pub fn new(reynolds: f64) -> Result<Self> {
        if !(reynolds > 0.0) || !reynolds.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Reynolds number must be finite and > 0, got {reynolds}"
            )));
        }
        Ok(Self {
            lift_amplitude: 1.966 - 3.94 * reynolds.powf(-0.429),
            drag_base: 0.031 + 10.48 * reynolds.powf(-0.764),
            #[allow(clippy::approx_constant)]
            drag_amplitude: 1.873 - 3.14 * reynolds.powf(-0.369),
        })
    }

    /// `(C_L, C_D)` at effective angle of attack `alpha_e` (rad).
    pub fn coefficients(&self, alpha_e: f64) -> (f64, f64) {
        let (s2, c2) = (2.0 * alpha_e).sin_cos();
        (
            self.lift_amplitude * s2,
            self.drag_base + self.drag_amplitude * (1.0 - c2),
        )
    }
}

/// Lift and drag coefficients at effective AoA `alpha_e` (rad) and Reynolds number `reynolds`.
pub fn aero_coefficients(alpha_e: f64, reynolds: f64) -> Result<(f64, f64)> {
    Ok(CoefficientModel::new(reynolds)?.coefficients(alpha_e))
}

/// `Re = 2 c̄ Φ f R / ν`, with `c̄` the mean chord of the membrane area and Φ
/// the peak-to-peak stroke amplitude in radians.
pub fn reynolds(wing: &WingGeometry, kin: &WingKinematics, env: &AeroEnvironment) -> Result<f64> {
    env.validate()?;
    let area = wing.area();
    if !(area > 0.0) {
        return Err(Error::InvalidArgument("Reynolds number of a zero-area wing".into()));
    }
    Ok(2.0 * wing.mean_chord() * kin.amplitude() * kin.frequency() * wing.span() / env.kinematic_viscosity)
}

/// Instantaneous kinematic state of one blade element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementState {
    pub r: f64,
    pub chord: f64,
    pub axis_offset: f64,
    pub dr: f64,
    pub area_scale: f64,
    pub stroke_rate: f64,
    pub stroke_accel: f64,
    pub rotation: f64,
    pub rotation_rate: f64,
    pub rotation_accel: f64,
    /// `r |χ̇|`.
    pub translational_velocity: f64,
    pub induced_velocity: f64,
    /// `atan2(V_i, V_T)`.
    pub induced_angle: f64,
    pub geometric_aoa: f64,
    /// `α_g − φ`.
    pub effective_aoa: f64,
}

impl ElementState {
    pub fn new(
        element: &BladeElement,
        stroke_rate: f64,
        stroke_accel: f64,
        rotation: RotationState,
        induced_velocity: f64,
    ) -> Self {
        let translational_velocity = element.r_mid * stroke_rate.abs();
        let induced_angle = induced_velocity.atan2(translational_velocity);
        let geometric_aoa = geometric_aoa(rotation.angle, stroke_rate);
        Self {
            r: element.r_mid,
            chord: element.chord,
            axis_offset: element.axis_offset,
            dr: element.dr,
            area_scale: element.area_scale,
            stroke_rate,
            stroke_accel,
            rotation: rotation.angle,
            rotation_rate: rotation.rate,
            rotation_accel: rotation.acceleration,
            translational_velocity,
            induced_velocity,
            induced_angle,
            geometric_aoa,
            effective_aoa: geometric_aoa - induced_angle,
        }
    }
}

/// Section acceleration normal to the chord driving the added-mass force:
/// `a_w = [r χ̈ + (c/2 − l) χ̇² cos α_r] sin α_r + (c/2 − l) α̈_r`.
pub fn element_acceleration(state: &ElementState) -> f64 {
    let arm = 0.5 * state.chord - state.axis_offset;
    let (sin_r, cos_r) = state.rotation.sin_cos();
    (state.r * state.stroke_accel + arm * state.stroke_rate * state.stroke_rate * cos_r) * sin_r
        + arm * state.rotation_accel
}

/// Rotational circulation coefficient `π (0.75 − l/c)`.
pub fn rotational_coefficient(chord: f64, axis_offset: f64) -> f64 {
    if chord > 0.0 {
        PI * (0.75 - axis_offset / chord)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ForceComponents {
    pub translational: f64,
    pub added_mass: f64,
    pub rotational: f64,
}

impl ForceComponents {
    pub fn total(&self) -> f64 {
        self.translational + self.added_mass + self.rotational
    }

    fn scaled(&self, k: f64) -> Self {
        Self {
            translational: self.translational * k,
            added_mass: self.added_mass * k,
            rotational: self.rotational * k,
        }
    }

    fn accumulate(&mut self, other: &Self) {
        self.translational += other.translational;
        self.added_mass += other.added_mass;
        self.rotational += other.rotational;
    }
}

/// Section forces split by mechanism, along the stroke-tangent (η) and
/// stroke-normal (ζ) axes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ForceBreakdown {
    pub eta: ForceComponents,
    pub zeta: ForceComponents,
}

impl ForceBreakdown {
    pub fn total_eta(&self) -> f64 {
        self.eta.total()
    }

    pub fn total_zeta(&self) -> f64 {
        self.zeta.total()
    }

    fn scaled(&self, k: f64) -> Self {
        Self {
            eta: self.eta.scaled(k),
            zeta: self.zeta.scaled(k),
        }
    }

    fn accumulate(&mut self, other: &Self) {
        self.eta.accumulate(&other.eta);
        self.zeta.accumulate(&other.zeta);
    }
}

/// Forces on one section at Reynolds number `reynolds`.
pub fn element_forces(state: &ElementState, env: &AeroEnvironment, reynolds: f64) -> Result<ForceBreakdown> {
    Ok(element_forces_with(state, env, &CoefficientModel::new(reynolds)?))
}

/// Forces on one section with precomputed coefficient factors.
pub fn element_forces_with(state: &ElementState, env: &AeroEnvironment, model: &CoefficientModel) -> ForceBreakdown {
    let rho = env.density;
    let c = state.chord;
    let dr = state.dr;
    let (cl, cd) = model.coefficients(state.effective_aoa);
    let (sin_phi, cos_phi) = state.induced_angle.sin_cos();
    let (sin_r, cos_r) = state.rotation.sin_cos();
    let sin_g = state.geometric_aoa.sin();

    let vt = state.translational_velocity;
    let vi = state.induced_velocity;
    let dynamic = 0.5 * rho * c * (vt * vt + vi * vi) * dr;

    let added = 0.25 * PI * rho * c * c * element_acceleration(state) * sin_g * dr;
    let rotational = rho * vt * rotational_coefficient(c, state.axis_offset) * state.rotation_rate * c * c * dr;

    let k = state.area_scale;
    ForceBreakdown {
        eta: ForceComponents {
            translational: -dynamic * (cl * sin_phi + cd * cos_phi) * k,
            added_mass: added * sin_r * k,
            rotational: -rotational * sin_r * k,
        },
        zeta: ForceComponents {
            translational: dynamic * (cl * cos_phi - cd * sin_phi) * k,
            added_mass: added * cos_r * k,
            rotational: rotational * cos_r * k,
        },
    }
}

/// Power to flap one section against its η force, positive when the force
/// opposes the motion.
pub fn element_power(state: &ElementState, forces: &ForceBreakdown) -> f64 {
    state.stroke_rate.abs() * state.r * -forces.total_eta()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InducedVelocityMode {
    /// Momentum/blade-element fixed point.
    Solve,
    /// Prescribed uniform induced velocity (m/s).
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    pub steps_per_cycle: usize,
    pub sections: usize,
    /// Report forces and power for a mirrored wing pair.
    pub pair: bool,
    pub induced_velocity: InducedVelocityMode,
    /// Fixed-point tolerance on `|V_i(T̄(V)) − V|`, met both in m/s and
    /// relative to `V`.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub relaxation: f64,
    /// Evaluate the coefficient model at this Reynolds number instead of the wing's own.
    pub reynolds_override: Option<f64>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            steps_per_cycle: DEFAULT_STEPS,
            sections: DEFAULT_SECTIONS,
            pair: true,
            induced_velocity: InducedVelocityMode::Solve,
            tolerance: 1e-6,
            max_iterations: 100,
            relaxation: 0.5,
            reynolds_override: None,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_cycle < MIN_STEPS {
            return Err(Error::InvalidArgument(format!(
                "steps per cycle must be >= {MIN_STEPS}, got {}",
                self.steps_per_cycle
            )));
        }
        if !(self.tolerance > 0.0) || !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be > 0 and relaxation in (0, 1], got {} and {}",
                self.tolerance, self.relaxation
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be >= 1".into()));
        }
        if let InducedVelocityMode::Fixed(v) = self.induced_velocity {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "fixed induced velocity must be >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InducedSolution {
    pub velocity: f64,
    pub iterations: usize,
    /// `|V_i(T̄(V)) − V|` at the returned velocity.
    pub residual: f64,
    /// Cycle-mean vertical force of the wing pair at the returned velocity (N).
    pub pair_thrust: f64,
    /// Mean thrust was negative, so the induced velocity was set to zero.
    pub negative_thrust: bool,
}

/// Kinematics sampled once per (step, element) so the fixed-point iteration
/// only re-evaluates the aerodynamics.
struct SampledCycle {
    elements: Vec<BladeElement>,
    times: Vec<f64>,
    stroke: Vec<(f64, f64)>,
    rotation: Vec<RotationState>,
}

impl SampledCycle {
    fn new(wing: &WingGeometry, kin: &WingKinematics, steps: usize, sections: usize) -> Result<Self> {
        let elements = wing.discretize(sections)?.as_slice().to_vec();
        let f = kin.frequency();
        let times: Vec<f64> = (0..steps)
            .map(|k| if f > 0.0 { k as f64 / (steps as f64 * f) } else { 0.0 })
            .collect();
        let stroke = times
            .iter()
            .map(|&t| (kin.stroke().rate(t), kin.stroke().acceleration(t)))
            .collect();
        let fractions: Vec<f64> = elements
            .iter()
            .map(|e| (e.r_mid - wing.root_offset()) / wing.span())
            .collect();
        let mut rotation = Vec::with_capacity(steps * elements.len());
        for &t in &times {
            rotation.extend(fractions.iter().map(|&s| kin.rotation_state(s, t)));
        }
        Ok(Self {
            elements,
            times,
            stroke,
            rotation,
        })
    }

    fn state(&self, step: usize, j: usize, induced_velocity: f64) -> ElementState {
        let (rate, accel) = self.stroke[step];
        ElementState::new(
            &self.elements[j],
            rate,
            accel,
            self.rotation[step * self.elements.len() + j],
            induced_velocity,
        )
    }

    /// Single-wing cycle-mean vertical force.
    fn mean_lift(&self, env: &AeroEnvironment, model: &CoefficientModel, induced_velocity: f64) -> f64 {
        let mut sum = 0.0;
        for step in 0..self.times.len() {
            for j in 0..self.elements.len() {
                let state = self.state(step, j, induced_velocity);
                sum += element_forces_with(&state, env, model).total_zeta();
            }
        }
        sum / self.times.len() as f64
    }
}

fn actuator_area(wing: &WingGeometry, kin: &WingKinematics) -> f64 {
    kin.amplitude() * wing.tip_radius().powi(2)
}

fn effective_reynolds(
    wing: &WingGeometry,
    kin: &WingKinematics,
    env: &AeroEnvironment,
    settings: &SolverSettings,
) -> Result<f64> {
    match settings.reynolds_override {
        Some(re) => Ok(re),
        None => reynolds(wing, kin, env),
    }
}

fn solve_sampled(
    cycle: &SampledCycle,
    env: &AeroEnvironment,
    model: &CoefficientModel,
    disk_area: f64,
    settings: &SolverSettings,
) -> Result<InducedSolution> {
    let momentum_velocity = |thrust: f64| -> f64 {
        if thrust > 0.0 && disk_area > 0.0 {
            (thrust / (2.0 * env.density * disk_area)).sqrt()
        } else {
            0.0
        }
    };
    let mut v = 0.0;
    let mut residual = f64::INFINITY;
    for iteration in 1..=settings.max_iterations {
        let thrust = 2.0 * cycle.mean_lift(env, model, v);
        let target = momentum_velocity(thrust);
        residual = (target - v).abs();
        if residual <= settings.tolerance * v.min(1.0) || residual == 0.0 {
            let negative_thrust = thrust < 0.0;
            if negative_thrust {
                log::warn!("negative cycle-mean thrust {thrust:.3e} N; induced velocity set to 0");
            }
            return Ok(InducedSolution {
                velocity: v,
                iterations: iteration,
                residual,
                pair_thrust: thrust,
                negative_thrust,
            });
        }
        v += settings.relaxation * (target - v);
    }
    Err(Error::NonConvergence {
        iterations: settings.max_iterations,
        residual,
    })
}

/// Uniform induced velocity from the momentum balance
/// `V_i = sqrt(T̄ / (2 ρ Φ R²))`, iterated to a fixed point with the
/// blade-element thrust `T̄` of the wing pair.
pub fn solve_induced_velocity(
    wing: &WingGeometry,
    kin: &WingKinematics,
    env: &AeroEnvironment,
    settings: &SolverSettings,
) -> Result<InducedSolution> {
    settings.validate()?;
    env.validate()?;
    let cycle = SampledCycle::new(wing, kin, settings.steps_per_cycle, settings.sections)?;
    let model = CoefficientModel::new(effective_reynolds(wing, kin, env, settings)?)?;
    solve_sampled(&cycle, env, &model, actuator_area(wing, kin), settings)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSample {
    pub t: f64,
    /// Forces summed over the span (and over both wings for a pair).
    pub forces: ForceBreakdown,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    /// Cycle-mean ζ force (N).
    pub mean_lift: f64,
    /// Cycle-mean aerodynamic power (W).
    pub mean_aero_power: f64,
    pub induced_velocity: f64,
    pub reynolds: f64,
    pub frequency: f64,
    pub pair: bool,
    pub induced: Option<InducedSolution>,
    /// Element midpoints as fractions of the span from the root.
    pub span_fractions: Vec<f64>,
    /// Per-element cycle-mean ζ force (N).
    pub spanwise_lift: Vec<f64>,
    /// Per-element cycle-mean power (W).
    pub spanwise_power: Vec<f64>,
    /// One cycle at uniform steps, closed with a copy of the first sample at `t = 1/f`.
    pub time_series: Vec<TimeSample>,
}

impl CycleResult {
    /// Lift in gram-force per watt of aerodynamic power.
    pub fn lift_to_aero_power(&self) -> Result<f64> {
        crate::power::lift_to_power(self.mean_lift, self.mean_aero_power)
    }
}

/// Time-marches one flapping cycle and returns cycle-mean lift, aerodynamic
/// power, spanwise distributions and the force time series.
pub fn simulate_cycle(
    wing: &WingGeometry,
    kin: &WingKinematics,
    env: &AeroEnvironment,
    settings: &SolverSettings,
) -> Result<CycleResult> {
    settings.validate()?;
    env.validate()?;
    let reynolds = effective_reynolds(wing, kin, env, settings)?;
    let model = CoefficientModel::new(reynolds)?;
    let cycle = SampledCycle::new(wing, kin, settings.steps_per_cycle, settings.sections)?;

    let (induced_velocity, induced) = match settings.induced_velocity {
        InducedVelocityMode::Fixed(v) => (v, None),
        InducedVelocityMode::Solve => {
            let sol = solve_sampled(&cycle, env, &model, actuator_area(wing, kin), settings)?;
            (sol.velocity, Some(sol))
        }
    };

    let wings = if settings.pair { 2.0 } else { 1.0 };
    let steps = cycle.times.len();
    let n = cycle.elements.len();
    let mut spanwise_lift = vec![0.0; n];
    let mut spanwise_power = vec![0.0; n];
    let mut time_series = Vec::with_capacity(steps + 1);
    for (step, &t) in cycle.times.iter().enumerate() {
        let mut total = ForceBreakdown::default();
        let mut power = 0.0;
        for j in 0..n {
            let state = cycle.state(step, j, induced_velocity);
            let forces = element_forces_with(&state, env, &model).scaled(wings);
            let p = element_power(&state, &forces);
            spanwise_lift[j] += forces.total_zeta();
            spanwise_power[j] += p;
            total.accumulate(&forces);
            power += p;
        }
        time_series.push(TimeSample {
            t,
            forces: total,
            power,
        });
    }
    let first = time_series[0];
    time_series.push(TimeSample {
        t: if kin.frequency() > 0.0 {
            1.0 / kin.frequency()
        } else {
            0.0
        },
        ..first
    });

    for v in spanwise_lift.iter_mut().chain(spanwise_power.iter_mut()) {
        *v /= steps as f64;
    }
    let span_fractions = cycle
        .elements
        .iter()
        .map(|e| (e.r_mid - wing.root_offset()) / wing.span())
        .collect();
    Ok(CycleResult {
        mean_lift: spanwise_lift.iter().sum(),
        mean_aero_power: spanwise_power.iter().sum(),
        induced_velocity,
        reynolds,
        frequency: kin.frequency(),
        pair: settings.pair,
        induced,
        span_fractions,
        spanwise_lift,
        spanwise_power,
        time_series,
    })
}

/// Relative changes of `modified` with respect to `baseline`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WingComparison {
    pub lift_change: f64,
    pub power_change: f64,
    /// Change of the lift-to-aerodynamic-power ratio.
    pub ratio_change: f64,
    pub baseline_ratio_gf_per_w: f64,
    pub modified_ratio_gf_per_w: f64,
}

pub fn compare_wings(baseline: &CycleResult, modified: &CycleResult) -> Result<WingComparison> {
    if baseline.mean_lift == 0.0 || baseline.mean_aero_power == 0.0 || modified.mean_aero_power == 0.0 {
        return Err(Error::InvalidArgument(
            "cannot compare wings with zero baseline lift or zero aerodynamic power".into(),
        ));
    }
    let base_ratio = crate::power::lift_to_power_signed(baseline.mean_lift, baseline.mean_aero_power);
    let mod_ratio = crate::power::lift_to_power_signed(modified.mean_lift, modified.mean_aero_power);
    Ok(WingComparison {
        lift_change: modified.mean_lift / baseline.mean_lift - 1.0,
        power_change: modified.mean_aero_power / baseline.mean_aero_power - 1.0,
        ratio_change: mod_ratio / base_ratio - 1.0,
        baseline_ratio_gf_per_w: base_ratio,
        modified_ratio_gf_per_w: mod_ratio,
    })
}
