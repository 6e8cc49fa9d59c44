//! Input-power decomposition, Joule loss, shunt-current measurement, wing
//! inertial power and lift-to-power figures of merit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{Derivative, WingKinematics};
use crate::wing::BladeElements;

/// Newtons per gram-force, as used for all gf conversions.
pub const NEWTONS_PER_GF: f64 = 9.8e-3;

pub fn newtons_to_gf(force: f64) -> f64 {
    force / NEWTONS_PER_GF
}

pub fn gf_to_newtons(gf: f64) -> f64 {
    gf * NEWTONS_PER_GF
}

/// Lift (N) per unit power (W), reported in gram-force per watt.
pub fn lift_to_power(lift: f64, power: f64) -> Result<f64> {
    if !(power > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lift-to-power needs positive power, got {power} W"
        )));
    }
    Ok(lift_to_power_signed(lift, power))
}

pub(crate) fn lift_to_power_signed(lift: f64, power: f64) -> f64 {
    newtons_to_gf(lift) / power
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShuntMeasurement {
    pub current_a: f64,
    /// `V_o · I`.
    pub input_power_w: f64,
    /// Current flows from the load back into the supply.
    pub reversed: bool,
}

/// Current through a series shunt of resistance `resistance` from the supply
/// voltage `v_supply` and the voltage `v_output` at the load.
pub fn shunt_current(v_supply: f64, v_output: f64, resistance: f64) -> Result<ShuntMeasurement> {
    if !(resistance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "shunt resistance must be > 0, got {resistance} Ω"
        )));
    }
    let current_a = (v_supply - v_output) / resistance;
    Ok(ShuntMeasurement {
        current_a,
        input_power_w: v_output * current_a,
        reversed: current_a < 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorElectrical {
    /// Winding resistance (Ω).
    pub resistance: f64,
}

impl MotorElectrical {
    pub fn new(resistance: f64) -> Result<Self> {
        if !(resistance > 0.0) || !resistance.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "motor resistance must be > 0, got {resistance} Ω"
            )));
        }
        Ok(Self { resistance })
    }
}

/// `R_m I²`.
pub fn joule_loss(current: f64, motor: &MotorElectrical) -> f64 {
    motor.resistance * current * current
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Measured,
    Modeled,
    Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub value_w: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBudget {
    pub input: PowerTerm,
    pub joule_loss: PowerTerm,
    /// Flapping-mechanism loss, the residual of the balance.
    pub mechanism: PowerTerm,
    pub aerodynamic: PowerTerm,
    pub inertial: PowerTerm,
    /// The residual came out negative: the modelled terms exceed the input.
    pub inconsistent: bool,
}

impl PowerBudget {
    /// Sum of the four component terms.
    pub fn reconstructed_input(&self) -> f64 {
        self.joule_loss.value_w + self.mechanism.value_w + self.aerodynamic.value_w + self.inertial.value_w
    }
}

/// Splits measured input power into Joule loss, aerodynamic and inertial
/// power and the mechanism-loss residual.
pub fn decompose(
    input_power: f64,
    current: f64,
    motor: &MotorElectrical,
    aero_power: f64,
    inertial_power: f64,
) -> Result<PowerBudget> {
    if !(input_power >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "input power must be >= 0, got {input_power} W"
        )));
    }
    let loss = joule_loss(current, motor);
    let mechanism = input_power - loss - aero_power - inertial_power;
    let term = |value_w, provenance| PowerTerm { value_w, provenance };
    Ok(PowerBudget {
        input: term(input_power, Provenance::Measured),
        joule_loss: term(loss, Provenance::Modeled),
        mechanism: term(mechanism, Provenance::Residual),
        aerodynamic: term(aero_power, Provenance::Modeled),
        inertial: term(inertial_power, Provenance::Modeled),
        inconsistent: mechanism < 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassElement {
    /// Distance from the flapping axis (m).
    pub radius: f64,
    /// Span fraction used to look up the local rotation angle.
    pub span_fraction: f64,
    pub mass: f64,
    /// Chordwise distance of the element's centre of mass from the pitch axis (m).
    pub pitch_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WingMassModel {
    /// Elements of one wing.
    pub elements: Vec<MassElement>,
    /// Number of identical wings.
    pub wing_count: u32,
}

impl WingMassModel {
    pub fn point_mass(mass: f64, radius: f64) -> Self {
        Self {
            elements: vec![MassElement {
                radius,
                span_fraction: 1.0,
                mass,
                pitch_offset: 0.0,
            }],
            wing_count: 1,
        }
    }

    /// Spreads `total_mass` over `wing_count` wings in proportion to the intact
    /// element areas, with each element's centre of mass at mid-chord.
    pub fn from_blade_elements(elements: &BladeElements, total_mass: f64, wing_count: u32) -> Result<Self> {
        if wing_count == 0 || !(total_mass >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need >= 1 wing and non-negative mass, got {wing_count} wings and {total_mass} kg"
            )));
        }
        let intact: Vec<f64> = elements.iter().map(|e| e.chord * e.dr).collect();
        let area: f64 = intact.iter().sum();
        if !(area > 0.0) {
            return Err(Error::InvalidArgument(
                "cannot distribute mass over a zero-area wing".into(),
            ));
        }
        let r0 = elements.as_slice()[0].r_mid - 0.5 * elements.as_slice()[0].dr;
        let span: f64 = elements.iter().map(|e| e.dr).sum();
        let per_wing = total_mass / wing_count as f64;
        Ok(Self {
            elements: elements
                .iter()
                .zip(&intact)
                .map(|(e, a)| MassElement {
                    radius: e.r_mid,
                    span_fraction: (e.r_mid - r0) / span,
                    mass: per_wing * a / area,
                    pitch_offset: 0.5 * e.chord - e.axis_offset,
                })
                .collect(),
            wing_count,
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.wing_count as f64 * self.elements.iter().map(|e| e.mass).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InertialPower {
    /// Cycle mean of the signed power; zero for a rigid periodic wing.
    pub signed_mean: f64,
    /// Cycle mean of the positive part only (no energy recovery).
    pub rectified_mean: f64,
    /// `(t, P_i(t))` over one cycle.
    pub series: Vec<(f64, f64)>,
}

/// Power to accelerate the wing's inertia about the flapping and pitch axes,
/// `P_i(t) = Σ m_j (r_j² χ̈ χ̇ + d_j² α̈_j α̇_j)`.
pub fn inertial_power(mass: &WingMassModel, kin: &WingKinematics, steps: usize) -> Result<InertialPower> {
    if mass.elements.is_empty() {
        return Err(Error::InvalidArgument("empty wing mass model".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("inertial power needs >= 1 step".into()));
    }
    let f = kin.frequency();
    let wings = mass.wing_count as f64;
    let series: Vec<(f64, f64)> = (0..steps)
        .map(|k| {
            let t = if f > 0.0 { k as f64 / (steps as f64 * f) } else { 0.0 };
            let rate = kin.stroke().rate(t);
            let accel = kin.stroke().acceleration(t);
            let p: f64 = mass
                .elements
                .iter()
                .map(|e| {
                    let pitch = if e.pitch_offset != 0.0 {
                        let s = e.span_fraction;
                        e.pitch_offset.powi(2)
                            * kin.rotation_eval(s, t, Derivative::Acceleration)
                            * kin.rotation_eval(s, t, Derivative::Rate)
                    } else {
                        0.0
                    };
                    e.mass * (e.radius * e.radius * accel * rate + pitch)
                })
                .sum();
            (t, wings * p)
        })
        .collect();
    let n = series.len() as f64;
    Ok(InertialPower {
        signed_mean: series.iter().map(|s| s.1).sum::<f64>() / n,
        rectified_mean: series.iter().map(|s| s.1.max(0.0)).sum::<f64>() / n,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{FourierSeries, RotationStation};
    use approx::assert_relative_eq;

    #[test]
    fn shunt_current_cases() {
        let m = shunt_current(3.7, 3.7, 2.0).unwrap();
        assert_eq!(m.current_a, 0.0);
        assert_eq!(m.input_power_w, 0.0);
        let m = shunt_current(3.7, 3.3, 2.0).unwrap();
        assert_relative_eq!(m.current_a, 0.2, max_relative = 1e-12);
        assert!(!m.reversed);
        assert!(shunt_current(3.0, 3.5, 2.0).unwrap().reversed);
        assert!(shunt_current(3.7, 3.3, 0.0).is_err());
    }

    #[test]
    fn joule_loss_cases() {
        let motor = MotorElectrical::new(2.0).unwrap();
        assert_eq!(joule_loss(0.0, &motor), 0.0);
        assert_eq!(joule_loss(1.0, &motor), 2.0);
        assert_relative_eq!(
            joule_loss(0.6, &motor),
            4.0 * joule_loss(0.3, &motor),
            max_relative = 1e-15
        );
        assert!(MotorElectrical::new(0.0).is_err());
    }

    #[test]
    fn decompose_cases() {
        let motor = MotorElectrical::new(2.0).unwrap();
        let b = decompose(0.0, 0.0, &motor, 0.0, 0.0).unwrap();
        assert_eq!(b.reconstructed_input(), 0.0);
        assert!(!b.inconsistent);

        let b = decompose(3.0, 0.5, &motor, 1.2, 0.4).unwrap();
        assert_relative_eq!(b.joule_loss.value_w, 0.5, max_relative = 1e-15);
        assert_relative_eq!(b.mechanism.value_w, 0.9, max_relative = 1e-12);
        assert_eq!(b.mechanism.provenance, Provenance::Residual);
        assert_eq!(b.input.provenance, Provenance::Measured);

        let b = decompose(1.0, 0.0, &motor, 1.5, 0.0).unwrap();
        assert!(b.mechanism.value_w < 0.0);
        assert!(b.inconsistent);

        assert!(decompose(-1.0, 0.0, &motor, 0.0, 0.0).is_err());
    }

    #[test]
    fn budget_json_carries_provenance() {
        let motor = MotorElectrical::new(2.0).unwrap();
        let b = decompose(3.0, 0.5, &motor, 1.2, 0.4).unwrap();
        let v: serde_json::Value = serde_json::to_value(b).unwrap();
        assert_eq!(v["mechanism"]["provenance"], "residual");
        assert_eq!(v["joule_loss"]["provenance"], "modeled");
    }

    #[test]
    fn lift_to_power_units() {
        assert_relative_eq!(lift_to_power(9.8e-3, 1.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            lift_to_power(gf_to_newtons(21.2), 2.0).unwrap(),
            0.5 * lift_to_power(gf_to_newtons(21.2), 1.0).unwrap(),
            max_relative = 1e-15
        );
        assert!(lift_to_power(1.0, 0.0).is_err());
    }

    fn stroke_only(stroke: FourierSeries) -> WingKinematics {
        let f = stroke.frequency();
        WingKinematics::new(
            stroke,
            vec![RotationStation {
                span_fraction: 0.0,
                series: FourierSeries::constant(1.0, f).unwrap(),
            }],
        )
        .unwrap()
    }

    #[test]
    fn inertial_power_of_zero_mass_is_zero() {
        let kin = WingKinematics::twisted_reference(3.0, 20.0).unwrap();
        let p = inertial_power(&WingMassModel::point_mass(0.0, 0.05), &kin, 360).unwrap();
        assert_eq!(p.signed_mean, 0.0);
        assert_eq!(p.rectified_mean, 0.0);
    }

    #[test]
    fn inertial_power_rejects_empty_model() {
        let kin = WingKinematics::twisted_reference(3.0, 20.0).unwrap();
        let empty = WingMassModel {
            elements: vec![],
            wing_count: 1,
        };
        assert!(inertial_power(&empty, &kin, 360).is_err());
    }

    #[test]
    fn constant_stroke_rate_needs_no_inertial_power() {
        // A periodic stroke can only hold a constant rate of zero.
        let kin = stroke_only(FourierSeries::new(0.3, vec![(0.0, 0.0)], 10.0).unwrap());
        let p = inertial_power(&WingMassModel::point_mass(1e-4, 0.05), &kin, 360).unwrap();
        assert_eq!(p.signed_mean, 0.0);
        assert_eq!(p.rectified_mean, 0.0);
    }

    #[test]
    fn mass_model_from_elements_conserves_total() {
        let wing = crate::wing::presets::tapered_reference();
        let el = wing.discretize(20).unwrap();
        let m = WingMassModel::from_blade_elements(&el, 0.4e-3, 2).unwrap();
        assert_relative_eq!(m.total_mass(), 0.4e-3, max_relative = 1e-12);
    }
}
