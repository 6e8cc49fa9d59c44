use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::control::ControlConfig;
use crate::error::{Error, Result};
use crate::kinematics::{KinematicsSpec, WingKinematics};
use crate::ubet::{AeroEnvironment, SolverSettings};
use crate::wing::{presets, PlanformSpec, WingGeometry};

pub const DEFAULT_CUTOUT_FREQUENCY_HZ: f64 = 17.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WingPreset {
    RectangularReference,
    TaperedReference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WingSpec {
    Preset {
        preset: WingPreset,
        #[serde(default)]
        cutout_span_fraction: f64,
    },
    Planform(PlanformSpec),
}

impl WingSpec {
    pub fn build(&self) -> Result<WingGeometry> {
        match self {
            WingSpec::Preset {
                preset,
                cutout_span_fraction,
            } => {
                let wing = match preset {
                    WingPreset::RectangularReference => presets::rectangular_reference(),
                    WingPreset::TaperedReference => presets::tapered_reference(),
                };
                wing.apply_inboard_cutout(*cutout_span_fraction)
            }
            WingSpec::Planform(spec) => WingGeometry::from_spec(spec),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KinematicsPreset {
    TwistedReference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KinematicsConfig {
    Preset {
        preset: KinematicsPreset,
        amplitude_deg: f64,
        frequency_hz: f64,
    },
    Explicit(KinematicsSpec),
}

impl KinematicsConfig {
    pub fn build(&self) -> Result<WingKinematics> {
        match self {
            KinematicsConfig::Preset {
                preset: KinematicsPreset::TwistedReference,
                amplitude_deg,
                frequency_hz,
            } => WingKinematics::twisted_reference(amplitude_deg.to_radians(), *frequency_hz),
            KinematicsConfig::Explicit(spec) => WingKinematics::from_spec(spec),
        }
    }
}

/// Grid axes. Missing axes default to the single value of the base wing and
/// kinematics; an explicitly empty axis is a config error.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes_deg: Option<Vec<f64>>,
    /// Single-wing intact areas; the base planform is rescaled at constant aspect ratio.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub areas_cm2: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutout_fractions: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequencies_hz: Option<Vec<f64>>,
    /// When set, each point is trimmed in frequency to these lifts instead of
    /// using the frequency axis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_lifts_gf: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trim_bounds_hz: Option<[f64; 2]>,
    /// Relative lift tolerance of the frequency trim.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trim_tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CutoutStudySpec {
    pub span_fraction: f64,
    pub frequency_hz: f64,
}

impl Default for CutoutStudySpec {
    fn default() -> Self {
        Self {
            span_fraction: 0.25,
            frequency_hz: DEFAULT_CUTOUT_FREQUENCY_HZ,
        }
    }
}

/// Electrical and mass inputs for a power budget alongside a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpec {
    pub motor_resistance_ohm: f64,
    pub input_power_w: f64,
    pub current_a: f64,
    /// Mass of all wings together (kg).
    pub wing_mass_kg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub wing: WingSpec,
    pub kinematics: KinematicsConfig,
    #[serde(default)]
    pub environment: AeroEnvironment,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub cutout_study: CutoutStudySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<PowerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<ControlConfig>,
}

impl Default for StudyConfig {
    /// Rectangular 25.5 cm² wing pair, 190° twisted reference kinematics at 17.3 Hz.
    fn default() -> Self {
        Self {
            wing: WingSpec::Preset {
                preset: WingPreset::RectangularReference,
                cutout_span_fraction: 0.0,
            },
            kinematics: KinematicsConfig::Preset {
                preset: KinematicsPreset::TwistedReference,
                amplitude_deg: 190.0,
                frequency_hz: 17.3,
            },
            environment: AeroEnvironment::default(),
            sweep: SweepSpec::default(),
            solver: SolverSettings::default(),
            output: OutputSpec::default(),
            cutout_study: CutoutStudySpec::default(),
            power: None,
            control: None,
        }
    }
}

/// Resolved, validated sweep axes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxes {
    pub amplitudes_deg: Vec<f64>,
    pub areas_cm2: Vec<f64>,
    pub cutout_fractions: Vec<f64>,
    pub frequencies_hz: Vec<f64>,
    pub target_lifts_gf: Option<Vec<f64>>,
    pub trim_bounds_hz: [f64; 2],
    pub trim_tolerance: f64,
}

pub const DEFAULT_TRIM_BOUNDS_HZ: [f64; 2] = [5.0, 60.0];
pub const DEFAULT_TRIM_TOLERANCE: f64 = 0.005;

impl StudyConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks that every referenced spec resolves and every axis is usable.
    pub fn validate(&self) -> Result<()> {
        let as_config = |e: Error| Error::Config(e.to_string());
        self.wing.build().map_err(as_config)?;
        self.kinematics.build().map_err(as_config)?;
        self.environment.validate().map_err(as_config)?;
        self.solver.validate().map_err(as_config)?;
        self.axes()?;
        if let Some(control) = &self.control {
            control.validate().map_err(as_config)?;
        }
        if !(0.0..1.0).contains(&self.cutout_study.span_fraction) {
            return Err(Error::Config(format!(
                "cutout_study.span_fraction must lie in [0, 1), got {}",
                self.cutout_study.span_fraction
            )));
        }
        Ok(())
    }

    pub fn axes(&self) -> Result<SweepAxes> {
        let wing = self.wing.build().map_err(|e| Error::Config(e.to_string()))?;
        let kin = self.kinematics.build().map_err(|e| Error::Config(e.to_string()))?;
        let axis = |name: &str, given: &Option<Vec<f64>>, default: f64, check: &dyn Fn(f64) -> bool| {
            let values = given.clone().unwrap_or_else(|| vec![default]);
            if values.is_empty() {
                return Err(Error::Config(format!("sweep axis {name} is empty")));
            }
            if let Some(bad) = values.iter().find(|&&v| !v.is_finite() || !check(v)) {
                return Err(Error::Config(format!("sweep axis {name} has invalid value {bad}")));
            }
            Ok(values)
        };
        let positive = |v: f64| v > 0.0;
        let s = &self.sweep;
        let target_lifts_gf = match &s.target_lifts_gf {
            Some(t) => Some(axis("target_lifts_gf", &Some(t.clone()), 0.0, &positive)?),
            None => None,
        };
        let trim_bounds_hz = s.trim_bounds_hz.unwrap_or(DEFAULT_TRIM_BOUNDS_HZ);
        if !(trim_bounds_hz[0] > 0.0 && trim_bounds_hz[1] > trim_bounds_hz[0]) {
            return Err(Error::Config(format!("invalid trim bounds {trim_bounds_hz:?}")));
        }
        let trim_tolerance = s.trim_tolerance.unwrap_or(DEFAULT_TRIM_TOLERANCE);
        if !(trim_tolerance > 0.0) {
            return Err(Error::Config(format!(
                "trim tolerance must be > 0, got {trim_tolerance}"
            )));
        }
        Ok(SweepAxes {
            amplitudes_deg: axis(
                "amplitudes_deg",
                &s.amplitudes_deg,
                kin.amplitude().to_degrees(),
                &positive,
            )?,
            areas_cm2: axis("areas_cm2", &s.areas_cm2, wing.intact_area() * 1e4, &positive)?,
            cutout_fractions: axis("cutout_fractions", &s.cutout_fractions, wing.inboard_cutout(), &|v| {
                (0.0..1.0).contains(&v)
            })?,
            frequencies_hz: axis("frequencies_hz", &s.frequencies_hz, kin.frequency(), &positive)?,
            target_lifts_gf,
            trim_bounds_hz,
            trim_tolerance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let config = StudyConfig::default();
        let text = config.to_json_string().unwrap();
        let back = StudyConfig::from_json_str(&text).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn explicit_config_round_trips() {
        let mut config = StudyConfig {
            wing: WingSpec::Planform(presets::tapered_reference().to_spec()),
            kinematics: KinematicsConfig::Explicit(WingKinematics::twisted_reference(2.0, 15.0).unwrap().to_spec()),
            ..StudyConfig::default()
        };
        config.sweep.amplitudes_deg = Some(vec![120.0, 190.0]);
        config.sweep.target_lifts_gf = Some(vec![15.8]);
        config.control = Some(ControlConfig::default());
        config.power = Some(PowerSpec {
            motor_resistance_ohm: 5.0,
            input_power_w: 3.0,
            current_a: 0.8,
            wing_mass_kg: 0.4e-3,
        });
        let text = config.to_json_string().unwrap();
        assert_eq!(StudyConfig::from_json_str(&text).unwrap(), config);
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let text = r#"{
            "wing": {"preset": "tapered_reference", "cutout_span_fraction": 0.25},
            "kinematics": {"preset": "twisted_reference", "amplitude_deg": 190, "frequency_hz": 18}
        }"#;
        let config = StudyConfig::from_json_str(text).unwrap();
        let axes = config.axes().unwrap();
        assert_eq!(axes.cutout_fractions, vec![0.25]);
        assert!((axes.areas_cm2[0] - 25.5).abs() < 1e-9);
        assert_eq!(axes.frequencies_hz, vec![18.0]);
        assert_eq!(config.solver.steps_per_cycle, 720);
    }

    #[test]
    fn empty_axis_is_a_config_error() {
        let mut config = StudyConfig::default();
        config.sweep.areas_cm2 = Some(vec![]);
        assert!(matches!(config.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn unresolvable_wing_is_a_config_error() {
        let text = r#"{
            "wing": {"span_m": 0.09, "breakpoints": [[0.0, 0.02], [0.05, 0.02]]},
            "kinematics": {"preset": "twisted_reference", "amplitude_deg": 190, "frequency_hz": 18}
        }"#;
        assert!(matches!(StudyConfig::from_json_str(text), Err(Error::Config(_))));
    }

    #[test]
    fn malformed_json_is_a_config_error() {
        assert!(matches!(StudyConfig::from_json_str("{"), Err(Error::Config(_))));
    }
}
