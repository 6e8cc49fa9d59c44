//! Fourier-series wing kinematics: stroke angle, spanwise rotation stations,
//! least-squares fitting and geometric angle of attack.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Harmonics used when fitting measured angles.
pub const DEFAULT_HARMONICS: usize = 5;

/// Samples per cycle used to extract the stroke amplitude numerically.
pub const AMPLITUDE_SAMPLES: usize = 3600;

/// Which time derivative to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    Angle,
    Rate,
    Acceleration,
}

impl TryFrom<u8> for Derivative {
    type Error = Error;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            0 => Ok(Derivative::Angle),
            1 => Ok(Derivative::Rate),
            2 => Ok(Derivative::Acceleration),
            _ => Err(Error::InvalidArgument(format!(
                "derivative order must be 0, 1 or 2, got {order}"
            ))),
        }
    }
}

/// `Λ(t) = a0 + Σ_n [a_n cos(2nπft) + b_n sin(2nπft)]`, angles in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    a0: f64,
    harmonics: Vec<(f64, f64)>,
    frequency: f64,
}

impl FourierSeries {
    pub fn new(a0: f64, harmonics: Vec<(f64, f64)>, frequency: f64) -> Result<Self> {
        if !(frequency >= 0.0) || !frequency.is_finite() {
            return Err(Error::InvalidKinematics(format!(
                "frequency must be finite and >= 0, got {frequency}"
            )));
        }
        if !a0.is_finite() || harmonics.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidKinematics("non-finite Fourier coefficient".into()));
        }
        Ok(Self {
            a0,
            harmonics,
            frequency,
        })
    }

    pub fn constant(value: f64, frequency: f64) -> Result<Self> {
        Self::new(value, Vec::new(), frequency)
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// `(a_n, b_n)` for `n = 1..=N`.
    pub fn harmonics(&self) -> &[(f64, f64)] {
        &self.harmonics
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn period(&self) -> f64 {
        1.0 / self.frequency
    }

    pub fn eval(&self, t: f64, order: Derivative) -> f64 {
        let w = TAU * self.frequency;
        let mut sum = match order {
            Derivative::Angle => self.a0,
            _ => 0.0,
        };
        for (k, &(a, b)) in self.harmonics.iter().enumerate() {
            let wn = w * (k + 1) as f64;
            let (s, c) = (wn * t).sin_cos();
            sum += match order {
                Derivative::Angle => a * c + b * s,
                Derivative::Rate => wn * (b * c - a * s),
                Derivative::Acceleration => -wn * wn * (a * c + b * s),
            };
        }
        sum
    }

    pub fn angle(&self, t: f64) -> f64 {
        self.eval(t, Derivative::Angle)
    }

    pub fn rate(&self, t: f64) -> f64 {
        self.eval(t, Derivative::Rate)
    }

    pub fn acceleration(&self, t: f64) -> f64 {
        self.eval(t, Derivative::Acceleration)
    }

    /// Same shape in phase, played at a new frequency.
    pub fn with_frequency(&self, frequency: f64) -> Result<Self> {
        Self::new(self.a0, self.harmonics.clone(), frequency)
    }

    /// Harmonics multiplied by `factor`; the mean is unchanged.
    pub fn with_harmonics_scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.a0,
            self.harmonics.iter().map(|&(a, b)| (a * factor, b * factor)).collect(),
            self.frequency,
        )
    }

    /// `max Λ − min Λ` over one cycle sampled at `samples` uniform phases.
    pub fn peak_to_peak(&self, samples: usize) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..samples.max(1) {
            // Phase in cycles so the sampling does not depend on frequency.
            let phase = i as f64 / samples as f64;
            let v = self.eval_phase(phase);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    }

    fn eval_phase(&self, phase: f64) -> f64 {
        self.a0
            + self
                .harmonics
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| {
                    let (s, c) = (TAU * (k + 1) as f64 * phase).sin_cos();
                    a * c + b * s
                })
                .sum::<f64>()
    }

    pub fn from_spec(spec: &SeriesSpec, frequency: f64) -> Result<Self> {
        let n = spec.a_deg.len().max(spec.b_deg.len());
        let harmonics = (0..n)
            .map(|i| {
                let a = spec.a_deg.get(i).copied().unwrap_or(0.0);
                let b = spec.b_deg.get(i).copied().unwrap_or(0.0);
                (a.to_radians(), b.to_radians())
            })
            .collect();
        Self::new(spec.a0_deg.to_radians(), harmonics, frequency)
    }

    pub fn to_spec(&self) -> SeriesSpec {
        SeriesSpec {
            a0_deg: self.a0.to_degrees(),
            a_deg: self.harmonics.iter().map(|h| h.0.to_degrees()).collect(),
            b_deg: self.harmonics.iter().map(|h| h.1.to_degrees()).collect(),
        }
    }
}

/// Fourier coefficients in degrees, as written in config files.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SeriesSpec {
    #[serde(default)]
    pub a0_deg: f64,
    #[serde(default)]
    pub a_deg: Vec<f64>,
    #[serde(default)]
    pub b_deg: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationSpec {
    pub span_fraction: f64,
    #[serde(flatten)]
    pub series: SeriesSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KinematicsSpec {
    pub frequency_hz: f64,
    pub stroke: SeriesSpec,
    pub rotation_stations: Vec<StationSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierFit {
    pub series: FourierSeries,
    pub residual_rms: f64,
}

/// Least-squares fit of `(t, angle)` samples to an `n_harmonics` Fourier series
/// at the known frequency `frequency`.
pub fn fit_fourier(samples: &[(f64, f64)], frequency: f64, n_harmonics: usize) -> Result<FourierFit> {
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "fit frequency must be > 0, got {frequency}"
        )));
    }
    let unknowns = 2 * n_harmonics + 1;
    if samples.len() < unknowns {
        return Err(Error::TooFewSamples {
            harmonics: n_harmonics,
            got: samples.len(),
            need: unknowns,
        });
    }
    let (t_min, t_max) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
        (lo.min(s.0), hi.max(s.0))
    });
    // Uniform sampling of one period ends one spacing short of the period.
    let spacing = (t_max - t_min) / (samples.len() - 1) as f64;
    if t_max - t_min + spacing < (1.0 - 1e-9) / frequency {
        return Err(Error::InvalidArgument(format!(
            "samples span {:.6e} s, shorter than one period {:.6e} s",
            t_max - t_min,
            1.0 / frequency
        )));
    }

    let w = TAU * frequency;
    let design = DMatrix::from_fn(samples.len(), unknowns, |i, j| {
        if j == 0 {
            return 1.0;
        }
        let n = j.div_ceil(2) as f64;
        let arg = w * n * samples[i].0;
        if j % 2 == 1 {
            arg.cos()
        } else {
            arg.sin()
        }
    });
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));

    let svd = design.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    if !(s_min > 1e-10 * s_max) {
        return Err(Error::RankDeficient {
            condition: if s_min > 0.0 { s_max / s_min } else { f64::INFINITY },
        });
    }
    let coeffs = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::InvalidArgument(format!("least-squares solve failed: {e}")))?;

    let residual = &design * &coeffs - &rhs;
    let residual_rms = (residual.norm_squared() / samples.len() as f64).sqrt();
    let harmonics = (0..n_harmonics)
        .map(|k| (coeffs[2 * k + 1], coeffs[2 * k + 2]))
        .collect();
    Ok(FourierFit {
        series: FourierSeries::new(coeffs[0], harmonics, frequency)?,
        residual_rms,
    })
}

/// Reads `t_s, angle_deg` CSV samples and returns `(t, angle_rad)` pairs.
pub fn load_samples_csv(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    #[derive(Deserialize)]
    struct Row {
        t_s: f64,
        angle_deg: f64,
    }
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    reader
        .deserialize::<Row>()
        .map(|row| {
            row.map(|r| (r.t_s, r.angle_deg.to_radians()))
                .map_err(|e| Error::csv(path, e))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationStation {
    pub span_fraction: f64,
    pub series: FourierSeries,
}

/// Rotational angle and its first two time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationState {
    pub angle: f64,
    pub rate: f64,
    pub acceleration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WingKinematics {
    stroke: FourierSeries,
    stations: Vec<RotationStation>,
}

impl WingKinematics {
    pub fn new(stroke: FourierSeries, mut stations: Vec<RotationStation>) -> Result<Self> {
        if stations.is_empty() {
            return Err(Error::InvalidKinematics(
                "at least one rotation station is required".into(),
            ));
        }
        let f = stroke.frequency();
        for s in &stations {
            if !(0.0..=1.0).contains(&s.span_fraction) {
                return Err(Error::InvalidKinematics(format!(
                    "station span fraction {} outside [0, 1]",
                    s.span_fraction
                )));
            }
            if s.series.frequency() != f {
                return Err(Error::InvalidKinematics(format!(
                    "rotation station at {} runs at {} Hz but the stroke runs at {f} Hz",
                    s.span_fraction,
                    s.series.frequency()
                )));
            }
        }
        stations.sort_by(|a, b| a.span_fraction.total_cmp(&b.span_fraction));
        if stations.windows(2).any(|w| w[0].span_fraction == w[1].span_fraction) {
            return Err(Error::InvalidKinematics(
                "duplicate rotation station span fraction".into(),
            ));
        }
        Ok(Self { stroke, stations })
    }

    pub fn from_spec(spec: &KinematicsSpec) -> Result<Self> {
        let f = spec.frequency_hz;
        let stroke = FourierSeries::from_spec(&spec.stroke, f)?;
        let stations = spec
            .rotation_stations
            .iter()
            .map(|s| {
                Ok(RotationStation {
                    span_fraction: s.span_fraction,
                    series: FourierSeries::from_spec(&s.series, f)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(stroke, stations)
    }

    pub fn to_spec(&self) -> KinematicsSpec {
        KinematicsSpec {
            frequency_hz: self.frequency(),
            stroke: self.stroke.to_spec(),
            rotation_stations: self
                .stations
                .iter()
                .map(|s| StationSpec {
                    span_fraction: s.span_fraction,
                    series: s.series.to_spec(),
                })
                .collect(),
        }
    }

    /// Stroke angle `χ(t) = (Φ/2) cos 2πft` and a rotation that pitches the
    /// chord symmetrically about 90° in phase with the stroke: ±15° at 25 %
    /// span (inboard geometric AoA between 75° and 90°) and ±60° at the tip
    /// (30° to 150°).
    pub fn twisted_reference(amplitude: f64, frequency: f64) -> Result<Self> {
        let stroke = FourierSeries::new(0.0, vec![(0.5 * amplitude, 0.0)], frequency)?;
        let station = |span_fraction: f64, swing_deg: f64| -> Result<RotationStation> {
            Ok(RotationStation {
                span_fraction,
                series: FourierSeries::new(90f64.to_radians(), vec![(0.0, swing_deg.to_radians())], frequency)?,
            })
        };
        Self::new(stroke, vec![station(0.25, 15.0)?, station(1.0, 60.0)?])
    }

    pub fn stroke(&self) -> &FourierSeries {
        &self.stroke
    }

    pub fn stations(&self) -> &[RotationStation] {
        &self.stations
    }

    pub fn frequency(&self) -> f64 {
        self.stroke.frequency()
    }

    /// Peak-to-peak stroke amplitude Φ (rad), sampled densely.
    pub fn amplitude(&self) -> f64 {
        self.stroke.peak_to_peak(AMPLITUDE_SAMPLES)
    }

    pub fn with_frequency(&self, frequency: f64) -> Result<Self> {
        let stations = self
            .stations
            .iter()
            .map(|s| {
                Ok(RotationStation {
                    span_fraction: s.span_fraction,
                    series: s.series.with_frequency(frequency)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.stroke.with_frequency(frequency)?, stations)
    }

    /// Rescales the stroke harmonics so the peak-to-peak amplitude becomes `amplitude`.
    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self> {
        let current = self.amplitude();
        if !(current > 0.0) {
            return Err(Error::InvalidKinematics(
                "cannot rescale a stroke with zero amplitude".into(),
            ));
        }
        Self::new(
            self.stroke.with_harmonics_scaled(amplitude / current)?,
            self.stations.clone(),
        )
    }

    /// Interpolation weights `(lower index, upper index, weight of upper)`.
    fn bracket(&self, span_fraction: f64) -> (usize, usize, f64) {
        let last = self.stations.len() - 1;
        if span_fraction <= self.stations[0].span_fraction {
            return (0, 0, 0.0);
        }
        if span_fraction >= self.stations[last].span_fraction {
            return (last, last, 0.0);
        }
        let hi = self.stations.partition_point(|s| s.span_fraction <= span_fraction);
        let lo = hi - 1;
        let (x0, x1) = (self.stations[lo].span_fraction, self.stations[hi].span_fraction);
        (lo, hi, (span_fraction - x0) / (x1 - x0))
    }

    pub fn rotation_eval(&self, span_fraction: f64, t: f64, order: Derivative) -> f64 {
        let (lo, hi, w) = self.bracket(span_fraction);
        let v0 = self.stations[lo].series.eval(t, order);
        if lo == hi || w == 0.0 {
            return v0;
        }
        let v1 = self.stations[hi].series.eval(t, order);
        v0 + w * (v1 - v0)
    }

    /// Rotational angle α_r at a span fraction, linearly interpolated between
    /// stations and clamped outside them.
    pub fn rotation_at(&self, span_fraction: f64, t: f64) -> f64 {
        self.rotation_eval(span_fraction, t, Derivative::Angle)
    }

    pub fn rotation_state(&self, span_fraction: f64, t: f64) -> RotationState {
        RotationState {
            angle: self.rotation_eval(span_fraction, t, Derivative::Angle),
            rate: self.rotation_eval(span_fraction, t, Derivative::Rate),
            acceleration: self.rotation_eval(span_fraction, t, Derivative::Acceleration),
        }
    }
}

/// Geometric angle of attack from the rotational angle and the stroke rate.
///
/// Positive stroke rate is the upstroke, where α_g = α_r; on the downstroke
/// α_g = π − α_r; at reversal α_g = π/2. The result is clamped to `[0, π]`.
pub fn geometric_aoa(rotation: f64, stroke_rate: f64) -> f64 {
    let aoa = if stroke_rate > 0.0 {
        rotation
    } else if stroke_rate < 0.0 {
        PI - rotation
    } else {
        0.5 * PI
    };
    aoa.clamp(0.0, PI)
}
