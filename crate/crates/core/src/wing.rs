//! Wing planform geometry and spanwise blade-element discretization.
//!
//! Spanwise positions inside a planform are measured from the wing root
//! (`0..=span`). Blade elements report their radius from the flapping axis,
//! which is the root position plus `root_offset`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of spanwise sections.
pub const DEFAULT_SECTIONS: usize = 20;

/// Rotational axis location used when none is given, as a fraction of the local chord.
pub const DEFAULT_AXIS_FRACTION: f64 = 0.25;

/// Piecewise-linear function over strictly increasing breakpoints. Values are
/// clamped to the end values outside the breakpoint range.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPlanform(format!(
                "need at least 2 breakpoints, got {}",
                points.len()
            )));
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidPlanform(format!(
                    "breakpoint {i} is not finite: ({x}, {y})"
                )));
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidPlanform(format!(
                    "breakpoints must be strictly increasing in r: r[{}] = {} follows r[{}] = {}",
                    i + 1,
                    w[1].0,
                    i,
                    w[0].0
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, x: f64) -> f64 {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if x <= first.0 {
            return first.1;
        }
        if x >= last.0 {
            return last.1;
        }
        let i = self.points.partition_point(|p| p.0 <= x) - 1;
        let (x0, y0) = self.points[i];
        let (x1, y1) = self.points[i + 1];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Exact integral over `[a, b]` (with clamped extension outside the breakpoints).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        // Knots inside (a, b) split the integrand into linear pieces, each
        // integrated exactly by the trapezoid rule.
        let mut xs = Vec::with_capacity(self.points.len() + 2);
        xs.push(a);
        xs.extend(self.points.iter().map(|p| p.0).filter(|&x| x > a && x < b));
        xs.push(b);
        xs.windows(2)
            .map(|w| 0.5 * (self.eval(w[0]) + self.eval(w[1])) * (w[1] - w[0]))
            .sum()
    }

    fn scaled(&self, kx: f64, ky: f64) -> Self {
        Self {
            points: self.points.iter().map(|&(x, y)| (x * kx, y * ky)).collect(),
        }
    }
}

/// Chordwise location of the pitching axis, measured from the leading edge.
#[derive(Debug, Clone, PartialEq)]
pub enum RotationAxis {
    /// `l_r = fraction * c_r` at every station.
    ChordFraction(f64),
    /// Absolute offset `l_r(r)` in metres over root coordinates.
    Profile(PiecewiseLinear),
}

impl Default for RotationAxis {
    fn default() -> Self {
        RotationAxis::ChordFraction(DEFAULT_AXIS_FRACTION)
    }
}

/// Structured planform description accepted from config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanformSpec {
    pub span_m: f64,
    #[serde(default)]
    pub root_offset_m: f64,
    /// `[r, c]` pairs in metres, `r` measured from the wing root.
    pub breakpoints: Vec<[f64; 2]>,
    #[serde(default)]
    pub rotation_axis: RotationAxisSpec,
    #[serde(default)]
    pub cutout_span_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum RotationAxisSpec {
    Fraction(f64),
    Breakpoints(Vec<[f64; 2]>),
}

impl Default for RotationAxisSpec {
    fn default() -> Self {
        RotationAxisSpec::Fraction(DEFAULT_AXIS_FRACTION)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WingGeometry {
    span: f64,
    root_offset: f64,
    chord: PiecewiseLinear,
    axis: RotationAxis,
    /// Merged, sorted span-fraction intervals with the membrane removed.
    removed: Vec<(f64, f64)>,
}

impl WingGeometry {
    pub fn new(span: f64, root_offset: f64, chord: PiecewiseLinear, axis: RotationAxis) -> Result<Self> {
        if !(span > 0.0) || !span.is_finite() {
            return Err(Error::InvalidPlanform(format!("span must be > 0, got {span}")));
        }
        if !(root_offset >= 0.0) || !root_offset.is_finite() {
            return Err(Error::InvalidPlanform(format!(
                "root offset must be >= 0, got {root_offset}"
            )));
        }
        let pts = chord.points();
        let tol = 1e-9 * span;
        if pts[0].0.abs() > tol || (pts[pts.len() - 1].0 - span).abs() > tol {
            return Err(Error::InvalidPlanform(format!(
                "chord breakpoints must cover [0, {span}] m, got [{}, {}]",
                pts[0].0,
                pts[pts.len() - 1].0
            )));
        }
        if let Some(&(r, c)) = pts.iter().find(|p| p.1 < 0.0) {
            return Err(Error::InvalidPlanform(format!("negative chord {c} m at r = {r} m")));
        }
        match &axis {
            RotationAxis::ChordFraction(f) => {
                if !(0.0..=1.0).contains(f) {
                    return Err(Error::InvalidPlanform(format!(
                        "rotation axis fraction must lie in [0, 1], got {f}"
                    )));
                }
            }
            RotationAxis::Profile(profile) => {
                // Both functions are piecewise linear, so checking the union of
                // knots bounds the whole span.
                let knots = pts.iter().chain(profile.points()).map(|p| p.0);
                for r in knots.filter(|r| (0.0..=span).contains(r)) {
                    let (l, c) = (profile.eval(r), chord.eval(r));
                    if l < 0.0 || l > c * (1.0 + 1e-12) {
                        return Err(Error::InvalidPlanform(format!(
                            "rotation axis offset {l} m outside [0, chord = {c}] at r = {r} m"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            span,
            root_offset,
            chord,
            axis,
            removed: Vec::new(),
        })
    }

    /// Uniform-chord planform with the default axis location.
    pub fn rectangular(span: f64, chord: f64) -> Result<Self> {
        let profile = PiecewiseLinear::new(vec![(0.0, chord), (span, chord)])?;
        Self::new(span, 0.0, profile, RotationAxis::default())
    }

    /// Uniform-chord planform with the given single-wing area and aspect ratio.
    pub fn rectangular_with_aspect_ratio(area: f64, aspect_ratio: f64) -> Result<Self> {
        if !(area > 0.0) || !(aspect_ratio > 0.0) {
            return Err(Error::InvalidPlanform(format!(
                "area and aspect ratio must be > 0, got {area}, {aspect_ratio}"
            )));
        }
        let span = (aspect_ratio * area).sqrt();
        Self::rectangular(span, area / span)
    }

    pub fn from_spec(spec: &PlanformSpec) -> Result<Self> {
        let chord = PiecewiseLinear::new(spec.breakpoints.iter().map(|p| (p[0], p[1])).collect())?;
        let axis = match &spec.rotation_axis {
            RotationAxisSpec::Fraction(f) => RotationAxis::ChordFraction(*f),
            RotationAxisSpec::Breakpoints(bp) => {
                RotationAxis::Profile(PiecewiseLinear::new(bp.iter().map(|p| (p[0], p[1])).collect())?)
            }
        };
        let wing = Self::new(spec.span_m, spec.root_offset_m, chord, axis)?;
        wing.apply_inboard_cutout(spec.cutout_span_fraction)
    }

    /// Inverse of [`WingGeometry::from_spec`]. Only an inboard cutout survives
    /// the round trip; other masks are not expressible in the spec format.
    pub fn to_spec(&self) -> PlanformSpec {
        PlanformSpec {
            span_m: self.span,
            root_offset_m: self.root_offset,
            breakpoints: self.chord.points().iter().map(|&(r, c)| [r, c]).collect(),
            rotation_axis: match &self.axis {
                RotationAxis::ChordFraction(f) => RotationAxisSpec::Fraction(*f),
                RotationAxis::Profile(p) => {
                    RotationAxisSpec::Breakpoints(p.points().iter().map(|&(r, l)| [r, l]).collect())
                }
            },
            cutout_span_fraction: self.inboard_cutout(),
        }
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn root_offset(&self) -> f64 {
        self.root_offset
    }

    /// Distance from the flapping axis to the wing tip.
    pub fn tip_radius(&self) -> f64 {
        self.root_offset + self.span
    }

    pub fn chord_profile(&self) -> &PiecewiseLinear {
        &self.chord
    }

    pub fn rotation_axis(&self) -> &RotationAxis {
        &self.axis
    }

    /// Removed membrane intervals as span fractions.
    pub fn removed_intervals(&self) -> &[(f64, f64)] {
        &self.removed
    }

    /// Span fraction of the inboard cutout starting at the root, 0 when intact.
    pub fn inboard_cutout(&self) -> f64 {
        match self.removed.first() {
            Some(&(lo, hi)) if lo <= 0.0 => hi,
            _ => 0.0,
        }
    }

    pub fn chord_at(&self, r_root: f64) -> f64 {
        self.chord.eval(r_root)
    }

    pub fn axis_offset_at(&self, r_root: f64) -> f64 {
        match &self.axis {
            RotationAxis::ChordFraction(f) => f * self.chord.eval(r_root),
            RotationAxis::Profile(p) => p.eval(r_root).clamp(0.0, self.chord.eval(r_root)),
        }
    }

    /// 1 where membrane is present, 0 where it was removed.
    pub fn mask_at(&self, r_root: f64) -> f64 {
        let s = r_root / self.span;
        if self.removed.iter().any(|&(lo, hi)| s >= lo && s < hi) {
            0.0
        } else {
            1.0
        }
    }

    /// Planform area without the membrane mask.
    pub fn intact_area(&self) -> f64 {
        self.chord.integral(0.0, self.span)
    }

    /// Membrane area, `∫ c(r) mask(r) dr`.
    pub fn area(&self) -> f64 {
        self.masked_integral(0.0, self.span)
    }

    pub fn mean_chord(&self) -> f64 {
        self.area() / self.span
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.span * self.span / self.area()
    }

    fn masked_integral(&self, a: f64, b: f64) -> f64 {
        let removed: f64 = self
            .removed
            .iter()
            .map(|&(lo, hi)| {
                let lo = (lo * self.span).max(a);
                let hi = (hi * self.span).min(b);
                self.chord.integral(lo, hi)
            })
            .sum();
        self.chord.integral(a, b) - removed
    }

    fn unmasked_length(&self, a: f64, b: f64) -> f64 {
        let removed: f64 = self
            .removed
            .iter()
            .map(|&(lo, hi)| ((hi * self.span).min(b) - (lo * self.span).max(a)).max(0.0))
            .sum();
        (b - a) - removed
    }

    /// The same planform with every membrane cut restored.
    pub fn intact(&self) -> Self {
        Self {
            removed: Vec::new(),
            ..self.clone()
        }
    }

    /// Removes the membrane from the root out to `span_fraction` of the span.
    /// The chord profile and span are unchanged.
    pub fn apply_inboard_cutout(&self, span_fraction: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&span_fraction) {
            return Err(Error::InvalidArgument(format!(
                "cutout span fraction must lie in [0, 1), got {span_fraction}"
            )));
        }
        let mut wing = self.clone();
        if span_fraction > 0.0 {
            wing.removed.push((0.0, span_fraction));
            wing.removed = merge_intervals(std::mem::take(&mut wing.removed));
        }
        Ok(wing)
    }

    /// Uniformly scales every length by `factor`; area scales by `factor²` and
    /// the aspect ratio is unchanged.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be > 0, got {factor}"
            )));
        }
        Ok(Self {
            span: self.span * factor,
            root_offset: self.root_offset * factor,
            chord: self.chord.scaled(factor, factor),
            axis: match &self.axis {
                RotationAxis::ChordFraction(f) => RotationAxis::ChordFraction(*f),
                RotationAxis::Profile(p) => RotationAxis::Profile(p.scaled(factor, factor)),
            },
            removed: self.removed.clone(),
        })
    }

    /// Scales the planform so its intact area equals `area`, keeping the aspect ratio.
    pub fn scaled_to_area(&self, area: f64) -> Result<Self> {
        let current = self.intact_area();
        if !(current > 0.0) || !(area > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cannot rescale planform of area {current} m² to {area} m²"
            )));
        }
        self.scaled((area / current).sqrt())
    }

    /// Splits the span into `n` equal-width elements root to tip.
    ///
    /// Each element carries its exact mean chord, so the element areas sum to
    /// the planform area without quadrature error.
    pub fn discretize(&self, n: usize) -> Result<BladeElements> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 blade elements, got {n}"
            )));
        }
        let dr = self.span / n as f64;
        let elements = (0..n)
            .map(|i| {
                let a = i as f64 * dr;
                let b = if i + 1 == n { self.span } else { (i + 1) as f64 * dr };
                let width = b - a;
                let intact = self.chord.integral(a, b);
                let chord = intact / width;
                let area_scale = if intact > 0.0 {
                    (self.masked_integral(a, b) / intact).clamp(0.0, 1.0)
                } else {
                    (self.unmasked_length(a, b) / width).clamp(0.0, 1.0)
                };
                let axis_offset = match &self.axis {
                    RotationAxis::ChordFraction(f) => f * chord,
                    RotationAxis::Profile(p) => (p.integral(a, b) / width).clamp(0.0, chord),
                };
                BladeElement {
                    r_mid: self.root_offset + 0.5 * (a + b),
                    dr: width,
                    chord,
                    axis_offset,
                    area_scale,
                }
            })
            .collect();
        Ok(BladeElements { elements })
    }
}

fn merge_intervals(mut intervals: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
    for (lo, hi) in intervals {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BladeElement {
    /// Radius of the element midpoint from the flapping axis (m).
    pub r_mid: f64,
    pub dr: f64,
    /// Mean chord over the element (m).
    pub chord: f64,
    /// Leading edge to rotational axis (m).
    pub axis_offset: f64,
    /// Fraction of the element area still covered by membrane.
    pub area_scale: f64,
}

impl BladeElement {
    pub fn area(&self) -> f64 {
        self.chord * self.area_scale * self.dr
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BladeElements {
    elements: Vec<BladeElement>,
}

impl BladeElements {
    pub fn as_slice(&self) -> &[BladeElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BladeElement> {
        self.elements.iter()
    }

    pub fn area(&self) -> f64 {
        self.elements.iter().map(BladeElement::area).sum()
    }
}

impl<'a> IntoIterator for &'a BladeElements {
    type Item = &'a BladeElement;
    type IntoIter = std::slice::Iter<'a, BladeElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Reference planforms.
pub mod presets {
    use super::*;

    /// Span of the reference wing (m).
    pub const REFERENCE_SPAN: f64 = 0.09;
    /// Single-wing areas of the tested wing set (m²).
    pub const WING_SET_AREAS: [f64; 3] = [20.1e-4, 25.5e-4, 31.4e-4];
    /// Nominal aspect ratio shared by the wing set.
    pub const WING_SET_ASPECT_RATIO: f64 = 3.2;

    /// 9 cm rectangular wing with 25.5 cm² area.
    pub fn rectangular_reference() -> WingGeometry {
        WingGeometry::rectangular(REFERENCE_SPAN, 25.5e-4 / REFERENCE_SPAN).expect("reference planform is valid")
    }

    /// Tapered 9 cm, 25.5 cm² planform: narrow inboard, broad mid-span, rounded
    /// tip. Removing the inboard 25 % of membrane leaves 23.7 cm².
    pub fn tapered_reference() -> WingGeometry {
        let chord = PiecewiseLinear::new(vec![
            (0.0, 0.004),
            (0.0225, 0.012),
            (0.045, 0.042),
            (0.075, 0.042),
            (0.09, 0.025),
        ])
        .expect("breakpoints are increasing");
        WingGeometry::new(REFERENCE_SPAN, 0.0, chord, RotationAxis::default()).expect("reference planform is valid")
    }
}
