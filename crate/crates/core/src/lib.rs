//! Quasi-steady blade-element model of a flapping-wing hover vehicle.
//!
//! The crate covers wing planform and discretization ([`wing`]), Fourier
//! kinematics fitted to motion-capture samples ([`kinematics`]), an unsteady
//! blade-element solver with a momentum-theory induced velocity ([`ubet`]),
//! electrical-to-aerodynamic power accounting ([`power`]), a yaw-axis
//! filter and PD loop ([`control`]) and batch studies with CSV/JSON export
//! ([`harness`]).
//!
//! Angles are radians and quantities SI unless a name says otherwise
//! (`_deg`, `_gf`, `_cm2`, `_hz`).
//!
//! ```
//! use flapwing::{presets, simulate_cycle, AeroEnvironment, SolverSettings, WingKinematics};
//!
//! let wing = presets::rectangular_reference();
//! let kin = WingKinematics::twisted_reference(190f64.to_radians(), 17.3).unwrap();
//! let r = simulate_cycle(&wing, &kin, &AeroEnvironment::default(), &SolverSettings::default()).unwrap();
//! assert!(r.mean_lift > 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod error;
pub mod harness;
pub mod kinematics;
pub mod power;
pub mod ubet;
pub mod wing;

pub use control::{simulate_closed_loop, ControlConfig, LowPass, YawGains, YawState};
pub use error::{Error, Result};
pub use kinematics::{fit_fourier, geometric_aoa, Derivative, FourierFit, FourierSeries, WingKinematics};
pub use power::{decompose, gf_to_newtons, inertial_power, newtons_to_gf, PowerBudget, WingMassModel};
pub use ubet::{
    aero_coefficients, compare_wings, element_forces, reynolds, simulate_cycle, solve_induced_velocity,
    AeroEnvironment, CycleResult, InducedVelocityMode, SolverSettings,
};
pub use wing::{presets, BladeElement, BladeElements, PiecewiseLinear, WingGeometry};
