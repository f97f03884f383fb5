//! Self-trapped spinning-stationary Madelung fluid states.
//!
//! A canonical-form density `rho = exp(-U/T)/Z`, where `U` is the Madelung
//! potential generated by `rho` itself, closes into a singular nonlinear
//! radial ODE with a finite-radius blow-up. This crate integrates that
//! equation together with its boundary-value sensitivity, computes the full
//! set of thermodynamic-analog observables (partition function, internal
//! and kinetic energy, Shannon entropy, free energy, boundary tensions),
//! provides the analytic limiting states, and verifies the differential
//! identities between nearby states by controlled finite differences.

pub mod bessel;
pub mod error;
pub mod limits;
pub mod observables;
pub mod ode;
pub mod params;
pub mod quadrature;
pub mod series;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use limits::{GroundState, LargeTReport, SmallTDeviation};
pub use observables::{KineticEnergy, Partition, ThermoState};
pub use params::{Params, QuadOptions, SolverOptions, DEFAULT_U_CUT_OFFSET};
pub use series::OriginExpansion;
pub use solver::{BlowupEstimate, PointEval, RadialProfile, RadialSolution};
pub use sweep::{FdSteps, FitResult, StateRow, StateTable};
