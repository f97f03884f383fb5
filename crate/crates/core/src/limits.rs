//! Analytic limiting states and convergence diagnostics.
//!
//! As the analog temperature vanishes the spinning state stops rotating and
//! its amplitude approaches the ground state of a particle in a cylindrical
//! hard-wall well: `R0(r) = A J0(k r)` with `k = sqrt(2 m X / hbar^2)` and
//! support radius `r_0 = B0 / k` set by the first Bessel zero. In the
//! opposite limit the density contracts toward a point while the internal
//! and kinetic energies grow without bound.

use crate::bessel;
use crate::error::{Error, Result};
use crate::observables::ThermoState;
use crate::params::QuadOptions;
use crate::quadrature::integrate_interval;
use crate::solver::RadialSolution;

/// The vanishing-temperature Bessel ground state at energy `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    /// Total energy, equal to the central potential value.
    pub x: f64,
    /// Wavenumber `sqrt(2 m X / hbar^2)`.
    pub k: f64,
    /// Support radius `B0 / k`.
    pub r_0: f64,
    /// Amplitude normalizing `2 pi Int r (A J0(k r))^2 dr = 1`.
    pub amplitude: f64,
}

/// Construct the ground state for energy `x > 0`.
pub fn ground_state(x: f64, hbar: f64, mass: f64) -> Result<GroundState> {
    for (name, v) in [("X", x), ("hbar", hbar), ("m", mass)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidParams {
                name,
                value: v,
                reason: "must be finite and strictly positive",
            });
        }
    }
    let k = (2.0 * mass * x).sqrt() / hbar;
    let r_0 = bessel::first_zero() / k;
    let norm = integrate_interval(
        |r| {
            let j = bessel::j0(k * r);
            r * j * j
        },
        0.0,
        r_0,
        32,
        &QuadOptions::default(),
    )?;
    let amplitude = 1.0 / (2.0 * std::f64::consts::PI * norm.value).sqrt();
    Ok(GroundState {
        x,
        k,
        r_0,
        amplitude,
    })
}

impl GroundState {
    /// Normalized amplitude `A J0(k r)`, zero at and beyond `r_0`.
    pub fn amplitude_at(&self, r: f64) -> f64 {
        if r < 0.0 || r >= self.r_0 {
            0.0
        } else {
            self.amplitude * bessel::j0(self.k * r)
        }
    }

    /// Ground-state density `(A J0(k r))^2`.
    pub fn density(&self, r: f64) -> f64 {
        let a = self.amplitude_at(r);
        a * a
    }
}

/// Distance of one solved state from its vanishing-temperature limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallTDeviation {
    /// Sup over the solution grid of the difference between the
    /// origin-normalized amplitude `R(r)/R(0) = exp(-(U-X)/2T)` and
    /// `J0(k r)`.
    pub sup_norm: f64,
    /// `|r_m(T, X) - r_0(X)|`.
    pub r_m_gap: f64,
}

/// Compare a solved state against the ground state at the same `X`.
///
/// Amplitudes are normalized at the origin, which isolates the shape of the
/// profile from the size of its support; the support mismatch is reported
/// separately as `r_m_gap`.
pub fn small_t_deviation(solution: &RadialSolution) -> Result<SmallTDeviation> {
    let p = solution.params();
    let ground = ground_state(p.x(), p.hbar(), p.mass())?;
    let inv_2t = 1.0 / (2.0 * p.t());
    let x = p.x();
    let mut sup: f64 = 0.0;
    for (r, state) in solution.grid().iter().zip(solution.states()) {
        let ratio = ((x - state[0]) * inv_2t).exp();
        sup = sup.max((ratio - bessel::j0(ground.k * r)).abs());
    }
    Ok(SmallTDeviation {
        sup_norm: sup,
        r_m_gap: (solution.r_m() - ground.r_0).abs(),
    })
}

/// Monotonicity summary of a fixed-`X` sequence of states at increasing `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeTReport {
    pub t_values: Vec<f64>,
    pub r_m_values: Vec<f64>,
    pub u_bar_values: Vec<f64>,
    pub k_bar_values: Vec<f64>,
    pub r_m_decreasing: bool,
    pub u_bar_increasing: bool,
    pub k_bar_increasing: bool,
    pub e_bar_increasing: bool,
}

/// Diagnose the approach to the singular large-temperature limit: the
/// support shrinks toward zero while every energy grows.
pub fn large_t_diagnostics(states: &[ThermoState]) -> Result<LargeTReport> {
    if states.len() < 2 {
        return Err(Error::InsufficientData {
            context: format!("need at least 2 states, got {}", states.len()),
        });
    }
    let x0 = states[0].x;
    if states.iter().any(|s| (s.x - x0).abs() > 1e-12 * x0.abs()) {
        return Err(Error::InsufficientData {
            context: "states do not share a single X".into(),
        });
    }
    if states.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(Error::InsufficientData {
            context: "states must be ordered by strictly increasing T".into(),
        });
    }
    let dec = |f: fn(&ThermoState) -> f64| states.windows(2).all(|w| f(&w[1]) < f(&w[0]));
    let inc = |f: fn(&ThermoState) -> f64| states.windows(2).all(|w| f(&w[1]) > f(&w[0]));
    Ok(LargeTReport {
        t_values: states.iter().map(|s| s.t).collect(),
        r_m_values: states.iter().map(|s| s.r_m).collect(),
        u_bar_values: states.iter().map(|s| s.u_bar).collect(),
        k_bar_values: states.iter().map(|s| s.k_bar).collect(),
        r_m_decreasing: dec(|s| s.r_m),
        u_bar_increasing: inc(|s| s.u_bar),
        k_bar_increasing: inc(|s| s.k_bar),
        e_bar_increasing: inc(|s| s.e_bar),
    })
}
