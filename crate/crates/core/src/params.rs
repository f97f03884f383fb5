use crate::error::{Error, Result};

/// Physical parameters of one spinning-stationary state.
///
/// `t` is the analog temperature of the canonical density
/// `rho = exp(-U/T)/Z` and `x` the central potential value `U(0)`.
/// Both must be strictly positive; the `T = 0` ground state is handled
/// analytically by the `limits` module, never by the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    t: f64,
    x: f64,
    hbar: f64,
    mass: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidParams {
            name,
            value,
            reason: "must be finite and strictly positive",
        });
    }
    Ok(())
}

impl Params {
    /// Natural units, `hbar = mass = 1`.
    pub fn new(t: f64, x: f64) -> Result<Self> {
        Self::with_units(t, x, 1.0, 1.0)
    }

    pub fn with_units(t: f64, x: f64, hbar: f64, mass: f64) -> Result<Self> {
        check_positive("T", t)?;
        check_positive("X", x)?;
        check_positive("hbar", hbar)?;
        check_positive("m", mass)?;
        Ok(Self { t, x, hbar, mass })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Coefficient `m T / hbar^2` that sets the curvature of the potential
    /// at the origin, `U''(0) = 2 m T X / hbar^2`.
    pub fn curvature_coeff(&self) -> f64 {
        self.mass * self.t / (self.hbar * self.hbar)
    }

    /// Characteristic radial length `hbar / sqrt(m T)`.
    pub fn length_scale(&self) -> f64 {
        self.hbar / (self.mass * self.t).sqrt()
    }
}

/// Where to stop the radial integration.
///
/// The potential diverges logarithmically at a finite radius, so the largest
/// value reachable in double precision is about `X + 70 T`; past
/// `X + 40 T` the density `exp(-(U-X)/T)` is below 1e-17 of its peak and
/// every observable has converged. Requesting a cutoff beyond the reachable
/// range ends in `ToleranceFailure`.
pub const DEFAULT_U_CUT_OFFSET: f64 = 40.0;

/// Options controlling a single radial solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative tolerance of the embedded Runge-Kutta pair.
    pub rel_tol: f64,
    /// Absolute tolerance of the embedded Runge-Kutta pair.
    pub abs_tol: f64,
    /// Stop once `U` reaches this value. `None` selects
    /// `X + DEFAULT_U_CUT_OFFSET * T`.
    pub u_cut: Option<f64>,
    /// Hard cap on accepted + rejected steps.
    pub max_steps: usize,
    /// Number of trailing grid points used by the blow-up extrapolation.
    pub tail_window: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            u_cut: None,
            max_steps: 100_000,
            tail_window: 8,
        }
    }
}

impl SolverOptions {
    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_u_cut(mut self, u_cut: f64) -> Self {
        self.u_cut = Some(u_cut);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("rel_tol", self.rel_tol)?;
        check_positive("abs_tol", self.abs_tol)?;
        if let Some(u_cut) = self.u_cut {
            check_positive("u_cut", u_cut)?;
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParams {
                name: "max_steps",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        if self.tail_window < 2 {
            return Err(Error::InvalidParams {
                name: "tail_window",
                value: self.tail_window as f64,
                reason: "must be at least 2",
            });
        }
        Ok(())
    }

    pub fn effective_u_cut(&self, params: &Params) -> f64 {
        self.u_cut
            .unwrap_or(params.x() + DEFAULT_U_CUT_OFFSET * params.t())
    }
}

/// Options for the adaptive composite quadrature used by the observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Refinement stops after splitting every panel `2^max_level` times.
    pub max_level: u8,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_level: 8,
        }
    }
}

impl QuadOptions {
    pub fn validate(&self) -> Result<()> {
        check_positive("quad rel_tol", self.rel_tol)?;
        check_positive("quad abs_tol", self.abs_tol)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_t_and_x() {
        assert!(matches!(
            Params::new(-1.0, 1.0),
            Err(Error::InvalidParams { name: "T", .. })
        ));
        assert!(matches!(
            Params::new(0.0, 1.0),
            Err(Error::InvalidParams { name: "T", .. })
        ));
        assert!(matches!(
            Params::new(1.0, 0.0),
            Err(Error::InvalidParams { name: "X", .. })
        ));
        assert!(matches!(
            Params::new(1.0, f64::NAN),
            Err(Error::InvalidParams { name: "X", .. })
        ));
        assert!(matches!(
            Params::with_units(1.0, 1.0, 0.0, 1.0),
            Err(Error::InvalidParams { name: "hbar", .. })
        ));
        assert!(matches!(
            Params::with_units(1.0, 1.0, 1.0, -2.0),
            Err(Error::InvalidParams { name: "m", .. })
        ));
    }

    #[test]
    fn default_u_cut_tracks_parameters() {
        let p = Params::new(0.5, 2.0).unwrap();
        let opts = SolverOptions::default();
        assert_eq!(opts.effective_u_cut(&p), 2.0 + 40.0 * 0.5);
        let opts = opts.with_u_cut(123.0);
        assert_eq!(opts.effective_u_cut(&p), 123.0);
    }
}
