//! Radial integration of the self-consistency equation for the Madelung
//! potential,
//!
//! ```text
//! U'' + U'/r = (U')^2 / (2T) + (4 m T / hbar^2) U,   U(0) = X, U'(0) = 0,
//! ```
//!
//! jointly with its linearization in the boundary value,
//! `Y = dU/dX`, which obeys
//!
//! ```text
//! Y'' + Y'/r = U' Y' / T + (4 m T / hbar^2) Y,       Y(0) = 1, Y'(0) = 0.
//! ```
//!
//! The potential blows up logarithmically at a finite radius `r_m`; the
//! integration stops at a configurable potential cutoff and extrapolates
//! `r_m` from the dominant balance `U'' ~ (U')^2 / (2T)`, whose solution is
//! `U = -2T ln(r_m - r) + const`, so `r_m ~ r + 2T / U'(r)`.

use crate::error::{Error, Result};
use crate::ode::{self, DenseSegment, OdeOptions, OdeSystem, StepError, StopReason};
use crate::params::{Params, SolverOptions};
use crate::series::{series_origin, OriginExpansion};

/// Potential, sensitivity, and their radial derivatives at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEval {
    pub u: f64,
    pub du: f64,
    pub y: f64,
    pub dy: f64,
}

struct MadelungOde {
    inv_two_t: f64,
    four_a: f64, // 4 m T / hbar^2
}

impl OdeSystem<4> for MadelungOde {
    fn rhs(&self, r: f64, y: &[f64; 4]) -> [f64; 4] {
        let [u, v, s, w] = *y;
        [
            v,
            -v / r + v * v * self.inv_two_t + self.four_a * u,
            w,
            -w / r + 2.0 * v * w * self.inv_two_t + self.four_a * s,
        ]
    }
}

/// Blow-up radius extrapolated from the trailing grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupEstimate {
    pub r_m: f64,
    pub r_m_err: f64,
    /// False when the per-point estimates fail to converge monotonically;
    /// the estimate then falls back to the raw last point with inflated
    /// error.
    pub consistent: bool,
}

/// Extrapolate the blow-up radius from `(r, U')` samples near the cutoff.
///
/// Each sample yields the estimate `r + 2T/U'`; on the logarithmic asymptote
/// these increase toward `r_m`, and their spread over the window bounds the
/// extrapolation error. Additive shifts of `U` do not enter.
pub fn detect_blowup(tail: &[(f64, f64)], t: f64) -> Result<BlowupEstimate> {
    let estimates: Vec<f64> = tail
        .iter()
        .filter(|(_, du)| *du > 0.0)
        .map(|(r, du)| r + 2.0 * t / du)
        .collect();
    if estimates.is_empty() {
        return Err(Error::InsufficientData {
            context: "blow-up window holds no points with positive slope".into(),
        });
    }
    let last = *estimates.last().unwrap();
    let spread = estimates
        .iter()
        .map(|e| (last - e).abs())
        .fold(0.0, f64::max);
    let ulp_floor = 4.0 * f64::EPSILON * last.abs();
    // On the asymptote the estimates approach r_m from below.
    let slack = 8.0 * f64::EPSILON * last.abs();
    let consistent = estimates.windows(2).all(|w| w[1] >= w[0] - slack);
    Ok(BlowupEstimate {
        r_m: last,
        r_m_err: if consistent {
            spread.max(ulp_floor)
        } else {
            (10.0 * spread).max(ulp_floor)
        },
        consistent,
    })
}

/// Dense radial profile of one solved state.
///
/// Immutable after construction; shareable across threads for concurrent
/// reads.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    params: Params,
    origin: OriginExpansion,
    grid: Vec<f64>,
    states: Vec<[f64; 4]>,
    segments: Vec<DenseSegment<4>>,
    blowup: BlowupEstimate,
    u_cut: f64,
}

/// Solve one state from the origin series to the potential cutoff.
pub fn integrate_radial(params: &Params, opts: &SolverOptions) -> Result<RadialSolution> {
    opts.validate()?;
    let u_cut = opts.effective_u_cut(params);
    if u_cut <= params.x() {
        return Err(Error::InvalidParams {
            name: "u_cut",
            value: u_cut,
            reason: "must exceed the central potential X",
        });
    }

    let origin = series_origin(params, opts.rel_tol, opts.abs_tol);
    let y0 = origin.state(origin.r_eps);
    if y0[0] >= u_cut {
        return Err(Error::InvalidParams {
            name: "u_cut",
            value: u_cut,
            reason: "lies inside the origin series handoff region",
        });
    }
    let t = params.t();
    let system = MadelungOde {
        inv_two_t: 1.0 / (2.0 * t),
        four_a: 4.0 * params.curvature_coeff(),
    };

    let ode_opts = OdeOptions {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        max_steps: opts.max_steps,
    };
    let run = ode::integrate(&system, origin.r_eps, y0, f64::INFINITY, &ode_opts, |y| {
        y[0] - u_cut
    })
    .map_err(|e| match e {
        StepError::MaxSteps { x: _ } => Error::MaxStepsExceeded {
            max_steps: opts.max_steps,
            u_reached: f64::NAN,
            u_cut,
        },
        StepError::StepUnderflow { x, h } => Error::ToleranceFailure { r: x, h, u_cut },
    })?;
    debug_assert_eq!(run.stop, StopReason::Event);

    let last = run.ys.last().unwrap();
    if last[1] <= 0.0 {
        return Err(Error::ToleranceFailure {
            r: *run.xs.last().unwrap(),
            h: 0.0,
            u_cut,
        });
    }

    let window = opts.tail_window.min(run.xs.len());
    let tail: Vec<(f64, f64)> = run.xs[run.xs.len() - window..]
        .iter()
        .zip(&run.ys[run.ys.len() - window..])
        .map(|(r, y)| (*r, y[1]))
        .collect();
    let blowup = detect_blowup(&tail, t)?;

    Ok(RadialSolution {
        params: *params,
        origin,
        grid: run.xs,
        states: run.ys,
        segments: run.segments,
        blowup,
        u_cut,
    })
}

impl RadialSolution {
    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn origin(&self) -> &OriginExpansion {
        &self.origin
    }

    /// Radii of the accepted integration steps, starting at `r_eps`.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn states(&self) -> &[[f64; 4]] {
        &self.states
    }

    pub fn r_eps(&self) -> f64 {
        self.origin.r_eps
    }

    /// Last integrated radius `r_N < r_m`.
    pub fn grid_end(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// Extrapolated blow-up radius bounding the support disk.
    pub fn r_m(&self) -> f64 {
        self.blowup.r_m
    }

    pub fn r_m_err(&self) -> f64 {
        self.blowup.r_m_err
    }

    pub fn blowup(&self) -> &BlowupEstimate {
        &self.blowup
    }

    /// Potential value at which the integration stopped.
    pub fn u_cut(&self) -> f64 {
        self.u_cut
    }

    /// Evaluate the profile at `0 <= r < r_m`.
    ///
    /// Uses the origin series below `r_eps`, dense Runge-Kutta output on the
    /// integrated range, and the logarithmic blow-up model on the remaining
    /// sliver `[r_N, r_m)` where the density is below `exp(-u_cut/T)` of its
    /// peak.
    pub fn evaluate(&self, r: f64) -> Result<PointEval> {
        if !(0.0..self.blowup.r_m).contains(&r) {
            return Err(Error::OutOfSupport {
                r,
                r_m: self.blowup.r_m,
            });
        }
        Ok(self.eval_unchecked(r))
    }

    fn eval_unchecked(&self, r: f64) -> PointEval {
        if r < self.origin.r_eps {
            return self.origin.eval(r);
        }
        // Exact grid hits return stored values.
        match self.grid.binary_search_by(|g| g.partial_cmp(&r).unwrap()) {
            Ok(i) => {
                let [u, du, y, dy] = self.states[i];
                PointEval { u, du, y, dy }
            }
            Err(i) => {
                if i >= self.grid.len() {
                    return self.tail_eval(r);
                }
                let seg = &self.segments[i - 1];
                let v = seg.eval(r);
                PointEval {
                    u: v[0],
                    du: v[1],
                    y: v[2],
                    dy: v[3],
                }
            }
        }
    }

    /// Dense values and the radial derivative of the whole state vector;
    /// used for residual checks that need `U''`.
    pub fn eval_with_second_derivative(&self, r: f64) -> Result<(PointEval, f64, f64)> {
        if !(self.origin.r_eps..=self.grid_end()).contains(&r) {
            return Err(Error::OutOfSupport {
                r,
                r_m: self.grid_end(),
            });
        }
        let i = match self.grid.binary_search_by(|g| g.partial_cmp(&r).unwrap()) {
            Ok(i) => i.saturating_sub(1).min(self.segments.len() - 1),
            Err(i) => i - 1,
        };
        let seg = &self.segments[i];
        let (v, d) = seg.eval_with_derivative(r);
        Ok((
            PointEval {
                u: v[0],
                du: v[1],
                y: v[2],
                dy: v[3],
            },
            d[1],
            d[3],
        ))
    }

    fn tail_eval(&self, r: f64) -> PointEval {
        let t = self.params.t();
        let [u_n, _, y_n, _] = *self.states.last().unwrap();
        let d = self.blowup.r_m - self.grid_end();
        let rem = (self.blowup.r_m - r).max(f64::MIN_POSITIVE);
        PointEval {
            u: u_n + 2.0 * t * (d / rem).ln(),
            du: 2.0 * t / rem,
            y: y_n * d / rem,
            dy: y_n * d / (rem * rem),
        }
    }

    /// True when the stored potential is non-decreasing along the grid.
    /// Monotonicity is observed for every solved state but is asserted, not
    /// assumed.
    pub fn u_monotone(&self) -> bool {
        self.states.windows(2).all(|w| w[1][0] >= w[0][0])
    }

    /// Smallest sensitivity value on the grid.
    pub fn min_y(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s[2])
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest scaled residual of the radial equation over segment
    /// midpoints, with `U''` taken from the interpolant derivative:
    /// `|U'' + U'/r - (U')^2/(2T) - (4mT/hbar^2) U|` divided by
    /// `1 + |U''| + |U'/r| + |(U')^2/(2T)| + |4mT U/hbar^2|`.
    ///
    /// The scale carries every term of the equation: near the blow-up the
    /// two leading terms cancel while each grows like `(r_m - r)^-2`, so a
    /// residual scaled only by `U` would diverge there for any correct
    /// solution evaluated in finite precision.
    pub fn max_ode_residual(&self) -> f64 {
        let t = self.params.t();
        let four_a = 4.0 * self.params.curvature_coeff();
        let mut worst: f64 = 0.0;
        for seg in &self.segments {
            let rm = 0.5 * (seg.x0 + seg.x_end);
            let (v, d) = seg.eval_with_derivative(rm);
            let terms = [d[1], v[1] / rm, v[1] * v[1] / (2.0 * t), four_a * v[0]];
            let res = terms[0] + terms[1] - terms[2] - terms[3];
            let scale = 1.0 + terms.iter().map(|t| t.abs()).sum::<f64>();
            worst = worst.max((res / scale).abs());
        }
        worst
    }

    /// Largest scaled residual of the sensitivity equation over segment
    /// midpoints, scaled like [`Self::max_ode_residual`].
    pub fn max_sensitivity_residual(&self) -> f64 {
        let t = self.params.t();
        let four_a = 4.0 * self.params.curvature_coeff();
        let mut worst: f64 = 0.0;
        for seg in &self.segments {
            let rm = 0.5 * (seg.x0 + seg.x_end);
            let (v, d) = seg.eval_with_derivative(rm);
            let terms = [d[3], v[3] / rm, v[1] * v[3] / t, four_a * v[2]];
            let res = terms[0] + terms[1] - terms[2] - terms[3];
            let scale = 1.0 + terms.iter().map(|t| t.abs()).sum::<f64>();
            worst = worst.max((res / scale).abs());
        }
        worst
    }

    /// Largest deviation of the reconstruction
    /// `-(hbar^2/2m) (R'' + R'/r)/R` with `R = exp(-U/2T)` from `U` itself.
    /// Zero ODE residual makes the reconstruction exact; the deviation is
    /// scaled by `1 + |U|` plus the magnitudes the reconstruction cancels
    /// between, for the same reason as in [`Self::max_ode_residual`].
    pub fn max_closure_deviation(&self) -> f64 {
        // With R = exp(-U/2T):  -(hbar^2/2m)(R''+R'/r)/R
        //   = (hbar^2/(4mT)) [U'' + U'/r - (U')^2/(2T)].
        let t = self.params.t();
        let p = &self.params;
        let pref = p.hbar() * p.hbar() / (4.0 * p.mass() * t);
        let mut worst: f64 = 0.0;
        for seg in &self.segments {
            let rm = 0.5 * (seg.x0 + seg.x_end);
            let (v, d) = seg.eval_with_derivative(rm);
            let terms = [d[1], v[1] / rm, v[1] * v[1] / (2.0 * t)];
            let rec = pref * (terms[0] + terms[1] - terms[2]);
            let scale = 1.0 + v[0].abs() + pref * terms.iter().map(|t| t.abs()).sum::<f64>();
            worst = worst.max(((rec - v[0]) / scale).abs());
        }
        worst
    }
}

/// Read-only radial profile consumed by the quadrature layer.
///
/// `RadialSolution` is the production implementation; tests substitute
/// synthetic profiles with known closed-form observables.
pub trait RadialProfile {
    fn params(&self) -> &Params;
    /// Support radius: the density vanishes at and beyond this radius.
    fn support_radius(&self) -> f64;
    /// End of the numerically resolved range; equal to `support_radius`
    /// when there is no asymptotic tail.
    fn grid_end(&self) -> f64;
    /// Ascending panel boundaries covering `[0, grid_end]`.
    fn panel_bounds(&self) -> Vec<f64>;
    /// Profile values at `0 <= r <= grid_end`.
    fn point(&self, r: f64) -> PointEval;
}

impl RadialProfile for RadialSolution {
    fn params(&self) -> &Params {
        &self.params
    }

    fn support_radius(&self) -> f64 {
        self.blowup.r_m
    }

    fn grid_end(&self) -> f64 {
        RadialSolution::grid_end(self)
    }

    fn panel_bounds(&self) -> Vec<f64> {
        let mut bounds = Vec::with_capacity(self.grid.len() + 1);
        bounds.push(0.0);
        bounds.extend_from_slice(&self.grid);
        bounds
    }

    fn point(&self, r: f64) -> PointEval {
        self.eval_unchecked(r)
    }
}
