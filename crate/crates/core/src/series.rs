//! Even power-series expansion of the potential and its sensitivity at the
//! origin.
//!
//! The radial equation has a regular singular point at `r = 0` (the `U'/r`
//! term), so the integration starts at a small handoff radius `r_eps` from
//! the series rather than at zero. The `r -> 0` limit of the equation forces
//! `2 U''(0) = 4 m T X / hbar^2`, which fixes the leading coefficients.

use crate::params::Params;
use crate::solver::PointEval;

/// Coefficients of `U = X + u2 r^2 + u4 r^4 + u6 r^6` and
/// `Y = 1 + y2 r^2 + y4 r^4 + y6 r^6`, plus the handoff radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginExpansion {
    pub u2: f64,
    pub u4: f64,
    pub u6: f64,
    pub y2: f64,
    pub y4: f64,
    pub y6: f64,
    pub r_eps: f64,
    x: f64,
}

/// Expand the potential and sensitivity around the origin, choosing `r_eps`
/// so the truncated-series handoff error stays below the integrator
/// tolerance.
pub fn series_origin(params: &Params, rel_tol: f64, abs_tol: f64) -> OriginExpansion {
    let t = params.t();
    let x = params.x();
    let a = params.curvature_coeff(); // m T / hbar^2

    let u2 = a * x;
    let u4 = u2 * (u2 / t + 2.0 * a) / 8.0;
    let u6 = u4 * (2.0 * u2 / t + a) / 9.0;

    let y2 = a;
    let y4 = y2 * (u2 / t + a) / 4.0;
    let y6 = (2.0 * (u2 * y4 + u4 * y2) / t + a * y4) / 9.0;

    // r_eps bounds: series value error below the absolute tolerance scale and
    // series derivative error below the relative tolerance, for both U and Y.
    let val_u = ((abs_tol + rel_tol * x) / u6).powf(1.0 / 6.0);
    let der_u = (rel_tol * u2 / (3.0 * u6)).powf(0.25);
    let val_y = ((abs_tol + rel_tol) / y6).powf(1.0 / 6.0);
    let der_y = (rel_tol * y2 / (3.0 * y6)).powf(0.25);
    // Stay well inside the curvature scale regardless of tolerances.
    let cap = 0.05 * params.length_scale();
    let r_eps = val_u.min(der_u).min(val_y).min(der_y).min(cap);

    OriginExpansion {
        u2,
        u4,
        u6,
        y2,
        y4,
        y6,
        r_eps,
        x,
    }
}

impl OriginExpansion {
    /// Series values at radius `r`; intended for `r <= r_eps`.
    pub fn eval(&self, r: f64) -> PointEval {
        let r2 = r * r;
        PointEval {
            u: self.x + r2 * (self.u2 + r2 * (self.u4 + r2 * self.u6)),
            du: r * (2.0 * self.u2 + r2 * (4.0 * self.u4 + r2 * 6.0 * self.u6)),
            y: 1.0 + r2 * (self.y2 + r2 * (self.y4 + r2 * self.y6)),
            dy: r * (2.0 * self.y2 + r2 * (4.0 * self.y4 + r2 * 6.0 * self.y6)),
        }
    }

    pub fn state(&self, r: f64) -> [f64; 4] {
        let p = self.eval(r);
        [p.u, p.du, p.y, p.dy]
    }
}
