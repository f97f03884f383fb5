//! Embedded Dormand-Prince 5(4) integrator with quartic dense output.
//!
//! Small fixed-dimension implementation tailored to the radial solves in this
//! crate: adaptive step control, continuous output on every accepted step,
//! and an upward-crossing event that truncates the final step by bisecting
//! the interpolant.

/// Right-hand side of a first-order system `y' = f(x, y)`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, x: f64, y: &[f64; N]) -> [f64; N];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepError {
    MaxSteps { x: f64 },
    StepUnderflow { x: f64, h: f64 },
}

/// Continuous extension of one accepted step, a quartic in
/// `theta = (x - x0) / h` valid on `[x0, x_end]`.
#[derive(Debug, Clone)]
pub struct DenseSegment<const N: usize> {
    pub x0: f64,
    /// Step width the polynomial was built on (the theta scale); after an
    /// event truncation `x_end` lies before `x0 + h`.
    pub h: f64,
    pub x_end: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    pub fn eval(&self, x: f64) -> [f64; N] {
        let theta = (x - self.x0) / self.h;
        let mut out = [0.0; N];
        for i in 0..N {
            let c = &self.coeffs;
            out[i] = c[0][i]
                + theta * (c[1][i] + theta * (c[2][i] + theta * (c[3][i] + theta * c[4][i])));
        }
        out
    }

    /// Value and first derivative with respect to `x`.
    pub fn eval_with_derivative(&self, x: f64) -> ([f64; N], [f64; N]) {
        let theta = (x - self.x0) / self.h;
        let mut val = [0.0; N];
        let mut der = [0.0; N];
        for i in 0..N {
            let c = &self.coeffs;
            val[i] = c[0][i]
                + theta * (c[1][i] + theta * (c[2][i] + theta * (c[3][i] + theta * c[4][i])));
            der[i] = (c[1][i]
                + theta * (2.0 * c[2][i] + theta * (3.0 * c[3][i] + theta * 4.0 * c[4][i])))
                / self.h;
        }
        (val, der)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopReason {
    /// Event function crossed zero from below; integration was cut there.
    Event,
    /// `x_max` was reached without an event.
    EndReached,
}

#[derive(Debug, Clone)]
pub struct Integration<const N: usize> {
    pub xs: Vec<f64>,
    pub ys: Vec<[f64; N]>,
    pub segments: Vec<DenseSegment<N>>,
    pub stop: StopReason,
    pub n_steps: usize,
    pub n_rejected: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the 5th- and 4th-order weights, used for the error
// estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Weights of the quartic continuous extension (Hairer, Norsett & Wanner).
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

fn scaled_err_norm<const N: usize>(
    err: &[f64; N],
    y0: &[f64; N],
    y1: &[f64; N],
    rel: f64,
    abs: f64,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = abs + rel * y0[i].abs().max(y1[i].abs());
        let r = err[i] / sc;
        acc += r * r;
    }
    (acc / N as f64).sqrt()
}

fn initial_step<const N: usize, S: OdeSystem<N>>(
    system: &S,
    x0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    rel: f64,
    abs: f64,
) -> f64 {
    let sc: Vec<f64> = y0.iter().map(|y| abs + rel * y.abs()).collect();
    let d0 = (y0
        .iter()
        .zip(&sc)
        .map(|(y, s)| (y / s) * (y / s))
        .sum::<f64>()
        / N as f64)
        .sqrt();
    let d1 = (f0
        .iter()
        .zip(&sc)
        .map(|(f, s)| (f / s) * (f / s))
        .sum::<f64>()
        / N as f64)
        .sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let mut y1 = [0.0; N];
    for i in 0..N {
        y1[i] = y0[i] + h0 * f0[i];
    }
    let f1 = system.rhs(x0 + h0, &y1);
    let d2 = (f1
        .iter()
        .zip(f0)
        .zip(&sc)
        .map(|((a, b), s)| ((a - b) / s) * ((a - b) / s))
        .sum::<f64>()
        / N as f64)
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    h1.min(100.0 * h0)
}

/// Integrate from `(x0, y0)` until `event(y)` crosses zero from below or
/// `x_max` is reached. Every accepted step stores its dense interpolant.
pub fn integrate<const N: usize, S, G>(
    system: &S,
    x0: f64,
    y0: [f64; N],
    x_max: f64,
    opts: &OdeOptions,
    event: G,
) -> Result<Integration<N>, StepError>
where
    S: OdeSystem<N>,
    G: Fn(&[f64; N]) -> f64,
{
    let mut xs = vec![x0];
    let mut ys = vec![y0];
    let mut segments = Vec::new();

    let mut x = x0;
    let mut y = y0;
    let mut f = system.rhs(x, &y);
    let mut h = initial_step(system, x, &y, &f, opts.rel_tol, opts.abs_tol);
    let mut n_steps = 0;
    let mut n_rejected = 0;
    let mut last_rejected = false;

    debug_assert!(event(&y) < 0.0, "event must start negative");

    loop {
        if n_steps >= opts.max_steps {
            return Err(StepError::MaxSteps { x });
        }
        if !h.is_finite() || h <= 8.0 * f64::EPSILON * x.abs() {
            return Err(StepError::StepUnderflow { x, h });
        }
        if x + h > x_max {
            h = x_max - x;
        }
        n_steps += 1;

        // Stage evaluations; k[0] reuses the FSAL derivative.
        let mut k = [[0.0; N]; 7];
        k[0] = f;
        for s in 1..7 {
            let mut ys_stage = [0.0; N];
            for i in 0..N {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                ys_stage[i] = y[i] + h * acc;
            }
            k[s] = system.rhs(x + C[s] * h, &ys_stage);
        }
        // k[6] is f at the 5th-order solution, which is stage 7 itself.
        let mut y_new = [0.0; N];
        for i in 0..N {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(6) {
                acc += A[6][j] * kj[i];
            }
            y_new[i] = y[i] + h * acc;
        }
        let mut err = [0.0; N];
        for i in 0..N {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc += E[j] * kj[i];
            }
            err[i] = h * acc;
        }

        let err_norm = scaled_err_norm(&err, &y, &y_new, opts.rel_tol, opts.abs_tol);
        if err_norm > 1.0 {
            n_rejected += 1;
            last_rejected = true;
            let fac = (0.9 * err_norm.powf(-0.2)).max(0.2);
            h *= fac;
            continue;
        }

        // Accepted: build the dense interpolant.
        let mut rcont = [[0.0; N]; 5];
        for i in 0..N {
            let ydiff = y_new[i] - y[i];
            let bspl = h * k[0][i] - ydiff;
            rcont[0][i] = y[i];
            rcont[1][i] = ydiff;
            rcont[2][i] = bspl;
            rcont[3][i] = ydiff - h * k[6][i] - bspl;
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc += D[j] * kj[i];
            }
            rcont[4][i] = h * acc;
        }
        // Convert the Hairer form to plain polynomial coefficients in theta.
        let mut coeffs = [[0.0; N]; 5];
        for i in 0..N {
            coeffs[0][i] = rcont[0][i];
            coeffs[1][i] = rcont[1][i] + rcont[2][i];
            coeffs[2][i] = rcont[3][i] + rcont[4][i] - rcont[2][i];
            coeffs[3][i] = -rcont[3][i] - 2.0 * rcont[4][i];
            coeffs[4][i] = rcont[4][i];
        }
        let mut segment = DenseSegment {
            x0: x,
            h,
            x_end: x + h,
            coeffs,
        };

        let crossed = event(&y_new) >= 0.0;
        if crossed {
            // Bisect theta for the crossing point; the event is monotone
            // through the step for the systems integrated here.
            let mut lo = 0.0_f64;
            let mut hi = 1.0_f64;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let y_mid = segment.eval(x + mid * h);
                if event(&y_mid) >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let x_stop = x + hi * h;
            let y_stop = segment.eval(x_stop);
            segment.x_end = x_stop;
            segments.push(segment);
            xs.push(x_stop);
            ys.push(y_stop);
            return Ok(Integration {
                xs,
                ys,
                segments,
                stop: StopReason::Event,
                n_steps,
                n_rejected,
            });
        }

        segments.push(segment);
        x += h;
        y = y_new;
        f = k[6];
        xs.push(x);
        ys.push(y);

        if x >= x_max {
            return Ok(Integration {
                xs,
                ys,
                segments,
                stop: StopReason::EndReached,
                n_steps,
                n_rejected,
            });
        }

        let fac_max = if last_rejected { 1.0 } else { 5.0 };
        last_rejected = false;
        let fac = if err_norm < 1e-30 {
            fac_max
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, fac_max)
        };
        h *= fac;
    }
}
