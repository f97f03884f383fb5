//! One-off wide-range robustness check: solve a broad (T, X) grid and
//! report the worst identity deviations.

use madelung_core::observables::{normalization, partition_function, thermo_state};
use madelung_core::solver::integrate_radial;
use madelung_core::{Params, QuadOptions, SolverOptions};

fn geom(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn main() {
    let solver = SolverOptions::default();
    let quad = QuadOptions::default();
    let mut worst_kin: (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut worst_ent: (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut worst_res: (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut worst_norm: (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut failures = 0;
    let mut n = 0;

    for t in geom(0.02, 100.0, 8) {
        for x in geom(0.1, 100.0, 8) {
            n += 1;
            let params = Params::new(t, x).unwrap();
            let sol = match integrate_radial(&params, &solver) {
                Ok(s) => s,
                Err(e) => {
                    println!("FAIL solve T={t:.4} X={x:.4}: {e}");
                    failures += 1;
                    continue;
                }
            };
            let st = match thermo_state(&sol, &quad) {
                Ok(s) => s,
                Err(e) => {
                    println!("FAIL quad T={t:.4} X={x:.4}: {e}");
                    failures += 1;
                    continue;
                }
            };
            let part = partition_function(&sol, &quad).unwrap();
            let kin = ((st.k_bar - t) / t).abs();
            let ent = (st.h - st.u_bar / t - st.log_z).abs();
            let res = sol.max_ode_residual().max(sol.max_sensitivity_residual());
            let nrm = (normalization(&sol, &part, &quad).unwrap() - 1.0).abs();
            if kin > worst_kin.0 {
                worst_kin = (kin, t, x);
            }
            if ent > worst_ent.0 {
                worst_ent = (ent, t, x);
            }
            if res > worst_res.0 {
                worst_res = (res, t, x);
            }
            if nrm > worst_norm.0 {
                worst_norm = (nrm, t, x);
            }
            if !sol.u_monotone() || sol.min_y() <= 0.0 || !sol.blowup().consistent {
                println!("FAIL invariant T={t:.4} X={x:.4}");
                failures += 1;
            }
        }
    }
    println!("{n} states, {failures} failures");
    println!("worst |K/T-1|       = {:.3e} at T={:.4} X={:.4}", worst_kin.0, worst_kin.1, worst_kin.2);
    println!("worst entropy gap   = {:.3e} at T={:.4} X={:.4}", worst_ent.0, worst_ent.1, worst_ent.2);
    println!("worst scaled resid  = {:.3e} at T={:.4} X={:.4}", worst_res.0, worst_res.1, worst_res.2);
    println!("worst |norm-1|      = {:.3e} at T={:.4} X={:.4}", worst_norm.0, worst_norm.1, worst_norm.2);
}
