//! Prints reference values used to freeze test fixtures.

use madelung_core::observables::thermo_state;
use madelung_core::solver::integrate_radial;
use madelung_core::sweep::{self, FdSteps};
use madelung_core::{Params, QuadOptions, SolverOptions};

fn main() {
    let p = Params::new(1.0, 1.0).unwrap();
    let quad = QuadOptions::default();

    let loose = integrate_radial(&p, &SolverOptions::default()).unwrap();
    let tight =
        integrate_radial(&p, &SolverOptions::default().with_tolerances(1e-13, 1e-15)).unwrap();
    println!("r_m  rtol 1e-10: {:.16}", loose.r_m());
    println!("r_m  rtol 1e-13: {:.16}", tight.r_m());
    println!("r_m_err         : {:.3e}", loose.r_m_err());

    let s = thermo_state(&loose, &quad).unwrap();
    println!("\nThermoState(1,1):");
    println!("  Z     = {:.15}", s.z);
    println!("  log_z = {:.15}", s.log_z);
    println!("  Ubar  = {:.15}", s.u_bar);
    println!("  Kbar  = {:.15}", s.k_bar);
    println!("  H     = {:.15}", s.h);
    println!("  F     = {:.15}", s.f);
    println!("  Ybar  = {:.15}", s.y_bar);
    println!("  r_m   = {:.15}", s.r_m);
    println!("  level = {}", s.quad_level);

    // Quadrature refinement oracle: force deeper refinement and compare.
    let deep = QuadOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-16,
        max_level: 10,
    };
    let s2 = thermo_state(&tight, &deep).unwrap();
    println!(
        "\nrefined: Z={:.15} Ubar={:.15} H={:.15} Ybar={:.15}",
        s2.z, s2.u_bar, s2.h, s2.y_bar
    );
    println!(
        "identity H - U/T - lnZ = {:.3e}",
        s.h - s.u_bar / s.t - s.log_z
    );
    println!("|K - T|/T = {:.3e}", (s.k_bar - 1.0).abs());

    // Differential checks at (1,1).
    for steps in [FdSteps::default(), FdSteps::default().halved()] {
        let rep = sweep::differential_checks(&p, &steps).unwrap();
        let t = rep.tensions.as_ref().unwrap();
        let fe = rep.free_energy.as_ref().unwrap();
        println!(
            "\ndelta rel {:.0e}: res_x={:.4e} res_t={:.4e} sigma_x={:.10} sigma_t={:.10} sigma={:.10}",
            steps.rel_x, rep.first_law.residual_x, rep.first_law.residual_t,
            t.sigma_x, t.sigma_t, t.sigma
        );
        println!(
            "  dF checks: fixed_t={:.4e} fixed_x={:.4e} sigma_form={:.4e}",
            fe.residual_fixed_t, fe.residual_fixed_x, fe.residual_fixed_x_sigma_form
        );
        println!("  drm_dx={:.10} dls_dt={:.10}", t.drm_dx, t.dls_dt);
        // Euler-relation prediction for the fixed-X first-law residual:
        // <dU/dT> = (Ubar + T - X Ybar)/T.
        let u_t = (s.u_bar + 1.0 - s.y_bar) / 1.0;
        let raw = rep.first_law.d_ubar_t - 1.0 * rep.first_law.d_h_t;
        println!(
            "  raw resT = {:.8e}, Euler prediction <U_T>*2dT = {:.8e}",
            raw,
            u_t * 2.0 * rep.first_law.dt
        );
    }

    // Scaling fits.
    let solver = SolverOptions::default();
    let ts: Vec<f64> = geom(10.0, 100.0, 5);
    let table = sweep::sweep(&ts, &[1.0], &solver, &quad).unwrap();
    let fit = sweep::fit_scaling_t(&table, 1.0, (10.0, 100.0)).unwrap();
    println!(
        "\nslope_T over [10,100] at X=1: {:.6} (a={:.6}, res={:.2e})",
        fit.exponent, fit.coefficient, fit.residual_norm
    );

    let xs = geom(0.01, 0.1, 5);
    let xl = geom(30.0, 300.0, 6);
    let all: Vec<f64> = xs.iter().chain(&xl).copied().collect();
    for t in [0.5, 1.0, 2.0] {
        let table = sweep::sweep(&[t], &all, &solver, &quad).unwrap();
        let (small, large) = sweep::fit_scaling_x(&table, t, (0.01, 0.1), (30.0, 300.0)).unwrap();
        println!(
            "T={t}: small slope={:.6} c={:.6}; large slope={:.6} d={:.6} center={:.6}",
            small.exponent,
            small.coefficient,
            large.exponent,
            large.coefficient,
            large.value_at_window_center
        );
    }

    // Small-T sequence at X=1.
    println!();
    for t in [0.2, 0.1, 0.05, 0.02] {
        let sol = integrate_radial(&Params::new(t, 1.0).unwrap(), &solver).unwrap();
        let st = thermo_state(&sol, &quad).unwrap();
        let dev = madelung_core::limits::small_t_deviation(&sol).unwrap();
        println!(
            "T={t}: Ubar={:.10} r_m={:.10} sup={:.6} gap={:.6}",
            st.u_bar, st.r_m, dev.sup_norm, dev.r_m_gap
        );
    }
}

fn geom(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}
