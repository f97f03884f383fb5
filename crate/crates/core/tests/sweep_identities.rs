//! Sweep mechanics, power-law fit recovery, and the finite-difference
//! differential identities, on both synthetic families with closed forms
//! and solved states.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use madelung_core::observables::ThermoState;
use madelung_core::sweep::{
    self, boundary_tensions_with, differential_checks, first_law_residual_with,
    free_energy_differential_check_with, strictly_decreasing, strictly_increasing, FdSteps,
    StateRow, StateTable,
};
use madelung_core::{Error, Params, QuadOptions, SolverOptions};

fn synthetic_row(t: f64, x: f64, u_bar: f64) -> StateRow {
    StateRow {
        t,
        x,
        state: Some(ThermoState {
            t,
            x,
            z: 1.0,
            log_z: 0.0,
            u_bar,
            k_bar: t,
            e_bar: u_bar + t,
            h: 0.0,
            f: 0.0,
            y_bar: 1.0,
            r_m: 1.0,
            l_s: 2.0 * std::f64::consts::PI,
            quad_level: 0,
        }),
        status: "ok".into(),
    }
}

#[test]
fn exact_power_law_recovery_in_t() {
    // Ubar = 3 T exactly: slope 1, coefficient 3, zero residual.
    let rows: Vec<StateRow> = (1..=6)
        .map(|i| synthetic_row(i as f64, 1.0, 3.0 * i as f64))
        .collect();
    let table = StateTable::from_rows(rows);
    let fit = sweep::fit_scaling_t(&table, 1.0, (1.0, 6.0)).unwrap();
    assert_relative_eq!(fit.exponent, 1.0, epsilon = 1e-12);
    assert_relative_eq!(fit.coefficient, 3.0, epsilon = 1e-12);
    assert!(fit.residual_norm < 1e-13);
    assert_eq!(fit.n_points, 6);
}

#[test]
fn exact_power_law_recovery_in_x() {
    // Ubar = 2 X on both windows.
    let xs = [0.01, 0.02, 0.05, 0.1, 10.0, 20.0, 50.0, 100.0];
    let rows: Vec<StateRow> = xs.iter().map(|&x| synthetic_row(1.0, x, 2.0 * x)).collect();
    let table = StateTable::from_rows(rows);
    let (small, large) = sweep::fit_scaling_x(&table, 1.0, (0.01, 0.1), (10.0, 100.0)).unwrap();
    for fit in [small, large] {
        assert_relative_eq!(fit.exponent, 1.0, epsilon = 1e-12);
        assert_relative_eq!(fit.coefficient, 2.0, epsilon = 1e-12);
    }
}

#[test]
fn fits_reject_thin_windows() {
    let rows: Vec<StateRow> = (1..=6)
        .map(|i| synthetic_row(i as f64, 1.0, 3.0 * i as f64))
        .collect();
    let table = StateTable::from_rows(rows);
    assert!(matches!(
        sweep::fit_scaling_t(&table, 1.0, (1.0, 3.0)),
        Err(Error::InsufficientData { .. })
    ));
    // Wrong fixed value selects nothing.
    assert!(matches!(
        sweep::fit_scaling_t(&table, 2.0, (1.0, 6.0)),
        Err(Error::InsufficientData { .. })
    ));
}

#[test]
fn degenerate_sweep_single_cell() {
    let table = sweep::sweep(
        &[1.0],
        &[1.0],
        &SolverOptions::default(),
        &QuadOptions::default(),
    )
    .unwrap();
    assert_eq!(table.rows.len(), 1);
    let row = &table.rows[0];
    assert_eq!(row.status, "ok");
    assert_relative_eq!(
        row.state.as_ref().unwrap().u_bar,
        1.644161204210,
        max_relative = 1e-9
    );
}

#[test]
fn sweep_records_failures_per_row() {
    // An unreachable cutoff fails each row without aborting the sweep.
    let opts = SolverOptions {
        max_steps: 40,
        ..SolverOptions::default()
    };
    let table = sweep::sweep(&[1.0, 2.0], &[1.0], &opts, &QuadOptions::default()).unwrap();
    assert_eq!(table.rows.len(), 2);
    for row in &table.rows {
        assert!(row.state.is_none());
        assert_eq!(row.status, "max_steps");
    }
}

#[test]
fn sweep_rejects_bad_grids() {
    let s = SolverOptions::default();
    let q = QuadOptions::default();
    assert!(matches!(
        sweep::sweep(&[], &[1.0], &s, &q),
        Err(Error::InsufficientData { .. })
    ));
    assert!(matches!(
        sweep::sweep(&[1.0, -2.0], &[1.0], &s, &q),
        Err(Error::InvalidParams { .. })
    ));
}

#[test]
fn monotonicity_over_solved_grids() {
    let table = sweep::sweep(
        &[0.1, 1.0, 10.0],
        &[0.1, 1.0, 10.0],
        &SolverOptions::default(),
        &QuadOptions::default(),
    )
    .unwrap();
    for &x in &table.x_values() {
        let rows = table.rows_at_x(x);
        let ubar: Vec<f64> = rows
            .iter()
            .map(|r| r.state.as_ref().unwrap().u_bar)
            .collect();
        let kbar: Vec<f64> = rows
            .iter()
            .map(|r| r.state.as_ref().unwrap().k_bar)
            .collect();
        let rm: Vec<f64> = rows.iter().map(|r| r.state.as_ref().unwrap().r_m).collect();
        assert!(strictly_increasing(&ubar), "Ubar(T) at X={x}: {ubar:?}");
        assert!(strictly_increasing(&kbar));
        assert!(strictly_decreasing(&rm), "r_m(T) at X={x}: {rm:?}");
    }
    for &t in &table.t_values() {
        let rows = table.rows_at_t(t);
        let ubar: Vec<f64> = rows
            .iter()
            .map(|r| r.state.as_ref().unwrap().u_bar)
            .collect();
        let rm: Vec<f64> = rows.iter().map(|r| r.state.as_ref().unwrap().r_m).collect();
        assert!(strictly_increasing(&ubar), "Ubar(X) at T={t}: {ubar:?}");
        assert!(strictly_decreasing(&rm), "r_m(X) at T={t}: {rm:?}");
    }
}

#[test]
fn sweep_is_deterministic() {
    let s = SolverOptions::default();
    let q = QuadOptions::default();
    let a = sweep::sweep(&[0.5, 1.0], &[1.0, 2.0], &s, &q).unwrap();
    let b = sweep::sweep(&[0.5, 1.0], &[1.0, 2.0], &s, &q).unwrap();
    assert_eq!(a, b);
}

/// Family of flat disks with fixed radius: `Ubar = X`, `H` constant,
/// `Ybar = 1`, `L_s` constant. The first-law fixed-`T` residual vanishes
/// identically.
fn flat_family(t: f64, x: f64) -> madelung_core::Result<ThermoState> {
    let a: f64 = 2.0;
    let area = std::f64::consts::PI * a * a;
    let log_z = area.ln() - x / t;
    Ok(ThermoState {
        t,
        x,
        z: log_z.exp(),
        log_z,
        u_bar: x,
        k_bar: 0.0,
        e_bar: x,
        h: area.ln(),
        f: x - t * area.ln(),
        y_bar: 1.0,
        r_m: a,
        l_s: 2.0 * std::f64::consts::PI * a,
        quad_level: 0,
    })
}

#[test]
fn first_law_exact_on_flat_family() {
    let center = Params::new(1.0, 1.0).unwrap();
    let rep = first_law_residual_with(&flat_family, &center, &FdSteps::default()).unwrap();
    // Analytically zero; evaluation leaves one ulp of the difference
    // (X + dx) - (X - dx) against 2 dx.
    assert!(rep.residual_x < 1e-12);
    // Fixed X: dU = 0 and dH = 0 for the flat family.
    assert_eq!(rep.residual_t, 0.0);
}

#[test]
fn tensions_degenerate_on_flat_family() {
    // Constant support radius: dr_m/dX = 0 must be reported, not inverted.
    let center = Params::new(1.0, 1.0).unwrap();
    let err = boundary_tensions_with(&flat_family, &center, &FdSteps::default()).unwrap_err();
    assert!(matches!(
        err,
        Error::DegenerateDerivative {
            name: "dr_m/dX",
            ..
        }
    ));
}

#[test]
fn free_energy_differential_exact_on_flat_family() {
    // dF = -H dT with L_s constant; the sigma work term is zero.
    let center = Params::new(1.0, 1.0).unwrap();
    let rep =
        free_energy_differential_check_with(&flat_family, &center, &FdSteps::default()).unwrap();
    assert_abs_diff_eq!(rep.residual_fixed_x, 0.0, epsilon = 1e-13);
    assert_eq!(rep.d_ls_x, 0.0);
    assert_eq!(rep.d_ls_t, 0.0);
    assert!(rep.residual_fixed_x_sigma_form.is_nan());
}

#[test]
fn first_law_fixed_t_direction_on_solved_center() {
    // The fixed-T identity dU = T dH + Ybar dX holds to finite-difference
    // accuracy and contracts as O(delta^2) under step halving.
    let center = Params::new(1.0, 1.0).unwrap();
    let full = differential_checks(&center, &FdSteps::default()).unwrap();
    let half = differential_checks(&center, &FdSteps::default().halved()).unwrap();
    assert!(full.first_law.residual_x < 1e-3);
    let ratio = half.first_law.residual_x / full.first_law.residual_x;
    assert!(
        (0.15..=0.45).contains(&ratio),
        "expected ~0.25 contraction, got {ratio} ({} -> {})",
        full.first_law.residual_x,
        half.first_law.residual_x
    );
}

#[test]
fn first_law_fixed_x_direction_measures_the_potential_drift() {
    // At fixed X the raw difference dU - T dH equals <dU/dT> dT, and the
    // exact scaling relation U(sT, sX) = s U(T, X) pins
    // <dU/dT> = (Ubar + T - X Ybar) / T. The residual is a property of the
    // family of states, not a discretization artifact: it survives step
    // halving unchanged.
    let center = Params::new(1.0, 1.0).unwrap();
    let full = differential_checks(&center, &FdSteps::default()).unwrap();
    let raw = full.first_law.d_ubar_t - 1.0 * full.first_law.d_h_t;
    let u_t = full.center.u_bar + 1.0 - full.center.y_bar;
    let predicted = u_t * 2.0 * full.first_law.dt;
    assert_relative_eq!(raw, predicted, max_relative = 1e-5);

    let half = differential_checks(&center, &FdSteps::default().halved()).unwrap();
    assert_relative_eq!(
        full.first_law.residual_t,
        half.first_law.residual_t,
        max_relative = 1e-4
    );
}

#[test]
fn boundary_tension_fixture_and_signs() {
    // sigma_X frozen from the step-halving study (delta 1e-3 vs 5e-4 agree
    // to seven digits).
    let center = Params::new(1.0, 1.0).unwrap();
    let full = differential_checks(&center, &FdSteps::default()).unwrap();
    let t = full.tensions.unwrap();
    assert!(t.drm_dx < 0.0);
    assert!(t.dls_dt < 0.0);
    assert_relative_eq!(t.sigma_x, -0.6245956, max_relative = 1e-5);
    assert_relative_eq!(t.sigma_t, -0.9893850, max_relative = 1e-5);
    assert_relative_eq!(t.sigma, t.sigma_x - t.sigma_t);

    let half = differential_checks(&center, &FdSteps::default().halved()).unwrap();
    let th = half.tensions.unwrap();
    assert_relative_eq!(t.sigma_x, th.sigma_x, max_relative = 1e-5);
}

#[test]
fn free_energy_differential_contracts_quadratically() {
    let center = Params::new(1.0, 1.0).unwrap();
    let full = differential_checks(&center, &FdSteps::default()).unwrap();
    let half = differential_checks(&center, &FdSteps::default().halved()).unwrap();
    let f = full.free_energy.unwrap();
    let h = half.free_energy.unwrap();
    for (a, b) in [
        (f.residual_fixed_t, h.residual_fixed_t),
        (f.residual_fixed_x, h.residual_fixed_x),
        (f.residual_fixed_x_sigma_form, h.residual_fixed_x_sigma_form),
    ] {
        assert!(a < 1e-5, "residual {a} unexpectedly large");
        let ratio = b / a;
        assert!(
            (0.1..=0.5).contains(&ratio),
            "expected quadratic contraction, got {a} -> {b}"
        );
    }
}

#[test]
fn solved_temperature_scaling_fit_regression() {
    // There is no external value for the T-scaling coefficient; the fit is
    // its own oracle. Frozen from the first converged run: over
    // T in [10, 100] at X = 1 the slope is ~0.749 with a(X=1) ~ 0.959 and a
    // visible curvature residual (the slope creeps toward 1 only
    // logarithmically in T).
    let ts: Vec<f64> = (0..5)
        .map(|i| 10.0f64 * 10.0f64.powf(i as f64 / 4.0))
        .collect();
    let table = sweep::sweep(
        &ts,
        &[1.0],
        &SolverOptions::default(),
        &QuadOptions::default(),
    )
    .unwrap();
    let fit = sweep::fit_scaling_t(&table, 1.0, (10.0, 100.0)).unwrap();
    assert_relative_eq!(fit.exponent, 0.749025, epsilon = 1e-3);
    assert_relative_eq!(fit.coefficient, 0.958657, epsilon = 1e-3);
    assert!(
        fit.residual_norm > 1e-3,
        "the window is genuinely curved; residual {} should be visible",
        fit.residual_norm
    );
}

#[test]
fn one_to_one_map_between_t_and_internal_energy() {
    let table = sweep::sweep(
        &[0.2, 0.5, 1.0, 2.0, 5.0],
        &[1.0],
        &SolverOptions::default(),
        &QuadOptions::default(),
    )
    .unwrap();
    let ubar: Vec<f64> = table
        .rows_at_x(1.0)
        .iter()
        .map(|r| r.state.as_ref().unwrap().u_bar)
        .collect();
    assert!(strictly_increasing(&ubar));
}
