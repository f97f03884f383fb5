//! Identity and fixture tests for the observables of solved states.
//!
//! Fixture values are frozen from refinement oracles: quadrature at two
//! refinement depths agreeing to at least 8 significant digits, and solver
//! tolerance halving agreeing to better than 6 significant digits.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use madelung_core::observables::{
    self, density, partition_function, tail_contributions, thermo_state,
};
use madelung_core::solver::{integrate_radial, RadialProfile};
use madelung_core::{Params, QuadOptions, RadialSolution, SolverOptions};

fn solve(t: f64, x: f64) -> RadialSolution {
    integrate_radial(&Params::new(t, x).unwrap(), &SolverOptions::default()).unwrap()
}

fn solve_units(t: f64, x: f64, hbar: f64, mass: f64) -> RadialSolution {
    integrate_radial(
        &Params::with_units(t, x, hbar, mass).unwrap(),
        &SolverOptions::default(),
    )
    .unwrap()
}

const QUAD: QuadOptions = QuadOptions {
    rel_tol: 1e-10,
    abs_tol: 1e-14,
    max_level: 8,
};

#[test]
fn reference_state_fixtures() {
    // Frozen from the refinement oracle: rel_tol 1e-10 vs 1e-13 quadrature
    // on rtol 1e-10 vs 1e-13 solves agreed to 12 significant digits.
    let s = thermo_state(&solve(1.0, 1.0), &QUAD).unwrap();
    assert_relative_eq!(s.z, 0.711622658674, max_relative = 1e-9);
    assert_relative_eq!(s.u_bar, 1.644161204210, max_relative = 1e-9);
    assert_relative_eq!(s.h, 1.303953722381, max_relative = 1e-8);
    assert_relative_eq!(s.y_bar, 1.820979182, max_relative = 1e-8);
    assert_relative_eq!(s.f, 0.340207481829, max_relative = 1e-8);
    assert_relative_eq!(s.r_m, 1.347531566960, max_relative = 1e-10);
}

#[test]
fn quadrature_refinement_oracle_confirms_partition() {
    // The pinned Z must be stable against one extra decade of refinement.
    let sol = solve(1.0, 1.0);
    let loose = partition_function(&sol, &QUAD).unwrap();
    let deep = partition_function(
        &sol,
        &QuadOptions {
            rel_tol: 1e-13,
            abs_tol: 1e-16,
            max_level: 10,
        },
    )
    .unwrap();
    assert_relative_eq!(loose.z, deep.z, max_relative = 1e-8);
}

#[test]
fn entropy_identity_on_a_parameter_grid() {
    // H = Ubar/T + ln Z is an exact algebraic property of the canonical
    // density; the two sides are computed through independent quadratures.
    for (t, x) in [(0.1, 1.0), (0.5, 0.5), (1.0, 1.0), (2.0, 2.0), (5.0, 1.0)] {
        let s = thermo_state(&solve(t, x), &QUAD).unwrap();
        let gap = s.h - s.u_bar / s.t - s.log_z;
        assert!(
            gap.abs() < 1e-9,
            "entropy identity gap {gap} at T={t}, X={x}"
        );
    }
}

#[test]
fn kinetic_energy_equals_temperature() {
    for (t, x) in [(0.1, 2.0), (0.5, 1.0), (1.0, 0.5), (5.0, 2.0)] {
        let sol = solve(t, x);
        let p = partition_function(&sol, &QUAD).unwrap();
        let k = observables::kinetic_energy(&sol, &p, &QUAD).unwrap();
        assert_eq!(k.analytic, t);
        assert_relative_eq!(k.quadrature, t, max_relative = 1e-8);
    }
}

#[test]
fn free_energy_consistency() {
    // -T ln Z must equal Ubar - T H within combined quadrature error.
    for (t, x) in [(0.5, 1.0), (1.0, 1.0), (2.0, 0.5)] {
        let s = thermo_state(&solve(t, x), &QUAD).unwrap();
        let direct = -t * s.log_z;
        let legendre = s.u_bar - t * s.h;
        assert_abs_diff_eq!(direct, legendre, epsilon = 1e-9 * (1.0 + direct.abs()));
        assert_eq!(s.f, direct);
    }
}

#[test]
fn normalization_closes_to_one() {
    for (t, x) in [(0.2, 1.0), (1.0, 1.0), (3.0, 2.0)] {
        let sol = solve(t, x);
        let p = partition_function(&sol, &QUAD).unwrap();
        let norm = observables::normalization(&sol, &p, &QUAD).unwrap();
        assert_relative_eq!(norm, 1.0, max_relative = 1e-10);
    }
}

#[test]
fn total_energy_split_is_exact_in_storage() {
    let s = thermo_state(&solve(0.7, 1.3), &QUAD).unwrap();
    assert_eq!(s.e_bar, s.u_bar + s.k_bar);
    // And Ebar - Ubar reproduces T through the kinetic identity.
    assert_relative_eq!(s.e_bar - s.u_bar, 0.7, max_relative = 1e-8);
}

#[test]
fn vanishing_temperature_energies_approach_x() {
    // Deep in the small-T regime both the internal and the total energy sit
    // within a few percent of X: the state is barely spinning.
    let s = thermo_state(&solve(0.01, 1.0), &QUAD).unwrap();
    assert!((s.u_bar - 1.0).abs() < 0.05, "Ubar = {}", s.u_bar);
    assert!((s.e_bar - 1.0).abs() < 0.05, "Ebar = {}", s.e_bar);
}

#[test]
fn density_is_maximal_at_origin_and_vanishes_outside() {
    let sol = solve(1.0, 1.0);
    let p = partition_function(&sol, &QUAD).unwrap();
    let at_origin = density(&sol, &p, 0.0);
    assert_relative_eq!(at_origin, (-1.0f64).exp() / p.z, max_relative = 1e-10);
    for r in [0.3, 0.9, 1.2] {
        assert!(density(&sol, &p, r) <= at_origin);
    }
    assert_eq!(density(&sol, &p, sol.r_m()), 0.0);
    assert_eq!(density(&sol, &p, 10.0), 0.0);
}

#[test]
fn density_vanishes_quadratically_at_the_boundary() {
    // rho ~ C (r_m - r)^2 near the support edge; fit the local exponent
    // over the tail where U sits between 8T and 30T above X.
    let sol = solve(1.0, 1.0);
    let p = partition_function(&sol, &QUAD).unwrap();
    let r_m = sol.r_m();
    let pts: Vec<(f64, f64)> = sol
        .grid()
        .iter()
        .zip(sol.states())
        .filter(|(_, s)| s[0] > 9.0 && s[0] < 31.0)
        .map(|(r, _)| ((r_m - r).ln(), density(&sol, &p, *r).ln()))
        .collect();
    assert!(pts.len() > 20);
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert_abs_diff_eq!(slope, 2.0, epsilon = 0.01);
}

#[test]
fn angular_velocity_limits_and_pointwise_identity() {
    let sol = solve(1.0, 1.0);
    // Continuous extension at the origin: omega(0) = sqrt(2 T X) / hbar.
    let w0 = observables::angular_velocity(&sol, 0.0).unwrap();
    assert_relative_eq!(w0, 2.0f64.sqrt(), max_relative = 1e-12);
    // The series limit is approached from small r.
    let w_small = observables::angular_velocity(&sol, 1e-5).unwrap();
    assert_relative_eq!(w_small, w0, max_relative = 1e-8);
    // m r omega^2 = U' at grid points.
    for (r, s) in sol.grid().iter().zip(sol.states()).step_by(211) {
        let w = observables::angular_velocity(&sol, *r).unwrap();
        assert_relative_eq!(w * w * r, s[1], max_relative = 1e-12);
    }
    // Divergence toward the boundary: strictly growing in the tail.
    let r_m = sol.r_m();
    let near = observables::angular_velocity(&sol, r_m * (1.0 - 1e-9)).unwrap();
    assert!(near > 1e3 * w0);
    assert!(matches!(
        observables::angular_velocity(&sol, r_m),
        Err(madelung_core::Error::OutOfSupport { .. })
    ));
}

#[test]
fn tail_contributions_are_finite_and_negligible() {
    for (t, x) in [(0.1, 1.0), (1.0, 1.0), (5.0, 2.0)] {
        let sol = solve(t, x);
        let p = partition_function(&sol, &QUAD).unwrap();
        let tail = tail_contributions(&sol, &p);
        for frac in [
            tail.z_fraction,
            tail.u_fraction,
            tail.k_fraction,
            tail.y_fraction,
        ] {
            assert!(frac.is_finite());
            assert!(frac.abs() < 1e-12, "tail fraction {frac} at T={t}, X={x}");
        }
    }
}

#[test]
fn y_average_matches_finite_difference_oracle() {
    // Ybar = <dU/dX> against the central difference of U at fixed T,
    // averaged over the unperturbed density.
    let delta = 1e-4;
    let center = solve(1.0, 1.0);
    let plus = solve(1.0, 1.0 + delta);
    let minus = solve(1.0, 1.0 - delta);
    let p = partition_function(&center, &QUAD).unwrap();
    let hi = center.grid_end().min(plus.grid_end()).min(minus.grid_end());
    let bounds: Vec<f64> = center
        .panel_bounds()
        .into_iter()
        .filter(|&r| r <= hi)
        .collect();
    let fd_avg = madelung_core::quadrature::integrate_panels(
        |r| {
            let du = (plus.evaluate(r).unwrap().u - minus.evaluate(r).unwrap().u) / (2.0 * delta);
            r * density(&center, &p, r) * du
        },
        &bounds,
        &QUAD,
    )
    .unwrap();
    let y = observables::y_average(&center, &p, &QUAD).unwrap();
    assert_relative_eq!(
        2.0 * std::f64::consts::PI * fd_avg.value,
        y.value,
        max_relative = 1e-6
    );
}

#[test]
fn canonical_scale_invariance_of_the_state() {
    // With hbar = m = 1 the equation maps (T, X) -> (sT, sX) onto itself
    // under r -> r / sqrt(s): Ubar scales by s, r_m by 1/sqrt(s), and H
    // shifts by -ln s. Exercises the full solve + quadrature pipeline.
    let base = thermo_state(&solve(1.0, 1.0), &QUAD).unwrap();
    for s in [0.5, 2.0, 3.0] {
        let scaled = thermo_state(&solve(s, s), &QUAD).unwrap();
        assert_relative_eq!(scaled.u_bar, s * base.u_bar, max_relative = 1e-8);
        assert_relative_eq!(scaled.y_bar, base.y_bar, max_relative = 1e-8);
        assert_relative_eq!(scaled.r_m, base.r_m / s.sqrt(), max_relative = 1e-9);
        assert_abs_diff_eq!(scaled.h, base.h - s.ln(), epsilon = 1e-8);
    }
}

#[test]
fn unit_scaling_of_areas_and_energies() {
    // Z has area units (scales with hbar^2/m); energies do not move.
    let base = thermo_state(&solve_units(1.0, 1.0, 1.0, 1.0), &QUAD).unwrap();
    let hbar2 = thermo_state(&solve_units(1.0, 1.0, 2.0, 1.0), &QUAD).unwrap();
    assert_relative_eq!(hbar2.z, 4.0 * base.z, max_relative = 1e-9);
    assert_relative_eq!(hbar2.u_bar, base.u_bar, max_relative = 1e-9);
    assert_relative_eq!(hbar2.k_bar, base.k_bar, max_relative = 1e-9);
}
