use crate::config::{parse_list, parse_logspace, parse_window, Config};
use crate::csv_io;
use crate::error::{CliError, Result};
use crate::plots::{self, FigureTag, ProfileCurve};
use crate::{Cli, Command, SolverArgs, StateArgs};
use madelung_core::observables::{partition_function, thermo_state};
use madelung_core::solver::integrate_radial;
use madelung_core::sweep::{self, FdSteps, FitResult};
use madelung_core::{limits, Params, QuadOptions, RadialSolution, SolverOptions};
use std::path::{Path, PathBuf};

pub fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let out_dir = resolve_out_dir(cli.out_dir.clone(), &config);

    match cli.command {
        Command::Solve {
            state,
            solver,
            profile_out,
            state_out,
        } => cmd_solve(&config, &out_dir, state, solver, profile_out, state_out),
        Command::Sweep {
            t_list,
            t_logspace,
            x_list,
            x_logspace,
            solver,
            table_out,
            plot,
            plot_out,
        } => cmd_sweep(
            &config, &out_dir, t_list, t_logspace, x_list, x_logspace, solver, table_out, plot,
            plot_out,
        ),
        Command::Verify { state, solver } => cmd_verify(&config, state, solver),
        Command::Limits {
            x,
            t_list,
            solver,
            plot_out,
        } => cmd_limits(&config, &out_dir, x, t_list, solver, plot_out),
        Command::Fit {
            table,
            mode,
            fixed,
            window,
            small_window,
            large_window,
        } => cmd_fit(
            &out_dir,
            table,
            mode,
            fixed,
            window,
            small_window,
            large_window,
        ),
        Command::Tensions {
            state,
            solver,
            fd_step,
        } => cmd_tensions(&config, state, solver, fd_step),
    }
}

fn resolve_out_dir(flag: Option<PathBuf>, config: &Config) -> PathBuf {
    flag.or_else(|| config.resolve_string(None, "out_dir").map(PathBuf::from))
        .or_else(|| std::env::var_os("MADELUNG_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn out_path(out_dir: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        out_dir.join(path)
    }
}

fn resolve_params(config: &Config, args: &StateArgs) -> Result<Params> {
    let t = config.resolve_opt_f64(args.t, "t")?.ok_or_else(|| {
        CliError::Validation("missing analog temperature: pass --T or set `t` in the config".into())
    })?;
    let x = config.resolve_opt_f64(args.x, "x")?.ok_or_else(|| {
        CliError::Validation("missing central potential: pass --X or set `x` in the config".into())
    })?;
    let hbar = config.resolve_f64(args.hbar, "hbar", 1.0)?;
    let mass = config.resolve_f64(args.mass, "mass", 1.0)?;
    Ok(Params::with_units(t, x, hbar, mass)?)
}

fn resolve_solver(config: &Config, args: &SolverArgs) -> Result<(SolverOptions, QuadOptions)> {
    let defaults = SolverOptions::default();
    let solver = SolverOptions {
        rel_tol: config.resolve_f64(args.rel_tol, "rel_tol", defaults.rel_tol)?,
        abs_tol: config.resolve_f64(args.abs_tol, "abs_tol", defaults.abs_tol)?,
        u_cut: config.resolve_opt_f64(args.u_cut, "u_cut")?,
        max_steps: config.resolve_usize(args.max_steps, "max_steps", defaults.max_steps)?,
        tail_window: defaults.tail_window,
    };
    let qd = QuadOptions::default();
    let quad = QuadOptions {
        rel_tol: config.resolve_f64(args.quad_rel_tol, "quad_rel_tol", qd.rel_tol)?,
        abs_tol: config.resolve_f64(None, "quad_abs_tol", qd.abs_tol)?,
        max_level: qd.max_level,
    };
    solver.validate()?;
    quad.validate()?;
    Ok((solver, quad))
}

fn solve_one(params: &Params, solver: &SolverOptions) -> Result<RadialSolution> {
    Ok(integrate_radial(params, solver)?)
}

fn cmd_solve(
    config: &Config,
    out_dir: &Path,
    state: StateArgs,
    solver: SolverArgs,
    profile_out: Option<PathBuf>,
    state_out: Option<PathBuf>,
) -> Result<()> {
    let params = resolve_params(config, &state)?;
    let (solver_opts, quad_opts) = resolve_solver(config, &solver)?;
    let solution = solve_one(&params, &solver_opts)?;
    let thermo = thermo_state(&solution, &quad_opts)?;

    let report = csv_io::state_report(&thermo);
    match state_out {
        Some(path) => csv_io::write_text(&out_path(out_dir, &path), &report)?,
        None => print!("{report}"),
    }
    if let Some(path) = profile_out {
        let partition = partition_function(&solution, &quad_opts)?;
        csv_io::write_profile_csv(&solution, &partition, &out_path(out_dir, &path))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config: &Config,
    out_dir: &Path,
    t_list: Option<String>,
    t_logspace: Option<String>,
    x_list: Option<String>,
    x_logspace: Option<String>,
    solver: SolverArgs,
    table_out: Option<PathBuf>,
    plot: Option<String>,
    plot_out: Option<PathBuf>,
) -> Result<()> {
    let ts = resolve_grid(
        config,
        t_list,
        t_logspace,
        "t_list",
        "--T-list/--T-logspace",
    )?;
    let xs = resolve_grid(
        config,
        x_list,
        x_logspace,
        "x_list",
        "--X-list/--X-logspace",
    )?;
    let (solver_opts, quad_opts) = resolve_solver(config, &solver)?;

    let table = sweep::sweep(&ts, &xs, &solver_opts, &quad_opts)?;
    let table_path = out_path(
        out_dir,
        &table_out.unwrap_or_else(|| "state_table.csv".into()),
    );
    csv_io::write_state_table_csv(&table, &table_path)?;
    let failed = table.rows.iter().filter(|r| r.state.is_none()).count();
    println!(
        "wrote {} ({} rows, {} failed)",
        table_path.display(),
        table.rows.len(),
        failed
    );

    if let Some(tag) = plot {
        let tag: FigureTag = tag.parse()?;
        let script = out_path(
            out_dir,
            &plot_out.unwrap_or_else(|| PathBuf::from(format!("{tag:?}.gp").to_lowercase())),
        );
        let csv_ref = table_path.display().to_string();
        plots::emit_table_figure(tag, &table, &csv_ref, &script)?;
        println!("wrote {}", script.display());
    }
    Ok(())
}

fn resolve_grid(
    config: &Config,
    list: Option<String>,
    logspace: Option<String>,
    config_key: &str,
    flags: &str,
) -> Result<Vec<f64>> {
    if let Some(s) = list {
        return parse_list(&s, flags);
    }
    if let Some(s) = logspace {
        return parse_logspace(&s, flags);
    }
    if let Some(s) = config.resolve_string(None, config_key) {
        return parse_list(&s, config_key);
    }
    Err(CliError::Validation(format!(
        "missing grid: pass {flags} or set `{config_key}` in the config"
    )))
}

struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
    pass: bool,
}

impl Check {
    fn bounded(name: &'static str, value: f64, tol: f64) -> Self {
        Check {
            name,
            value,
            tol,
            pass: value.abs() <= tol,
        }
    }

    fn boolean(name: &'static str, ok: bool) -> Self {
        Check {
            name,
            value: if ok { 1.0 } else { 0.0 },
            tol: f64::NAN,
            pass: ok,
        }
    }
}

fn cmd_verify(config: &Config, state: StateArgs, solver: SolverArgs) -> Result<()> {
    let params = resolve_params(config, &state)?;
    let (solver_opts, quad_opts) = resolve_solver(config, &solver)?;
    let solution = solve_one(&params, &solver_opts)?;
    let partition = partition_function(&solution, &quad_opts)?;
    let thermo = thermo_state(&solution, &quad_opts)?;
    let tail = madelung_core::observables::tail_contributions(&solution, &partition);
    let norm = madelung_core::observables::normalization(&solution, &partition, &quad_opts)?;
    let t = params.t();

    let max_tail = tail
        .z_fraction
        .abs()
        .max(tail.u_fraction.abs())
        .max(tail.k_fraction.abs())
        .max(tail.y_fraction.abs());
    let checks = [
        Check::bounded("normalization", norm - 1.0, 1e-8),
        Check::bounded("kinetic_identity", thermo.k_bar / t - 1.0, 1e-4),
        Check::bounded(
            "entropy_identity",
            thermo.h - thermo.u_bar / t - thermo.log_z,
            1e-6,
        ),
        Check::bounded(
            "free_energy_consistency",
            thermo.f - (thermo.u_bar - t * thermo.h),
            1e-6 * thermo.f.abs().max(1.0),
        ),
        Check::bounded("ode_residual", solution.max_ode_residual(), 1e-6),
        Check::bounded(
            "sensitivity_residual",
            solution.max_sensitivity_residual(),
            1e-6,
        ),
        Check::bounded("madelung_closure", solution.max_closure_deviation(), 1e-6),
        Check::boolean("potential_monotone", solution.u_monotone()),
        Check::boolean(
            "sensitivity_positive",
            solution.min_y() > 0.0 && thermo.y_bar > 0.0,
        ),
        Check::boolean("blowup_consistent", solution.blowup().consistent),
        Check::bounded(
            "blowup_uncertainty",
            solution.r_m_err() / solution.r_m(),
            1e-9,
        ),
        Check::bounded("tail_negligible", max_tail, 1e-10),
    ];

    println!("verify T={} X={}", params.t(), params.x());
    let mut failures = 0;
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        if c.tol.is_nan() {
            println!("{status} {:<24} {}", c.name, c.pass);
        } else {
            println!(
                "{status} {:<24} {:.3e} (tol {:.1e})",
                c.name, c.value, c.tol
            );
        }
        if !c.pass {
            failures += 1;
        }
    }
    println!(
        "Kbar = {} vs T = {}; r_m = {} +- {:.2e}",
        thermo.k_bar,
        t,
        solution.r_m(),
        solution.r_m_err()
    );
    if failures > 0 {
        return Err(CliError::Numerical(format!("{failures} checks failed")));
    }
    Ok(())
}

fn cmd_limits(
    config: &Config,
    out_dir: &Path,
    x: Option<f64>,
    t_list: Option<String>,
    solver: SolverArgs,
    plot_out: Option<PathBuf>,
) -> Result<()> {
    let x = config.resolve_f64(x, "x", 1.0)?;
    let hbar = config.resolve_f64(None, "hbar", 1.0)?;
    let mass = config.resolve_f64(None, "mass", 1.0)?;
    let ts = match t_list {
        Some(s) => parse_list(&s, "--T-list")?,
        None => vec![0.2, 0.1, 0.05, 0.02],
    };
    let (solver_opts, quad_opts) = resolve_solver(config, &solver)?;

    let ground = limits::ground_state(x, hbar, mass)?;
    println!(
        "ground state: X = {x}, k = {}, r_0 = {}, A = {}",
        ground.k, ground.r_0, ground.amplitude
    );
    println!("B0 = {}", madelung_core::bessel::first_zero());
    println!("T, r_m, r_m_gap, sup_norm, Ubar");

    let mut curves = Vec::new();
    for &t in &ts {
        let params = Params::with_units(t, x, hbar, mass)?;
        let solution = solve_one(&params, &solver_opts)?;
        let thermo = thermo_state(&solution, &quad_opts)?;
        let dev = limits::small_t_deviation(&solution)?;
        println!(
            "{t}, {}, {}, {}, {}",
            solution.r_m(),
            dev.r_m_gap,
            dev.sup_norm,
            thermo.u_bar
        );
        if plot_out.is_some() {
            let name = format!("profile_T{t}.csv");
            let partition = partition_function(&solution, &quad_opts)?;
            csv_io::write_profile_csv(&solution, &partition, &out_path(out_dir, name.as_ref()))?;
            curves.push(ProfileCurve {
                path: name,
                label: format!("T={t}"),
                x_shift: x,
            });
        }
    }

    if let Some(path) = plot_out {
        csv_io::write_ground_csv(&ground, 512, &out_path(out_dir, "ground.csv".as_ref()))?;
        plots::emit_profile_figure(&curves, Some("ground.csv"), &out_path(out_dir, &path))?;
        println!("wrote {}", out_path(out_dir, &path).display());
    }
    Ok(())
}

fn print_fit(label: &str, fit: &FitResult) {
    println!(
        "{label}: exponent = {:.6}, coefficient = {:.6}, window = [{}, {}], \
         n = {}, log-log residual = {:.3e}",
        fit.exponent, fit.coefficient, fit.window.0, fit.window.1, fit.n_points, fit.residual_norm
    );
}

fn cmd_fit(
    out_dir: &Path,
    table: PathBuf,
    mode: String,
    fixed: f64,
    window: Option<String>,
    small_window: Option<String>,
    large_window: Option<String>,
) -> Result<()> {
    let path = out_path(out_dir, &table);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let table = csv_io::parse_state_table_csv(&text)?;
    match mode.as_str() {
        "t" => {
            let window = window
                .ok_or_else(|| CliError::Validation("mode `t` needs --window lo:hi".into()))?;
            let fit = sweep::fit_scaling_t(&table, fixed, parse_window(&window, "--window")?)?;
            print_fit("Ubar ~ a T^p", &fit);
        }
        "x" => {
            let sw = small_window.ok_or_else(|| {
                CliError::Validation("mode `x` needs --small-window lo:hi".into())
            })?;
            let lw = large_window.ok_or_else(|| {
                CliError::Validation("mode `x` needs --large-window lo:hi".into())
            })?;
            let (small, large) = sweep::fit_scaling_x(
                &table,
                fixed,
                parse_window(&sw, "--small-window")?,
                parse_window(&lw, "--large-window")?,
            )?;
            print_fit("small-X: Ubar ~ c X^p", &small);
            print_fit("large-X: Ubar ~ d X^p", &large);
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown fit mode `{other}` (expected `t` or `x`)"
            )))
        }
    }
    Ok(())
}

fn cmd_tensions(
    config: &Config,
    state: StateArgs,
    solver: SolverArgs,
    fd_step: Option<f64>,
) -> Result<()> {
    let params = resolve_params(config, &state)?;
    let (solver_opts, quad_opts) = resolve_solver(config, &solver)?;
    let step = config.resolve_f64(fd_step, "fd_step", 1e-3)?;
    if !(step.is_finite() && step > 0.0 && step < 0.5) {
        return Err(CliError::Validation(format!(
            "fd_step must be in (0, 0.5), got {step}"
        )));
    }
    let steps = FdSteps {
        rel_t: step,
        rel_x: step,
    };
    let provider = sweep::SolveProvider {
        solver: solver_opts,
        quad: quad_opts,
    };
    let full = sweep::differential_checks_with(&provider, &params, &steps)?;
    let half = sweep::differential_checks_with(&provider, &params, &steps.halved())?;

    let c = &full.center;
    println!(
        "center T={} X={} (delta_rel = {step})",
        params.t(),
        params.x()
    );
    println!(
        "first law, fixed T: |dU - T dH - Ybar dX| / scale = {:.4e} (halved: {:.4e})",
        full.first_law.residual_x, half.first_law.residual_x
    );
    println!(
        "first law, fixed X: |dU - T dH| / scale = {:.4e} (halved: {:.4e})",
        full.first_law.residual_t, half.first_law.residual_t
    );
    // The fixed-X residual does not vanish with the step: dU - T dH equals
    // <dU/dT> dT, pinned by the scaling relation U(sT,sX) = s U(T,X).
    let u_t = (c.u_bar + params.t() - params.x() * c.y_bar) / params.t();
    println!("  (scaling relation gives <dU/dT> = {u_t:.6})");

    match &full.tensions {
        Ok(t) => {
            println!("dr_m/dX = {:.8}  dL_s/dT = {:.8}", t.drm_dx, t.dls_dt);
            println!(
                "sigma_X = {:.8}  sigma_T = {:.8}  sigma = {:.8}",
                t.sigma_x, t.sigma_t, t.sigma
            );
        }
        Err(e) => println!("tensions unavailable: {e}"),
    }
    match &full.free_energy {
        Ok(f) => {
            let hf = half.free_energy.as_ref();
            println!(
                "dF fixed T vs sigma_X dL_s: residual = {:.4e} (halved: {:.4e})",
                f.residual_fixed_t,
                hf.map(|h| h.residual_fixed_t).unwrap_or(f64::NAN)
            );
            println!(
                "dF fixed X vs -H dT + sigma_X dL_s: residual = {:.4e} (halved: {:.4e})",
                f.residual_fixed_x,
                hf.map(|h| h.residual_fixed_x).unwrap_or(f64::NAN)
            );
            println!(
                "dF fixed X vs sigma dL_s: residual = {:.4e}",
                f.residual_fixed_x_sigma_form
            );
        }
        Err(e) => println!("free-energy check unavailable: {e}"),
    }
    Ok(())
}
