//! Command-line front end for the Madelung fluid library: argument
//! parsing, configuration, CSV formats, and plot-script emission.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical or I/O failure.

pub mod commands;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod plots;

pub use error::{CliError, Result};

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "madelung",
    version,
    about = "Self-trapped spinning-stationary Madelung fluid states and their \
             thermodynamic-analog observables"
)]
pub struct Cli {
    /// Config file with `key = value` lines; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory that relative output paths are joined onto
    /// (default: $MADELUNG_OUT_DIR or the working directory).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct StateArgs {
    /// Analog temperature T > 0.
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: Option<f64>,

    /// Central potential value X = U(0) > 0.
    #[arg(long = "X", allow_hyphen_values = true)]
    pub x: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct SolverArgs {
    /// Relative integrator tolerance (default 1e-10).
    #[arg(long)]
    pub rel_tol: Option<f64>,

    /// Absolute integrator tolerance (default 1e-12).
    #[arg(long)]
    pub abs_tol: Option<f64>,

    /// Potential cutoff ending the integration (default X + 40 T).
    #[arg(long)]
    pub u_cut: Option<f64>,

    /// Step budget for one solve (default 100000).
    #[arg(long)]
    pub max_steps: Option<usize>,

    /// Relative quadrature tolerance (default 1e-10).
    #[arg(long)]
    pub quad_rel_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one state and report its observables.
    Solve {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the radial profile CSV (columns r,U,dU,Y,rho,omega).
        #[arg(long)]
        profile_out: Option<PathBuf>,
        /// Write the observables report to a file instead of stdout.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },

    /// Solve a (T, X) grid into a state-table CSV.
    Sweep {
        /// Comma-separated T values.
        #[arg(long = "T-list")]
        t_list: Option<String>,
        /// Logarithmic T grid `lo:hi:n`.
        #[arg(long = "T-logspace")]
        t_logspace: Option<String>,
        /// Comma-separated X values.
        #[arg(long = "X-list")]
        x_list: Option<String>,
        /// Logarithmic X grid `lo:hi:n`.
        #[arg(long = "X-logspace")]
        x_logspace: Option<String>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Output table path (default state_table.csv).
        #[arg(long)]
        table_out: Option<PathBuf>,
        /// Also emit a gnuplot script: fig2, fig3, fig5 or fig7.
        #[arg(long)]
        plot: Option<String>,
        /// Path of the emitted plot script (default `<tag>.gp`).
        #[arg(long)]
        plot_out: Option<PathBuf>,
    },

    /// Solve one state and check every identity the solution must satisfy.
    Verify {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },

    /// Compare small-T states against the Bessel ground state at the same X.
    Limits {
        #[arg(long = "X")]
        x: Option<f64>,
        /// Comma-separated T sequence (default 0.2,0.1,0.05,0.02).
        #[arg(long = "T-list")]
        t_list: Option<String>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write per-T profile CSVs, the ground-state CSV, and a fig1
        /// gnuplot script at this path.
        #[arg(long)]
        plot_out: Option<PathBuf>,
    },

    /// Fit power-law scaling windows of a state-table CSV.
    Fit {
        /// State-table CSV produced by `sweep`.
        #[arg(long)]
        table: PathBuf,
        /// `t`: Ubar vs T at fixed X; `x`: Ubar vs X at fixed T.
        #[arg(long)]
        mode: String,
        /// The fixed X (mode t) or fixed T (mode x).
        #[arg(long)]
        fixed: f64,
        /// Fit window `lo:hi` (mode t).
        #[arg(long)]
        window: Option<String>,
        /// Small-abscissa window `lo:hi` (mode x).
        #[arg(long)]
        small_window: Option<String>,
        /// Large-abscissa window `lo:hi` (mode x).
        #[arg(long)]
        large_window: Option<String>,
    },

    /// Boundary tensions and differential identity residuals at one state.
    Tensions {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Relative finite-difference step (default 1e-3).
        #[arg(long)]
        fd_step: Option<f64>,
    },
}
