//! Gnuplot script emission for the standard figures.
//!
//! Scripts are plain text referencing already-written CSV files; nothing is
//! rendered in-process.

use crate::error::{CliError, Result};
use madelung_core::sweep::StateTable;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureTag {
    /// Density and shifted potential profiles with the ground-state overlay.
    Fig1,
    /// Log-log internal energy vs `T`, one curve per `X`.
    Fig2,
    /// Log-log internal energy vs `X`, one curve per `T`.
    Fig3,
    /// Log-log support radius vs `X`, one curve per `T`.
    Fig5,
    /// Support radius vs `T`, one curve per `X`.
    Fig7,
}

impl std::str::FromStr for FigureTag {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" => Ok(FigureTag::Fig1),
            "fig2" => Ok(FigureTag::Fig2),
            "fig3" => Ok(FigureTag::Fig3),
            "fig5" => Ok(FigureTag::Fig5),
            "fig7" => Ok(FigureTag::Fig7),
            _ => Err(CliError::Validation(format!(
                "unknown figure tag `{s}` (expected fig1, fig2, fig3, fig5 or fig7)"
            ))),
        }
    }
}

/// One profile curve of a fig1 script.
pub struct ProfileCurve {
    /// Path of the profile CSV as the script should reference it.
    pub path: String,
    pub label: String,
    /// Central potential value; the potential curve is shifted down by it.
    pub x_shift: f64,
}

/// Emit the profile figure: density and shifted potential per curve, plus
/// an optional ground-state density overlay.
pub fn emit_profile_figure(
    curves: &[ProfileCurve],
    ground_csv: Option<&str>,
    out: &Path,
) -> Result<()> {
    if curves.is_empty() {
        return Err(CliError::Validation(
            "fig1 needs at least one profile curve".into(),
        ));
    }
    let mut s = String::new();
    s.push_str("# Radial density and shifted Madelung potential profiles\n");
    s.push_str("set datafile separator ','\n");
    s.push_str("set xlabel 'r'\n");
    s.push_str("set ylabel 'rho, U - U(0)'\n");
    s.push_str("plot \\\n");
    let mut parts: Vec<String> = Vec::new();
    for c in curves {
        parts.push(format!(
            "  '{}' skip 1 using 1:5 with lines title 'rho {}'",
            c.path, c.label
        ));
        parts.push(format!(
            "  '{}' skip 1 using 1:($2-{}) with lines dashtype 2 title 'U {}'",
            c.path, c.x_shift, c.label
        ));
    }
    if let Some(g) = ground_csv {
        parts.push(format!(
            "  '{g}' skip 1 using 1:2 with lines linewidth 2 title 'rho (T -> 0)'"
        ));
    }
    s.push_str(&parts.join(", \\\n"));
    s.push('\n');
    std::fs::write(out, s).map_err(|e| CliError::io(out, e))
}

/// Emit one of the state-table figures against a written table CSV.
pub fn emit_table_figure(
    tag: FigureTag,
    table: &StateTable,
    table_csv: &str,
    out: &Path,
) -> Result<()> {
    let t_vals = table.t_values();
    let x_vals = table.x_values();
    let insufficient =
        |msg: &str| -> CliError { CliError::Numerical(format!("insufficient data: {msg}")) };

    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    let body = match tag {
        FigureTag::Fig1 => {
            return Err(CliError::Validation(
                "fig1 is a profile figure; use the limits command".into(),
            ))
        }
        FigureTag::Fig2 => {
            if t_vals.len() < 2 {
                return Err(insufficient("fig2 needs at least two T values"));
            }
            s.push_str("# Internal energy vs analog temperature (log-log)\n");
            s.push_str("set logscale xy\nset xlabel 'T'\nset ylabel 'Ubar'\n");
            curves_per_value(table_csv, &x_vals, 2, 1, 4, "X")
        }
        FigureTag::Fig3 => {
            if x_vals.len() < 2 {
                return Err(insufficient("fig3 needs at least two X values"));
            }
            s.push_str("# Internal energy vs central potential (log-log)\n");
            s.push_str("set logscale xy\nset xlabel 'X'\nset ylabel 'Ubar'\n");
            curves_per_value(table_csv, &t_vals, 1, 2, 4, "T")
        }
        FigureTag::Fig5 => {
            if x_vals.len() < 2 {
                return Err(insufficient("fig5 needs at least two X values"));
            }
            s.push_str("# Support radius vs central potential (log-log)\n");
            s.push_str("set logscale xy\nset xlabel 'X'\nset ylabel 'r_m'\n");
            curves_per_value(table_csv, &t_vals, 1, 2, 9, "T")
        }
        FigureTag::Fig7 => {
            if t_vals.len() < 2 {
                return Err(insufficient("fig7 needs at least two T values"));
            }
            s.push_str("# Support radius vs analog temperature\n");
            s.push_str("set xlabel 'T'\nset ylabel 'r_m'\n");
            curves_per_value(table_csv, &x_vals, 2, 1, 9, "X")
        }
    };
    s.push_str("plot \\\n");
    s.push_str(&body.join(", \\\n"));
    s.push('\n');
    std::fs::write(out, s).map_err(|e| CliError::io(out, e))
}

/// One `plot` clause per fixed value: rows are selected by exact match on
/// `fixed_col`, the abscissa is `abs_col` and the ordinate `ord_col`
/// (1-based gnuplot columns).
fn curves_per_value(
    csv: &str,
    fixed_values: &[f64],
    fixed_col: usize,
    abs_col: usize,
    ord_col: usize,
    fixed_name: &str,
) -> Vec<String> {
    fixed_values
        .iter()
        .map(|v| {
            format!(
                "  '{csv}' skip 1 using (${fixed_col}=={v} ? ${abs_col} : 1/0):{ord_col} \
                 with linespoints title '{fixed_name}={v}'"
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use madelung_core::observables::ThermoState;
    use madelung_core::sweep::StateRow;

    fn row(t: f64, x: f64) -> StateRow {
        StateRow {
            t,
            x,
            state: Some(ThermoState {
                t,
                x,
                z: 1.0,
                log_z: 0.0,
                u_bar: t + x,
                k_bar: t,
                e_bar: 2.0 * t + x,
                h: 0.0,
                f: 0.0,
                y_bar: 1.0,
                r_m: 1.0 / (t * x),
                l_s: 1.0,
                quad_level: 0,
            }),
            status: "ok".into(),
        }
    }

    #[test]
    fn unknown_tag_is_a_validation_error() {
        let err = "fig4".parse::<FigureTag>().unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("unknown figure tag"));
    }

    #[test]
    fn fig2_with_single_t_reports_insufficient_data_not_unknown_tag() {
        let table = StateTable::from_rows(vec![row(1.0, 0.5), row(1.0, 1.0)]);
        let dir = tempfile::tempdir().unwrap();
        let err = emit_table_figure(FigureTag::Fig2, &table, "t.csv", &dir.path().join("f.gp"))
            .unwrap_err();
        assert!(err.to_string().contains("insufficient data"), "{err}");
    }

    #[test]
    fn fig5_uses_log_scales_on_both_axes() {
        let table = StateTable::from_rows(vec![
            row(1.0, 0.5),
            row(1.0, 1.0),
            row(2.0, 0.5),
            row(2.0, 1.0),
        ]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fig5.gp");
        emit_table_figure(FigureTag::Fig5, &table, "table.csv", &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("set logscale xy"));
        assert!(text.contains(":9"));
    }

    #[test]
    fn fig1_references_each_curve_and_the_overlay() {
        let curves: Vec<ProfileCurve> = [0.05, 0.2, 1.0]
            .iter()
            .map(|t| ProfileCurve {
                path: format!("profile_T{t}.csv"),
                label: format!("T={t}"),
                x_shift: 1.0,
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fig1.gp");
        emit_profile_figure(&curves, Some("ground.csv"), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        // Four referenced data sources: three profiles plus the overlay.
        for file in [
            "profile_T0.05.csv",
            "profile_T0.2.csv",
            "profile_T1.csv",
            "ground.csv",
        ] {
            assert!(text.contains(file), "script misses {file}:\n{text}");
        }
    }
}
