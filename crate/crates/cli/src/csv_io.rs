//! CSV serialization of radial profiles and state tables.
//!
//! All numeric fields use the shortest round-trip decimal representation,
//! so identical runs produce byte-identical files and a write-parse cycle
//! returns the exact same doubles.

use crate::error::{CliError, Result};
use madelung_core::observables::{angular_velocity, density, Partition, ThermoState};
use madelung_core::solver::RadialSolution;
use madelung_core::sweep::{StateRow, StateTable};
use std::io::Write;
use std::path::Path;

pub const PROFILE_HEADER: &str = "r,U,dU,Y,rho,omega";
pub const STATE_TABLE_HEADER: &str = "T,X,Z,Ubar,Kbar,H,F,Ybar,r_m,L_s,status";

/// Write the radial profile at the solver grid radii. The first data row
/// sits at the series handoff radius `r_eps`.
pub fn write_profile_csv(
    solution: &RadialSolution,
    partition: &Partition,
    path: &Path,
) -> Result<()> {
    let mut out = String::with_capacity(64 * solution.grid().len());
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for (r, state) in solution.grid().iter().zip(solution.states()) {
        let rho = density(solution, partition, *r);
        let omega = angular_velocity(solution, *r).unwrap_or(f64::NAN);
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r, state[0], state[1], state[2], rho, omega
        ));
    }
    std::fs::write(path, out).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub r: f64,
    pub u: f64,
    pub du: f64,
    pub y: f64,
    pub rho: f64,
    pub omega: f64,
}

pub fn parse_profile_csv(text: &str) -> Result<Vec<ProfileRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == PROFILE_HEADER => {}
        other => {
            return Err(CliError::Validation(format!(
                "bad profile header: {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f = parse_fields(line, 6, i + 2)?;
            Ok(ProfileRow {
                r: f[0],
                u: f[1],
                du: f[2],
                y: f[3],
                rho: f[4],
                omega: f[5],
            })
        })
        .collect()
}

/// Write a state table, one row per grid point; failed rows carry `nan`
/// observables and their failure status word.
pub fn write_state_table_csv(table: &StateTable, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(128 * table.rows.len());
    out.push_str(STATE_TABLE_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&state_row_line(row));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| CliError::io(path, e))
}

fn state_row_line(row: &StateRow) -> String {
    match &row.state {
        Some(s) => format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            row.t, row.x, s.z, s.u_bar, s.k_bar, s.h, s.f, s.y_bar, s.r_m, s.l_s, row.status
        ),
        None => format!(
            "{},{},nan,nan,nan,nan,nan,nan,nan,nan,{}",
            row.t, row.x, row.status
        ),
    }
}

pub fn parse_state_table_csv(text: &str) -> Result<StateTable> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == STATE_TABLE_HEADER => {}
        other => {
            return Err(CliError::Validation(format!(
                "bad state-table header: {other:?}"
            )))
        }
    }
    let rows: Result<Vec<StateRow>> = lines
        .enumerate()
        .map(|(i, line)| {
            let lineno = i + 2;
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 11 {
                return Err(CliError::Validation(format!(
                    "line {lineno}: expected 11 fields, got {}",
                    parts.len()
                )));
            }
            let nums: Vec<f64> = parts[..10]
                .iter()
                .map(|p| p.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| CliError::Validation(format!("line {lineno}: {e}")))?;
            let status = parts[10].to_string();
            let state = if status == "ok" {
                Some(ThermoState {
                    t: nums[0],
                    x: nums[1],
                    z: nums[2],
                    log_z: nums[2].ln(),
                    u_bar: nums[3],
                    k_bar: nums[4],
                    e_bar: nums[3] + nums[4],
                    h: nums[5],
                    f: nums[6],
                    y_bar: nums[7],
                    r_m: nums[8],
                    l_s: nums[9],
                    quad_level: 0,
                })
            } else {
                None
            };
            Ok(StateRow {
                t: nums[0],
                x: nums[1],
                state,
                status,
            })
        })
        .collect();
    Ok(StateTable::from_rows(rows?))
}

fn parse_fields(line: &str, n: usize, lineno: usize) -> Result<Vec<f64>> {
    let fields: std::result::Result<Vec<f64>, _> =
        line.split(',').map(|p| p.parse::<f64>()).collect();
    match fields {
        Ok(f) if f.len() == n => Ok(f),
        Ok(f) => Err(CliError::Validation(format!(
            "line {lineno}: expected {n} fields, got {}",
            f.len()
        ))),
        Err(e) => Err(CliError::Validation(format!("line {lineno}: {e}"))),
    }
}

/// Two-column `r,rho` CSV of the vanishing-temperature ground-state density.
pub fn write_ground_csv(
    ground: &madelung_core::GroundState,
    n_points: usize,
    path: &Path,
) -> Result<()> {
    let mut out = String::from("r,rho\n");
    let n = n_points.max(2);
    for i in 0..n {
        let r = ground.r_0 * i as f64 / (n - 1) as f64;
        out.push_str(&format!("{},{}\n", r, ground.density(r)));
    }
    std::fs::write(path, out).map_err(|e| CliError::io(path, e))
}

/// Full-precision text report of one state, one `name = value` per line.
pub fn state_report(s: &ThermoState) -> String {
    let mut out = String::new();
    for (name, v) in [
        ("T", s.t),
        ("X", s.x),
        ("Z", s.z),
        ("Ubar", s.u_bar),
        ("Kbar", s.k_bar),
        ("Ebar", s.e_bar),
        ("H", s.h),
        ("F", s.f),
        ("Ybar", s.y_bar),
        ("r_m", s.r_m),
        ("L_s", s.l_s),
    ] {
        out.push_str(&format!("{name} = {v}\n"));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use madelung_core::observables::partition_function;
    use madelung_core::solver::integrate_radial;
    use madelung_core::{Params, QuadOptions, SolverOptions};

    #[test]
    fn profile_roundtrip_is_exact() {
        let sol =
            integrate_radial(&Params::new(1.0, 1.0).unwrap(), &SolverOptions::default()).unwrap();
        let part = partition_function(&sol, &QuadOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.csv");
        write_profile_csv(&sol, &part, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let rows = parse_profile_csv(&text).unwrap();
        assert_eq!(rows.len(), sol.grid().len());
        // Shortest round-trip serialization: bit-exact recovery.
        for (row, (r, s)) in rows.iter().zip(sol.grid().iter().zip(sol.states())) {
            assert_eq!(row.r, *r);
            assert_eq!(row.u, s[0]);
            assert_eq!(row.du, s[1]);
            assert_eq!(row.y, s[2]);
        }
        // First data row sits at the series handoff radius, where U has
        // moved off X by only the leading series term u2 r^2.
        assert_eq!(rows[0].r, sol.r_eps());
        assert!((rows[0].u - 1.0).abs() < 2.0 * rows[0].r * rows[0].r);
        // Small-r angular velocity approaches sqrt(2TX)/hbar, with an
        // O(r^2) series correction.
        assert!((rows[0].omega - 2.0f64.sqrt()).abs() < 2.0 * rows[0].r * rows[0].r);
    }

    #[test]
    fn state_table_roundtrip_preserves_failures() {
        use madelung_core::sweep::sweep;
        let table = sweep(
            &[1.0],
            &[1.0],
            &SolverOptions::default(),
            &QuadOptions::default(),
        )
        .unwrap();
        let mut table = table;
        table.rows.push(StateRow {
            t: 2.0,
            x: 1.0,
            state: None,
            status: "max_steps".into(),
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.csv");
        write_state_table_csv(&table, &path).unwrap();
        let parsed = parse_state_table_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed.rows.len(), 2);
        assert_eq!(parsed.rows[0].status, "ok");
        let a = table.rows[0].state.as_ref().unwrap();
        let b = parsed.rows[0].state.as_ref().unwrap();
        assert_eq!(a.u_bar, b.u_bar);
        assert_eq!(a.r_m, b.r_m);
        assert_eq!(parsed.rows[1].status, "max_steps");
        assert!(parsed.rows[1].state.is_none());
    }

    #[test]
    fn write_failures_name_the_path() {
        let table = StateTable::default();
        let err = write_state_table_csv(&table, Path::new("/nonexistent-dir/t.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/t.csv"));
    }
}
