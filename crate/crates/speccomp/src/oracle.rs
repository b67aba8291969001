//! Quadrature cross-checks printed by `--oracle`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use aisw::orbits::classify;
use aisw::perturbation::{pt_second_order_asymptotic, pt_second_order_sum};
use aisw::trace::{
    omega_newtonian_asymptotic, omega_quadrature_oracle, omega_single, single_reflection_orbits,
    OracleResult, QuadratureSpec,
};
use aisw::LevelIndex;
use rayon::prelude::*;

use crate::config::RunConfig;

pub const ORACLE_HEADER: &str =
    "n,omega_1,omega_1_oracle,omega_newtonian,omega_newtonian_oracle,e2_sum,e2_asymptotic,e2_ratio";

/// One level's cross-checks.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub n: usize,
    pub omega_1: f64,
    pub omega_1_oracle: Option<OracleResult>,
    pub omega_newtonian: f64,
    pub omega_newtonian_oracle: Option<OracleResult>,
    pub e2_sum: f64,
    pub e2_asymptotic: f64,
    /// Why the quadrature was skipped or failed, if it was.
    pub note: Option<String>,
}

impl OracleRow {
    pub fn line(&self) -> String {
        let omega = |o: &Option<OracleResult>| {
            o.as_ref()
                .map_or("NaN".to_string(), |r| format!("{:.16e}", r.omega))
        };
        format!(
            "{},{:.16e},{},{:.16e},{},{:.16e},{:.16e},{:.16e}",
            self.n,
            self.omega_1,
            omega(&self.omega_1_oracle),
            self.omega_newtonian,
            omega(&self.omega_newtonian_oracle),
            self.e2_sum,
            self.e2_asymptotic,
            self.e2_sum / self.e2_asymptotic
        )
    }
}

/// Runs the cross-checks for every level in the run's range.
///
/// The single-reflection families use members up to `orbit_max_len` symbols,
/// each taken once; the Newtonian orbit `LR` is repeated up to `nu_max`
/// times. Levels whose action window reaches below `sqrt(2 alpha)` have no
/// quadrature.
pub fn oracle_rows(run: &RunConfig) -> Vec<OracleRow> {
    let alpha = run.well.alpha();
    let families =
        QuadratureSpec::new(single_reflection_orbits(run.orbit_max_len.div_ceil(2))).with_nu_max(1);
    let newtonian =
        QuadratureSpec::new(vec![classify("LR").expect("valid word")]).with_nu_max(run.nu_max);
    let mut rows: Vec<OracleRow> = (run.n_min..=run.n_max)
        .into_par_iter()
        .map(|n| {
            let level = LevelIndex::new(n).expect("validated range starts at 1");
            let lo = PI * (n as f64 - 0.5);
            let mut note = None;
            let (mut fam, mut newt) = (None, None);
            if lo * lo <= 2.0 * alpha {
                note = Some("window below sqrt(2 alpha)".to_string());
            } else {
                match omega_quadrature_oracle(&run.well, level, &families) {
                    Ok(r) => fam = Some(r),
                    Err(e) => note = Some(e.to_string()),
                }
                match omega_quadrature_oracle(&run.well, level, &newtonian) {
                    Ok(r) => newt = Some(r),
                    Err(e) => note = Some(e.to_string()),
                }
            }
            let (e2_sum, note) = match pt_second_order_sum(&run.well, level, run.tol_sum) {
                Ok(s) => (s.value, note),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            OracleRow {
                n,
                omega_1: omega_single(alpha, level),
                omega_1_oracle: fam,
                omega_newtonian: omega_newtonian_asymptotic(alpha, level),
                omega_newtonian_oracle: newt,
                e2_sum,
                e2_asymptotic: pt_second_order_asymptotic(&run.well, level),
                note,
            }
        })
        .collect();
    rows.sort_by_key(|r| r.n);
    rows
}

/// Text block printed by the CLI; with `verbose`, each level is followed by
/// its per-orbit breakdown.
pub fn render_report(rows: &[OracleRow], verbose: bool) -> String {
    let mut out = String::new();
    writeln!(out, "{ORACLE_HEADER}").unwrap();
    for row in rows {
        writeln!(out, "{}", row.line()).unwrap();
        if let Some(note) = &row.note {
            writeln!(out, "# n={}: {note}", row.n).unwrap();
        }
        if verbose {
            for result in [&row.omega_1_oracle, &row.omega_newtonian_oracle]
                .into_iter()
                .flatten()
            {
                writeln!(out, "# breakdown n={}", row.n).unwrap();
                let mut buf = Vec::new();
                result.write_breakdown(&mut buf).expect("writing to memory");
                out.push_str(std::str::from_utf8(&buf).expect("ASCII"));
            }
        }
    }
    out
}
