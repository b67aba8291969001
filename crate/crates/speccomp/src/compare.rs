//! Exact, perturbative and periodic-orbit energies side by side.

use aisw::exact::{exact_eigenvalue_with, BisectionOptions, BracketSource, ExactLevel};
use aisw::perturbation::{pt_convergence, pt_energy};
use aisw::trace::po_energy;
use aisw::LevelIndex;
use rayon::prelude::*;

use crate::config::RunConfig;

/// One level of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub n: usize,
    pub e_exact: f64,
    pub e_pt2: f64,
    pub e_po: f64,
    pub abs_err_pt: f64,
    pub abs_err_po: f64,
    pub rel_err_pt: f64,
    pub rel_err_po: f64,
    /// The exact level lies below the step.
    pub below_step: bool,
    pub pt_convergent: bool,
    /// `None` when the exact solver failed.
    pub bracket_source: Option<BracketSource>,
    /// Solver message for a failed row.
    pub error: Option<String>,
}

impl SpectrumRow {
    pub fn failed(&self) -> bool {
        self.bracket_source.is_none()
    }

    pub fn bracket_label(&self) -> &'static str {
        self.bracket_source.map_or("failed", |s| s.as_str())
    }
}

/// Computes the table for `run.n_min..=run.n_max`, ordered by `n`.
///
/// A solver failure for one level yields a row with `NaN` exact energy and
/// error columns; the remaining levels are still computed.
pub fn run_comparison(run: &RunConfig) -> Vec<SpectrumRow> {
    let options = BisectionOptions {
        rel_width: run.tol_bisect,
        ..BisectionOptions::default()
    };
    let mut rows: Vec<SpectrumRow> = (run.n_min..=run.n_max)
        .into_par_iter()
        .map(|n| compute_row(run, n, options))
        .collect();
    rows.sort_by_key(|r| r.n);
    rows
}

fn compute_row(run: &RunConfig, n: usize, options: BisectionOptions) -> SpectrumRow {
    let well = &run.well;
    let level = LevelIndex::new(n).expect("validated range starts at 1");
    let e_pt2 = pt_energy(well, level);
    let e_po = po_energy(well, level);
    let pt_convergent = pt_convergence(well, level).convergent;
    build_row(
        run,
        n,
        e_pt2,
        e_po,
        pt_convergent,
        exact_eigenvalue_with(well, level, options),
    )
}

fn build_row(
    run: &RunConfig,
    n: usize,
    e_pt2: f64,
    e_po: f64,
    pt_convergent: bool,
    exact: aisw::Result<ExactLevel>,
) -> SpectrumRow {
    match exact {
        Ok(exact) => {
            let e = exact.energy;
            let abs_err_pt = (e_pt2 - e).abs();
            let abs_err_po = (e_po - e).abs();
            SpectrumRow {
                n,
                e_exact: e,
                e_pt2,
                e_po,
                abs_err_pt,
                abs_err_po,
                rel_err_pt: abs_err_pt / e,
                rel_err_po: abs_err_po / e,
                below_step: e < run.well.v0(),
                pt_convergent,
                bracket_source: Some(exact.bracket.source),
                error: None,
            }
        }
        Err(err) => SpectrumRow {
            n,
            e_exact: f64::NAN,
            e_pt2,
            e_po,
            abs_err_pt: f64::NAN,
            abs_err_po: f64::NAN,
            rel_err_pt: f64::NAN,
            rel_err_po: f64::NAN,
            below_step: false,
            pt_convergent,
            bracket_source: None,
            error: Some(err.to_string()),
        },
    }
}
