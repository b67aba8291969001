//! Table, data and plot writers.
//!
//! Everything is rendered to a `String` first so the output is a pure
//! function of the rows; the `write_*` helpers only add file I/O.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use aisw::exact::BracketSource;
use serde::{Deserialize, Serialize};

use crate::compare::SpectrumRow;
use crate::config::RunConfig;

pub const CSV_HEADER: [&str; 11] = [
    "n",
    "E_exact",
    "E_pt2",
    "E_po",
    "abs_err_pt",
    "abs_err_po",
    "rel_err_pt",
    "rel_err_po",
    "below_step",
    "pt_convergent",
    "bracket_source",
];

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("nothing to write: no rows")]
    NoRows,
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed CSV at record {record}: {reason}")]
    Parse { record: usize, reason: String },
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn require_rows(rows: &[SpectrumRow]) -> Result<(), EmitError> {
    if rows.is_empty() {
        Err(EmitError::NoRows)
    } else {
        Ok(())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), EmitError> {
    fs::write(path, contents).map_err(|source| EmitError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// CSV table with 17 significant digits and `\n` line endings.
pub fn render_csv(rows: &[SpectrumRow]) -> Result<String, EmitError> {
    require_rows(rows)?;
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(CSV_HEADER)?;
    for r in rows {
        writer.write_record([
            r.n.to_string(),
            num(r.e_exact),
            num(r.e_pt2),
            num(r.e_po),
            num(r.abs_err_pt),
            num(r.abs_err_po),
            num(r.rel_err_pt),
            num(r.rel_err_po),
            r.below_step.to_string(),
            r.pt_convergent.to_string(),
            r.bracket_label().to_string(),
        ])?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV fields are ASCII"))
}

pub fn write_csv(rows: &[SpectrumRow], path: &Path) -> Result<(), EmitError> {
    write_file(path, &render_csv(rows)?)
}

/// Reads a table written by [`render_csv`]. Failed rows come back without
/// their solver message, which the CSV does not carry.
pub fn parse_csv(text: &str) -> Result<Vec<SpectrumRow>, EmitError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(EmitError::Parse {
            record: 0,
            reason: format!("unexpected header {header:?}"),
        });
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |reason: String| EmitError::Parse {
            record: idx + 1,
            reason,
        };
        let field = |i: usize| {
            record
                .get(i)
                .ok_or_else(|| bad(format!("missing column {}", CSV_HEADER[i])))
        };
        let float = |i: usize| -> Result<f64, EmitError> {
            let s = field(i)?;
            s.parse()
                .map_err(|_| bad(format!("{}: not a number: {s:?}", CSV_HEADER[i])))
        };
        let flag = |i: usize| -> Result<bool, EmitError> {
            let s = field(i)?;
            s.parse()
                .map_err(|_| bad(format!("{}: not a boolean: {s:?}", CSV_HEADER[i])))
        };
        let n = field(0)?
            .parse()
            .map_err(|_| bad("n: not an integer".into()))?;
        let source = match field(10)? {
            "failed" => None,
            s => Some(s.parse::<BracketSource>().map_err(bad)?),
        };
        rows.push(SpectrumRow {
            n,
            e_exact: float(1)?,
            e_pt2: float(2)?,
            e_po: float(3)?,
            abs_err_pt: float(4)?,
            abs_err_po: float(5)?,
            rel_err_pt: float(6)?,
            rel_err_po: float(7)?,
            below_step: flag(8)?,
            pt_convergent: flag(9)?,
            error: source.is_none().then(|| "failed".to_string()),
            bracket_source: source,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonConfig {
    pub a: f64,
    pub v0: f64,
    pub mass: f64,
    pub hbar: f64,
    pub alpha: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub tol_bisect: f64,
    pub tol_sum: f64,
}

/// One row; numbers are `null` where the CSV has `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonRow {
    pub n: usize,
    #[serde(rename = "E_exact")]
    pub e_exact: Option<f64>,
    #[serde(rename = "E_pt2")]
    pub e_pt2: Option<f64>,
    #[serde(rename = "E_po")]
    pub e_po: Option<f64>,
    pub abs_err_pt: Option<f64>,
    pub abs_err_po: Option<f64>,
    pub rel_err_pt: Option<f64>,
    pub rel_err_po: Option<f64>,
    pub below_step: bool,
    pub pt_convergent: bool,
    pub bracket_source: String,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonDocument {
    pub config: JsonConfig,
    pub rows: Vec<JsonRow>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn json_document(run: &RunConfig, rows: &[SpectrumRow]) -> JsonDocument {
    let w = &run.well;
    JsonDocument {
        config: JsonConfig {
            a: w.a(),
            v0: w.v0(),
            mass: w.mass(),
            hbar: w.hbar(),
            alpha: w.alpha(),
            n_min: run.n_min,
            n_max: run.n_max,
            tol_bisect: run.tol_bisect,
            tol_sum: run.tol_sum,
        },
        rows: rows
            .iter()
            .map(|r| JsonRow {
                n: r.n,
                e_exact: finite(r.e_exact),
                e_pt2: finite(r.e_pt2),
                e_po: finite(r.e_po),
                abs_err_pt: finite(r.abs_err_pt),
                abs_err_po: finite(r.abs_err_po),
                rel_err_pt: finite(r.rel_err_pt),
                rel_err_po: finite(r.rel_err_po),
                below_step: r.below_step,
                pt_convergent: r.pt_convergent,
                bracket_source: r.bracket_label().to_string(),
                error: r.error.clone(),
            })
            .collect(),
    }
}

pub fn render_json(run: &RunConfig, rows: &[SpectrumRow]) -> Result<String, EmitError> {
    require_rows(rows)?;
    let mut text = serde_json::to_string_pretty(&json_document(run, rows))?;
    text.push('\n');
    Ok(text)
}

pub fn write_json(run: &RunConfig, rows: &[SpectrumRow], path: &Path) -> Result<(), EmitError> {
    write_file(path, &render_json(run, rows)?)
}

/// Whitespace-separated columns for gnuplot: `n E_exact E_pt2 E_po`.
pub fn render_dat(rows: &[SpectrumRow]) -> Result<String, EmitError> {
    require_rows(rows)?;
    let mut out = String::from("# n E_exact E_pt2 E_po\n");
    for r in rows {
        writeln!(
            out,
            "{} {} {} {}",
            r.n,
            num(r.e_exact),
            num(r.e_pt2),
            num(r.e_po)
        )
        .unwrap();
    }
    Ok(out)
}

pub fn write_dat(rows: &[SpectrumRow], path: &Path) -> Result<(), EmitError> {
    write_file(path, &render_dat(rows)?)
}

const SVG_WIDTH: f64 = 760.0;
const SVG_HEIGHT: f64 = 520.0;
const PLOT_LEFT: f64 = 80.0;
const PLOT_RIGHT: f64 = 600.0;
const PLOT_TOP: f64 = 40.0;
const PLOT_BOTTOM: f64 = 460.0;
const MARKER: f64 = 4.5;

type DrawMarker = fn(&mut String, &str, f64, f64);

/// Linear map from data to pixels over a range padded by 5% on each side.
struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn padded(min: f64, max: f64, px_lo: f64, px_hi: f64) -> Self {
        let span = if max > min {
            max - min
        } else {
            min.abs().max(1.0)
        };
        Self {
            lo: min - 0.05 * span,
            hi: max + 0.05 * span,
            px_lo,
            px_hi,
        }
    }

    fn map(&self, x: f64) -> f64 {
        self.px_lo + (x - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }

    /// Round tick positions, about six of them.
    fn ticks(&self) -> Vec<f64> {
        let raw = (self.hi - self.lo) / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }
}

fn tick_label(x: f64) -> String {
    if x == x.round() && x.abs() < 1e6 {
        format!("{}", x as i64)
    } else {
        format!("{x:.3}")
    }
}

fn square(out: &mut String, class: &str, x: f64, y: f64) {
    writeln!(
        out,
        r#"  <rect class="{class}" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x - MARKER,
        y - MARKER,
        2.0 * MARKER,
        2.0 * MARKER
    )
    .unwrap();
}

fn circle(out: &mut String, class: &str, x: f64, y: f64) {
    writeln!(
        out,
        r#"  <circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="{MARKER:.2}" fill="none" stroke="black"/>"#
    )
    .unwrap();
}

fn diamond(out: &mut String, class: &str, x: f64, y: f64) {
    let d = MARKER * 1.2;
    writeln!(
        out,
        r#"  <polygon class="{class}" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="black" stroke="black"/>"#,
        x,
        y - d,
        x + d,
        y,
        x,
        y + d,
        x - d,
        y
    )
    .unwrap();
}

/// Scatter of the three energy columns against `n`: open squares for the
/// exact levels, open circles for perturbation theory, filled diamonds for the
/// periodic-orbit result. Rows with a non-finite energy get no marker.
pub fn render_svg(run: &RunConfig, rows: &[SpectrumRow]) -> Result<String, EmitError> {
    require_rows(rows)?;
    let energies = rows
        .iter()
        .flat_map(|r| [r.e_exact, r.e_pt2, r.e_po])
        .filter(|e| e.is_finite());
    let (e_min, e_max) = energies.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
        (lo.min(e), hi.max(e))
    });
    let (e_min, e_max) = if e_min.is_finite() {
        (e_min, e_max)
    } else {
        (0.0, 1.0)
    };
    let n_min = rows.first().map_or(1, |r| r.n) as f64;
    let n_max = rows.last().map_or(1, |r| r.n) as f64;
    let xa = Axis::padded(n_min, n_max, PLOT_LEFT, PLOT_RIGHT);
    let ya = Axis::padded(e_min, e_max, PLOT_BOTTOM, PLOT_TOP);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <rect class="frame" x="{PLOT_LEFT}" y="{PLOT_TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        PLOT_RIGHT - PLOT_LEFT,
        PLOT_BOTTOM - PLOT_TOP
    )
    .unwrap();

    for t in xa.ticks() {
        let x = xa.map(t);
        writeln!(
            out,
            r#"  <line class="tick" x1="{x:.2}" y1="{PLOT_BOTTOM}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            PLOT_BOTTOM + 5.0
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            PLOT_BOTTOM + 19.0,
            tick_label(t)
        )
        .unwrap();
    }
    for t in ya.ticks() {
        let y = ya.map(t);
        writeln!(
            out,
            r#"  <line class="tick" x1="{:.2}" y1="{y:.2}" x2="{PLOT_LEFT}" y2="{y:.2}" stroke="black"/>"#,
            PLOT_LEFT - 5.0
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            PLOT_LEFT - 8.0,
            y + 4.0,
            tick_label(t)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#,
        0.5 * (PLOT_LEFT + PLOT_RIGHT),
        PLOT_BOTTOM + 42.0
    )
    .unwrap();
    writeln!(
        out,
        r#"  <text x="22" y="{:.2}" text-anchor="middle" transform="rotate(-90 22 {:.2})">E</text>"#,
        0.5 * (PLOT_TOP + PLOT_BOTTOM),
        0.5 * (PLOT_TOP + PLOT_BOTTOM)
    )
    .unwrap();
    writeln!(
        out,
        r#"  <text x="{:.2}" y="24" text-anchor="middle">alpha = {}</text>"#,
        0.5 * (PLOT_LEFT + PLOT_RIGHT),
        run.well.alpha()
    )
    .unwrap();

    let v0 = run.well.v0();
    if v0 > ya.lo && v0 < ya.hi {
        let y = ya.map(v0);
        writeln!(
            out,
            r#"  <line class="step-level" x1="{PLOT_LEFT}" y1="{y:.2}" x2="{PLOT_RIGHT}" y2="{y:.2}" stroke="gray" stroke-dasharray="4 3"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" fill="gray">V0</text>"#,
            PLOT_RIGHT + 4.0,
            y + 4.0
        )
        .unwrap();
    }

    for r in rows {
        let x = xa.map(r.n as f64);
        if r.e_exact.is_finite() {
            square(&mut out, "marker exact", x, ya.map(r.e_exact));
        }
        if r.e_pt2.is_finite() {
            circle(&mut out, "marker pt", x, ya.map(r.e_pt2));
        }
        if r.e_po.is_finite() {
            diamond(&mut out, "marker po", x, ya.map(r.e_po));
        }
    }

    let lx = PLOT_RIGHT + 40.0;
    let entries: [(&str, DrawMarker); 3] = [
        ("exact", square),
        ("perturbation", circle),
        ("periodic orbit", diamond),
    ];
    for (i, (label, draw)) in entries.iter().enumerate() {
        let y = PLOT_TOP + 20.0 + 22.0 * i as f64;
        draw(&mut out, "legend-symbol", lx, y);
        writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}">{label}</text>"#,
            lx + 12.0,
            y + 4.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn write_svg(run: &RunConfig, rows: &[SpectrumRow], path: &Path) -> Result<(), EmitError> {
    write_file(path, &render_svg(run, rows)?)
}
