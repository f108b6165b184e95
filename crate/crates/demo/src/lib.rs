//! Browser bindings for the complexity indices.
//!
//! Each operation is a plain function returning JSON so it can be tested
//! natively; the `#[wasm_bindgen]` wrappers only convert the error type.

use econ_complexity::ingest::read_panel;
use econ_complexity::model::{AxisKind, RawIncidence, ValuedMatrix};
use econ_complexity::pipeline::bipartite_index;
use econ_complexity::reflections::Side;
use econ_complexity::reproduce::{Appendix, CROSS_SECTION_TARGETS};
use econ_complexity::spectral::{EigenRule, SpectralResult};
use econ_complexity::stats::{correlation_series, lagged_correlate, Method};
use econ_complexity::triple_helix::{build_system, thci_detailed};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const ECI_CSV: &str = include_str!("../../../fixtures/appendix/eci.csv");
const PATCI_CSV: &str = include_str!("../../../fixtures/appendix/patci.csv");
const THCI_CSV: &str = include_str!("../../../fixtures/appendix/thci.csv");

/// A labelled matrix read from `label,<col>,<col>,…` CSV text.
struct Grid {
    rows: Vec<String>,
    cols: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl Grid {
    fn row_refs(&self) -> Vec<&str> {
        self.rows.iter().map(String::as_str).collect()
    }

    fn col_refs(&self) -> Vec<&str> {
        self.cols.iter().map(String::as_str).collect()
    }
}

fn parse_grid(text: &str) -> Result<Grid, String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let cols: Vec<String> = rdr.headers().map_err(|e| e.to_string())?.iter().skip(1).map(str::to_string).collect();
    if cols.is_empty() {
        return Err("the header needs at least one column label".into());
    }
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let line = n + 2;
        if rec.len() != cols.len() + 1 {
            return Err(format!("line {line}: expected {} fields, found {}", cols.len() + 1, rec.len()));
        }
        rows.push(rec[0].to_string());
        let mut row = Vec::with_capacity(cols.len());
        for f in rec.iter().skip(1) {
            let v: f64 = if f.is_empty() { 0.0 } else { f.parse().map_err(|_| format!("line {line}: `{f}` is not a number"))? };
            row.push(v);
        }
        values.push(row);
    }
    if rows.is_empty() {
        return Err("no data rows".into());
    }
    Ok(Grid { rows, cols, values })
}

fn parse_rule(rule: &str) -> Result<EigenRule, String> {
    rule.parse()
}

#[derive(Serialize)]
struct Eigen {
    re: f64,
    im: f64,
}

fn leading(s: &SpectralResult) -> Vec<Eigen> {
    s.eigenvalues.iter().take(8).map(|z| Eigen { re: z.re, im: z.im }).collect()
}

#[derive(Serialize)]
struct EciResult {
    labels: Vec<String>,
    values: Vec<f64>,
    eigenvalue: f64,
    eigenvalues: Vec<Eigen>,
    warnings: Vec<String>,
    products: Vec<String>,
    incidence: Vec<Vec<u8>>,
    removed_rows: Vec<String>,
    removed_cols: Vec<String>,
}

/// ECI from a country by product value matrix.
pub fn eci_json(csv_text: &str, threshold: f64, rule: &str) -> Result<String, String> {
    let g = parse_grid(csv_text)?;
    let x = ValuedMatrix::from_rows(&g.row_refs(), &g.col_refs(), &g.values, (AxisKind::Country, AxisKind::Product))
        .map_err(|e| e.to_string())?;
    let run = bipartite_index(&x, threshold, Side::Rows, parse_rule(rule)?).map_err(|e| e.to_string())?;
    let m = &run.incidence;
    let result = EciResult {
        labels: run.outcome.index.labels().to_vec(),
        values: run.outcome.index.values().to_vec(),
        eigenvalue: run.outcome.spectrum.selected,
        eigenvalues: leading(&run.outcome.spectrum),
        warnings: run.outcome.spectrum.warnings.clone(),
        products: m.col_labels().to_vec(),
        incidence: m.values().row_iter().map(|r| r.iter().map(|&v| v as u8).collect()).collect(),
        removed_rows: run.removed_rows,
        removed_cols: run.removed_cols,
    };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

fn incidence(text: &str, axes: (AxisKind, AxisKind)) -> Result<RawIncidence, String> {
    let g = parse_grid(text)?;
    let mut cells = Vec::with_capacity(g.values.len());
    for row in &g.values {
        let mut out = Vec::with_capacity(row.len());
        for &v in row {
            match v {
                0.0 => out.push(0),
                1.0 => out.push(1),
                _ => return Err(format!("`{v}` is not 0 or 1")),
            }
        }
        cells.push(out);
    }
    RawIncidence::from_rows(&g.row_refs(), &g.col_refs(), &cells, axes).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ThciResult {
    labels: Vec<String>,
    values: Vec<f64>,
    k_plus: Vec<f64>,
    k_minus: Vec<f64>,
    clockwise: f64,
    counterclockwise: f64,
    clockwise_eigenvalues: Vec<Eigen>,
    counterclockwise_eigenvalues: Vec<Eigen>,
    removed_countries: Vec<String>,
    removed_products: Vec<String>,
    removed_technologies: Vec<String>,
}

/// THCI from three 0/1 matrices: country by product, country by
/// technology and product by technology.
pub fn thci_json(cp: &str, ct: &str, pt: &str, rule: &str) -> Result<String, String> {
    use AxisKind::*;
    let built = build_system(
        incidence(cp, (Country, Product))?,
        incidence(ct, (Country, Technology))?,
        incidence(pt, (Product, Technology))?,
    )
    .map_err(|e| e.to_string())?;
    let o = thci_detailed(&built.system, parse_rule(rule)?).map_err(|e| e.to_string())?;
    let result = ThciResult {
        labels: o.index.labels().to_vec(),
        values: o.index.values().to_vec(),
        clockwise: o.clockwise.selected,
        counterclockwise: o.counterclockwise.selected,
        clockwise_eigenvalues: leading(&o.clockwise),
        counterclockwise_eigenvalues: leading(&o.counterclockwise),
        k_plus: o.k_plus,
        k_minus: o.k_minus,
        removed_countries: built.removed.countries,
        removed_products: built.removed.products,
        removed_technologies: built.removed.technologies,
    };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

fn bundled() -> Result<Appendix, String> {
    let load = |text: &str, kind: &str| read_panel(text.as_bytes(), kind).map_err(|e| e.to_string());
    Ok(Appendix { eci: load(ECI_CSV, "ECI")?, patci: load(PATCI_CSV, "PatCI")?, thci: load(THCI_CSV, "THCI")? })
}

#[derive(Serialize)]
struct SeriesLine {
    pair: String,
    years: Vec<i32>,
    values: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct LagRow {
    follow: String,
    lag: i32,
    n: usize,
    coefficient: Option<f64>,
}

#[derive(Serialize)]
struct AppendixResult {
    entities: Vec<String>,
    series: Vec<SeriesLine>,
    lags: Vec<LagRow>,
}

/// Yearly cross-sectional correlations of the bundled panels, and the
/// lagged correlations of one entity's THCI series with its ECI and PatCI.
pub fn appendix_json(method: &str, entity: &str, max_lag: i32) -> Result<String, String> {
    let method: Method = method.parse()?;
    let app = bundled()?;
    let series = CROSS_SECTION_TARGETS
        .iter()
        .map(|&(a, b, _)| {
            let s = correlation_series(app.panel(a), app.panel(b), method);
            SeriesLine {
                pair: format!("{a}~{b}"),
                years: s.iter().map(|y| y.year).collect(),
                values: s.iter().map(|y| y.report.as_ref().ok().map(|r| r.coefficient)).collect(),
            }
        })
        .collect();
    let lead = app.thci.series(entity).ok_or_else(|| format!("unknown entity `{entity}`"))?;
    let mut lags = Vec::new();
    for (name, panel) in [("ECI", &app.eci), ("PatCI", &app.patci)] {
        let follow = panel.series(entity).ok_or_else(|| format!("unknown entity `{entity}`"))?;
        for lag in -max_lag..=max_lag {
            let r = lagged_correlate(&lead, &follow, method, lag).ok();
            lags.push(LagRow {
                follow: name.into(),
                lag,
                n: r.as_ref().map_or(0, |r| r.n_pairs),
                coefficient: r.map(|r| r.coefficient),
            });
        }
    }
    let result = AppendixResult { entities: app.eci.entities().to_vec(), series, lags };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn eci(csv_text: &str, threshold: f64, rule: &str) -> Result<String, JsError> {
    eci_json(csv_text, threshold, rule).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn thci(cp: &str, ct: &str, pt: &str, rule: &str) -> Result<String, JsError> {
    thci_json(cp, ct, pt, rule).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn appendix(method: &str, entity: &str, max_lag: i32) -> Result<String, JsError> {
    appendix_json(method, entity, max_lag).map_err(|e| JsError::new(&e))
}
