//! Pearson and Spearman correlations over index panels: cross sections,
//! lagged series, yearly series, and the rank trend test.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::model::IndexPanel;

/// Fewest paired observations any coefficient is computed from.
pub const MIN_PAIRS: usize = 3;
/// Largest series length for which the trend test p-value is exact.
pub const EXACT_PERMUTATION_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Pearson,
    Spearman,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Pearson => "pearson",
            Method::Spearman => "spearman",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pearson" => Ok(Method::Pearson),
            "spearman" => Ok(Method::Spearman),
            other => Err(format!("unknown correlation method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub method: Method,
    /// Years by which the second series is taken after the first.
    pub lag: i32,
    pub n_pairs: usize,
    pub coefficient: f64,
    pub p_value: Option<f64>,
    pub scope: String,
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < MIN_PAIRS {
        return Err(Error::InsufficientOverlap { needed: MIN_PAIRS, found: x.len() });
    }
    Ok(())
}

/// Sample Pearson product-moment coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of their positions.
pub fn midranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson coefficient of the midrank vectors.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    rank_correlation(&midranks(x), &midranks(y))
}

fn has_ties(ranks: &[f64]) -> bool {
    ranks.iter().any(|r| r.fract() != 0.0) || {
        let mut seen = ranks.to_vec();
        seen.sort_by(f64::total_cmp);
        seen.windows(2).any(|w| w[0] == w[1])
    }
}

/// Without ties, 1 − 6Σd²/(n(n²−1)) is exact on integer ranks, so
/// identical or reversed orderings give exactly ±1.
fn rank_correlation(rx: &[f64], ry: &[f64]) -> Result<f64> {
    if has_ties(rx) || has_ties(ry) {
        return pearson(rx, ry);
    }
    let n = rx.len() as f64;
    let d2: f64 = rx.iter().zip(ry).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(1.0 - 6.0 * d2 / (n * (n * n - 1.0)))
}

pub fn correlate(x: &[f64], y: &[f64], method: Method) -> Result<f64> {
    match method {
        Method::Pearson => pearson(x, y),
        Method::Spearman => spearman(x, y),
    }
}

/// Pairs `a(t)` with `b(t + lag)` over every year where both are present.
///
/// A positive lag means `a` leads `b`.
pub fn lagged_correlate(a: &[(i32, f64)], b: &[(i32, f64)], method: Method, lag: i32) -> Result<CorrelationReport> {
    let b: BTreeMap<i32, f64> = b.iter().copied().collect();
    let (x, y): (Vec<f64>, Vec<f64>) = a
        .iter()
        .filter_map(|&(t, va)| b.get(&(t + lag)).map(|&vb| (va, vb)))
        .unzip();
    if x.len() < MIN_PAIRS {
        return Err(Error::InsufficientOverlap { needed: MIN_PAIRS, found: x.len() });
    }
    Ok(CorrelationReport {
        method,
        lag,
        n_pairs: x.len(),
        coefficient: correlate(&x, &y, method)?,
        p_value: None,
        scope: format!("{} paired years", x.len()),
    })
}

/// Values of both panels for `year` over their common entities, in the
/// first panel's entity order.
fn paired_cross_section(a: &IndexPanel, b: &IndexPanel, year: i32) -> Option<(Vec<f64>, Vec<f64>)> {
    let xa = a.cross_section(year)?;
    let xb: BTreeMap<&str, f64> = b.cross_section(year)?.into_iter().collect();
    Some(xa.into_iter().filter_map(|(e, v)| xb.get(e).map(|&w| (v, w))).unzip())
}

/// Entities present in every panel for `year`.
fn common_entities(panels: &[&IndexPanel], year: i32) -> Result<Vec<String>> {
    let mut iter = panels.iter();
    let first = iter.next().ok_or(Error::InsufficientOverlap { needed: 1, found: 0 })?;
    let mut common: Vec<String> = first
        .cross_section(year)
        .ok_or(Error::InsufficientOverlap { needed: MIN_PAIRS, found: 0 })?
        .into_iter()
        .map(|(e, _)| e.to_string())
        .collect();
    for p in iter {
        let have: BTreeMap<&str, f64> = p
            .cross_section(year)
            .ok_or(Error::InsufficientOverlap { needed: MIN_PAIRS, found: 0 })?
            .into_iter()
            .collect();
        common.retain(|e| have.contains_key(e.as_str()));
    }
    if common.len() < MIN_PAIRS {
        return Err(Error::InsufficientOverlap { needed: MIN_PAIRS, found: common.len() });
    }
    Ok(common)
}

/// Pairwise coefficient matrix for one year, over the entities every
/// panel has a value for. Rows and columns follow the panel order.
pub fn cross_section_correlate(panels: &[&IndexPanel], year: i32, method: Method) -> Result<Vec<Vec<CorrelationReport>>> {
    let common = common_entities(panels, year)?;
    let columns: Vec<Vec<f64>> = panels
        .iter()
        .map(|p| common.iter().map(|e| p.value(e, year).expect("common entity")).collect())
        .collect();
    let scope = format!("{} entities, {year}", common.len());
    let mut out = Vec::with_capacity(panels.len());
    for (i, x) in columns.iter().enumerate() {
        let mut row = Vec::with_capacity(panels.len());
        for (j, y) in columns.iter().enumerate() {
            let coefficient = if i == j { 1.0 } else { correlate(x, y, method)? };
            row.push(CorrelationReport {
                method,
                lag: 0,
                n_pairs: common.len(),
                coefficient,
                p_value: None,
                scope: scope.clone(),
            });
        }
        out.push(row);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct YearCorrelation {
    pub year: i32,
    pub report: Result<CorrelationReport>,
}

/// One cross-sectional coefficient per year the two panels share.
pub fn correlation_series(a: &IndexPanel, b: &IndexPanel, method: Method) -> Vec<YearCorrelation> {
    a.years()
        .iter()
        .copied()
        .filter(|y| b.years().contains(y))
        .map(|year| {
            let report = paired_cross_section(a, b, year)
                .ok_or(Error::InsufficientOverlap { needed: MIN_PAIRS, found: 0 })
                .and_then(|(x, y)| {
                    if x.len() < MIN_PAIRS {
                        return Err(Error::InsufficientOverlap { needed: MIN_PAIRS, found: x.len() });
                    }
                    Ok(CorrelationReport {
                        method,
                        lag: 0,
                        n_pairs: x.len(),
                        coefficient: correlate(&x, &y, method)?,
                        p_value: None,
                        scope: format!("{} entities, {year}", x.len()),
                    })
                });
            YearCorrelation { year, report }
        })
        .collect()
}

/// Spearman's ρ between a series and its time index, with a two-sided p-value.
///
/// The p-value is exact (all permutations) up to [`EXACT_PERMUTATION_MAX`]
/// points and uses the t approximation with n − 2 degrees of freedom above.
pub fn trend_test(series: &[f64]) -> Result<CorrelationReport> {
    let n = series.len();
    if n < MIN_PAIRS {
        return Err(Error::InsufficientOverlap { needed: MIN_PAIRS, found: n });
    }
    let time: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let ranks = midranks(series);
    if ranks.iter().all(|&r| r == ranks[0]) {
        return Err(Error::ZeroVariance);
    }
    let rho = rank_correlation(&time, &ranks)?;
    let p_value = if n <= EXACT_PERMUTATION_MAX {
        exact_permutation_p(&ranks, rho)
    } else {
        t_approximation_p(rho, n)
    };
    Ok(CorrelationReport {
        method: Method::Spearman,
        lag: 0,
        n_pairs: n,
        coefficient: rho,
        p_value: Some(p_value),
        scope: format!("trend over {n} periods"),
    })
}

fn exact_permutation_p(ranks: &[f64], rho: f64) -> f64 {
    let n = ranks.len();
    let mean = (n as f64 + 1.0) / 2.0;
    let centered: Vec<f64> = ranks.iter().map(|r| r - mean).collect();
    let norm = centered.iter().map(|c| c * c).sum::<f64>().sqrt() * {
        let t: f64 = (1..=n).map(|i| (i as f64 - mean).powi(2)).sum();
        t.sqrt()
    };
    let time: Vec<f64> = (1..=n).map(|i| i as f64 - mean).collect();
    let threshold = rho.abs() - 1e-12;

    // Heap's algorithm over all orderings of the ranks.
    let mut perm = centered.clone();
    let mut c = vec![0usize; n];
    let stat = |p: &[f64]| p.iter().zip(&time).map(|(a, b)| a * b).sum::<f64>().abs() / norm;
    let mut hits: u64 = u64::from(stat(&perm) >= threshold);
    let mut total: u64 = 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += 1;
            hits += u64::from(stat(&perm) >= threshold);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

fn t_approximation_p(rho: f64, n: usize) -> f64 {
    if rho.abs() >= 1.0 - 1e-12 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}
