//! Diversity/ubiquity margins, the Method of Reflections, and the
//! bipartite eigenvector indices (ECI, PCI, PatCI, TCI, PTCI, TPCI).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{BinaryIncidence, ComplexityIndex, IndexKind, MarginKind, MarginVector, SquareMatrix};
use crate::spectral::{normalize_sign, spectral_select, unit, EigenRule, SpectralResult};

/// Standard deviations at or below this make an index undefined.
pub const MIN_STDEV: f64 = 1e-12;

/// Which side of the incidence matrix the index is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Rows,
    Cols,
}

/// Row sums (diversity) and column sums (ubiquity).
pub fn margins(m: &BinaryIncidence) -> (MarginVector, MarginVector) {
    let (row_kind, col_kind) = MarginKind::for_axes(m.axes());
    (
        MarginVector { labels: m.row_labels().to_vec(), values: m.row_sums(), kind: row_kind },
        MarginVector { labels: m.col_labels().to_vec(), values: m.col_sums(), kind: col_kind },
    )
}

/// State of the reflection sequence after `iteration` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionState {
    pub iteration: usize,
    /// k_{c,n}: row-side vector.
    pub rows: Vec<f64>,
    /// k_{p,n}: column-side vector.
    pub cols: Vec<f64>,
}

/// Runs `n_steps` of
///
/// ```text
/// k_{p,n} = (1/k_{p,0}) Σ_c M_{c,p} k_{c,n-1}
/// k_{c,n} = (1/k_{c,0}) Σ_p M_{c,p} k_{p,n-1}
/// ```
///
/// Both sides update from the previous step's values.
pub fn reflect(m: &BinaryIncidence, n_steps: usize) -> ReflectionState {
    let k_c0 = DVector::from_vec(m.row_sums());
    let k_p0 = DVector::from_vec(m.col_sums());
    let mv = m.values();
    let mut rows = k_c0.clone();
    let mut cols = k_p0.clone();
    for _ in 0..n_steps {
        let next_cols = (mv.transpose() * &rows).component_div(&k_p0);
        let next_rows = (mv * &cols).component_div(&k_c0);
        rows = next_rows;
        cols = next_cols;
    }
    ReflectionState {
        iteration: n_steps,
        rows: rows.iter().copied().collect(),
        cols: cols.iter().copied().collect(),
    }
}

fn inv_diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|x| 1.0 / x)))
}

/// W_{c,c'} = Σ_p M_{c,p} M_{c',p} / (k_{c,0} k_{p,0}).
pub fn w_bipartite(m: &BinaryIncidence) -> SquareMatrix {
    let mv = m.values();
    let values = inv_diag(&m.row_sums()) * mv * inv_diag(&m.col_sums()) * mv.transpose();
    SquareMatrix { labels: m.row_labels().to_vec(), values }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Population standard deviation (divides by N).
fn pop_stdev(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64).sqrt()
}

/// (v - mean(v)) / stdev(v), with the population standard deviation.
pub fn standardize(labels: &[String], values: &[f64], kind: IndexKind) -> Result<ComplexityIndex> {
    assert_eq!(labels.len(), values.len());
    if values.len() < 2 {
        return Err(Error::DegenerateIndex);
    }
    let m = mean(values);
    let sd = pop_stdev(values);
    if sd.is_nan() || sd <= MIN_STDEV {
        return Err(Error::DegenerateIndex);
    }
    Ok(ComplexityIndex {
        labels: labels.to_vec(),
        values: values.iter().map(|v| (v - m) / sd).collect(),
        kind,
        year: None,
    })
}

/// Sign of the covariance between `v` and `anchor`, or 0 when it is
/// indistinguishable from zero.
fn correlation_sign(v: &[f64], anchor: &[f64]) -> f64 {
    let (mv, ma) = (mean(v), mean(anchor));
    let cov: f64 = v.iter().zip(anchor).map(|(x, y)| (x - mv) * (y - ma)).sum();
    let sx = v.iter().map(|x| (x - mv).powi(2)).sum::<f64>().sqrt();
    let sy = anchor.iter().map(|y| (y - ma).powi(2)).sum::<f64>().sqrt();
    if sx == 0.0 || sy == 0.0 {
        return 0.0;
    }
    let r = cov / (sx * sy);
    if r.abs() <= 1e-12 {
        0.0
    } else {
        r.signum()
    }
}

/// Flips `v` so that it correlates nonnegatively with `anchor`; on a tie
/// the first significant entry is made positive.
pub fn orient(v: Vec<f64>, anchor: &[f64]) -> Vec<f64> {
    match correlation_sign(&v, anchor) {
        s if s < 0.0 => v.into_iter().map(|x| -x).collect(),
        s if s > 0.0 => v,
        _ => normalize_sign(v),
    }
}

/// An index together with the spectrum it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexOutcome {
    pub index: ComplexityIndex,
    pub spectrum: SpectralResult,
    /// The unit-norm, sign-fixed eigenvector before standardization.
    pub eigenvector: Vec<f64>,
}

pub fn complexity_index(m: &BinaryIncidence, side: Side, rule: EigenRule) -> Result<ComplexityIndex> {
    complexity_index_detailed(m, side, rule).map(|o| o.index)
}

/// W from [`w_bipartite`], eigenvector by `rule`, sign fixed against the
/// diversity margin of the chosen side, then standardized.
pub fn complexity_index_detailed(m: &BinaryIncidence, side: Side, rule: EigenRule) -> Result<IndexOutcome> {
    let oriented = match side {
        Side::Rows => m.clone(),
        Side::Cols => m.transpose(),
    };
    let w = w_bipartite(&oriented);
    let spectrum = spectral_select(&w.values, rule)?;
    let eigenvector = orient(spectrum.eigenvector.clone(), &oriented.row_sums());
    let index = standardize(oriented.row_labels(), &eigenvector, IndexKind::for_axes(oriented.axes()))?;
    Ok(IndexOutcome { index, spectrum, eigenvector })
}

/// Labels with one value each, in label order.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledVector {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

/// Power iteration on W with the constant component projected out after
/// every step.
///
/// Converges to the mean-free part of the leading nontrivial eigenvector;
/// the result is unit-norm with its first significant entry positive.
pub fn reflect_limit(m: &BinaryIncidence, tol: f64, max_iter: usize) -> Result<LabeledVector> {
    let w = w_bipartite(m).values;
    let n = w.nrows();
    let center = |v: &mut DVector<f64>| {
        let mu = v.mean();
        v.add_scalar_mut(-mu);
    };
    // Fixed, irregular start so the iterate is not orthogonal to the target by symmetry.
    let mut x = DVector::from_fn(n, |i, _| {
        let s = ((i as f64 + 1.0) * 12.9898).sin() * 43_758.545_3;
        s - s.floor() - 0.5
    });
    center(&mut x);
    x /= x.norm();
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let mut y = &w * &x;
        center(&mut y);
        let norm = y.norm();
        if norm < 1e-14 {
            return Err(Error::DegenerateSpectrum("iterate vanished after projection".into()));
        }
        y /= norm;
        residual = (&y - &x).norm().min((&y + &x).norm());
        x = y;
        if residual < tol {
            return Ok(LabeledVector {
                labels: m.row_labels().to_vec(),
                values: normalize_sign(unit(x.iter().copied().collect())),
            });
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual })
}
