//! Eigenvalue selection for row-stochastic country matrices.
//!
//! The constant vector is always a right eigenvector of a row-stochastic
//! matrix with eigenvalue 1. One copy of that eigenvalue is discarded;
//! the index comes from the eigenvector of the next eigenvalue chosen by
//! an [`EigenRule`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix, Schur};

use crate::error::{Error, Result};

/// Distance from 1 within which an eigenvalue counts as the trivial one.
pub const TRIVIAL_TOL: f64 = 1e-9;
/// Imaginary parts above this mark an eigenvalue as complex.
pub const IMAG_TOL: f64 = 1e-9;
/// Selected eigenvalues with smaller modulus leave the index undefined.
pub const DEGENERATE_TOL: f64 = 1e-9;
/// Moduli closer than this are reported as a near tie.
pub const NEAR_TIE_TOL: f64 = 1e-6;
/// Largest tolerated deviation of a row sum from 1.
pub const STOCHASTIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenRule {
    /// Next eigenvalue by modulus once one copy of 1 is removed.
    #[default]
    SecondLargest,
    /// Largest-modulus eigenvalue strictly below one.
    LargestBelowOne,
}

impl fmt::Display for EigenRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EigenRule::SecondLargest => "second-largest",
            EigenRule::LargestBelowOne => "largest-below-one",
        })
    }
}

impl FromStr for EigenRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "second-largest" | "second_largest" => Ok(EigenRule::SecondLargest),
            "largest-below-one" | "largest_below_one" => Ok(EigenRule::LargestBelowOne),
            other => Err(format!("unknown eigenvalue rule `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    /// All eigenvalues, by descending modulus.
    pub eigenvalues: Vec<Complex<f64>>,
    pub selected: f64,
    /// Real, unit-norm eigenvector of `selected`, first significant entry positive.
    pub eigenvector: Vec<f64>,
    pub rule: EigenRule,
    pub warnings: Vec<String>,
}

fn by_modulus(a: &Complex<f64>, b: &Complex<f64>) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

/// All eigenvalues of a square matrix, by descending modulus.
pub fn eigenvalues(w: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = w.nrows();
    let mut ev: Vec<Complex<f64>> = if n == 1 {
        vec![Complex::new(w[(0, 0)], 0.0)]
    } else {
        Schur::try_new(w.clone(), f64::EPSILON, 100 * n.max(10))
            .ok_or(Error::EigenFailure)?
            .complex_eigenvalues()
            .iter()
            .copied()
            .collect()
    };
    ev.sort_by(by_modulus);
    Ok(ev)
}

/// Full decomposition, trivial-eigenvalue removal, selection by `rule`.
pub fn spectral_select(w: &DMatrix<f64>, rule: EigenRule) -> Result<SpectralResult> {
    let n = w.nrows();
    assert_eq!(n, w.ncols(), "spectral_select needs a square matrix");
    for (row, r) in w.row_iter().enumerate() {
        let sum = r.sum();
        if (sum - 1.0).abs() > STOCHASTIC_TOL || r.iter().any(|&v| v < 0.0) {
            return Err(Error::NotRowStochastic { row, sum });
        }
    }

    let eigenvalues = eigenvalues(w)?;
    let trivial = eigenvalues
        .iter()
        .position(|l| (l - Complex::new(1.0, 0.0)).norm() < TRIVIAL_TOL);
    let candidates: Vec<Complex<f64>> = eigenvalues
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != trivial)
        .map(|(_, l)| *l)
        .filter(|l| match rule {
            EigenRule::SecondLargest => true,
            EigenRule::LargestBelowOne => l.norm() < 1.0 - TRIVIAL_TOL,
        })
        .collect();

    let mut warnings = Vec::new();
    let mut chosen = None;
    for (i, l) in candidates.iter().enumerate() {
        if l.im.abs() > IMAG_TOL {
            warnings.push(format!("skipped complex eigenvalue {:.6}{:+.6}i", l.re, l.im));
            continue;
        }
        chosen = Some((i, l.re));
        break;
    }
    let Some((pos, selected)) = chosen else {
        return Err(if candidates.is_empty() {
            Error::DegenerateSpectrum(format!("no eigenvalue available under rule {rule}"))
        } else {
            Error::NoRealEigenvalue
        });
    };
    if selected.abs() < DEGENERATE_TOL {
        return Err(Error::DegenerateSpectrum(format!(
            "selected eigenvalue {selected:e} is zero"
        )));
    }
    if let Some(next) = candidates.get(pos + 1) {
        if (next.norm() - selected.abs()).abs() < NEAR_TIE_TOL {
            warnings.push(format!(
                "near tie between eigenvalues {selected:.9} and {:.9}",
                next.norm()
            ));
        }
    }

    // When the selected eigenvalue is another copy of 1 its eigenspace
    // contains the constant vector, which must be projected out.
    let multiplicity_of_one = eigenvalues
        .iter()
        .filter(|l| (*l - Complex::new(1.0, 0.0)).norm() < TRIVIAL_TOL)
        .count();
    let eigenvector = if (selected - 1.0).abs() < TRIVIAL_TOL {
        non_constant_null_vector(w, multiplicity_of_one)
    } else {
        null_vector(w, selected)
    };

    Ok(SpectralResult { eigenvalues, selected, eigenvector, rule, warnings })
}

fn shifted(w: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    let n = w.nrows();
    w - DMatrix::<f64>::identity(n, n) * lambda
}

fn null_vector(w: &DMatrix<f64>, lambda: f64) -> Vec<f64> {
    let n = w.nrows();
    let svd = shifted(w, lambda).svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let v: Vec<f64> = v_t.row(n - 1).iter().copied().collect();
    normalize_sign(unit(v))
}

fn non_constant_null_vector(w: &DMatrix<f64>, dim: usize) -> Vec<f64> {
    let n = w.nrows();
    let dim = dim.clamp(2, n);
    let svd = shifted(w, 1.0).svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let basis = DMatrix::from_fn(n, dim, |i, k| v_t[(n - 1 - k, i)]);
    let centered = DMatrix::from_fn(n, dim, |i, k| basis[(i, k)] - basis.column(k).mean());
    let svd = centered.svd(true, false);
    let u = svd.u.expect("requested U");
    normalize_sign(unit(u.column(0).iter().copied().collect()))
}

pub(crate) fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

/// Makes the first entry with magnitude above 1e-12 positive.
pub(crate) fn normalize_sign(mut v: Vec<f64>) -> Vec<f64> {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    v
}
