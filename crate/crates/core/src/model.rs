//! Labeled matrices and vectors shared by every computation.
//!
//! Every matrix carries its row and column labels and the kind of entity
//! on each axis (country, product, technology). Values are dense; the
//! matrices this crate deals with are at most a few hundred by a few
//! thousand.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxisKind {
    Country,
    Product,
    Technology,
}

impl fmt::Display for AxisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxisKind::Country => "country",
            AxisKind::Product => "product",
            AxisKind::Technology => "technology",
        })
    }
}

/// One of the two axes of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn check_shape(
    row_labels: &[String],
    col_labels: &[String],
    values: &DMatrix<f64>,
    axes: (AxisKind, AxisKind),
) -> Result<()> {
    if values.nrows() != row_labels.len() || values.ncols() != col_labels.len() {
        return Err(Error::DimensionMismatch {
            rows: values.nrows(),
            cols: values.ncols(),
            row_labels: row_labels.len(),
            col_labels: col_labels.len(),
        });
    }
    if axes.0 == axes.1 {
        return Err(Error::InvalidAxes(format!("({}, {})", axes.0, axes.1)));
    }
    check_labels(row_labels)?;
    check_labels(col_labels)
}

fn rows_to_matrix<T: Copy + Into<f64>>(rows: &[Vec<T>], ncols: usize) -> Result<DMatrix<f64>> {
    for r in rows {
        if r.len() != ncols {
            return Err(Error::DimensionMismatch {
                rows: rows.len(),
                cols: r.len(),
                row_labels: rows.len(),
                col_labels: ncols,
            });
        }
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j].into()))
}

pub(crate) fn owned(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

macro_rules! labeled_accessors {
    ($t:ty) => {
        impl $t {
            pub fn row_labels(&self) -> &[String] {
                &self.row_labels
            }

            pub fn col_labels(&self) -> &[String] {
                &self.col_labels
            }

            pub fn values(&self) -> &DMatrix<f64> {
                &self.values
            }

            pub fn axes(&self) -> (AxisKind, AxisKind) {
                self.axes
            }

            pub fn nrows(&self) -> usize {
                self.values.nrows()
            }

            pub fn ncols(&self) -> usize {
                self.values.ncols()
            }

            pub fn labels(&self, axis: Axis) -> &[String] {
                match axis {
                    Axis::Rows => &self.row_labels,
                    Axis::Cols => &self.col_labels,
                }
            }

            pub fn row_sums(&self) -> Vec<f64> {
                self.values.row_iter().map(|r| r.sum()).collect()
            }

            pub fn col_sums(&self) -> Vec<f64> {
                self.values.column_iter().map(|c| c.sum()).collect()
            }
        }
    };
}

/// Nonnegative export values or patent counts, countries by categories.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuedMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    values: DMatrix<f64>,
    axes: (AxisKind, AxisKind),
}

labeled_accessors!(ValuedMatrix);

impl ValuedMatrix {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        values: DMatrix<f64>,
        axes: (AxisKind, AxisKind),
    ) -> Result<Self> {
        check_shape(&row_labels, &col_labels, &values, axes)?;
        for i in 0..values.nrows() {
            for j in 0..values.ncols() {
                let v = values[(i, j)];
                if !v.is_finite() {
                    return Err(Error::InvalidValue { row: i, col: j, value: v, reason: "not finite" });
                }
                if v < 0.0 {
                    return Err(Error::InvalidValue { row: i, col: j, value: v, reason: "negative" });
                }
            }
        }
        Ok(ValuedMatrix { row_labels, col_labels, values, axes })
    }

    pub fn from_rows(
        row_labels: &[&str],
        col_labels: &[&str],
        rows: &[Vec<f64>],
        axes: (AxisKind, AxisKind),
    ) -> Result<Self> {
        let values = rows_to_matrix(rows, col_labels.len())?;
        Self::new(owned(row_labels), owned(col_labels), values, axes)
    }

    pub fn transpose(&self) -> Self {
        ValuedMatrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            values: self.values.transpose(),
            axes: (self.axes.1, self.axes.0),
        }
    }

    /// Same labels, new values. Used for derived matrices such as RCA.
    pub(crate) fn with_values(&self, values: DMatrix<f64>) -> Self {
        ValuedMatrix { values, ..self.clone() }
    }
}

fn check_binary(values: &DMatrix<f64>) -> Result<()> {
    for i in 0..values.nrows() {
        for j in 0..values.ncols() {
            let v = values[(i, j)];
            if v != 0.0 && v != 1.0 {
                return Err(Error::InvalidValue { row: i, col: j, value: v, reason: "not 0 or 1" });
            }
        }
    }
    Ok(())
}

/// A 0/1 matrix that may still contain all-zero rows or columns.
///
/// This is the input to [`prune`]; computations take the pruned
/// [`BinaryIncidence`] instead.
#[derive(Debug, Clone, PartialEq)]
pub struct RawIncidence {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    values: DMatrix<f64>,
    axes: (AxisKind, AxisKind),
}

labeled_accessors!(RawIncidence);

impl RawIncidence {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        values: DMatrix<f64>,
        axes: (AxisKind, AxisKind),
    ) -> Result<Self> {
        check_shape(&row_labels, &col_labels, &values, axes)?;
        check_binary(&values)?;
        Ok(RawIncidence { row_labels, col_labels, values, axes })
    }

    pub fn from_rows(
        row_labels: &[&str],
        col_labels: &[&str],
        rows: &[Vec<u8>],
        axes: (AxisKind, AxisKind),
    ) -> Result<Self> {
        let values = rows_to_matrix(rows, col_labels.len())?;
        Self::new(owned(row_labels), owned(col_labels), values, axes)
    }

    pub fn transpose(&self) -> Self {
        RawIncidence {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            values: self.values.transpose(),
            axes: (self.axes.1, self.axes.0),
        }
    }

    pub fn prune(&self) -> Result<Pruned> {
        prune(self)
    }
}

impl From<BinaryIncidence> for RawIncidence {
    fn from(m: BinaryIncidence) -> Self {
        RawIncidence {
            row_labels: m.row_labels,
            col_labels: m.col_labels,
            values: m.values,
            axes: m.axes,
        }
    }
}

impl From<&BinaryIncidence> for RawIncidence {
    fn from(m: &BinaryIncidence) -> Self {
        m.clone().into()
    }
}

/// A 0/1 matrix with no all-zero row and no all-zero column.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryIncidence {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    values: DMatrix<f64>,
    axes: (AxisKind, AxisKind),
}

labeled_accessors!(BinaryIncidence);

impl BinaryIncidence {
    /// Errors with [`Error::ZeroMargin`] if any row or column is all zero.
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        values: DMatrix<f64>,
        axes: (AxisKind, AxisKind),
    ) -> Result<Self> {
        let raw = RawIncidence::new(row_labels, col_labels, values, axes)?;
        if raw.nrows() == 0 || raw.ncols() == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some(i) = raw.row_sums().iter().position(|&s| s == 0.0) {
            return Err(Error::ZeroMargin { axis: "row", label: raw.row_labels[i].clone() });
        }
        if let Some(j) = raw.col_sums().iter().position(|&s| s == 0.0) {
            return Err(Error::ZeroMargin { axis: "column", label: raw.col_labels[j].clone() });
        }
        Ok(BinaryIncidence {
            row_labels: raw.row_labels,
            col_labels: raw.col_labels,
            values: raw.values,
            axes: raw.axes,
        })
    }

    pub fn from_rows(
        row_labels: &[&str],
        col_labels: &[&str],
        rows: &[Vec<u8>],
        axes: (AxisKind, AxisKind),
    ) -> Result<Self> {
        let values = rows_to_matrix(rows, col_labels.len())?;
        Self::new(owned(row_labels), owned(col_labels), values, axes)
    }

    pub fn transpose(&self) -> Self {
        BinaryIncidence {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            values: self.values.transpose(),
            axes: (self.axes.1, self.axes.0),
        }
    }

    /// Reorders rows and columns. Both index lists must be permutations.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), self.nrows());
        assert_eq!(cols.len(), self.ncols());
        let raw = RawIncidence::from(self).select(rows, cols);
        BinaryIncidence {
            row_labels: raw.row_labels,
            col_labels: raw.col_labels,
            values: raw.values,
            axes: raw.axes,
        }
    }

    /// Count of 1-entries.
    pub fn ones(&self) -> usize {
        self.values.iter().filter(|&&v| v == 1.0).count()
    }
}

/// Output of [`prune`]: the surviving matrix and the labels that were dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Pruned {
    pub matrix: BinaryIncidence,
    pub removed_rows: Vec<String>,
    pub removed_cols: Vec<String>,
}

/// Removes all-zero rows and columns until none remain.
///
/// Surviving labels keep their original order.
pub fn prune(m: &RawIncidence) -> Result<Pruned> {
    let mut rows: Vec<usize> = (0..m.nrows()).collect();
    let mut cols: Vec<usize> = (0..m.ncols()).collect();
    loop {
        let keep_rows: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&i| cols.iter().any(|&j| m.values[(i, j)] != 0.0))
            .collect();
        let keep_cols: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&j| keep_rows.iter().any(|&i| m.values[(i, j)] != 0.0))
            .collect();
        let stable = keep_rows.len() == rows.len() && keep_cols.len() == cols.len();
        rows = keep_rows;
        cols = keep_cols;
        if stable || rows.is_empty() || cols.is_empty() {
            break;
        }
    }
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let removed = |labels: &[String], kept: &[usize]| -> Vec<String> {
        let kept: BTreeSet<usize> = kept.iter().copied().collect();
        labels
            .iter()
            .enumerate()
            .filter(|(i, _)| !kept.contains(i))
            .map(|(_, l)| l.clone())
            .collect()
    };
    let removed_rows = removed(&m.row_labels, &rows);
    let removed_cols = removed(&m.col_labels, &cols);
    let kept = m.select(&rows, &cols);
    let matrix = BinaryIncidence::new(kept.row_labels, kept.col_labels, kept.values, kept.axes)?;
    Ok(Pruned { matrix, removed_rows, removed_cols })
}

/// Matrices whose rows and columns can be restricted by index.
pub trait Select: Sized {
    fn labels_on(&self, axis: Axis) -> &[String];

    /// Keeps the given rows and columns, in the given order.
    fn select(&self, rows: &[usize], cols: &[usize]) -> Self;

    fn select_labels(&self, rows: &[String], cols: &[String]) -> Self {
        let index = |axis: Axis, wanted: &[String]| -> Vec<usize> {
            let have = self.labels_on(axis);
            wanted
                .iter()
                .map(|w| have.iter().position(|h| h == w).expect("label present"))
                .collect()
        };
        let r = index(Axis::Rows, rows);
        let c = index(Axis::Cols, cols);
        self.select(&r, &c)
    }
}

macro_rules! impl_select {
    ($t:ty) => {
        impl Select for $t {
            fn labels_on(&self, axis: Axis) -> &[String] {
                self.labels(axis)
            }

            fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
                Self {
                    row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
                    col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
                    values: DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
                        self.values[(rows[i], cols[j])]
                    }),
                    axes: self.axes,
                }
            }
        }
    };
}

impl_select!(ValuedMatrix);
impl_select!(RawIncidence);

/// Sorted intersection of two label lists.
pub fn intersect_labels(a: &[String], b: &[String]) -> Vec<String> {
    let a: BTreeSet<&String> = a.iter().collect();
    let b: BTreeSet<&String> = b.iter().collect();
    a.intersection(&b).map(|s| (*s).clone()).collect()
}

/// Restricts `a` and `b` to the shared labels of the paired axes, sorted
/// lexicographically. The unpaired axes are left as they are.
pub fn align<A: Select, B: Select>(a: &A, a_axis: Axis, b: &B, b_axis: Axis) -> Result<(A, B)> {
    let shared = intersect_labels(a.labels_on(a_axis), b.labels_on(b_axis));
    if shared.is_empty() {
        return Err(Error::NoOverlap {
            axis: format!("{a_axis:?}/{b_axis:?}").to_lowercase(),
        });
    }
    let restrict = |m_rows: &[String], m_cols: &[String], axis: Axis| -> (Vec<String>, Vec<String>) {
        match axis {
            Axis::Rows => (shared.clone(), m_cols.to_vec()),
            Axis::Cols => (m_rows.to_vec(), shared.clone()),
        }
    };
    let (ar, ac) = restrict(a.labels_on(Axis::Rows), a.labels_on(Axis::Cols), a_axis);
    let (br, bc) = restrict(b.labels_on(Axis::Rows), b.labels_on(Axis::Cols), b_axis);
    Ok((a.select_labels(&ar, &ac), b.select_labels(&br, &bc)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginKind {
    /// k_{c,0}
    CountryDiversity,
    /// k_{p,0}
    ProductUbiquity,
    /// ρ_{c,0}
    CountryTechDiversity,
    /// ρ_{t,0}
    TechUbiquity,
    /// η_{p,0}
    ProductSophistication,
    /// η_{t,0}
    TechProductUbiquity,
}

impl MarginKind {
    /// (row margin, column margin) for a matrix with these axes.
    pub fn for_axes(axes: (AxisKind, AxisKind)) -> (MarginKind, MarginKind) {
        use AxisKind::*;
        use MarginKind::*;
        match axes {
            (Country, Product) => (CountryDiversity, ProductUbiquity),
            (Product, Country) => (ProductUbiquity, CountryDiversity),
            (Country, Technology) => (CountryTechDiversity, TechUbiquity),
            (Technology, Country) => (TechUbiquity, CountryTechDiversity),
            (Product, Technology) => (ProductSophistication, TechProductUbiquity),
            (Technology, Product) => (TechProductUbiquity, ProductSophistication),
            _ => unreachable!("matrix constructors reject equal axis kinds"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginVector {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub kind: MarginKind,
}

impl MarginVector {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Eci,
    Pci,
    PatCi,
    Tci,
    Ptci,
    Tpci,
    Thci,
}

impl IndexKind {
    /// The index obtained from the row side of a matrix with these axes.
    pub fn for_axes(axes: (AxisKind, AxisKind)) -> IndexKind {
        use AxisKind::*;
        match axes {
            (Country, Product) => IndexKind::Eci,
            (Product, Country) => IndexKind::Pci,
            (Country, Technology) => IndexKind::PatCi,
            (Technology, Country) => IndexKind::Tci,
            (Product, Technology) => IndexKind::Ptci,
            (Technology, Product) => IndexKind::Tpci,
            _ => unreachable!("matrix constructors reject equal axis kinds"),
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Eci => "ECI",
            IndexKind::Pci => "PCI",
            IndexKind::PatCi => "PatCI",
            IndexKind::Tci => "TCI",
            IndexKind::Ptci => "PTCI",
            IndexKind::Tpci => "TPCI",
            IndexKind::Thci => "THCI",
        })
    }
}

/// A standardized index: mean 0, population standard deviation 1.
///
/// Only [`crate::reflections::standardize`] builds these.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityIndex {
    pub(crate) labels: Vec<String>,
    pub(crate) values: Vec<f64>,
    pub(crate) kind: IndexKind,
    pub(crate) year: Option<i32>,
}

impl ComplexityIndex {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> IndexKind {
        self.kind
    }

    pub fn year(&self) -> Option<i32> {
        self.year
    }

    pub fn with_year(mut self, year: i32) -> Self {
        self.year = Some(year);
        self
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.labels.iter().map(String::as_str).zip(self.values.iter().copied())
    }
}

/// A square matrix whose rows and columns share one label list.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    pub labels: Vec<String>,
    pub values: DMatrix<f64>,
}

impl SquareMatrix {
    pub fn row_sums(&self) -> Vec<f64> {
        self.values.row_iter().map(|r| r.sum()).collect()
    }
}

/// Entity by year table of index values. Missing cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexPanel {
    kind: String,
    entities: Vec<String>,
    years: Vec<i32>,
    cells: Vec<Vec<Option<f64>>>,
}

impl IndexPanel {
    pub fn new(
        kind: impl Into<String>,
        entities: Vec<String>,
        years: Vec<i32>,
        cells: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        if years.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(1, "years must be strictly increasing"));
        }
        let mut seen = BTreeSet::new();
        for e in &entities {
            if !seen.insert(e.as_str()) {
                return Err(Error::DuplicateEntity(e.clone()));
            }
        }
        if cells.len() != entities.len() || cells.iter().any(|r| r.len() != years.len()) {
            return Err(Error::DimensionMismatch {
                rows: cells.len(),
                cols: cells.first().map_or(0, Vec::len),
                row_labels: entities.len(),
                col_labels: years.len(),
            });
        }
        Ok(IndexPanel { kind: kind.into(), entities, years, cells })
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn value(&self, entity: &str, year: i32) -> Option<f64> {
        let i = self.entities.iter().position(|e| e == entity)?;
        let j = self.years.iter().position(|&y| y == year)?;
        self.cells[i][j]
    }

    /// Present values of one entity, in year order.
    pub fn series(&self, entity: &str) -> Option<Vec<(i32, f64)>> {
        let i = self.entities.iter().position(|e| e == entity)?;
        Some(
            self.years
                .iter()
                .zip(&self.cells[i])
                .filter_map(|(&y, v)| v.map(|v| (y, v)))
                .collect(),
        )
    }

    /// Present values for one year, in entity order.
    pub fn cross_section(&self, year: i32) -> Option<Vec<(&str, f64)>> {
        let j = self.years.iter().position(|&y| y == year)?;
        Some(
            self.entities
                .iter()
                .zip(&self.cells)
                .filter_map(|(e, row)| row[j].map(|v| (e.as_str(), v)))
                .collect(),
        )
    }

    /// Copy with one cell shifted by `delta`; missing cells stay missing.
    pub fn perturbed(&self, entity: usize, year: usize, delta: f64) -> Self {
        let mut out = self.clone();
        if let Some(v) = out.cells[entity][year].as_mut() {
            *v += delta;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AxisKind::*;

    fn raw(rows: &[&str], cols: &[&str], v: &[Vec<u8>]) -> RawIncidence {
        RawIncidence::from_rows(rows, cols, v, (Country, Product)).unwrap()
    }

    #[test]
    fn prune_identity_unchanged() {
        let m = raw(&["A", "B"], &["p", "q"], &[vec![1, 0], vec![0, 1]]);
        let p = prune(&m).unwrap();
        assert_eq!(p.matrix.row_labels(), &["A", "B"]);
        assert!(p.removed_rows.is_empty() && p.removed_cols.is_empty());
    }

    #[test]
    fn prune_drops_zero_row() {
        let m = raw(&["A", "B"], &["p", "q"], &[vec![1, 1], vec![0, 0]]);
        let p = prune(&m).unwrap();
        assert_eq!(p.matrix.row_labels(), &["A"]);
        assert_eq!(p.removed_rows, vec!["B"]);
        assert!(p.removed_cols.is_empty());
    }

    #[test]
    fn prune_all_zero_is_empty() {
        let m = raw(&["A", "B", "C"], &["p", "q", "r"], &[vec![0; 3], vec![0; 3], vec![0; 3]]);
        assert_eq!(prune(&m).unwrap_err(), Error::EmptyMatrix);
    }

    #[test]
    fn prune_keeps_order() {
        let m = raw(
            &["C", "A", "B"],
            &["r", "p", "q"],
            &[vec![1, 0, 1], vec![0, 0, 0], vec![0, 0, 1]],
        );
        let p = prune(&m).unwrap();
        assert_eq!(p.matrix.row_labels(), &["C", "B"]);
        assert_eq!(p.matrix.col_labels(), &["r", "q"]);
        assert_eq!(p.removed_cols, vec!["p"]);
    }

    #[test]
    fn binary_incidence_rejects_zero_margin() {
        let err = BinaryIncidence::from_rows(&["A", "B"], &["p"], &[vec![1], vec![0]], (Country, Product))
            .unwrap_err();
        assert!(matches!(err, Error::ZeroMargin { axis: "row", .. }));
    }

    #[test]
    fn constructors_validate() {
        let dup = ValuedMatrix::from_rows(&["A", "A"], &["p"], &[vec![1.0], vec![1.0]], (Country, Product));
        assert_eq!(dup.unwrap_err(), Error::DuplicateLabel("A".into()));
        let neg = ValuedMatrix::from_rows(&["A"], &["p"], &[vec![-1.0]], (Country, Product));
        assert!(matches!(neg.unwrap_err(), Error::InvalidValue { .. }));
        let nan = ValuedMatrix::from_rows(&["A"], &["p"], &[vec![f64::NAN]], (Country, Product));
        assert!(matches!(nan.unwrap_err(), Error::InvalidValue { .. }));
        let two = RawIncidence::from_rows(&["A"], &["p"], &[vec![2]], (Country, Product));
        assert!(matches!(two.unwrap_err(), Error::InvalidValue { .. }));
        let same = RawIncidence::from_rows(&["A"], &["p"], &[vec![1]], (Country, Country));
        assert!(matches!(same.unwrap_err(), Error::InvalidAxes(_)));
        let shape = ValuedMatrix::new(owned(&["A"]), owned(&["p"]), DMatrix::zeros(2, 1), (Country, Product));
        assert!(matches!(shape.unwrap_err(), Error::DimensionMismatch { .. }));
    }

    #[test]
    fn align_intersects_and_sorts() {
        let a = raw(&["US", "DE", "FR"], &["p"], &[vec![1], vec![1], vec![0]]);
        let b = raw(&["JP", "FR", "DE"], &["t"], &[vec![1], vec![1], vec![1]]);
        let (a2, b2) = align(&a, Axis::Rows, &b, Axis::Rows).unwrap();
        assert_eq!(a2.row_labels(), &["DE", "FR"]);
        assert_eq!(b2.row_labels(), &["DE", "FR"]);
        assert_eq!(a2.values()[(1, 0)], 0.0);
    }

    #[test]
    fn align_identical_sets_only_reorders() {
        let a = raw(&["B", "A"], &["p"], &[vec![1], vec![0]]);
        let b = raw(&["A", "B"], &["t"], &[vec![1], vec![1]]);
        let (a2, b2) = align(&a, Axis::Rows, &b, Axis::Rows).unwrap();
        assert_eq!(a2.row_labels(), &["A", "B"]);
        assert_eq!(a2.values()[(0, 0)], 0.0);
        assert_eq!(b2, b);
    }

    #[test]
    fn align_disjoint_is_no_overlap() {
        let a = raw(&["A"], &["p"], &[vec![1]]);
        let b = raw(&["B"], &["t"], &[vec![1]]);
        assert!(matches!(align(&a, Axis::Rows, &b, Axis::Rows), Err(Error::NoOverlap { .. })));
    }

    #[test]
    fn align_on_columns_against_rows() {
        let cp = raw(&["A"], &["p2", "p1", "p3"], &[vec![1, 1, 1]]);
        let pt = RawIncidence::from_rows(&["p1", "p2"], &["t"], &[vec![1], vec![1]], (Product, Technology)).unwrap();
        let (cp2, pt2) = align(&cp, Axis::Cols, &pt, Axis::Rows).unwrap();
        assert_eq!(cp2.col_labels(), &["p1", "p2"]);
        assert_eq!(pt2.row_labels(), &["p1", "p2"]);
    }

    #[test]
    fn panel_validation_and_access() {
        let p = IndexPanel::new(
            "eci",
            owned(&["A", "B"]),
            vec![2000, 2001],
            vec![vec![Some(1.0), None], vec![Some(0.0), Some(2.0)]],
        )
        .unwrap();
        assert_eq!(p.value("A", 2001), None);
        assert_eq!(p.value("B", 2000), Some(0.0));
        assert_eq!(p.series("A").unwrap(), vec![(2000, 1.0)]);
        assert_eq!(p.cross_section(2001).unwrap(), vec![("B", 2.0)]);
        let bad = IndexPanel::new("x", owned(&["A"]), vec![2001, 2000], vec![vec![None, None]]);
        assert!(bad.is_err());
        let dup = IndexPanel::new("x", owned(&["A", "A"]), vec![2000], vec![vec![None], vec![None]]);
        assert_eq!(dup.unwrap_err(), Error::DuplicateEntity("A".into()));
    }

    #[test]
    fn index_kinds_follow_axes() {
        assert_eq!(IndexKind::for_axes((Country, Product)), IndexKind::Eci);
        assert_eq!(IndexKind::for_axes((Product, Country)), IndexKind::Pci);
        assert_eq!(IndexKind::for_axes((Country, Technology)), IndexKind::PatCi);
        assert_eq!(IndexKind::for_axes((Technology, Product)), IndexKind::Tpci);
    }
}
