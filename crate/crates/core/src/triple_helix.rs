//! Tripartite country / product / technology system and the
//! Triple-Helix Complexity Index.
//!
//! The clockwise cycle runs country → technology → product → country:
//!
//! ```text
//! W_{c,c'} = Σ_t Σ_p M_{c,t} M_{p,t} M_{c',p} / (ρ_{c,0} η_{t,0} k_{p,0})
//! ```
//!
//! and the counter-clockwise cycle country → product → technology → country:
//!
//! ```text
//! V_{c,c'} = Σ_t Σ_p M_{c,p} M_{p,t} M_{c',t} / (k_{c,0} η_{p,0} ρ_{t,0})
//! ```
//!
//! Both are row-stochastic. THCI standardizes the sum of their selected
//! unit-norm eigenvectors, each oriented against country diversity k_{c,0}.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{
    intersect_labels, AxisKind, BinaryIncidence, ComplexityIndex, IndexKind, RawIncidence, Select,
    SquareMatrix,
};
use crate::reflections::{orient, standardize};
use crate::spectral::{spectral_select, EigenRule, SpectralResult};

/// Three pairwise-aligned incidence matrices with strictly positive margins.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteSystem {
    cp: BinaryIncidence,
    ct: BinaryIncidence,
    pt: BinaryIncidence,
}

/// Labels removed per axis while building a system.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RemovedLabels {
    pub countries: Vec<String>,
    pub products: Vec<String>,
    pub technologies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuiltSystem {
    pub system: TripartiteSystem,
    pub removed: RemovedLabels,
}

fn expect_axes(m: &RawIncidence, want: (AxisKind, AxisKind), name: &str) -> Result<()> {
    if m.axes() != want {
        return Err(Error::InvalidAxes(format!(
            "{name} has axes ({}, {}), expected ({}, {})",
            m.axes().0,
            m.axes().1,
            want.0,
            want.1
        )));
    }
    Ok(())
}

fn nonzero_labels(labels: &[String], sums: &[f64]) -> BTreeSet<String> {
    labels
        .iter()
        .zip(sums)
        .filter(|(_, &s)| s > 0.0)
        .map(|(l, _)| l.clone())
        .collect()
}

/// Sorted labels of `a` or `b` that did not survive into `kept`.
fn removed_from(a: &[String], b: &[String], kept: &[String]) -> Vec<String> {
    let kept: BTreeSet<&String> = kept.iter().collect();
    a.iter()
        .chain(b)
        .filter(|l| !kept.contains(l))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn into_binary(m: RawIncidence) -> Result<BinaryIncidence> {
    BinaryIncidence::new(
        m.row_labels().to_vec(),
        m.col_labels().to_vec(),
        m.values().clone(),
        m.axes(),
    )
}

/// Aligns the three matrices on their shared axes and prunes them jointly
/// until every margin is positive. All label lists come out sorted.
pub fn build_system(
    cp: impl Into<RawIncidence>,
    ct: impl Into<RawIncidence>,
    pt: impl Into<RawIncidence>,
) -> Result<BuiltSystem> {
    use AxisKind::*;
    let (cp, ct, pt) = (cp.into(), ct.into(), pt.into());
    expect_axes(&cp, (Country, Product), "country-product matrix")?;
    expect_axes(&ct, (Country, Technology), "country-technology matrix")?;
    expect_axes(&pt, (Product, Technology), "product-technology matrix")?;

    let shared = |a: &[String], b: &[String], axis: &str| -> Result<Vec<String>> {
        let s = intersect_labels(a, b);
        if s.is_empty() {
            Err(Error::NoOverlap { axis: axis.into() })
        } else {
            Ok(s)
        }
    };
    let mut countries = shared(cp.row_labels(), ct.row_labels(), "country")?;
    let mut products = shared(cp.col_labels(), pt.row_labels(), "product")?;
    let mut techs = shared(ct.col_labels(), pt.col_labels(), "technology")?;

    loop {
        if countries.is_empty() || products.is_empty() || techs.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let a = cp.select_labels(&countries, &products);
        let b = ct.select_labels(&countries, &techs);
        let c = pt.select_labels(&products, &techs);

        let keep_c: BTreeSet<String> = nonzero_labels(&countries, &a.row_sums())
            .intersection(&nonzero_labels(&countries, &b.row_sums()))
            .cloned()
            .collect();
        let keep_p: BTreeSet<String> = nonzero_labels(&products, &a.col_sums())
            .intersection(&nonzero_labels(&products, &c.row_sums()))
            .cloned()
            .collect();
        let keep_t: BTreeSet<String> = nonzero_labels(&techs, &b.col_sums())
            .intersection(&nonzero_labels(&techs, &c.col_sums()))
            .cloned()
            .collect();

        if keep_c.len() == countries.len() && keep_p.len() == products.len() && keep_t.len() == techs.len() {
            let removed = RemovedLabels {
                countries: removed_from(cp.row_labels(), ct.row_labels(), &countries),
                products: removed_from(cp.col_labels(), pt.row_labels(), &products),
                technologies: removed_from(ct.col_labels(), pt.col_labels(), &techs),
            };
            let system = TripartiteSystem {
                cp: into_binary(a)?,
                ct: into_binary(b)?,
                pt: into_binary(c)?,
            };
            return Ok(BuiltSystem { system, removed });
        }
        countries = keep_c.into_iter().collect();
        products = keep_p.into_iter().collect();
        techs = keep_t.into_iter().collect();
    }
}

impl TripartiteSystem {
    pub fn country_product(&self) -> &BinaryIncidence {
        &self.cp
    }

    pub fn country_technology(&self) -> &BinaryIncidence {
        &self.ct
    }

    pub fn product_technology(&self) -> &BinaryIncidence {
        &self.pt
    }

    pub fn countries(&self) -> &[String] {
        self.cp.row_labels()
    }

    /// Swaps the roles of products and technologies.
    ///
    /// The result is only meaningful as input to [`w_clockwise`] and
    /// [`w_counterclockwise`]; its axis tags keep the original kinds.
    pub fn mirror(&self) -> TripartiteSystem {
        TripartiteSystem {
            cp: self.ct.clone(),
            ct: self.cp.clone(),
            pt: self.pt.transpose(),
        }
    }

    /// Reorders countries, products and technologies independently.
    pub fn permuted(&self, countries: &[usize], products: &[usize], techs: &[usize]) -> TripartiteSystem {
        TripartiteSystem {
            cp: self.cp.permuted(countries, products),
            ct: self.ct.permuted(countries, techs),
            pt: self.pt.permuted(products, techs),
        }
    }
}

fn inv_diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|x| 1.0 / x)))
}

/// Clockwise cycle matrix, country → technology → product → country.
pub fn w_clockwise(s: &TripartiteSystem) -> SquareMatrix {
    let (cp, ct, pt) = (s.cp.values(), s.ct.values(), s.pt.values());
    let rho_c = s.ct.row_sums();
    let eta_t = s.pt.col_sums();
    let k_p = s.cp.col_sums();
    let values = inv_diag(&rho_c) * ct * inv_diag(&eta_t) * pt.transpose() * inv_diag(&k_p) * cp.transpose();
    SquareMatrix { labels: s.countries().to_vec(), values }
}

/// Counter-clockwise cycle matrix, country → product → technology → country.
pub fn w_counterclockwise(s: &TripartiteSystem) -> SquareMatrix {
    let (cp, ct, pt) = (s.cp.values(), s.ct.values(), s.pt.values());
    let k_c = s.cp.row_sums();
    let eta_p = s.pt.row_sums();
    let rho_t = s.ct.col_sums();
    let values = inv_diag(&k_c) * cp * inv_diag(&eta_p) * pt * inv_diag(&rho_t) * ct.transpose();
    SquareMatrix { labels: s.countries().to_vec(), values }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThciOutcome {
    pub index: ComplexityIndex,
    pub clockwise: SpectralResult,
    pub counterclockwise: SpectralResult,
    /// k(+): oriented unit eigenvector of the clockwise matrix.
    pub k_plus: Vec<f64>,
    /// k(−): oriented unit eigenvector of the counter-clockwise matrix.
    pub k_minus: Vec<f64>,
}

pub fn thci(s: &TripartiteSystem, rule: EigenRule) -> Result<ComplexityIndex> {
    thci_detailed(s, rule).map(|o| o.index)
}

pub fn thci_detailed(s: &TripartiteSystem, rule: EigenRule) -> Result<ThciOutcome> {
    let anchor = s.cp.row_sums();
    let clockwise = spectral_select(&w_clockwise(s).values, rule)?;
    let counterclockwise = spectral_select(&w_counterclockwise(s).values, rule)?;
    let k_plus = orient(clockwise.eigenvector.clone(), &anchor);
    let k_minus = orient(counterclockwise.eigenvector.clone(), &anchor);
    let sum: Vec<f64> = k_plus.iter().zip(&k_minus).map(|(a, b)| a + b).collect();
    let index = standardize(s.countries(), &sum, IndexKind::Thci)?;
    Ok(ThciOutcome { index, clockwise, counterclockwise, k_plus, k_minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AxisKind::*;

    fn raw(rows: &[&str], cols: &[&str], v: &[Vec<u8>], axes: (AxisKind, AxisKind)) -> RawIncidence {
        RawIncidence::from_rows(rows, cols, v, axes).unwrap()
    }

    fn ones(r: usize, c: usize) -> Vec<Vec<u8>> {
        vec![vec![1; c]; r]
    }

    #[test]
    fn complete_system_is_unchanged_and_uniform() {
        let b = build_system(
            raw(&["A", "B", "C"], &["p1", "p2"], &ones(3, 2), (Country, Product)),
            raw(&["A", "B", "C"], &["t1", "t2", "t3"], &ones(3, 3), (Country, Technology)),
            raw(&["p1", "p2"], &["t1", "t2", "t3"], &ones(2, 3), (Product, Technology)),
        )
        .unwrap();
        assert_eq!(b.removed, RemovedLabels::default());
        let w = w_clockwise(&b.system);
        let v = w_counterclockwise(&b.system);
        assert!(w.values.iter().chain(v.values.iter()).all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        assert!(matches!(thci(&b.system, EigenRule::LargestBelowOne), Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn two_countries_one_product_one_tech() {
        let b = build_system(
            raw(&["A", "B"], &["p"], &ones(2, 1), (Country, Product)),
            raw(&["A", "B"], &["t"], &ones(2, 1), (Country, Technology)),
            raw(&["p"], &["t"], &ones(1, 1), (Product, Technology)),
        )
        .unwrap();
        assert!(w_clockwise(&b.system).values.iter().all(|x| (x - 0.5).abs() < 1e-15));
    }

    #[test]
    fn country_missing_from_patents_is_dropped() {
        let b = build_system(
            raw(&["A", "B", "X"], &["p"], &ones(3, 1), (Country, Product)),
            raw(&["A", "B"], &["t"], &ones(2, 1), (Country, Technology)),
            raw(&["p"], &["t"], &ones(1, 1), (Product, Technology)),
        )
        .unwrap();
        assert_eq!(b.system.countries(), &["A", "B"]);
        assert_eq!(b.system.country_technology().row_labels(), &["A", "B"]);
        assert_eq!(b.removed.countries, vec!["X"]);
    }

    #[test]
    fn dead_technology_is_removed_everywhere() {
        let b = build_system(
            raw(&["A", "B"], &["p"], &ones(2, 1), (Country, Product)),
            raw(&["A", "B"], &["t1", "t2"], &[vec![1, 0], vec![1, 0]], (Country, Technology)),
            raw(&["p"], &["t1", "t2"], &[vec![1, 0]], (Product, Technology)),
        )
        .unwrap();
        assert_eq!(b.system.product_technology().col_labels(), &["t1"]);
        assert_eq!(b.system.country_technology().col_labels(), &["t1"]);
        assert_eq!(b.removed.technologies, vec!["t2"]);
    }

    #[test]
    fn pruning_cascades_across_matrices() {
        // t2 is only linked to p2; p2 has no exporter, so t2's product link dies and t2 goes too,
        // which leaves country C with no technology.
        let b = build_system(
            raw(&["A", "B", "C"], &["p1", "p2"], &[vec![1, 0], vec![1, 0], vec![1, 0]], (Country, Product)),
            raw(&["A", "B", "C"], &["t1", "t2"], &[vec![1, 0], vec![1, 1], vec![0, 1]], (Country, Technology)),
            raw(&["p1", "p2"], &["t1", "t2"], &[vec![1, 0], vec![0, 1]], (Product, Technology)),
        )
        .unwrap();
        assert_eq!(b.system.countries(), &["A", "B"]);
        assert_eq!(b.removed.products, vec!["p2"]);
        assert_eq!(b.removed.technologies, vec!["t2"]);
        assert_eq!(b.removed.countries, vec!["C"]);
    }

    #[test]
    fn disjoint_countries_are_no_overlap() {
        let e = build_system(
            raw(&["A"], &["p"], &ones(1, 1), (Country, Product)),
            raw(&["B"], &["t"], &ones(1, 1), (Country, Technology)),
            raw(&["p"], &["t"], &ones(1, 1), (Product, Technology)),
        );
        assert!(matches!(e, Err(Error::NoOverlap { .. })));
    }

    #[test]
    fn wrong_axes_rejected() {
        let e = build_system(
            raw(&["A"], &["t"], &ones(1, 1), (Country, Technology)),
            raw(&["A"], &["t"], &ones(1, 1), (Country, Technology)),
            raw(&["p"], &["t"], &ones(1, 1), (Product, Technology)),
        );
        assert!(matches!(e, Err(Error::InvalidAxes(_))));
    }

    fn two_block() -> TripartiteSystem {
        build_system(
            raw(&["A", "B"], &["p1", "p2"], &[vec![1, 0], vec![0, 1]], (Country, Product)),
            raw(&["A", "B"], &["t1", "t2"], &[vec![1, 0], vec![0, 1]], (Country, Technology)),
            raw(&["p1", "p2"], &["t1", "t2"], &[vec![1, 0], vec![0, 1]], (Product, Technology)),
        )
        .unwrap()
        .system
    }

    #[test]
    fn block_system_gives_identity() {
        let s = two_block();
        assert_eq!(w_clockwise(&s).values, DMatrix::identity(2, 2));
        assert_eq!(w_counterclockwise(&s).values, DMatrix::identity(2, 2));
    }

    #[test]
    fn block_system_thci_separates_blocks() {
        let s = two_block();
        let idx = thci(&s, EigenRule::SecondLargest).unwrap();
        assert!((idx.values()[0] - 1.0).abs() < 1e-12 && (idx.values()[1] + 1.0).abs() < 1e-12);
        assert!(matches!(thci(&s, EigenRule::LargestBelowOne), Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn mirror_swaps_cycles() {
        let s = build_system(
            raw(&["A", "B", "C"], &["p1", "p2", "p3"], &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], (Country, Product)),
            raw(&["A", "B", "C"], &["t1", "t2"], &[vec![1, 0], vec![1, 1], vec![0, 1]], (Country, Technology)),
            raw(&["p1", "p2", "p3"], &["t1", "t2"], &[vec![1, 0], vec![1, 1], vec![0, 1]], (Product, Technology)),
        )
        .unwrap()
        .system;
        let v = w_counterclockwise(&s).values;
        let w = w_clockwise(&s.mirror()).values;
        assert!((v - w).abs().max() < 1e-12);
    }
}
