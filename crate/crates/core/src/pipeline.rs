//! End-to-end runs from value matrices to indices.

use crate::error::Result;
use crate::ingest::{concordance_to_incidence, ConcordanceTable, Orientation};
use crate::model::{AxisKind, BinaryIncidence, RawIncidence, ValuedMatrix};
use crate::rca::{binarize, rca};
use crate::reflections::{complexity_index_detailed, IndexOutcome, Side};
use crate::spectral::EigenRule;
use crate::triple_helix::{build_system, thci_detailed, RemovedLabels, ThciOutcome, TripartiteSystem};

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteRun {
    pub incidence: BinaryIncidence,
    pub outcome: IndexOutcome,
    pub removed_rows: Vec<String>,
    pub removed_cols: Vec<String>,
}

/// RCA, threshold, prune, then the index for `side`.
pub fn bipartite_index(values: &ValuedMatrix, threshold: f64, side: Side, rule: EigenRule) -> Result<BipartiteRun> {
    let pruned = binarize(&rca(values)?, threshold)?;
    let outcome = complexity_index_detailed(&pruned.matrix, side, rule)?;
    Ok(BipartiteRun {
        incidence: pruned.matrix,
        outcome,
        removed_rows: pruned.removed_rows,
        removed_cols: pruned.removed_cols,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteRun {
    pub system: TripartiteSystem,
    pub outcome: ThciOutcome,
    /// Labels dropped because no RCA value reached the threshold.
    pub below_threshold: RemovedLabels,
    /// Labels dropped when the three matrices were aligned with the
    /// concordance and pruned jointly.
    pub removed: RemovedLabels,
}

fn extend_unique(into: &mut Vec<String>, from: impl IntoIterator<Item = String>) {
    for l in from {
        if !into.contains(&l) {
            into.push(l);
        }
    }
}

/// THCI from export values, patent counts and a technology to product
/// concordance whose target codes match the trade product codes.
pub fn tripartite_index(
    trade: &ValuedMatrix,
    patents: &ValuedMatrix,
    tech_to_product: &ConcordanceTable,
    threshold: f64,
    rule: EigenRule,
) -> Result<TripartiteRun> {
    let cp = binarize(&rca(trade)?, threshold)?;
    let ct = binarize(&rca(patents)?, threshold)?;
    let pt = concordance_to_incidence(
        tech_to_product,
        cp.matrix.col_labels(),
        ct.matrix.col_labels(),
        Orientation::SourceIsCol,
        (AxisKind::Product, AxisKind::Technology),
    )?;
    let mut below_threshold = RemovedLabels::default();
    extend_unique(&mut below_threshold.countries, cp.removed_rows.iter().cloned());
    extend_unique(&mut below_threshold.countries, ct.removed_rows.iter().cloned());
    extend_unique(&mut below_threshold.products, cp.removed_cols.iter().cloned());
    extend_unique(&mut below_threshold.technologies, ct.removed_cols.iter().cloned());

    let built = build_system(
        RawIncidence::from(cp.matrix),
        RawIncidence::from(ct.matrix),
        RawIncidence::from(pt.matrix),
    )?;
    let outcome = thci_detailed(&built.system, rule)?;
    Ok(TripartiteRun { system: built.system, outcome, below_threshold, removed: built.removed })
}
