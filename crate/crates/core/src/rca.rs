//! Balassa's revealed comparative advantage and its 0/1 threshold.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{prune, Pruned, RawIncidence, ValuedMatrix};

/// Default RCA threshold. Comparison is inclusive: `RCA >= 1` marks a specialization.
pub const DEFAULT_THRESHOLD: f64 = 1.0;

/// RCA_{c,p} = (x_{c,p} / Σ_p x_{c,p}) / (Σ_c x_{c,p} / Σ_{c,p} x_{c,p}).
///
/// A row with zero total has no share vector and is an error. A column
/// with zero total yields RCA 0 in every entry.
pub fn rca(x: &ValuedMatrix) -> Result<ValuedMatrix> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let row_totals = x.row_sums();
    let col_totals = x.col_sums();
    let total: f64 = row_totals.iter().sum();
    if total <= 0.0 {
        return Err(Error::EmptyMatrix);
    }
    if let Some(i) = row_totals.iter().position(|&s| s <= 0.0) {
        return Err(Error::AllZeroRow { label: x.row_labels()[i].clone() });
    }
    let v = x.values();
    let out = DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| {
        if col_totals[j] <= 0.0 {
            0.0
        } else {
            (v[(i, j)] / row_totals[i]) / (col_totals[j] / total)
        }
    });
    Ok(x.with_values(out))
}

/// M_{i,j} = 1 iff R_{i,j} >= threshold, then pruned.
pub fn binarize(r: &ValuedMatrix, threshold: f64) -> Result<Pruned> {
    let values = r.values().map(|v| if v >= threshold { 1.0 } else { 0.0 });
    let raw = RawIncidence::new(r.row_labels().to_vec(), r.col_labels().to_vec(), values, r.axes())?;
    prune(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AxisKind::*;
    use proptest::prelude::*;

    fn vm(rows: &[Vec<f64>]) -> ValuedMatrix {
        let rl: Vec<String> = (0..rows.len()).map(|i| format!("c{i}")).collect();
        let cl: Vec<String> = (0..rows[0].len()).map(|j| format!("p{j}")).collect();
        let rl: Vec<&str> = rl.iter().map(String::as_str).collect();
        let cl: Vec<&str> = cl.iter().map(String::as_str).collect();
        ValuedMatrix::from_rows(&rl, &cl, rows, (Country, Product)).unwrap()
    }

    #[test]
    fn uniform_matrix_is_all_ones() {
        let r = rca(&vm(&[vec![3.0; 4], vec![3.0; 4], vec![3.0; 4]])).unwrap();
        assert!(r.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn hand_example() {
        let r = rca(&vm(&[vec![10.0, 0.0], vec![10.0, 10.0]])).unwrap();
        let want = [[1.5, 0.0], [0.75, 1.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((r.values()[(i, j)] - want[i][j]).abs() < 1e-15);
            }
        }
        let m = binarize(&r, DEFAULT_THRESHOLD).unwrap().matrix;
        assert_eq!(m.values(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn zero_row_is_error() {
        let err = rca(&vm(&[vec![1.0, 2.0], vec![0.0, 0.0]])).unwrap_err();
        assert_eq!(err, Error::AllZeroRow { label: "c1".into() });
    }

    #[test]
    fn zero_column_gives_zero_rca() {
        let r = rca(&vm(&[vec![1.0, 0.0], vec![2.0, 0.0]])).unwrap();
        assert_eq!(r.values()[(0, 1)], 0.0);
        assert_eq!(r.values()[(1, 1)], 0.0);
    }

    #[test]
    fn all_zero_is_empty() {
        assert_eq!(rca(&vm(&[vec![0.0, 0.0]])).unwrap_err(), Error::EmptyMatrix);
    }

    #[test]
    fn threshold_is_inclusive() {
        let m = binarize(&vm(&[vec![1.0, 0.999_999]]), 1.0).unwrap();
        assert_eq!(m.matrix.col_labels(), &["p0"]);
        assert_eq!(m.removed_cols, vec!["p1"]);
    }

    #[test]
    fn nothing_passes_threshold() {
        let r = vm(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert_eq!(binarize(&r, 1.0).unwrap_err(), Error::EmptyMatrix);
    }

    fn positive_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (2usize..7, 2usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(0.0f64..100.0, c), r)
                .prop_map(|mut m| {
                    for row in m.iter_mut() {
                        row[0] += 1.0;
                    }
                    m
                })
        })
    }

    proptest! {
        #[test]
        fn global_scale_invariance(m in positive_matrix(), scale in 0.001f64..1000.0) {
            let a = rca(&vm(&m)).unwrap();
            let scaled: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
            let b = rca(&vm(&scaled)).unwrap();
            for (x, y) in a.values().iter().zip(b.values().iter()) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }

        #[test]
        fn every_live_column_has_a_specialist(m in positive_matrix()) {
            let r = rca(&vm(&m)).unwrap();
            for (j, total) in r.col_sums().iter().enumerate() {
                if *total > 0.0 {
                    let best = r.values().column(j).max();
                    prop_assert!(best >= 1.0 - 1e-12);
                }
            }
        }
    }
}
