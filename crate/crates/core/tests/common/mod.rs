#![allow(dead_code)]

use econ_complexity::model::{AxisKind, BinaryIncidence, RawIncidence};
use econ_complexity::triple_helix::{build_system, TripartiteSystem};
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::Rng;

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:02}")).collect()
}

pub fn raw(rng: &mut StdRng, rows: &[String], cols: &[String], density: f64, axes: (AxisKind, AxisKind)) -> RawIncidence {
    let values = DMatrix::from_fn(rows.len(), cols.len(), |_, _| if rng.random_bool(density) { 1.0 } else { 0.0 });
    RawIncidence::new(rows.to_vec(), cols.to_vec(), values, axes).unwrap()
}

/// A random country by product matrix, pruned; `None` if nothing survives.
pub fn incidence(rng: &mut StdRng, nrows: usize, ncols: usize, density: f64) -> Option<BinaryIncidence> {
    let m = raw(rng, &labels("c", nrows), &labels("p", ncols), density, (AxisKind::Country, AxisKind::Product));
    m.prune().ok().map(|p| p.matrix)
}

/// A random jointly pruned country, product, technology system.
pub fn system(rng: &mut StdRng) -> Option<TripartiteSystem> {
    let (nc, np, nt) = (rng.random_range(3..=10), rng.random_range(3..=12), rng.random_range(3..=12));
    let (c, p, t) = (labels("c", nc), labels("p", np), labels("t", nt));
    let d = rng.random_range(0.25..0.75);
    let cp = raw(rng, &c, &p, d, (AxisKind::Country, AxisKind::Product));
    let ct = raw(rng, &c, &t, d, (AxisKind::Country, AxisKind::Technology));
    let pt = raw(rng, &p, &t, d, (AxisKind::Product, AxisKind::Technology));
    build_system(cp, ct, pt).ok().map(|b| b.system)
}

pub fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt())
}
