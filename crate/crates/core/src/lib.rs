//! Economic complexity indices for bipartite and tripartite systems.
//!
//! Country by product (or technology) incidence matrices are built from
//! export values via revealed comparative advantage, and complexity indices
//! are read off the spectrum of the row-stochastic matrix of two-step walks.
//! The tripartite index combines the clockwise and counter-clockwise
//! three-step walks through countries, products and technologies.
//!
//! ```
//! use econ_complexity::{binarize, complexity_index, rca, AxisKind, EigenRule, Side, ValuedMatrix};
//!
//! let x = ValuedMatrix::from_rows(
//!     &["a", "b", "c"],
//!     &["p", "q", "r"],
//!     &[vec![9.0, 1.0, 1.0], vec![1.0, 9.0, 1.0], vec![4.0, 4.0, 9.0]],
//!     (AxisKind::Country, AxisKind::Product),
//! )?;
//! let m = binarize(&rca(&x)?, 1.0)?.matrix;
//! let eci = complexity_index(&m, Side::Rows, EigenRule::SecondLargest)?;
//! assert_eq!(eci.values().len(), 3);
//! # Ok::<(), econ_complexity::Error>(())
//! ```

pub mod error;
pub mod ingest;
pub mod model;
pub mod pipeline;
pub mod rca;
pub mod reflections;
pub mod reproduce;
pub mod spectral;
pub mod stats;
pub mod triple_helix;

pub use error::{Error, Result};
pub use model::{
    align, prune, Axis, AxisKind, BinaryIncidence, ComplexityIndex, IndexKind, IndexPanel, MarginKind, MarginVector,
    Pruned, RawIncidence, Select, SquareMatrix, ValuedMatrix,
};
pub use rca::{binarize, rca, DEFAULT_THRESHOLD};
pub use reflections::{complexity_index, complexity_index_detailed, reflect, reflect_limit, standardize, w_bipartite, Side};
pub use spectral::{spectral_select, EigenRule, SpectralResult};
pub use stats::{correlation_series, cross_section_correlate, lagged_correlate, pearson, spearman, trend_test, Method};
pub use triple_helix::{build_system, thci, thci_detailed, w_clockwise, w_counterclockwise, TripartiteSystem};
