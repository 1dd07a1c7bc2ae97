//! Computational toolkit for hyperbolic graphs and small cancellation.
//!
//! The crate works on finite inputs: weighted graphs and their path metrics,
//! finite group actions given by permutation tables (or partial actions on
//! Cayley-ball windows of infinite groups), cone-off constructions and finite
//! group presentations.

pub mod actions;
pub mod coneoff;
pub mod delta;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod metric;
pub mod words;

pub use actions::{ActionTable, PartialPerm};
pub use delta::{hyperbolicity_delta, DeltaCertificate};
pub use error::{Error, Result};
pub use graph::{Edge, WeightedGraph};
pub use metric::{gromov_product, path_metric, FiniteMetricSpace, GraphMetric, Metric};
