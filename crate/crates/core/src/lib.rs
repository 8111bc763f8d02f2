//! Coarse Menger for two paths: algorithms, gadget construction and
//! exhaustive oracles.

pub mod acceptance;
pub mod construction;
pub mod dot;
pub mod format;
pub mod graph;
pub mod instances;
pub mod oracle;
pub mod solver;
pub mod intervals;

pub use format::{parse_instance, write_instance, FormatError, Instance};
pub use graph::{Distance, Graph, GraphError, Path, Vertex, VertexSet};
pub use intervals::{Interval, IntervalError, IntervalFamily};
