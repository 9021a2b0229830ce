//! One-ended factor-of-iid spanning trees on finite windows of amenable
//! lattices, together with the interval-graph machinery, the trunk
//! quotient pipeline and the mass-transport checks used to verify them.

pub mod error;
pub mod forest;
pub mod graph;
pub mod hierarchy;
pub mod interval;
pub mod labels;
pub mod replicas;
pub mod stats;
pub mod substrates;
pub mod trunk;

pub use error::{Error, Result};
