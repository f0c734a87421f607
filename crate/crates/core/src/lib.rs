//! Decomposition-based multi-objective optimization with weighted Lp and
//! product-normalized Lp scalarizations, global-replacement strategies,
//! benchmark problem families, hypervolume scoring, and preference-region
//! diagnostics.

pub mod algorithm;
pub mod analysis;
pub mod decomposition;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod problems;
pub mod scalarization;
pub mod types;
pub mod variation;

pub use error::{Error, Result};
