//! Cardinality estimation for property-graph query patterns.
//!
//! Estimation runs in three phases: partial estimation techniques produce
//! selectivities for subsets of a query's constraints, extension techniques
//! derive further estimates from those, and a combination technique merges
//! the resulting set into one selectivity.

pub mod bench;
pub mod combine;
pub mod epests;
pub mod error;
pub mod framework;
pub mod graph;
pub mod pets;
pub mod query;
pub mod stats;

pub use error::{Error, Result};
