//! Numerical McKay correspondence for canonical orders on surfaces.
//!
//! The crate compares two counts for each canonical order type: one read off
//! the ramification data of its minimal resolution, and one computed as the
//! number of blocks of a twisted group algebra. Supporting layers provide exact
//! cyclotomic arithmetic, finite matrix groups, central extensions, intersection
//! lattices on curve configurations, character tables and McKay quivers, and a
//! desk-scale check of the cyclic-cover structure.

pub mod cli;
pub mod cycliccover;
pub mod cyclotomic;
pub mod error;
pub mod lattice;
pub(crate) mod linalg;
pub mod matgroup;
pub mod mckay;
pub mod ramdata;
pub mod twisted;

pub use error::{Error, Result};
