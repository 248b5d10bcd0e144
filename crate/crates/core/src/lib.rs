//! Projective lines as groupoids with projection structure.
//!
//! The crate builds the coordinate model of the projective line over a
//! finite field as an explicit groupoid, checks abstract groupoids against
//! the four projection-structure axioms, computes cross ratios and
//! tri-rapports, and reconstructs a coordinatizing field together with an
//! isomorphism onto the coordinate model.

pub mod cli;
pub mod coord;
pub mod coordinatize;
pub mod field;
pub mod groupoid;
pub mod rapport;
pub mod report;
pub mod search;
mod serial;

pub use serial::ParseLocation;
