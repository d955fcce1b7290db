//! Evolutionary coupling between tests and methods, mined from commit
//! history.
//!
//! The library models per-entity change timelines over a first-parent
//! linearized commit sequence ([`history`]), extracts those timelines
//! from a git repository or a pre-extracted change log ([`extract`]),
//! computes asymmetric nearest-change coupling distances and
//! bidirectional rankings ([`coupling`]), applies them to fault
//! localization, test selection and traceability-link prediction
//! ([`applications`]), and scores the results ([`evaluation`]).

pub mod applications;
pub mod coupling;
pub mod error;
pub mod evaluation;
pub mod extract;
pub mod history;
pub mod rational;
pub mod store;

pub use error::{Error, Result};
