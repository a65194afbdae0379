//! School-choice mechanisms, incontestability audits and the brute-force
//! oracles used to cross-check them on small instances.

pub mod error;
pub mod fixtures;
pub mod generate;
pub mod mechanisms;
pub mod model;
pub mod oracle;
pub mod priority_sets;
pub mod properties;

pub use error::{Error, Result};
pub use model::{Assignment, Preference, Priority, Problem, SchoolId, Seat, StudentId};
