//! Extension objects, Scott-trick abstractions and number objects computed
//! over finite transitive structures of hereditarily finite sets.

pub mod abstraction;
pub mod bitset;
pub mod diagonal;
pub mod eliminate;
mod error;
pub mod hfset;
pub mod model;
pub mod syntax;

pub use error::{Error, Result};
pub use hfset::HfSet;
