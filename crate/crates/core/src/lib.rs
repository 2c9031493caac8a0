//! Parallel MAX-MIN ant colony solver for a dynamic TSP in which one city
//! moves inside a ring neighbourhood every cycle.

pub mod aco;
pub mod bench;
pub mod dynamics;
pub mod error;
pub mod instance;
pub mod local_search;
pub mod orchestrator;

pub use error::{Error, Result};
