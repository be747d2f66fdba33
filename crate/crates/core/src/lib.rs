//! Endpoint search on graphs with a hidden directed path.
//!
//! A searcher asks vertices of a host graph and learns the hidden arcs at each
//! asked vertex; the goal is to identify the far end of the path that starts at
//! a known source. The crate provides the searchers, the truthful and adversarial
//! oracles, separator machinery, the 4x4 blowup reduction between the two
//! settings, and an exact minimax solver for tiny graphs.

pub mod blowup;
pub mod bounds;
pub mod error;
pub mod experiment;
pub mod game;
pub mod generate;
pub mod graph;
pub mod grid;
pub mod instance;
pub mod oracle;
pub mod search;
pub mod separators;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex};
pub use grid::{build_grid, GridBox, GridSpec};
pub use instance::{validate_instance, Instance, Setting, Violation};
