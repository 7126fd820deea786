//! Force-directed graph embedding whose radial coordinate tracks vertex
//! centrality, with the centrality, statistics and influence tooling used
//! to evaluate it.

pub mod bench;
pub mod centrality;
pub mod error;
pub mod graphs;
pub mod influence;
pub mod layout;
pub mod positions;
pub mod rng;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use graphs::{Graph, VertexMap};
pub use positions::Positions;
