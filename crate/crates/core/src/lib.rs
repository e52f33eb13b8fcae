//! Long rainbow cycles in properly edge-coloured complete graphs.
//!
//! The pipeline samples a random set of colours `H`, grows a rainbow path
//! forest in the remaining colours by augmenting chains, glues the forest
//! into one long path with rotations that spend `H`-edges, and closes that
//! path into a rainbow cycle. Generators, statistical probes and exact
//! small-instance oracles support testing.

pub mod colouring;
pub mod error;
pub mod family;
pub mod forest;
pub mod generators;
pub mod oracle;
pub mod pipeline;
pub mod rcol;
pub mod rng;
pub mod rotation;
pub mod sampling;

pub use colouring::{Colour, ColourSet, ColourSubgraph, HostGraph, HostKind, ProperEdgeColouring, Vertex};
pub use error::{Error, Result};
pub use family::{ColouringFamily, FamilyRegistry, GenRequest};
pub use pipeline::{run, PipelineParams, RunReport};
