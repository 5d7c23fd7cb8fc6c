//! Polynomial-delay enumeration of induced subgraphs that are 2-edge-connected
//! or 2-vertex-connected.
//!
//! The engine walks a reverse-search tree whose edges remove one minimal
//! removable set (MRS) at a time, and reports consecutive components as
//! constant-size diffs. The MRS oracles in [`mrs`] run in linear time.

use std::fmt;
use std::str::FromStr;

pub mod bruteforce;
pub mod connectivity;
pub mod engine;
pub mod graph;
pub mod mrs;
pub mod selfcheck;

pub use engine::{enumerate_all, enumerate_stream, reconstruct, DiffOp, DiffRecord, EngineError, EngineStats, MrsOracle, Replayer};
pub use graph::{parse_graph, random_graph, Graph, GraphError, VertexSet};
pub use mrs::{EdgeOracle, MrsError, VertexOracle};

/// Which connectivity notion defines a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// 2-edge-connected induced subgraphs on at least two vertices.
    Edge,
    /// 2-vertex-connected induced subgraphs on at least three vertices.
    Vertex,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Edge => "e",
            Mode::Vertex => "v",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown mode {0:?}, expected \"e\" or \"v\"")]
pub struct ParseModeError(String);

impl FromStr for Mode {
    type Err = ParseModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e" | "edge" => Ok(Mode::Edge),
            "v" | "vertex" => Ok(Mode::Vertex),
            _ => Err(ParseModeError(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_round_trip() {
        for m in [Mode::Edge, Mode::Vertex] {
            assert_eq!(m.to_string().parse::<Mode>(), Ok(m));
        }
        assert!("x".parse::<Mode>().is_err());
    }
}
