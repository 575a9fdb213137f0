use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge id {0} already in use")]
    DuplicateEdge(EdgeId),
    #[error("cannot contract loop edge {0}")]
    ContractLoop(EdgeId),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("graph is not simple")]
    NotSimple,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not planar")]
    NotPlanar,
    #[error("graph is planar: no fragments exist")]
    PlanarHost,
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("embedding is not genus 0")]
    NotSpherical,
    #[error("not a subgraph: {0}")]
    NotSubgraph(String),
    #[error("Jordan curve violation: {0}")]
    Jordan(String),
    #[error("invalid fragment: {0}")]
    InvalidFragment(String),
    #[error("invalid signed graph: {0}")]
    InvalidSignedGraph(String),
    #[error("curves intersect")]
    CurvesIntersect,
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
