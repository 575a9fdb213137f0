//! Spatial conflict graphs.
//!
//! Given a nonplanar graph `G` and a maximal planar subgraph `M` embedded in
//! the sphere, every edge of `G − M` is a *fragment*. Pairs of fragments
//! that must sit on opposite sides of the sphere in any linkless embedding are
//! joined by a negative edge, pairs that must sit on the same side by a
//! positive edge. An unbalanced signed conflict graph for every embedding of
//! every such `M` certifies that `G` has no flat embedding.
//!
//! The crate covers the whole pipeline: graphs and minors ([`graph`],
//! [`minor`], [`canon`]), Tutte's cycle conflict graphs ([`tutte`]), sphere
//! embeddings as rotation systems ([`embedding`]), maximal planar subgraphs
//! ([`maximal_planar`]), strong and implicit (anti-)conflicts
//! ([`spatial`]), signed balance ([`signed`]), the Petersen family
//! ([`petersen`]) and a numerical spatial realization with exact linking
//! numbers ([`realization`]).

pub mod canon;
pub mod embedding;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod maximal_planar;
pub mod minor;
pub mod petersen;
pub mod planarity;
pub mod realization;
pub mod signed;
pub mod spatial;
pub mod tutte;

pub use error::{Error, Result};
pub use graph::{Cycle, Edge, EdgeId, Graph, VertexId, VertexMap};
