//! Figure fixtures shipped under `fixtures/`.
//!
//! Each fixture is a JSON file holding the host graph, optionally an
//! embedded maximal planar subgraph (graph JSON with rotations), optionally a
//! cycle, the highlighted fragment pairs and a provenance note. The pictures
//! themselves are not machine readable, so every configuration is a
//! constructed stand-in that shows the pictured phenomenon; the provenance
//! note says how it was built and the tests re-derive every claimed property.

use serde::{Deserialize, Serialize};

use crate::embedding::RotationSystem;
use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeId, Graph, VertexId};
use crate::io::GraphJson;
use crate::maximal_planar::MaximalPlanarSubgraph;
use crate::signed::Sign;
use crate::spatial::{fragments_of, Fragment, Placement, SphereSide};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sides {
    Same,
    Opposite,
}

/// A highlighted fragment pair, its expected sign and the placement under
/// which a linked pair of cycles should appear.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigurePair {
    pub f: EdgeId,
    pub f2: EdgeId,
    pub sign: String,
    pub strong: bool,
    pub sides: Sides,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureJson {
    pub name: String,
    pub provenance: String,
    pub graph: GraphJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<GraphJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<FigurePair>,
}

#[derive(Clone, Debug)]
pub struct Figure {
    pub name: String,
    pub provenance: String,
    pub graph: Graph,
    pub embedding: Option<RotationSystem>,
    pub cycle: Option<Cycle>,
    pub pairs: Vec<FigurePair>,
}

impl Figure {
    pub fn from_json(j: &FigureJson) -> Result<Self> {
        let graph = j.graph.to_graph()?;
        let embedding = match &j.m {
            Some(m) => Some(
                m.to_rotation_system()?
                    .ok_or_else(|| Error::Input(format!("{}: M has no rotations", j.name)))?,
            ),
            None => None,
        };
        if let Some(rs) = &embedding {
            if !rs.graph().is_subgraph_of(&graph) {
                return Err(Error::Input(format!(
                    "{}: M is not a subgraph of the host",
                    j.name
                )));
            }
        }
        let cycle = j
            .cycle
            .as_deref()
            .map(|c| Cycle::from_vertices(&graph, c))
            .transpose()?;
        for p in &j.pairs {
            if Sign::parse(&p.sign).is_none() {
                return Err(Error::Input(format!("{}: bad sign {:?}", j.name, p.sign)));
            }
        }
        Ok(Figure {
            name: j.name.clone(),
            provenance: j.provenance.clone(),
            graph,
            embedding,
            cycle,
            pairs: j.pairs.clone(),
        })
    }

    pub fn to_json(&self) -> FigureJson {
        FigureJson {
            name: self.name.clone(),
            provenance: self.provenance.clone(),
            graph: GraphJson::from_graph(&self.graph),
            m: self.embedding.as_ref().map(GraphJson::from_rotation_system),
            cycle: self.cycle.as_ref().map(|c| c.vertices.clone()),
            pairs: self.pairs.clone(),
        }
    }

    /// The embedded subgraph with every other host edge as a fragment.
    pub fn mps(&self) -> Option<MaximalPlanarSubgraph> {
        let rs = self.embedding.as_ref()?;
        Some(MaximalPlanarSubgraph {
            host: self.graph.clone(),
            m: rs.graph().clone(),
            fragments: fragments_of(&self.graph, rs.graph()),
        })
    }

    pub fn fragment(&self, e: EdgeId) -> Result<Fragment> {
        let edge = self.graph.edge(e).ok_or(Error::UnknownEdge(e))?;
        Ok(Fragment::new(e, edge.u, edge.v))
    }

    pub fn placement(&self, p: &FigurePair) -> Placement {
        let other = match p.sides {
            Sides::Same => SphereSide::Inside,
            Sides::Opposite => SphereSide::Outside,
        };
        [(p.f, SphereSide::Inside), (p.f2, other)].into()
    }
}

/// Fixture names paired with their JSON text.
pub const SOURCES: [(&str, &str); 6] = [
    (
        "fig01-cycle-conflict",
        include_str!("../../../fixtures/fig01-cycle-conflict.json"),
    ),
    (
        "fig05-k42-conflict",
        include_str!("../../../fixtures/fig05-k42-conflict.json"),
    ),
    (
        "fig07-k6-octahedral",
        include_str!("../../../fixtures/fig07-k6-octahedral.json"),
    ),
    (
        "fig08-petersen-anticonflict",
        include_str!("../../../fixtures/fig08-petersen-anticonflict.json"),
    ),
    (
        "fig09-k44e-balanced-strong",
        include_str!("../../../fixtures/fig09-k44e-balanced-strong.json"),
    ),
    (
        "fig12-anticonflict-link",
        include_str!("../../../fixtures/fig12-anticonflict-link.json"),
    ),
];

pub fn figure(name: &str) -> Result<Figure> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Input(format!("unknown fixture {name:?}")))?;
    Figure::from_json(&serde_json::from_str(text)?)
}

pub fn figures() -> Result<Vec<Figure>> {
    SOURCES.iter().map(|(n, _)| figure(n)).collect()
}
