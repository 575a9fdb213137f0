//! File formats: graph JSON (optionally with rotations), signed-graph JSON,
//! DOT export and input hashing.
//!
//! Graph JSON: `{"vertices":[0,1,...],"edges":[[id,u,v],...]}` with an
//! optional `"rotations":{"0":[dart,...],...}` where dart `2·id` leaves `u`
//! and dart `2·id + 1` leaves `v`.
//!
//! Signed-graph JSON: `{"vertices":[...],"edges":[[u,v,"+"],[u,v,"-"],...]}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::embedding::{Dart, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Graph, VertexId};
use crate::signed::{Sign, SignedGraph};
use crate::spatial::SignedConflictGraph;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(EdgeId, VertexId, VertexId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotations: Option<BTreeMap<String, Vec<Dart>>>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertices().collect(),
            edges: g.edges().map(|e| (e.id, e.u, e.v)).collect(),
            rotations: None,
        }
    }

    pub fn from_rotation_system(rs: &RotationSystem) -> Self {
        let mut j = Self::from_graph(rs.graph());
        j.rotations = Some(
            rs.rotations()
                .iter()
                .map(|(v, r)| (v.to_string(), r.clone()))
                .collect(),
        );
        j
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(
            &self.vertices,
            self.edges.iter().map(|&(id, u, v)| Edge { id, u, v }),
        )
    }

    pub fn to_rotation_system(&self) -> Result<Option<RotationSystem>> {
        let Some(rot) = &self.rotations else {
            return Ok(None);
        };
        let g = self.to_graph()?;
        let mut rotations = BTreeMap::new();
        for (k, r) in rot {
            let v: VertexId = k
                .parse()
                .map_err(|_| Error::MalformedRotation(format!("bad vertex key {k:?}")))?;
            rotations.insert(v, r.clone());
        }
        RotationSystem::new(g, rotations).map(Some)
    }
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from_graph(g)).expect("graph serializes")
}

pub fn graph_from_json(s: &str) -> Result<Graph> {
    serde_json::from_str::<GraphJson>(s)?.to_graph()
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    graph_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_graph_json(path: &Path) -> Result<GraphJson> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Serde adapter storing a [`Graph`] in the graph JSON layout.
pub mod graph_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from_graph(g).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Graph, D::Error> {
        let j = GraphJson::deserialize(d)?;
        j.to_graph().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignedGraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId, String)>,
}

pub fn signed_graph_from_json(s: &str) -> Result<SignedGraph> {
    let j: SignedGraphJson = serde_json::from_str(s)?;
    let mut sg = SignedGraph::with_vertices(j.vertices.iter().copied());
    for (u, v, sign) in j.edges {
        let sign = Sign::parse(&sign).ok_or_else(|| {
            Error::InvalidSignedGraph(format!("sign must be \"+\" or \"-\", got {sign:?}"))
        })?;
        sg.add_edge(u, v, sign)?;
    }
    Ok(sg)
}

pub fn signed_graph_to_json(sg: &SignedGraph) -> String {
    let j = SignedGraphJson {
        vertices: sg.vertices().collect(),
        edges: sg
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.sign.symbol().to_string()))
            .collect(),
    };
    serde_json::to_string(&j).expect("signed graph serializes")
}

fn sign_color(s: Sign) -> &'static str {
    match s {
        Sign::Minus => "red",
        Sign::Plus => "green",
    }
}

/// DOT for a signed graph: red negative, green positive, all solid.
pub fn signed_graph_dot(sg: &SignedGraph) -> String {
    let mut out = String::from("graph signed {\n  node [shape=circle];\n");
    for v in sg.vertices() {
        let _ = writeln!(out, "  {v};");
    }
    for e in sg.edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [color={}, label=\"{}\"];",
            e.u,
            e.v,
            sign_color(e.sign),
            e.sign
        );
    }
    out.push_str("}\n");
    out
}

/// DOT for a conflict graph: solid strong edges, dashed implicit edges, red
/// negative, green positive. Vertices are fragments named by edge id.
pub fn conflict_graph_dot(scg: &SignedConflictGraph) -> String {
    let mut out = String::from("graph conflict {\n  node [shape=circle];\n");
    for f in &scg.fragments {
        let _ = writeln!(
            out,
            "  f{} [label=\"{}: {}-{}\"];",
            f.edge, f.edge, f.a, f.b
        );
    }
    for e in &scg.edges {
        let style = if e.kind.is_strong() {
            "solid"
        } else {
            "dashed"
        };
        let _ = writeln!(
            out,
            "  f{} -- f{} [color={}, style={}, label=\"{}\"];",
            e.a,
            e.b,
            sign_color(e.sign),
            style,
            e.sign
        );
    }
    out.push_str("}\n");
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn hash_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::find_embedding;

    #[test]
    fn graph_round_trip() {
        let g = Graph::petersen();
        let back = graph_from_json(&graph_to_json(&g)).unwrap();
        assert_eq!(GraphJson::from_graph(&back), GraphJson::from_graph(&g));
    }

    #[test]
    fn rotations_round_trip() {
        let rs = find_embedding(&Graph::complete(4)).unwrap();
        let j = GraphJson::from_rotation_system(&rs);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"rotations\":{\"0\":"));
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(
            back.to_rotation_system().unwrap().unwrap().rotations(),
            rs.rotations()
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(graph_from_json("{\"vertices\":[0],\"edges\":[[0,0,7]]}").is_err());
        assert!(graph_from_json("{\"vertices\":[0,1],\"edges\":[[0,0,1]],\"extra\":1}").is_err());
        assert!(signed_graph_from_json("{\"vertices\":[0,1],\"edges\":[[0,1,\"x\"]]}").is_err());
    }

    #[test]
    fn signed_round_trip_and_dot() {
        let text = "{\"vertices\":[0,1,2],\"edges\":[[0,1,\"-\"],[1,2,\"-\"],[2,0,\"-\"]]}";
        let sg = signed_graph_from_json(text).unwrap();
        assert_eq!(signed_graph_to_json(&sg), text);
        let dot = signed_graph_dot(&sg);
        assert_eq!(dot.matches("color=red").count(), 3);
    }

    #[test]
    fn sha256_known_value() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
