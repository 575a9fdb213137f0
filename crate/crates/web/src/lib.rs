//! Browser bindings. Each export takes JSON text and returns JSON text; errors
//! come back as `{"error": "..."}` so the page needs no exception handling.

use serde_json::{json, Value};
use spatial_conflict::embedding::Equivalence;
use spatial_conflict::io::{
    conflict_graph_dot, graph_from_json, signed_graph_dot, signed_graph_from_json,
};
use spatial_conflict::maximal_planar::{enumerate_classes, Classing};
use spatial_conflict::petersen::fragment_embeddings;
use spatial_conflict::planarity::is_planar;
use spatial_conflict::signed::is_balanced;
use spatial_conflict::spatial::{
    build_conflict_graph, build_strong_conflict_graph, default_budget,
};
use spatial_conflict::tutte::tutte_planarity;
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(r: Result<Value, String>) -> String {
    let v = r.unwrap_or_else(|e| json!({ "error": e }));
    serde_json::to_string(&v).expect("serializable")
}

/// Planarity of a graph JSON, with a nonplanarity witness cycle.
#[wasm_bindgen]
pub fn planarity(graph_json: &str) -> String {
    respond((|| {
        let g = graph_from_json(graph_json).map_err(|e| e.to_string())?;
        let tutte = tutte_planarity(&g);
        Ok(json!({
            "planar": tutte.is_ok(),
            "agrees_with_path_embedding": tutte.is_ok() == is_planar(&g),
            "witness_cycle": tutte.err().map(|c| c.vertices),
        }))
    })())
}

/// Balance of a signed-graph JSON, with the certificate and a DOT drawing.
#[wasm_bindgen]
pub fn balance(signed_json: &str) -> String {
    respond((|| {
        let sg = signed_graph_from_json(signed_json).map_err(|e| e.to_string())?;
        let b = is_balanced(&sg);
        Ok(json!({
            "balanced": b.is_balanced(),
            "certificate": serde_json::to_value(&b).expect("serializable"),
            "dot": signed_graph_dot(&sg),
        }))
    })())
}

/// Conflict graph of the `mps_index`-th class of maximal planar subgraphs of
/// a nonplanar graph, in its `embedding`-th inequivalent embedding.
#[wasm_bindgen]
pub fn conflict_graph(
    graph_json: &str,
    mps_index: usize,
    embedding: usize,
    strong_only: bool,
) -> String {
    respond((|| {
        let g = graph_from_json(graph_json).map_err(|e| e.to_string())?;
        let classes = enumerate_classes(&g, Classing::FragmentIso).map_err(|e| e.to_string())?;
        let count = classes.len();
        let m = classes.into_iter().nth(mps_index).ok_or(format!(
            "maximal planar subgraph index {mps_index} out of range (0..{count})"
        ))?;
        let embs = fragment_embeddings(&m, Equivalence::Isomorphic).map_err(|e| e.to_string())?;
        let n_embs = embs.len();
        let rs = embs
            .get(embedding)
            .ok_or(format!("embedding {embedding} out of range (0..{n_embs})"))?;
        let scg = if strong_only {
            build_strong_conflict_graph(&g, &m, rs)
        } else {
            build_conflict_graph(&g, &m, rs, default_budget(rs))
        }
        .map_err(|e| e.to_string())?;
        Ok(json!({
            "mps_count": count,
            "embedding_count": n_embs,
            "balanced": scg.balance().is_balanced(),
            "complete": scg.is_complete(),
            "dot": conflict_graph_dot(&scg),
        }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    const K5: &str = r#"{"vertices":[0,1,2,3,4],"edges":[[0,0,1],[1,0,2],[2,0,3],[3,0,4],[4,1,2],[5,1,3],[6,1,4],[7,2,3],[8,2,4],[9,3,4]]}"#;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn planarity_of_k5() {
        let v = parse(&planarity(K5));
        assert_eq!(v["planar"], false);
        assert_eq!(v["agrees_with_path_embedding"], true);
        assert!(v["witness_cycle"].is_array());
    }

    #[test]
    fn negative_triangle_is_unbalanced() {
        let v = parse(&balance(
            r#"{"vertices":[0,1,2],"edges":[[0,1,"-"],[1,2,"-"],[2,0,"-"]]}"#,
        ));
        assert_eq!(v["balanced"], false);
        assert!(v["dot"].as_str().unwrap().contains("color=red"));
    }

    #[test]
    fn k5_conflict_graph_and_errors() {
        let v = parse(&conflict_graph(K5, 0, 0, false));
        assert_eq!(v["mps_count"], 1);
        assert!(v["dot"].as_str().unwrap().starts_with("graph conflict"));
        assert!(parse(&conflict_graph(K5, 5, 0, true))["error"].is_string());
        assert!(parse(&planarity("not json"))["error"].is_string());
    }
}
