//! Maximal planar spanning subgraphs of a nonplanar graph.
//!
//! Complements are searched by increasing size. A planar `G − S` whose
//! complement `S` contains no smaller planar complement is maximal, so the
//! minimal planarizing edge sets are exactly the maximal planar subgraphs.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, ColoredGraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::planarity::is_planar;
use crate::spatial::{fragments_of, Fragment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalPlanarSubgraph {
    pub host: Graph,
    pub m: Graph,
    pub fragments: Vec<Fragment>,
}

impl MaximalPlanarSubgraph {
    pub fn from_complement(host: &Graph, removed: &BTreeSet<EdgeId>) -> Self {
        let keep: BTreeSet<EdgeId> = host.edge_ids().filter(|e| !removed.contains(e)).collect();
        let m = host.edge_subgraph(&keep);
        let fragments = fragments_of(host, &m);
        MaximalPlanarSubgraph {
            host: host.clone(),
            m,
            fragments,
        }
    }

    pub fn removed(&self) -> BTreeSet<EdgeId> {
        self.fragments.iter().map(|f| f.edge).collect()
    }
}

/// How maximal planar subgraphs are identified when counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classing {
    /// Every edge set counts.
    Labeled,
    /// Isomorphism classes of `M` alone.
    PlainIso,
    /// Classes of `(M, fragments)` under automorphisms of `G`.
    FragmentIso,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpsCounts {
    pub labeled: usize,
    pub plain_iso: usize,
    pub fragment_iso: usize,
}

impl MpsCounts {
    pub fn get(&self, c: Classing) -> usize {
        match c {
            Classing::Labeled => self.labeled,
            Classing::PlainIso => self.plain_iso,
            Classing::FragmentIso => self.fragment_iso,
        }
    }
}

pub fn is_maximal_planar_subgraph(g: &Graph, m: &Graph) -> bool {
    if !m.is_subgraph_of(g) || m.vertex_set() != g.vertex_set() || !is_planar(m) {
        return false;
    }
    g.edges().filter(|e| !m.has_edge(e.id)).all(|e| {
        let mut bigger = m.clone();
        bigger.insert_edge(e).expect("edge of host");
        !is_planar(&bigger)
    })
}

/// All maximal planar subgraphs in order of (complement size, complement
/// edge ids).
pub fn enumerate_labeled(g: &Graph) -> Result<Vec<MaximalPlanarSubgraph>> {
    let mut out = Vec::new();
    visit_labeled(g, |level| {
        out.extend_from_slice(level);
        true
    })?;
    Ok(out)
}

/// Hands each complement-size level to `visit` in labeled order; stops early
/// when `visit` returns false.
pub fn visit_labeled(
    g: &Graph,
    mut visit: impl FnMut(&[MaximalPlanarSubgraph]) -> bool,
) -> Result<()> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if is_planar(g) {
        return Err(Error::PlanarHost);
    }
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    let mut found: Vec<BTreeSet<EdgeId>> = Vec::new();
    for k in 1..=edges.len() {
        let candidates = combinations(&edges, k);
        let level: Vec<BTreeSet<EdgeId>> = candidates
            .into_par_iter()
            .filter(|s| !found.iter().any(|t| t.is_subset(s)))
            .filter(|s| {
                let keep: BTreeSet<EdgeId> =
                    edges.iter().copied().filter(|e| !s.contains(e)).collect();
                is_planar(&g.edge_subgraph(&keep))
            })
            .collect();
        let ms: Vec<MaximalPlanarSubgraph> = level
            .iter()
            .map(|s| MaximalPlanarSubgraph::from_complement(g, s))
            .collect();
        found.extend(level);
        if !ms.is_empty() && !visit(&ms) {
            return Ok(());
        }
        // every maximal planar subgraph spans a connected planar graph with a
        // spanning tree, so no complement exceeds |E| - (|V| - 1)
        if k >= edges.len() + 1 - g.vertex_count() {
            break;
        }
    }
    Ok(())
}

fn combinations(items: &[EdgeId], k: usize) -> Vec<BTreeSet<EdgeId>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    let n = items.len();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

pub fn class_key(mps: &MaximalPlanarSubgraph, classing: Classing) -> Vec<u8> {
    match classing {
        Classing::Labeled => {
            let removed = mps.removed();
            removed.iter().flat_map(|e| e.to_le_bytes()).collect()
        }
        Classing::PlainIso => canonical_form(&mps.m),
        Classing::FragmentIso => {
            let removed = mps.removed();
            let (cg, _) = ColoredGraph::from_graph(&mps.host, |e| u8::from(removed.contains(&e)));
            cg.canonical_label()
        }
    }
}

/// One representative per class, the first in labeled order.
pub fn enumerate_classes(g: &Graph, classing: Classing) -> Result<Vec<MaximalPlanarSubgraph>> {
    let all = enumerate_labeled(g)?;
    Ok(dedup(all, classing))
}

fn dedup(all: Vec<MaximalPlanarSubgraph>, classing: Classing) -> Vec<MaximalPlanarSubgraph> {
    let mut seen = HashSet::new();
    all.into_iter()
        .filter(|m| seen.insert(class_key(m, classing)))
        .collect()
}

/// `up_to_iso` picks classes of `(M, fragments)`; otherwise every labeled
/// subgraph is returned.
pub fn enumerate_maximal_planar_subgraphs(
    g: &Graph,
    up_to_iso: bool,
) -> Result<Vec<MaximalPlanarSubgraph>> {
    enumerate_classes(
        g,
        if up_to_iso {
            Classing::FragmentIso
        } else {
            Classing::Labeled
        },
    )
}

pub fn count_all(g: &Graph) -> Result<MpsCounts> {
    let all = enumerate_labeled(g)?;
    Ok(MpsCounts {
        labeled: all.len(),
        plain_iso: dedup(all.clone(), Classing::PlainIso).len(),
        fragment_iso: dedup(all, Classing::FragmentIso).len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tutte::reference_planarity;

    /// Independent enumeration: all edge subsets, kept when planar and no
    /// single edge can be added back.
    fn naive(g: &Graph) -> BTreeSet<BTreeSet<EdgeId>> {
        let edges: Vec<EdgeId> = g.edge_ids().collect();
        let mut out = BTreeSet::new();
        for mask in 0u32..1 << edges.len() {
            let keep: BTreeSet<EdgeId> = (0..edges.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| edges[i])
                .collect();
            let m = g.edge_subgraph(&keep);
            if !reference_planarity(&m) {
                continue;
            }
            let maximal = edges.iter().filter(|e| !keep.contains(e)).all(|&e| {
                let mut k = keep.clone();
                k.insert(e);
                !reference_planarity(&g.edge_subgraph(&k))
            });
            if maximal {
                out.insert(
                    edges
                        .iter()
                        .copied()
                        .filter(|e| !keep.contains(e))
                        .collect(),
                );
            }
        }
        out
    }

    #[test]
    fn k5_has_ten_single_edge_complements() {
        let k5 = Graph::complete(5);
        let all = enumerate_labeled(&k5).unwrap();
        assert_eq!(all.len(), 10);
        assert!(all
            .iter()
            .all(|m| m.fragments.len() == 1 && is_maximal_planar_subgraph(&k5, &m.m)));
        let got: BTreeSet<_> = all.iter().map(MaximalPlanarSubgraph::removed).collect();
        assert_eq!(got, naive(&k5));
        assert_eq!(
            count_all(&k5).unwrap(),
            MpsCounts {
                labeled: 10,
                plain_iso: 1,
                fragment_iso: 1
            }
        );
    }

    #[test]
    fn k33_matches_naive() {
        let k33 = Graph::complete_bipartite(3, 3);
        let all = enumerate_labeled(&k33).unwrap();
        let got: BTreeSet<_> = all.iter().map(MaximalPlanarSubgraph::removed).collect();
        assert_eq!(got, naive(&k33));
        assert_eq!(all.len(), 9);
    }

    #[test]
    fn k6_triangulations() {
        let k6 = Graph::complete(6);
        let all = enumerate_labeled(&k6).unwrap();
        assert!(all
            .iter()
            .all(|m| m.m.edge_count() == 12 && m.fragments.len() == 3));
        assert!(all.iter().all(|m| is_maximal_planar_subgraph(&k6, &m.m)));
        let oct = canonical_form(&crate::embedding::tests::octahedron());
        let octahedral = all.iter().filter(|m| canonical_form(&m.m) == oct).count();
        assert_eq!(octahedral, 15);
    }

    #[test]
    fn maximality_examples() {
        let k6 = Graph::complete(6);
        let matching: BTreeSet<EdgeId> = [(0, 3), (1, 4), (2, 5)]
            .iter()
            .map(|&(a, b)| k6.edges_between(a, b).next().unwrap())
            .collect();
        let oct = MaximalPlanarSubgraph::from_complement(&k6, &matching).m;
        assert!(is_maximal_planar_subgraph(&k6, &oct));
        let eleven = oct.delete_edge(oct.edge_ids().next().unwrap()).unwrap();
        assert!(!is_maximal_planar_subgraph(&k6, &eleven));
        let k5 = Graph::complete(5);
        assert!(is_maximal_planar_subgraph(&k5, &k5.delete_edge(0).unwrap()));
    }

    #[test]
    fn planar_host_rejected() {
        assert!(matches!(
            enumerate_labeled(&Graph::complete(4)),
            Err(Error::PlanarHost)
        ));
    }
}
