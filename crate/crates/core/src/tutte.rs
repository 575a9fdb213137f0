//! Fragments of a cycle, Tutte's conflict graph and planarity by Tutte's
//! criterion, with an independent Kuratowski-minor planarity oracle.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Cycle, EdgeId, Graph, VertexId};
use crate::minor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FragmentKind {
    Chord,
    Component,
}

/// A bridge of a cycle: a chord, or a component of `G − C` with its edges of
/// attachment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleFragment {
    pub kind: FragmentKind,
    pub vertices: BTreeSet<VertexId>,
    pub attachments: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    /// `coloring[i]` is the side of vertex `i`.
    Coloring(Vec<bool>),
    /// An odd cycle, as a closed vertex sequence.
    OddCycle(Vec<usize>),
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Coloring(_))
    }
}

pub fn fragments_of_cycle(g: &Graph, c: &Cycle) -> Result<Vec<CycleFragment>> {
    c.validate(g)?;
    let on_cycle: BTreeSet<VertexId> = c.vertices.iter().copied().collect();
    let cycle_edges: BTreeSet<EdgeId> = c.edges.iter().copied().collect();
    let mut out = Vec::new();
    for e in g.edges() {
        if !cycle_edges.contains(&e.id) && on_cycle.contains(&e.u) && on_cycle.contains(&e.v) {
            out.push(CycleFragment {
                kind: FragmentKind::Chord,
                vertices: BTreeSet::new(),
                attachments: BTreeSet::from([e.u, e.v]),
                edges: BTreeSet::from([e.id]),
            });
        }
    }
    let adj = g.adjacency();
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for s in g.vertices() {
        if on_cycle.contains(&s) || seen.contains(&s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        seen.insert(s);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if !on_cycle.contains(&w) && seen.insert(w) {
                    comp.insert(w);
                    queue.push_back(w);
                }
            }
        }
        let mut attachments = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for e in g.edges() {
            let (iu, iv) = (comp.contains(&e.u), comp.contains(&e.v));
            if iu || iv {
                edges.insert(e.id);
                if !iu {
                    attachments.insert(e.u);
                }
                if !iv {
                    attachments.insert(e.v);
                }
            }
        }
        out.push(CycleFragment {
            kind: FragmentKind::Component,
            vertices: comp,
            attachments,
            edges,
        });
    }
    Ok(out)
}

/// Tutte's conflict relation between two fragments of `c`.
pub fn fragments_conflict(a: &CycleFragment, b: &CycleFragment, c: &Cycle) -> bool {
    if a.attachments.intersection(&b.attachments).count() >= 3 {
        return true;
    }
    let pos: BTreeMap<VertexId, usize> = c
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let pa: Vec<usize> = a
        .attachments
        .iter()
        .filter_map(|v| pos.get(v).copied())
        .collect();
    let pb: Vec<usize> = b
        .attachments
        .iter()
        .filter_map(|v| pos.get(v).copied())
        .collect();
    interleaved(&pa, &pb)
}

/// Do `a` and `b` contain four distinct positions alternating around a cycle?
fn interleaved(a: &[usize], b: &[usize]) -> bool {
    for (i, &x) in a.iter().enumerate() {
        for &y in &a[i + 1..] {
            let (lo, hi) = (x.min(y), x.max(y));
            let inside = b.iter().any(|&p| lo < p && p < hi);
            let outside = b.iter().any(|&p| p < lo || p > hi);
            if inside && outside {
                return true;
            }
        }
    }
    false
}

pub fn cycle_conflict_graph(g: &Graph, c: &Cycle) -> Result<(Vec<CycleFragment>, ConflictGraph)> {
    let frags = fragments_of_cycle(g, c)?;
    let mut edges = Vec::new();
    for i in 0..frags.len() {
        for j in i + 1..frags.len() {
            if fragments_conflict(&frags[i], &frags[j], c) {
                edges.push((i, j));
            }
        }
    }
    let cg = ConflictGraph {
        vertex_count: frags.len(),
        edges,
    };
    Ok((frags, cg))
}

/// Two-colours `h` by breadth-first search, or returns an odd cycle.
pub fn is_bipartite(h: &ConflictGraph) -> Bipartition {
    let n = h.vertex_count;
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &h.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                match color[w] {
                    None => {
                        color[w] = Some(!color[v].unwrap());
                        parent[w] = v;
                        depth[w] = depth[v] + 1;
                        queue.push_back(w);
                    }
                    Some(cw) if cw == color[v].unwrap() => {
                        // climb to the common ancestor
                        let (mut x, mut y) = (v, w);
                        let mut left = vec![x];
                        let mut right = vec![y];
                        while depth[x] > depth[y] {
                            x = parent[x];
                            left.push(x);
                        }
                        while depth[y] > depth[x] {
                            y = parent[y];
                            right.push(y);
                        }
                        while x != y {
                            x = parent[x];
                            y = parent[y];
                            left.push(x);
                            right.push(y);
                        }
                        right.pop();
                        right.reverse();
                        left.extend(right);
                        return Bipartition::OddCycle(left);
                    }
                    _ => {}
                }
            }
        }
    }
    Bipartition::Coloring(color.into_iter().map(Option::unwrap).collect())
}

/// Tutte's criterion: planar iff every cycle has a bipartite conflict graph.
/// Returns the first offending cycle (shortest first) when nonplanar.
pub fn tutte_planarity(g: &Graph) -> std::result::Result<(), Cycle> {
    for c in g.enumerate_cycles() {
        let (_, cg) = cycle_conflict_graph(g, &c).expect("enumerated cycles are valid");
        if !is_bipartite(&cg).is_bipartite() {
            return Err(c);
        }
    }
    Ok(())
}

pub fn is_planar_tutte(g: &Graph) -> bool {
    tutte_planarity(g).is_ok()
}

/// Planarity via Wagner's theorem: no `K5` and no `K3,3` minor, after the
/// edge bound `E ≤ 3V − 6`.
pub fn reference_planarity(g: &Graph) -> bool {
    let g = g.simplify();
    let v = g.vertex_count();
    if v >= 3 && g.edge_count() > 3 * v - 6 {
        return false;
    }
    if v < 5 || g.edge_count() < 9 {
        return true;
    }
    !minor::is_minor(&g, &Graph::complete(5))
        && !minor::is_minor(&g, &Graph::complete_bipartite(3, 3))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn octahedron() -> Graph {
        let mut g = Graph::complete(6);
        for (a, b) in [(0, 3), (1, 4), (2, 5)] {
            let e = g.edges_between(a, b).next().unwrap();
            g = g.delete_edge(e).unwrap();
        }
        g
    }

    #[test]
    fn k4_triangle_has_one_fragment() {
        let k4 = Graph::complete(4);
        let c = Cycle::from_vertices(&k4, &[0, 1, 2]).unwrap();
        let f = fragments_of_cycle(&k4, &c).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, FragmentKind::Component);
        assert_eq!(f[0].attachments, BTreeSet::from([0, 1, 2]));
        let (_, cg) = cycle_conflict_graph(&k4, &c).unwrap();
        assert!(cg.edges.is_empty());
    }

    #[test]
    fn k5_hamilton_cycle_has_five_chords_in_a_pentagon() {
        let k5 = Graph::complete(5);
        let c = Cycle::from_vertices(&k5, &[0, 1, 2, 3, 4]).unwrap();
        let (frags, cg) = cycle_conflict_graph(&k5, &c).unwrap();
        assert_eq!(frags.len(), 5);
        assert!(frags.iter().all(|f| f.kind == FragmentKind::Chord));
        assert_eq!(cg.edges.len(), 5);
        let mut deg = vec![0; 5];
        for &(a, b) in &cg.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        assert_eq!(deg, vec![2; 5]);
        match is_bipartite(&cg) {
            Bipartition::OddCycle(c) => assert_eq!(c.len() % 2, 1),
            other => panic!("expected odd cycle, got {other:?}"),
        }
    }

    #[test]
    fn conflict_rules() {
        let c5 = Graph::complete(5);
        let c = Cycle::from_vertices(&c5, &[1, 2, 3, 4, 0]).unwrap();
        let chord = |a, b| CycleFragment {
            kind: FragmentKind::Chord,
            vertices: BTreeSet::new(),
            attachments: BTreeSet::from([a, b]),
            edges: BTreeSet::new(),
        };
        assert!(fragments_conflict(&chord(1, 3), &chord(2, 4), &c));
        assert!(!fragments_conflict(&chord(1, 3), &chord(1, 4), &c));
        assert!(!fragments_conflict(&chord(1, 4), &chord(1, 3), &c));
        let tri = |x| CycleFragment {
            kind: FragmentKind::Component,
            vertices: BTreeSet::from([x]),
            attachments: BTreeSet::from([1, 2, 3]),
            edges: BTreeSet::new(),
        };
        assert!(fragments_conflict(&tri(10), &tri(11), &c));
    }

    #[test]
    fn bipartite_edge_cases() {
        assert!(is_bipartite(&ConflictGraph::default()).is_bipartite());
        let tree = ConflictGraph {
            vertex_count: 5,
            edges: vec![(0, 1), (0, 2), (2, 3), (2, 4)],
        };
        assert!(is_bipartite(&tree).is_bipartite());
    }

    #[test]
    fn every_edge_lies_in_cycle_or_one_fragment() {
        let p = Graph::petersen();
        for c in p.enumerate_cycles().iter().take(40) {
            let frags = fragments_of_cycle(&p, c).unwrap();
            let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
            for e in &c.edges {
                *count.entry(*e).or_default() += 1;
            }
            for f in &frags {
                for e in &f.edges {
                    *count.entry(*e).or_default() += 1;
                }
            }
            assert_eq!(count.len(), p.edge_count());
            assert!(count.values().all(|&n| n == 1));
        }
    }

    #[test]
    fn planarity_examples() {
        assert!(is_planar_tutte(&Graph::complete(4)));
        // shortest-first order: a 4-cycle whose two chords and the leftover
        // vertex pairwise conflict already fails
        let w = tutte_planarity(&Graph::complete(5)).unwrap_err();
        assert_eq!(w.len(), 4);
        let (_, cg) = cycle_conflict_graph(&Graph::complete(5), &w).unwrap();
        assert!(!is_bipartite(&cg).is_bipartite());
        assert!(!is_planar_tutte(&Graph::complete_bipartite(3, 3)));
        assert!(!reference_planarity(&Graph::complete(5)));
        assert!(reference_planarity(&octahedron()));
        assert!(!reference_planarity(&Graph::petersen()));
        assert!(!is_planar_tutte(&Graph::petersen()));
    }

    #[test]
    fn not_a_cycle_is_rejected() {
        let g = Graph::from_pairs(&[(0, 1), (1, 2)]);
        let bogus = Cycle {
            vertices: vec![0, 1, 2],
            edges: vec![0, 1, 0],
        };
        assert!(fragments_of_cycle(&g, &bogus).is_err());
    }
}
