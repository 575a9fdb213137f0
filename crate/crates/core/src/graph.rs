//! Labeled undirected multigraphs with pure minor operations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

/// Hosts up to this many vertices may use the bitmask fast paths.
pub const MAX_DENSE_VERTICES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn other(&self, w: VertexId) -> VertexId {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn joins(&self, a: VertexId, b: VertexId) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// An undirected multigraph whose vertices and edges carry stable integer ids.
///
/// Every operation returns a new value; edge ids are never reused within one
/// derivation history because fresh ids are drawn from a monotone counter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_edge: EdgeId,
}

/// Association from original vertex ids to current vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct VertexMap {
    map: BTreeMap<VertexId, VertexId>,
}

impl VertexMap {
    pub fn identity<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        VertexMap {
            map: vertices.into_iter().map(|v| (v, v)).collect(),
        }
    }

    /// Current image of `v`; vertices never touched map to themselves.
    pub fn get(&self, v: VertexId) -> VertexId {
        self.map.get(&v).copied().unwrap_or(v)
    }

    /// Composition `next ∘ self`.
    pub fn then(&self, next: &VertexMap) -> VertexMap {
        let mut map: BTreeMap<_, _> = self.map.iter().map(|(&k, &v)| (k, next.get(v))).collect();
        for (&k, &v) in &next.map {
            map.entry(k).or_insert(v);
        }
        VertexMap { map }
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }
}

/// A simple cycle, listed as a cyclic vertex sequence together with the edge
/// joining each vertex to its successor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Builds the cycle through `vertices` in `g`, picking the lowest-id edge
    /// between consecutive vertices.
    pub fn from_vertices(g: &Graph, vertices: &[VertexId]) -> Result<Cycle> {
        let k = vertices.len();
        if k < 2 {
            return Err(Error::NotACycle("fewer than two vertices".into()));
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != k {
            return Err(Error::NotACycle("repeated vertex".into()));
        }
        let mut edges = Vec::with_capacity(k);
        for i in 0..k {
            let (a, b) = (vertices[i], vertices[(i + 1) % k]);
            let candidates: Vec<EdgeId> = g.edges_between(a, b).collect();
            let e = if k == 2 {
                // a digon needs two distinct parallel edges
                candidates.get(i).copied()
            } else {
                candidates.first().copied()
            };
            match e {
                Some(e) => edges.push(e),
                None => return Err(Error::NotACycle(format!("no edge {a}-{b}"))),
            }
        }
        Ok(Cycle {
            vertices: vertices.to_vec(),
            edges,
        })
    }

    /// Checks that every listed edge exists in `g` and joins its neighbours.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let k = self.vertices.len();
        if k < 2 || self.edges.len() != k {
            return Err(Error::NotACycle("length mismatch".into()));
        }
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        if distinct.len() != k {
            return Err(Error::NotACycle("repeated vertex".into()));
        }
        let distinct_edges: BTreeSet<_> = self.edges.iter().collect();
        if distinct_edges.len() != k {
            return Err(Error::NotACycle("repeated edge".into()));
        }
        for i in 0..k {
            let e = g
                .edge(self.edges[i])
                .ok_or(Error::UnknownEdge(self.edges[i]))?;
            if !e.joins(self.vertices[i], self.vertices[(i + 1) % k]) {
                return Err(Error::NotACycle(format!(
                    "edge {} does not join {} and {}",
                    e.id,
                    self.vertices[i],
                    self.vertices[(i + 1) % k]
                )));
            }
        }
        Ok(())
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        Graph {
            vertices: vertices.into_iter().collect(),
            ..Default::default()
        }
    }

    /// Builds a graph from endpoint pairs; edge ids are assigned 0, 1, 2, ...
    pub fn from_pairs(pairs: &[(VertexId, VertexId)]) -> Self {
        let mut g = Graph::new();
        for &(u, v) in pairs {
            g.add_vertex(u);
            g.add_vertex(v);
            g.add_edge(u, v).expect("endpoints were just added");
        }
        g
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(
        vertices: &[VertexId],
        edges: I,
    ) -> Result<Self> {
        let mut g = Graph::with_vertices(vertices.iter().copied());
        for e in edges {
            g.insert_edge(e)?;
        }
        Ok(g)
    }

    pub fn complete(n: u32) -> Self {
        let mut g = Graph::with_vertices(0..n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn cycle_graph(n: u32) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_pairs(&pairs)
    }

    pub fn complete_bipartite(a: u32, b: u32) -> Self {
        let mut g = Graph::with_vertices(0..a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    /// The classic Petersen graph: outer 5-cycle 0..5, spokes, inner pentagram 5..10.
    pub fn petersen() -> Self {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_pairs(&pairs)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        self.vertices.insert(v)
    }

    pub fn fresh_vertex(&self) -> VertexId {
        self.vertices.iter().next_back().map_or(0, |v| v + 1)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        let id = self.next_edge;
        self.insert_edge(Edge { id, u, v })?;
        Ok(id)
    }

    /// Inserts an edge with a caller-chosen id.
    pub fn insert_edge(&mut self, e: Edge) -> Result<()> {
        for w in [e.u, e.v] {
            if !self.vertices.contains(&w) {
                return Err(Error::UnknownVertex(w));
            }
        }
        if self.edges.contains_key(&e.id) {
            return Err(Error::DuplicateEdge(e.id));
        }
        self.edges.insert(e.id, (e.u, e.v));
        self.next_edge = self.next_edge.max(e.id + 1);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + ExactSizeIterator + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|(&id, &(u, v))| Edge { id, u, v })
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge(&self, id: EdgeId) -> Option<Edge> {
        self.edges.get(&id).map(|&(u, v)| Edge { id, u, v })
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.edges.contains_key(&id)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.next_edge
    }

    pub fn edges_between(&self, a: VertexId, b: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().filter(move |e| e.joins(a, b)).map(|e| e.id)
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.edges_between(a, b).next().is_some()
    }

    /// Incident edges of `v` in edge-id order; a loop is reported once.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = Edge> + '_ {
        self.edges().filter(move |e| e.u == v || e.v == v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v)
            .map(|e| if e.is_loop() { 2 } else { 1 })
            .sum()
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.incident(v)
            .map(|e| e.other(v))
            .filter(|&w| w != v)
            .collect()
    }

    pub fn adjacency(&self) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = self
            .vertices
            .iter()
            .map(|&v| (v, BTreeSet::new()))
            .collect();
        for e in self.edges() {
            if !e.is_loop() {
                adj.get_mut(&e.u).unwrap().insert(e.v);
                adj.get_mut(&e.v).unwrap().insert(e.u);
            }
        }
        adj
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.vertices().map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges()
            .all(|e| !e.is_loop() && seen.insert((e.u.min(e.v), e.u.max(e.v))))
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Graph> {
        if !self.edges.contains_key(&e) {
            return Err(Error::UnknownEdge(e));
        }
        let mut g = self.clone();
        g.edges.remove(&e);
        Ok(g)
    }

    pub fn delete_vertex(&self, v: VertexId) -> Result<Graph> {
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v));
        }
        let mut g = self.clone();
        g.vertices.remove(&v);
        g.edges.retain(|_, &mut (a, b)| a != v && b != v);
        Ok(g)
    }

    /// Merges the endpoints of `e` into the lower id. Loops produced by the
    /// merge are dropped; parallel edges are kept under their own ids.
    pub fn contract_edge(&self, e: EdgeId) -> Result<(Graph, VertexMap)> {
        let edge = self.edge(e).ok_or(Error::UnknownEdge(e))?;
        if edge.is_loop() {
            return Err(Error::ContractLoop(e));
        }
        let keep = edge.u.min(edge.v);
        let gone = edge.u.max(edge.v);
        let mut g = self.clone();
        g.vertices.remove(&gone);
        let mut edges = BTreeMap::new();
        for (&id, &(a, b)) in &self.edges {
            let a = if a == gone { keep } else { a };
            let b = if b == gone { keep } else { b };
            if a != b {
                edges.insert(id, (a, b));
            }
        }
        g.edges = edges;
        let mut map = VertexMap::identity(self.vertices());
        map.map.insert(gone, keep);
        Ok((g, map))
    }

    /// Drops loops and collapses every parallel class onto its lowest id.
    pub fn simplify(&self) -> Graph {
        let mut g = self.clone();
        let mut seen = BTreeSet::new();
        g.edges
            .retain(|_, &mut (a, b)| a != b && seen.insert((a.min(b), a.max(b))));
        g
    }

    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let mut g = self.clone();
        g.vertices.retain(|v| keep.contains(v));
        g.edges
            .retain(|_, &mut (a, b)| keep.contains(&a) && keep.contains(&b));
        g
    }

    /// Spanning subgraph keeping only the listed edges.
    pub fn edge_subgraph(&self, keep: &BTreeSet<EdgeId>) -> Graph {
        let mut g = self.clone();
        g.edges.retain(|id, _| keep.contains(id));
        g
    }

    pub fn is_subgraph_of(&self, host: &Graph) -> bool {
        self.vertices.is_subset(&host.vertices)
            && self
                .edges()
                .all(|e| host.edge(e.id).is_some_and(|h| h.joins(e.u, e.v)))
    }

    /// Renames vertices through `f` (must be injective); edge ids are kept.
    pub fn relabel(&self, f: impl Fn(VertexId) -> VertexId) -> Graph {
        Graph {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
            edges: self
                .edges
                .iter()
                .map(|(&id, &(a, b))| (id, (f(a), f(b))))
                .collect(),
            next_edge: self.next_edge,
        }
    }

    /// Relabels vertices to 0..n in increasing order of their current ids and
    /// edge ids to 0..m.
    pub fn normalized(&self) -> Graph {
        let index: BTreeMap<_, _> = self
            .vertices()
            .enumerate()
            .map(|(i, v)| (v, i as u32))
            .collect();
        let mut g = Graph::with_vertices(0..self.vertex_count() as u32);
        for e in self.edges() {
            g.add_edge(index[&e.u], index[&e.v]).unwrap();
        }
        g
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &s in &self.vertices {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = BTreeSet::from([s]);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[&v] {
                    if seen.insert(w) {
                        comp.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Shortest path from `s` to `t` using only vertices accepted by `allowed`
    /// (endpoints must also be allowed). Returns the vertex sequence.
    pub fn bfs_path(
        &self,
        s: VertexId,
        t: VertexId,
        allowed: impl Fn(VertexId) -> bool,
    ) -> Option<Vec<VertexId>> {
        if !allowed(s) || !allowed(t) {
            return None;
        }
        let adj = self.adjacency();
        let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::from([(s, s)]);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                let mut path = vec![t];
                let mut cur = t;
                while cur != s {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in adj.get(&v)? {
                if allowed(w) && !parent.contains_key(&w) {
                    parent.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Every simple cycle exactly once, ordered by length then by vertex
    /// sequence. Each cycle starts at its smallest vertex and is oriented so
    /// that the second vertex is smaller than the last.
    pub fn enumerate_cycles(&self) -> Vec<Cycle> {
        let adj = self.adjacency();
        let mut out = Vec::new();
        for &s in &self.vertices {
            let mut path = vec![s];
            let mut on_path = BTreeSet::from([s]);
            cycles_from(self, &adj, s, &mut path, &mut on_path, &mut out);
        }
        out.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.vertices.cmp(&b.vertices))
        });
        out
    }

    /// Cycles of length at most `max_len`, same conventions as `enumerate_cycles`.
    pub fn enumerate_cycles_up_to(&self, max_len: usize) -> Vec<Cycle> {
        let mut all = self.enumerate_cycles();
        all.retain(|c| c.len() <= max_len);
        all
    }

    pub fn girth(&self) -> Option<usize> {
        self.enumerate_cycles().first().map(Cycle::len)
    }
}

fn cycles_from(
    g: &Graph,
    adj: &BTreeMap<VertexId, BTreeSet<VertexId>>,
    start: VertexId,
    path: &mut Vec<VertexId>,
    on_path: &mut BTreeSet<VertexId>,
    out: &mut Vec<Cycle>,
) {
    let last = *path.last().unwrap();
    for &w in &adj[&last] {
        if w == start && path.len() >= 3 && path[1] < last {
            let c = Cycle::from_vertices(g, path).expect("closed walk on simple graph");
            out.push(c);
        } else if w > start && !on_path.contains(&w) {
            path.push(w);
            on_path.insert(w);
            cycles_from(g, adj, start, path, on_path, out);
            on_path.remove(&w);
            path.pop();
        }
    }
}

/// Index-based bitmask view of a simple graph on at most 32 vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dense {
    pub ids: Vec<VertexId>,
    pub adj: Vec<u32>,
}

impl Dense {
    pub fn new(g: &Graph) -> Self {
        assert!(
            g.vertex_count() <= MAX_DENSE_VERTICES,
            "graph too large for bitmask view"
        );
        let ids: Vec<VertexId> = g.vertices().collect();
        let pos: BTreeMap<_, _> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![0u32; ids.len()];
        for e in g.edges() {
            if e.is_loop() {
                continue;
            }
            let (a, b) = (pos[&e.u], pos[&e.v]);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Dense { ids, adj }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.iter().position(|&w| w == v)
    }

    /// Is the vertex set `mask` connected (and nonempty)?
    pub fn connected_within(&self, mask: u32) -> bool {
        if mask == 0 {
            return false;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & mask & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn delete_edge_of_triangle_leaves_path() {
        let t = Graph::cycle_graph(3);
        let e = t.edges_between(0, 1).next().unwrap();
        let p = t.delete_edge(e).unwrap();
        assert_eq!(p.edge_count(), 2);
        assert!(!p.adjacent(0, 1));
        assert!(p.is_connected());
        assert_eq!(t.edge_count(), 3, "input untouched");
        assert!(matches!(t.delete_edge(99), Err(Error::UnknownEdge(99))));
    }

    #[test]
    fn k5_minus_edge_stays_connected() {
        let k5 = Graph::complete(5);
        for e in k5.edge_ids() {
            let h = k5.delete_edge(e).unwrap();
            assert_eq!(h.edge_count(), 9);
            assert!(h.is_connected());
        }
    }

    #[test]
    fn k6_minus_matching_has_octahedron_degrees() {
        let k6 = Graph::complete(6);
        let mut g = k6.clone();
        for (a, b) in [(0, 3), (1, 4), (2, 5)] {
            let e = g.edges_between(a, b).next().unwrap();
            g = g.delete_edge(e).unwrap();
        }
        assert_eq!(g.degree_sequence(), vec![4; 6]);
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn contraction_examples() {
        let p = Graph::from_pairs(&[(1, 2), (2, 3)]);
        let (c, map) = p.contract_edge(0).unwrap();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_count(), 1);
        assert!(c.adjacent(1, 3));
        assert_eq!(map.get(2), 1);
        assert_eq!(map.get(3), 3);

        let t = Graph::cycle_graph(3);
        let (c, _) = t.contract_edge(0).unwrap();
        assert_eq!(c.edge_count(), 2);
        assert!(!c.is_simple());
        assert_eq!(c.simplify().edge_count(), 1);

        let k6 = Graph::complete(6);
        let (c, _) = k6.contract_edge(0).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (5, 14));
        assert_eq!(c.simplify().edge_count(), 10);
    }

    #[test]
    fn contracting_a_loop_is_an_error() {
        let mut g = Graph::with_vertices([0, 1]);
        g.add_edge(0, 1).unwrap();
        let l = g.add_edge(1, 1).unwrap();
        assert!(matches!(g.contract_edge(l), Err(Error::ContractLoop(_))));
        assert!(matches!(g.contract_edge(7), Err(Error::UnknownEdge(7))));
    }

    #[test]
    fn simplify_identity_on_simple_graphs() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.simplify(), k4);
    }

    #[test]
    fn cycle_counts_match_closed_form() {
        for n in 3..=6u64 {
            let expected: u64 = (3..=n).map(|k| binom(n, k) * factorial(k - 1) / 2).sum();
            let got = Graph::complete(n as u32).enumerate_cycles().len() as u64;
            assert_eq!(got, expected, "K{n}");
        }
        assert_eq!(Graph::complete(4).enumerate_cycles().len(), 7);
        assert_eq!(Graph::complete(5).enumerate_cycles().len(), 37);
        assert_eq!(Graph::cycle_graph(3).enumerate_cycles().len(), 1);
        assert!(Graph::from_pairs(&[(0, 1), (1, 2)])
            .enumerate_cycles()
            .is_empty());
    }

    #[test]
    fn enumerated_cycles_validate() {
        let p = Graph::petersen();
        let cycles = p.enumerate_cycles();
        assert_eq!(p.girth(), Some(5));
        for c in &cycles {
            c.validate(&p).unwrap();
        }
        let set: BTreeSet<_> = cycles.iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(set.len(), cycles.len());
    }

    #[test]
    fn vertex_map_composition() {
        let g = Graph::from_pairs(&[(1, 2), (2, 3), (3, 4)]);
        let (g1, m1) = g.contract_edge(1).unwrap(); // 2,3 -> 2
        let e = g1.edges_between(2, 4).next().unwrap();
        let (_, m2) = g1.contract_edge(e).unwrap(); // 2,4 -> 2
        let m = m1.then(&m2);
        assert_eq!(m.get(3), 2);
        assert_eq!(m.get(4), 2);
        assert_eq!(m.get(1), 1);
    }
}
