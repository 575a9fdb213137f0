//! Sphere embeddings as rotation systems.
//!
//! Every edge `e` owns two darts: `2e` leaves the edge's first endpoint and
//! `2e + 1` leaves its second endpoint. A rotation system lists, for every
//! vertex, the cyclic order of the darts leaving it. Faces are the orbits of
//! `d ↦ succ(twin(d))`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Cycle, Edge, EdgeId, Graph, VertexId, VertexMap};

pub type Dart = u32;

pub fn dart(e: EdgeId, end: u32) -> Dart {
    2 * e + end
}

pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

pub fn edge_of(d: Dart) -> EdgeId {
    d >> 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationSystem {
    graph: Graph,
    rotations: BTreeMap<VertexId, Vec<Dart>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub darts: Vec<Dart>,
    /// Tail of each dart, in walk order (cut vertices may repeat).
    pub vertices: Vec<VertexId>,
}

impl Face {
    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// The two sides of a cycle in a sphere embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSides {
    pub cycle: Cycle,
    pub faces: Vec<Face>,
    pub face_side: Vec<Side>,
    pub vertex_side: BTreeMap<VertexId, Side>,
}

impl CycleSides {
    pub fn side_of(&self, v: VertexId) -> Option<Side> {
        self.vertex_side.get(&v).copied()
    }

    pub fn vertices_on(&self, side: Side) -> BTreeSet<VertexId> {
        self.vertex_side
            .iter()
            .filter(|(_, &s)| s == side)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn faces_on(&self, side: Side) -> usize {
        self.face_side.iter().filter(|&&s| s == side).count()
    }
}

/// How `enumerate_embeddings` identifies rotation systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equivalence {
    /// Every distinct rotation system counts.
    Labeled,
    /// Identified under graph automorphisms and global reflection.
    Isomorphic,
}

impl RotationSystem {
    pub fn new(graph: Graph, rotations: BTreeMap<VertexId, Vec<Dart>>) -> Result<Self> {
        let rs = RotationSystem { graph, rotations };
        rs.validate()?;
        Ok(rs)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.graph;
        if g.edges().any(|e| e.is_loop()) {
            return Err(Error::MalformedRotation("loops cannot be embedded".into()));
        }
        let mut seen = BTreeSet::new();
        for v in g.vertices() {
            let rot = self.rotations.get(&v).map(Vec::as_slice).unwrap_or(&[]);
            for &d in rot {
                if !seen.insert(d) {
                    return Err(Error::MalformedRotation(format!("dart {d} listed twice")));
                }
                match g.edge(edge_of(d)) {
                    Some(e) if self.tail_of(e, d) == v => {}
                    _ => {
                        return Err(Error::MalformedRotation(format!(
                            "dart {d} does not leave vertex {v}"
                        )))
                    }
                }
            }
        }
        if self.rotations.keys().any(|v| !g.has_vertex(*v)) {
            return Err(Error::MalformedRotation(
                "rotation for unknown vertex".into(),
            ));
        }
        if seen.len() != 2 * g.edge_count() {
            return Err(Error::MalformedRotation("some darts are missing".into()));
        }
        Ok(())
    }

    fn tail_of(&self, e: crate::graph::Edge, d: Dart) -> VertexId {
        if d & 1 == 0 {
            e.u
        } else {
            e.v
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotations(&self) -> &BTreeMap<VertexId, Vec<Dart>> {
        &self.rotations
    }

    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        self.rotations.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        let e = self.graph.edge(edge_of(d)).expect("dart of known edge");
        self.tail_of(e, d)
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.tail(twin(d))
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.graph.edge_ids().flat_map(|e| [dart(e, 0), dart(e, 1)])
    }

    /// The dart following each dart in its tail's rotation.
    pub fn successor_map(&self) -> HashMap<Dart, Dart> {
        let mut succ = HashMap::with_capacity(2 * self.graph.edge_count());
        for rot in self.rotations.values() {
            for (i, &d) in rot.iter().enumerate() {
                succ.insert(d, rot[(i + 1) % rot.len()]);
            }
        }
        succ
    }

    pub fn trace_faces(&self) -> Vec<Face> {
        let succ = self.successor_map();
        let mut visited = HashSet::new();
        let mut darts: Vec<Dart> = self.darts().collect();
        darts.sort_unstable();
        let mut faces = Vec::new();
        for start in darts {
            if visited.contains(&start) {
                continue;
            }
            let mut face = Face {
                darts: Vec::new(),
                vertices: Vec::new(),
            };
            let mut d = start;
            loop {
                visited.insert(d);
                face.darts.push(d);
                face.vertices.push(self.tail(d));
                d = succ[&twin(d)];
                if d == start {
                    break;
                }
            }
            faces.push(face);
        }
        faces
    }

    /// Sum of the Euler genera of the connected components.
    pub fn genus(&self) -> usize {
        let faces = self.trace_faces();
        let comps = self.graph.components();
        let mut comp_of = BTreeMap::new();
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of.insert(v, i);
            }
        }
        let mut v = vec![0i64; comps.len()];
        let mut e = vec![0i64; comps.len()];
        let mut f = vec![0i64; comps.len()];
        for (i, c) in comps.iter().enumerate() {
            v[i] = c.len() as i64;
        }
        for edge in self.graph.edges() {
            e[comp_of[&edge.u]] += 1;
        }
        for face in &faces {
            f[comp_of[&face.vertices[0]]] += 1;
        }
        (0..comps.len())
            .map(|i| {
                let faces = if e[i] == 0 { 1 } else { f[i] };
                ((2 - (v[i] - e[i] + faces)) / 2) as usize
            })
            .sum()
    }

    pub fn is_planar_embedding(&self) -> bool {
        self.genus() == 0
    }

    /// Mirror image: every rotation reversed.
    pub fn reflected(&self) -> RotationSystem {
        RotationSystem {
            graph: self.graph.clone(),
            rotations: self
                .rotations
                .iter()
                .map(|(&v, r)| {
                    let mut r = r.clone();
                    if r.len() > 1 {
                        r[1..].reverse();
                    }
                    (v, r)
                })
                .collect(),
        }
    }

    /// Restriction to a subgraph: darts of missing edges are dropped, cyclic
    /// order is kept.
    pub fn induced_embedding(&self, sub: &Graph) -> Result<RotationSystem> {
        if !sub.is_subgraph_of(&self.graph) {
            return Err(Error::NotSubgraph(
                "edges or vertices missing from host".into(),
            ));
        }
        let rotations = sub
            .vertices()
            .map(|v| {
                let r: Vec<Dart> = self
                    .rotation(v)
                    .iter()
                    .copied()
                    .filter(|&d| sub.has_edge(edge_of(d)))
                    .collect();
                (v, r)
            })
            .collect();
        Ok(RotationSystem {
            graph: sub.clone(),
            rotations,
        })
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<RotationSystem> {
        let graph = self.graph.delete_edge(e)?;
        let mut rotations = self.rotations.clone();
        for r in rotations.values_mut() {
            r.retain(|&d| edge_of(d) != e);
        }
        Ok(RotationSystem { graph, rotations })
    }

    /// Contracts `e`, splicing the two rotations at the merged vertex; loops
    /// created by parallel edges are removed.
    pub fn contract_edge(&self, e: EdgeId) -> Result<(RotationSystem, VertexMap)> {
        let edge = self.graph.edge(e).ok_or(Error::UnknownEdge(e))?;
        let (graph, map) = self.graph.contract_edge(e)?;
        let (du, dv) = (dart(e, 0), dart(e, 1));
        let after = |v: VertexId, d: Dart| -> Vec<Dart> {
            let r = self.rotation(v);
            let i = r.iter().position(|&x| x == d).expect("dart in rotation");
            (1..r.len()).map(|k| r[(i + k) % r.len()]).collect()
        };
        let mut merged = after(edge.u, du);
        merged.extend(after(edge.v, dv));
        merged.retain(|&d| graph.has_edge(edge_of(d)));
        let keep = edge.u.min(edge.v);
        let gone = edge.u.max(edge.v);
        let mut rotations = self.rotations.clone();
        rotations.remove(&gone);
        rotations.insert(keep, merged);
        for r in rotations.values_mut() {
            r.retain(|&d| graph.has_edge(edge_of(d)));
        }
        Ok((RotationSystem { graph, rotations }, map))
    }

    /// Inserts a new edge `id` from `tail(corner_a)` to `tail(corner_b)`,
    /// where both corners are darts of one face walk. The new darts are placed
    /// immediately before the corner darts, splitting that face.
    pub fn insert_edge_in_face(
        &self,
        id: EdgeId,
        corner_a: Dart,
        corner_b: Dart,
    ) -> Result<RotationSystem> {
        let (a, b) = (self.tail(corner_a), self.tail(corner_b));
        let mut graph = self.graph.clone();
        graph.insert_edge(crate::graph::Edge { id, u: a, v: b })?;
        let mut rotations = self.rotations.clone();
        for (v, corner, new) in [(a, corner_a, dart(id, 0)), (b, corner_b, dart(id, 1))] {
            let r = rotations.get_mut(&v).unwrap();
            let i = r.iter().position(|&x| x == corner).unwrap();
            r.insert(i, new);
        }
        Ok(RotationSystem { graph, rotations })
    }

    pub fn on_common_face(&self, u: VertexId, v: VertexId) -> bool {
        self.trace_faces()
            .iter()
            .any(|f| f.vertices.contains(&u) && f.vertices.contains(&v))
    }

    /// Two-colours the faces by the sides of `c`.
    pub fn sides_of_cycle(&self, c: &Cycle) -> Result<CycleSides> {
        c.validate(&self.graph)?;
        let faces = self.trace_faces();
        let mut face_of = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for &d in &f.darts {
                face_of.insert(d, i);
            }
        }
        let on_cycle: BTreeSet<EdgeId> = c.edges.iter().copied().collect();
        let mut parent: Vec<usize> = (0..faces.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        for e in self.graph.edge_ids() {
            if on_cycle.contains(&e) {
                continue;
            }
            let (x, y) = (
                find(&mut parent, face_of[&dart(e, 0)]),
                find(&mut parent, face_of[&dart(e, 1)]),
            );
            parent[x] = y;
        }
        let roots: BTreeSet<usize> = (0..faces.len()).map(|i| find(&mut parent, i)).collect();
        if roots.len() != 2 {
            return Err(Error::Jordan(format!("{} dual components", roots.len())));
        }
        let e0 = self.graph.edge(c.edges[0]).unwrap();
        let d0 = if e0.u == c.vertices[0] {
            dart(e0.id, 0)
        } else {
            dart(e0.id, 1)
        };
        let root_a = find(&mut parent, face_of[&d0]);
        let face_side: Vec<Side> = (0..faces.len())
            .map(|i| {
                if find(&mut parent, i) == root_a {
                    Side::A
                } else {
                    Side::B
                }
            })
            .collect();
        for &e in &c.edges {
            if face_side[face_of[&dart(e, 0)]] == face_side[face_of[&dart(e, 1)]] {
                return Err(Error::Jordan(format!("cycle edge {e} has one side only")));
            }
        }
        let mut vertex_side = BTreeMap::new();
        for v in self.graph.vertices() {
            if c.contains_vertex(v) {
                continue;
            }
            let mut sides = self.rotation(v).iter().map(|d| face_side[face_of[d]]);
            if let Some(s) = sides.next() {
                if sides.any(|t| t != s) {
                    return Err(Error::Jordan(format!("vertex {v} touches both sides")));
                }
                vertex_side.insert(v, s);
            }
        }
        Ok(CycleSides {
            cycle: c.clone(),
            faces,
            face_side,
            vertex_side,
        })
    }

    /// Canonical code under vertex relabelling and reflection, with `marks`
    /// (extra vertex pairs, e.g. fragment attachments) carried along. Only
    /// meaningful for connected graphs.
    pub fn canonical_code(&self, marks: &[(VertexId, VertexId)]) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        let succ = self.successor_map();
        let pred: HashMap<Dart, Dart> = succ.iter().map(|(&a, &b)| (b, a)).collect();
        let darts: Vec<Dart> = self.darts().collect();
        for &start in &darts {
            for mirrored in [false, true] {
                let next = if mirrored { &pred } else { &succ };
                let code = self.code_from(start, next, marks);
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        best.unwrap_or_else(|| {
            let mut code = vec![self.graph.vertex_count() as u32, 0];
            code.push(marks.len() as u32);
            code
        })
    }

    fn code_from(
        &self,
        start: Dart,
        next: &HashMap<Dart, Dart>,
        marks: &[(VertexId, VertexId)],
    ) -> Vec<u32> {
        let mut vnum: HashMap<VertexId, u32> = HashMap::new();
        let mut enum_: HashMap<EdgeId, u32> = HashMap::new();
        let mut entry: Vec<Dart> = Vec::new();
        let root = self.tail(start);
        vnum.insert(root, 0);
        entry.push(start);
        let mut code = vec![
            self.graph.vertex_count() as u32,
            self.graph.edge_count() as u32,
        ];
        let mut i = 0;
        while i < entry.len() {
            let first = entry[i];
            let v = self.tail(first);
            code.push(u32::MAX);
            code.push(self.rotation(v).len() as u32);
            let mut d = first;
            loop {
                let h = self.head(d);
                let hn = match vnum.get(&h) {
                    Some(&n) => n,
                    None => {
                        let n = vnum.len() as u32;
                        vnum.insert(h, n);
                        entry.push(twin(d));
                        n
                    }
                };
                let next_en = enum_.len() as u32;
                let en = *enum_.entry(edge_of(d)).or_insert(next_en);
                code.push(hn);
                code.push(en);
                d = next[&d];
                if d == first {
                    break;
                }
            }
            i += 1;
        }
        let mut mapped: Vec<(u32, u32)> = marks
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (
                    vnum.get(&a).copied().unwrap_or(u32::MAX),
                    vnum.get(&b).copied().unwrap_or(u32::MAX),
                );
                (x.min(y), x.max(y))
            })
            .collect();
        mapped.sort_unstable();
        code.push(u32::MAX);
        for (x, y) in mapped {
            code.push(x);
            code.push(y);
        }
        code
    }
}

/// All genus-0 rotation systems of a connected loopless graph.
pub fn enumerate_embeddings(g: &Graph, eq: Equivalence) -> Result<Vec<RotationSystem>> {
    enumerate_embeddings_marked(g, eq, &[])
}

/// As [`enumerate_embeddings`], but isomorphisms must also preserve the
/// marked vertex pairs (fragment attachments).
pub fn enumerate_embeddings_marked(
    g: &Graph,
    eq: Equivalence,
    marks: &[(VertexId, VertexId)],
) -> Result<Vec<RotationSystem>> {
    if g.edges().any(|e| e.is_loop()) {
        return Err(Error::MalformedRotation("loops cannot be embedded".into()));
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let mut found = Vec::new();
    let mut builder = Builder::new(g);
    builder.extend(0, &mut |rs| {
        found.push(rs);
        true
    });
    if found.is_empty() {
        return Err(Error::NotPlanar);
    }
    if eq == Equivalence::Isomorphic {
        let mut seen = HashSet::new();
        found.retain(|rs: &RotationSystem| seen.insert(rs.canonical_code(marks)));
    }
    Ok(found)
}

/// Some planar embedding of `g`, if one exists.
pub fn find_embedding(g: &Graph) -> Option<RotationSystem> {
    if !g.is_connected() || g.edges().any(|e| e.is_loop()) {
        return None;
    }
    let mut found = None;
    Builder::new(g).extend(0, &mut |rs| {
        found = Some(rs);
        false
    });
    found
}

/// Grows a sphere embedding one edge at a time. Edges come in an order that
/// keeps the drawn part connected; a pendant edge may take any corner at its
/// drawn end and an edge between drawn vertices any pair of corners on a
/// common face. Every planar embedding arises from exactly one choice
/// sequence, since it restricts to a planar embedding of each prefix.
struct Builder<'a> {
    g: &'a Graph,
    order: Vec<Edge>,
    rotations: BTreeMap<VertexId, Vec<Dart>>,
    tails: HashMap<Dart, VertexId>,
}

impl<'a> Builder<'a> {
    fn new(g: &'a Graph) -> Self {
        let mut order = Vec::with_capacity(g.edge_count());
        let mut placed: BTreeSet<VertexId> = g.vertices().take(1).collect();
        let mut left: Vec<Edge> = g.edges().collect();
        while !left.is_empty() {
            // edges closing a face first, so dead ends surface early
            let pick = left
                .iter()
                .position(|e| placed.contains(&e.u) && placed.contains(&e.v))
                .or_else(|| {
                    left.iter()
                        .position(|e| placed.contains(&e.u) || placed.contains(&e.v))
                })
                .expect("connected graph");
            let e = left.remove(pick);
            placed.insert(e.u);
            placed.insert(e.v);
            order.push(e);
        }
        let rotations = g.vertices().map(|v| (v, Vec::new())).collect();
        Builder {
            g,
            order,
            rotations,
            tails: HashMap::new(),
        }
    }

    /// Calls `emit` on each completed embedding; stops when it returns false.
    fn extend(&mut self, k: usize, emit: &mut impl FnMut(RotationSystem) -> bool) -> bool {
        if k == self.order.len() {
            return emit(RotationSystem {
                graph: self.g.clone(),
                rotations: self.rotations.clone(),
            });
        }
        let e = self.order[k];
        let (du, dv) = (dart(e.id, 0), dart(e.id, 1));
        self.tails.insert(du, e.u);
        self.tails.insert(dv, e.v);
        let (nu, nv) = (self.rotations[&e.u].len(), self.rotations[&e.v].len());
        let mut go_on = true;
        if nu == 0 || nv == 0 {
            // pendant edge, or the very first edge
            let (at, d_at, other, d_other) = if nu == 0 {
                (e.v, dv, e.u, du)
            } else {
                (e.u, du, e.v, dv)
            };
            self.rotations.get_mut(&other).unwrap().push(d_other);
            let slots = self.rotations[&at].len().max(1);
            for i in 0..slots {
                self.rotations.get_mut(&at).unwrap().insert(i, d_at);
                go_on = self.extend(k + 1, emit);
                self.rotations.get_mut(&at).unwrap().remove(i);
                if !go_on {
                    break;
                }
            }
            self.rotations.get_mut(&other).unwrap().pop();
        } else {
            for (ca, cb) in self.common_corners(e.u, e.v) {
                let iu = self.rotations[&e.u].iter().position(|&d| d == ca).unwrap();
                self.rotations.get_mut(&e.u).unwrap().insert(iu, du);
                let iv = self.rotations[&e.v].iter().position(|&d| d == cb).unwrap();
                self.rotations.get_mut(&e.v).unwrap().insert(iv, dv);
                go_on = self.extend(k + 1, emit);
                self.rotations.get_mut(&e.v).unwrap().remove(iv);
                self.rotations.get_mut(&e.u).unwrap().remove(iu);
                if !go_on {
                    break;
                }
            }
        }
        self.tails.remove(&du);
        self.tails.remove(&dv);
        go_on
    }

    /// Corner dart pairs `(at a, at b)` lying on one face of the drawn part.
    fn common_corners(&self, a: VertexId, b: VertexId) -> Vec<(Dart, Dart)> {
        let mut succ: HashMap<Dart, Dart> = HashMap::new();
        for rot in self.rotations.values() {
            for (i, &d) in rot.iter().enumerate() {
                succ.insert(d, rot[(i + 1) % rot.len()]);
            }
        }
        let mut out = Vec::new();
        let mut seen: HashSet<Dart> = HashSet::new();
        for rot in self.rotations.values() {
            for &start in rot {
                if !seen.insert(start) {
                    continue;
                }
                let mut walk = vec![start];
                let mut d = succ[&twin(start)];
                while d != start {
                    seen.insert(d);
                    walk.push(d);
                    d = succ[&twin(d)];
                }
                for &x in walk.iter().filter(|&&x| self.tails[&x] == a) {
                    for &y in walk.iter().filter(|&&y| self.tails[&y] == b) {
                        out.push((x, y));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
