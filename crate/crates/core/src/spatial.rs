//! Strong and implicit (anti-)conflicts between fragments of an embedded
//! maximal planar subgraph, and the signed conflict graph they span.
//!
//! A fragment is an edge of `G − M`. Two fragments `f = v1v2` and
//! `f2 = w1w2` strongly conflict when `{v1, v2, w1, w2}` is the 4-side of a
//! `K_{4,2}` subdivision in `M` whose induced embedding puts `v1` and `v2` on
//! no common face. They strongly anti-conflict when a cycle of `M` separates
//! `v1` from `v2` and `w1` from `w2`, while paths avoiding the cycle join
//! each `v` to the `w` on its side. Pairs sharing an attachment do neither.
//!
//! Implicit relations are searched over sequences of embedding-preserving
//! deletions, contractions and fragment absorptions; see [`implicit_conflict`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{dart, edge_of, twin, Dart, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeId, Graph, VertexId};
use crate::maximal_planar::MaximalPlanarSubgraph;
use crate::signed::{is_balanced, Balance, Sign, SignedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fragment {
    pub edge: EdgeId,
    pub a: VertexId,
    pub b: VertexId,
}

impl Fragment {
    pub fn new(edge: EdgeId, a: VertexId, b: VertexId) -> Self {
        Fragment { edge, a, b }
    }

    fn shares_attachment(&self, other: &Fragment) -> bool {
        [self.a, self.b]
            .iter()
            .any(|x| *x == other.a || *x == other.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    StrongConflict,
    StrongAnticonflict,
    ImplicitConflict,
    ImplicitAnticonflict,
}

impl RelationKind {
    pub fn sign(self) -> Sign {
        match self {
            RelationKind::StrongConflict | RelationKind::ImplicitConflict => Sign::Minus,
            RelationKind::StrongAnticonflict | RelationKind::ImplicitAnticonflict => Sign::Plus,
        }
    }

    pub fn is_strong(self) -> bool {
        matches!(
            self,
            RelationKind::StrongConflict | RelationKind::StrongAnticonflict
        )
    }
}

/// Which side of the embedding sphere a fragment is routed through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereSide {
    Inside,
    Outside,
}

impl SphereSide {
    pub fn other(self) -> SphereSide {
        match self {
            SphereSide::Inside => SphereSide::Outside,
            SphereSide::Outside => SphereSide::Inside,
        }
    }
}

/// Fragment edge id → side.
pub type Placement = BTreeMap<EdgeId, SphereSide>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Hubs plus the eight hub-to-attachment paths, ordered
/// `x→v1, x→v2, x→w1, x→w2, y→v1, y→v2, y→w1, y→w2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K42Witness {
    pub hubs: (VertexId, VertexId),
    pub paths: Vec<WitnessPath>,
}

/// A separating cycle with paths `v1 → w` and `v2 → w'` avoiding it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub cycle: Cycle,
    pub paths: Vec<WitnessPath>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    Delete {
        edge: EdgeId,
    },
    Contract {
        edge: EdgeId,
    },
    /// Draws a fragment into a face; the new darts go right before the two
    /// corner darts of that face.
    Absorb {
        fragment: EdgeId,
        corner_a: Dart,
        corner_b: Dart,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementProof {
    pub placement: Placement,
    pub moves: Vec<Move>,
    pub terminal: ConflictWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConflictWitness {
    StrongConflict(K42Witness),
    StrongAnticonflict(SeparationWitness),
    /// One move sequence per qualifying placement.
    ImplicitConflict {
        proofs: Vec<PlacementProof>,
    },
    ImplicitAnticonflict {
        proofs: Vec<PlacementProof>,
    },
}

impl ConflictWitness {
    pub fn kind(&self) -> RelationKind {
        match self {
            ConflictWitness::StrongConflict(_) => RelationKind::StrongConflict,
            ConflictWitness::StrongAnticonflict(_) => RelationKind::StrongAnticonflict,
            ConflictWitness::ImplicitConflict { .. } => RelationKind::ImplicitConflict,
            ConflictWitness::ImplicitAnticonflict { .. } => RelationKind::ImplicitAnticonflict,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicitResult {
    pub verdict: Verdict,
    pub budget: usize,
    pub witness: Option<ConflictWitness>,
    pub states_explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictEdge {
    pub a: EdgeId,
    pub b: EdgeId,
    pub sign: Sign,
    pub kind: RelationKind,
    pub witness: ConflictWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndecidedPair {
    pub a: EdgeId,
    pub b: EdgeId,
    pub kind: RelationKind,
}

/// Signed graph on fragments. A pair carries at most one edge per sign, so
/// a pair that both conflicts and anti-conflicts forms a negative 2-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedConflictGraph {
    pub fragments: Vec<Fragment>,
    pub edges: Vec<ConflictEdge>,
    /// `None` for strong-only graphs.
    pub budget: Option<usize>,
    /// Implicit searches cut off by the budget.
    pub undecided: Vec<UndecidedPair>,
}

impl SignedConflictGraph {
    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }

    pub fn signed_graph(&self) -> SignedGraph {
        let mut sg = SignedGraph::with_vertices(self.fragments.iter().map(|f| f.edge));
        for e in &self.edges {
            sg.add_edge(e.a, e.b, e.sign)
                .expect("one edge per pair and sign");
        }
        sg
    }

    pub fn balance(&self) -> Balance {
        is_balanced(&self.signed_graph())
    }

    pub fn strong_only(&self) -> SignedConflictGraph {
        SignedConflictGraph {
            fragments: self.fragments.clone(),
            edges: self
                .edges
                .iter()
                .filter(|e| e.kind.is_strong())
                .cloned()
                .collect(),
            budget: None,
            undecided: Vec::new(),
        }
    }

    pub fn edge(&self, a: EdgeId, b: EdgeId, sign: Sign) -> Option<&ConflictEdge> {
        self.edges
            .iter()
            .find(|e| e.sign == sign && ((e.a, e.b) == (a, b) || (e.a, e.b) == (b, a)))
    }
}

fn check_fragments(rs: &RotationSystem, frags: &[&Fragment]) -> Result<()> {
    for f in frags {
        for v in [f.a, f.b] {
            if !rs.graph().has_vertex(v) {
                return Err(Error::InvalidFragment(format!(
                    "attachment {v} of fragment {} not in M",
                    f.edge
                )));
            }
        }
        if f.a == f.b {
            return Err(Error::InvalidFragment(format!(
                "fragment {} is a loop",
                f.edge
            )));
        }
        if rs.graph().has_edge(f.edge) {
            return Err(Error::InvalidFragment(format!(
                "fragment {} is an edge of M",
                f.edge
            )));
        }
    }
    Ok(())
}

/// Index-based view of a rotation system used by the strong tests.
struct Plane {
    ids: Vec<VertexId>,
    idx: HashMap<VertexId, usize>,
    rot: Vec<Vec<Dart>>,
    tail: HashMap<Dart, usize>,
    faces: Vec<Vec<Dart>>,
    face_of: HashMap<Dart, usize>,
}

impl Plane {
    fn new(rs: &RotationSystem) -> Plane {
        let ids: Vec<VertexId> = rs.graph().vertices().collect();
        assert!(ids.len() <= 64, "plane view supports at most 64 vertices");
        let idx: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rot: Vec<Vec<Dart>> = ids.iter().map(|&v| rs.rotation(v).to_vec()).collect();
        let mut tail = HashMap::new();
        for (i, r) in rot.iter().enumerate() {
            for &d in r {
                tail.insert(d, i);
            }
        }
        let faces: Vec<Vec<Dart>> = rs.trace_faces().into_iter().map(|f| f.darts).collect();
        let mut face_of = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for &d in f {
                face_of.insert(d, i);
            }
        }
        Plane {
            ids,
            idx,
            rot,
            tail,
            faces,
            face_of,
        }
    }

    fn head(&self, d: Dart) -> usize {
        self.tail[&twin(d)]
    }

    fn cofacial(&self, a: usize, b: usize) -> bool {
        let fa: BTreeSet<usize> = self.rot[a].iter().map(|d| self.face_of[d]).collect();
        self.rot[b].iter().any(|d| fa.contains(&self.face_of[d]))
    }

    fn path(&self, darts: &[Dart]) -> WitnessPath {
        let mut vertices: Vec<VertexId> = darts.iter().map(|&d| self.ids[self.tail[&d]]).collect();
        if let Some(&last) = darts.last() {
            vertices.push(self.ids[self.head(last)]);
        }
        WitnessPath {
            vertices,
            edges: darts.iter().map(|&d| edge_of(d)).collect(),
        }
    }

    /// Finds, for hubs `x, y`, eight internally disjoint hub-to-target paths
    /// such that targets 0 and 1 are not cyclically adjacent among the four
    /// first darts at `x`.
    fn k42_paths(&self, x: usize, y: usize, targets: [usize; 4]) -> Option<Vec<Vec<Dart>>> {
        let mut blocked: u64 = 1 << x | 1 << y;
        for &t in &targets {
            blocked |= 1 << t;
        }
        let mut paths = Vec::with_capacity(8);
        if self.route(x, y, &targets, 0, blocked, &mut paths) {
            Some(paths)
        } else {
            None
        }
    }

    fn route(
        &self,
        x: usize,
        y: usize,
        targets: &[usize; 4],
        k: usize,
        blocked: u64,
        paths: &mut Vec<Vec<Dart>>,
    ) -> bool {
        if k == 8 {
            return true;
        }
        if k == 4 && !self.separates_at_hub(x, paths) {
            return false;
        }
        let hub = if k < 4 { x } else { y };
        let target = targets[k % 4];
        let mut current = Vec::new();
        self.extend_path(hub, target, blocked, &mut current, &mut |p, used| {
            paths.push(p.to_vec());
            let ok = self.route(x, y, targets, k + 1, used, paths);
            if !ok {
                paths.pop();
            }
            ok
        })
    }

    /// Depth-first enumeration of paths from `from` to `target` through
    /// unblocked vertices; stops as soon as `done` accepts one.
    fn extend_path(
        &self,
        from: usize,
        target: usize,
        blocked: u64,
        current: &mut Vec<Dart>,
        done: &mut dyn FnMut(&[Dart], u64) -> bool,
    ) -> bool {
        for &d in &self.rot[from] {
            let z = self.head(d);
            current.push(d);
            let hit = if z == target {
                done(current, blocked)
            } else if blocked >> z & 1 == 0 {
                self.extend_path(z, target, blocked | 1 << z, current, done)
            } else {
                false
            };
            current.pop();
            if hit {
                return true;
            }
        }
        false
    }

    fn separates_at_hub(&self, x: usize, paths: &[Vec<Dart>]) -> bool {
        let pos = |d: Dart| self.rot[x].iter().position(|&e| e == d).unwrap();
        let mut order: Vec<(usize, usize)> = paths[..4]
            .iter()
            .enumerate()
            .map(|(i, p)| (pos(p[0]), i))
            .collect();
        order.sort_unstable();
        let at = |t: usize| order.iter().position(|&(_, i)| i == t).unwrap();
        (at(0) as isize - at(1) as isize).abs() == 2
    }

    fn strong_conflict(&self, f: &Fragment, f2: &Fragment) -> Option<K42Witness> {
        if f.shares_attachment(f2) || f.a == f.b || f2.a == f2.b {
            return None;
        }
        let t = [
            self.idx[&f.a],
            self.idx[&f.b],
            self.idx[&f2.a],
            self.idx[&f2.b],
        ];
        if self.cofacial(t[0], t[1])
            || self.cofacial(t[2], t[3])
            || t.iter().any(|&v| self.rot[v].len() < 2)
        {
            return None;
        }
        let n = self.ids.len();
        let hubs: Vec<usize> = (0..n)
            .filter(|v| !t.contains(v) && self.rot[*v].len() >= 4)
            .collect();
        for (i, &x) in hubs.iter().enumerate() {
            for &y in &hubs[i + 1..] {
                if let Some(paths) = self.k42_paths(x, y, t) {
                    return Some(K42Witness {
                        hubs: (self.ids[x], self.ids[y]),
                        paths: paths.iter().map(|p| self.path(p)).collect(),
                    });
                }
            }
        }
        None
    }

    /// Cycles as dart sequences, each listed once.
    fn cycles(&self) -> Vec<Vec<Dart>> {
        let mut out = Vec::new();
        for s in 0..self.ids.len() {
            let mut path = Vec::new();
            self.cycles_from(s, s, 1 << s, &mut path, &mut out);
        }
        out
    }

    fn cycles_from(
        &self,
        start: usize,
        at: usize,
        on_path: u64,
        path: &mut Vec<Dart>,
        out: &mut Vec<Vec<Dart>>,
    ) {
        for &d in &self.rot[at] {
            if path.last().is_some_and(|&p| edge_of(p) == edge_of(d)) {
                continue;
            }
            let z = self.head(d);
            if z == start {
                if !path.is_empty() && edge_of(path[0]) < edge_of(d) {
                    let mut c = path.clone();
                    c.push(d);
                    out.push(c);
                }
            } else if z > start && on_path >> z & 1 == 0 {
                path.push(d);
                self.cycles_from(start, z, on_path | 1 << z, path, out);
                path.pop();
            }
        }
    }

    /// Face-side labels (`true`/`false`) for a cycle given as darts, or `None`
    /// if the cycle does not separate.
    fn face_sides(&self, cycle: &[Dart]) -> Option<Vec<bool>> {
        let on_cycle: HashSet<EdgeId> = cycle.iter().map(|&d| edge_of(d)).collect();
        let mut parent: Vec<usize> = (0..self.faces.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for r in &self.rot {
            for &d in r {
                if d & 1 == 0 && !on_cycle.contains(&edge_of(d)) {
                    let (a, b) = (
                        find(&mut parent, self.face_of[&d]),
                        find(&mut parent, self.face_of[&twin(d)]),
                    );
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, self.face_of[&cycle[0]]);
        let sides: Vec<bool> = (0..self.faces.len())
            .map(|i| find(&mut parent, i) == root)
            .collect();
        if sides[self.face_of[&twin(cycle[0])]] {
            return None;
        }
        Some(sides)
    }

    fn reach(&self, from: usize, to: usize, avoid: u64) -> Option<Vec<Dart>> {
        let mut prev: HashMap<usize, Dart> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = avoid | 1 << from;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut darts = Vec::new();
                let mut cur = to;
                while cur != from {
                    let d = prev[&cur];
                    darts.push(d);
                    cur = self.tail[&d];
                }
                darts.reverse();
                return Some(darts);
            }
            for &d in &self.rot[v] {
                let z = self.head(d);
                if seen >> z & 1 == 0 {
                    seen |= 1 << z;
                    prev.insert(z, d);
                    queue.push_back(z);
                }
            }
        }
        None
    }

    fn strong_anticonflict(&self, f: &Fragment, f2: &Fragment) -> Option<SeparationWitness> {
        if f.shares_attachment(f2) || f.a == f.b || f2.a == f2.b {
            return None;
        }
        let [v1, v2, w1, w2] = [
            self.idx[&f.a],
            self.idx[&f.b],
            self.idx[&f2.a],
            self.idx[&f2.b],
        ];
        for cycle in self.cycles() {
            let mask: u64 = cycle.iter().fold(0, |m, &d| m | 1 << self.tail[&d]);
            if [v1, v2, w1, w2]
                .iter()
                .any(|&v| mask >> v & 1 == 1 || self.rot[v].is_empty())
            {
                continue;
            }
            let Some(sides) = self.face_sides(&cycle) else {
                continue;
            };
            let side = |v: usize| sides[self.face_of[&self.rot[v][0]]];
            if side(v1) == side(v2) || side(w1) == side(w2) {
                continue;
            }
            let (p1, p2) = if side(v1) == side(w1) {
                (w1, w2)
            } else {
                (w2, w1)
            };
            let (Some(a), Some(b)) = (self.reach(v1, p1, mask), self.reach(v2, p2, mask)) else {
                continue;
            };
            let vertices: Vec<VertexId> = cycle.iter().map(|&d| self.ids[self.tail[&d]]).collect();
            return Some(SeparationWitness {
                cycle: Cycle {
                    vertices,
                    edges: cycle.iter().map(|&d| edge_of(d)).collect(),
                },
                paths: vec![self.path(&a), self.path(&b)],
            });
        }
        None
    }
}

pub fn strong_conflict(
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
) -> Result<Option<K42Witness>> {
    check_fragments(rs, &[f, f2])?;
    Ok(Plane::new(rs).strong_conflict(f, f2))
}

pub fn strong_anticonflict(
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
) -> Result<Option<SeparationWitness>> {
    check_fragments(rs, &[f, f2])?;
    Ok(Plane::new(rs).strong_anticonflict(f, f2))
}

fn check_path(g: &Graph, p: &WitnessPath, from: VertexId, to: VertexId) -> bool {
    p.vertices.len() == p.edges.len() + 1
        && p.vertices.first() == Some(&from)
        && p.vertices.last() == Some(&to)
        && p.edges.iter().enumerate().all(|(i, &e)| {
            g.edge(e)
                .is_some_and(|e| e.joins(p.vertices[i], p.vertices[i + 1]))
        })
        && p.vertices.iter().collect::<BTreeSet<_>>().len() == p.vertices.len()
}

/// Re-derives a strong conflict from its witness: path checks, then the face
/// condition on the induced embedding of the subdivision.
pub fn verify_k42(rs: &RotationSystem, f: &Fragment, f2: &Fragment, w: &K42Witness) -> bool {
    let g = rs.graph();
    let (x, y) = w.hubs;
    let targets = [f.a, f.b, f2.a, f2.b];
    let branch: BTreeSet<VertexId> = [x, y, f.a, f.b, f2.a, f2.b].into();
    if branch.len() != 6 || w.paths.len() != 8 {
        return false;
    }
    let mut interior = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for (i, p) in w.paths.iter().enumerate() {
        let hub = if i < 4 { x } else { y };
        if !check_path(g, p, hub, targets[i % 4]) {
            return false;
        }
        for v in &p.vertices[1..p.vertices.len() - 1] {
            if branch.contains(v) || !interior.insert(*v) {
                return false;
            }
        }
        edges.extend(p.edges.iter().copied());
    }
    let sub = g.edge_subgraph(&edges);
    match rs.induced_embedding(&sub) {
        Ok(sub_rs) => sub_rs.is_planar_embedding() && !sub_rs.on_common_face(f.a, f.b),
        Err(_) => false,
    }
}

/// Re-derives a strong anti-conflict from its witness via the face
/// two-colouring of the cycle.
pub fn verify_separation(
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
    w: &SeparationWitness,
) -> bool {
    let g = rs.graph();
    let Ok(sides) = rs.sides_of_cycle(&w.cycle) else {
        return false;
    };
    let side = |v| sides.side_of(v);
    let (s1, s2, t1, t2) = (side(f.a), side(f.b), side(f2.a), side(f2.b));
    if [s1, s2, t1, t2].iter().any(Option::is_none) || s1 == s2 || t1 == t2 || w.paths.len() != 2 {
        return false;
    }
    let (p1, p2) = if s1 == t1 { (f2.a, f2.b) } else { (f2.b, f2.a) };
    let avoids = |p: &WitnessPath| p.vertices.iter().all(|v| !w.cycle.contains_vertex(*v));
    check_path(g, &w.paths[0], f.a, p1)
        && check_path(g, &w.paths[1], f.b, p2)
        && avoids(&w.paths[0])
        && avoids(&w.paths[1])
}

/// All side assignments compatible with the strong edges of `scg`: conflict
/// pairs apart, anti-conflict pairs together. The first fragment is always
/// `Inside`, which removes the global flip. Empty when unbalanced.
pub fn potentially_flat_placements(scg: &SignedConflictGraph) -> Vec<Placement> {
    let strong = scg.strong_only();
    let sg = strong.signed_graph();
    let Balance::Balanced { x, .. } = is_balanced(&sg) else {
        return Vec::new();
    };
    let graph = sg.graph();
    let comps = graph.components();
    let mut out = Vec::new();
    let free = comps.len().saturating_sub(1);
    for mask in 0..1u64 << free {
        let mut placement = Placement::new();
        for (i, comp) in comps.iter().enumerate() {
            let flip = i > 0 && mask >> (i - 1) & 1 == 1;
            let root_in_x = comp.iter().next().is_some_and(|r| x.contains(r));
            for &v in comp {
                let side = if x.contains(&v) == root_in_x {
                    SphereSide::Inside
                } else {
                    SphereSide::Outside
                };
                placement.insert(v, if flip { side.other() } else { side });
            }
        }
        out.push(placement);
    }
    out
}

/// Default search budget: twice the edge count of `M`.
pub fn default_budget(rs: &RotationSystem) -> usize {
    2 * rs.graph().edge_count()
}

/// States kept per placement search before giving up.
pub const STATE_CAP: usize = 200_000;

/// Current attachments of each fragment, keyed by fragment edge id.
pub type Attachments = BTreeMap<EdgeId, (VertexId, VertexId)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Conflict,
    Anticonflict,
}

#[derive(Clone)]
struct SearchState {
    rs: RotationSystem,
    /// Current attachments of every fragment not yet drawn into the sphere.
    attach: Attachments,
}

impl SearchState {
    fn key(&self) -> Vec<u32> {
        let mut key = Vec::new();
        for (&v, r) in self.rs.rotations() {
            key.push(v);
            key.push(r.len() as u32);
            if let Some(min_at) = r.iter().enumerate().min_by_key(|(_, &d)| d).map(|(i, _)| i) {
                key.extend(r[min_at..].iter().chain(&r[..min_at]));
            }
        }
        key.push(u32::MAX);
        for (&e, &(a, b)) in &self.attach {
            key.extend([e, a, b]);
        }
        key
    }
}

/// Whether fragment `g` (attachments at corners `i`, `j` of `face`) may be
/// drawn into the face: no other undrawn fragment on the same side may have
/// attachments interleaving with it along the face boundary.
fn absorption_blocked(
    face: &[VertexId],
    i: usize,
    j: usize,
    g: EdgeId,
    attach: &Attachments,
    placement: &Placement,
) -> bool {
    let (p, q) = (face[i], face[j]);
    let (lo, hi) = (i.min(j), i.max(j));
    let side = placement.get(&g);
    attach.iter().any(|(&h, &(r, s))| {
        if h == g || placement.get(&h) != side || [r, s].iter().any(|x| *x == p || *x == q) {
            return false;
        }
        let inside = |v: VertexId| {
            face.iter()
                .enumerate()
                .any(|(k, &x)| x == v && lo < k && k < hi)
        };
        let outside = |v: VertexId| {
            face.iter()
                .enumerate()
                .any(|(k, &x)| x == v && (k < lo || k > hi))
        };
        (inside(r) && outside(s)) || (inside(s) && outside(r))
    })
}

fn successors(
    state: &SearchState,
    protected: [EdgeId; 2],
    placement: &Placement,
) -> Vec<(Move, SearchState)> {
    let mut out = Vec::new();
    let rs = &state.rs;
    let faces = rs.trace_faces();
    for (&g, &(p, q)) in &state.attach {
        if protected.contains(&g) || p == q {
            continue;
        }
        for face in &faces {
            for (i, &x) in face.vertices.iter().enumerate() {
                if x != p {
                    continue;
                }
                for (j, &y) in face.vertices.iter().enumerate() {
                    if y != q
                        || absorption_blocked(&face.vertices, i, j, g, &state.attach, placement)
                    {
                        continue;
                    }
                    let (ca, cb) = (face.darts[i], face.darts[j]);
                    if let Ok(next) = rs.insert_edge_in_face(g, ca, cb) {
                        let mut attach = state.attach.clone();
                        attach.remove(&g);
                        out.push((
                            Move::Absorb {
                                fragment: g,
                                corner_a: ca,
                                corner_b: cb,
                            },
                            SearchState { rs: next, attach },
                        ));
                    }
                }
            }
        }
    }
    for e in rs.graph().edge_ids() {
        let Ok((next, map)) = rs.contract_edge(e) else {
            continue;
        };
        let attach: Attachments = state
            .attach
            .iter()
            .map(|(&h, &(a, b))| (h, (map.get(a), map.get(b))))
            .collect();
        let (f, f2) = (attach[&protected[0]], attach[&protected[1]]);
        let distinct: BTreeSet<VertexId> = [f.0, f.1, f2.0, f2.1].into();
        if distinct.len() < 4 {
            continue;
        }
        out.push((Move::Contract { edge: e }, SearchState { rs: next, attach }));
    }
    // Both terminal tests survive adding edges back, so a deletion only
    // matters when it merges two faces that hold the two attachments of a
    // fragment still waiting to be drawn.
    let mut face_of: HashMap<Dart, usize> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &d in &f.darts {
            face_of.insert(d, i);
        }
    }
    let waiting: Vec<(VertexId, VertexId)> = state
        .attach
        .iter()
        .filter(|(g, (p, q))| !protected.contains(g) && p != q)
        .map(|(_, &pq)| pq)
        .collect();
    for e in rs.graph().edge_ids() {
        let (fa, fb) = (face_of[&dart(e, 0)], face_of[&dart(e, 1)]);
        if fa == fb {
            continue;
        }
        let (va, vb) = (&faces[fa].vertices, &faces[fb].vertices);
        let useful = waiting.iter().any(|&(p, q)| {
            (va.contains(&p) && vb.contains(&q)) || (va.contains(&q) && vb.contains(&p))
        });
        if !useful {
            continue;
        }
        // a detached component has no determined face, so bridges stay
        if let Some(next) = rs.delete_edge(e).ok().filter(|n| n.graph().is_connected()) {
            out.push((
                Move::Delete { edge: e },
                SearchState {
                    rs: next,
                    attach: state.attach.clone(),
                },
            ));
        }
    }
    out
}

fn terminal(state: &SearchState, f: EdgeId, f2: EdgeId, target: Target) -> Option<ConflictWitness> {
    let (a, b) = state.attach[&f];
    let (c, d) = state.attach[&f2];
    let ff = Fragment::new(f, a, b);
    let gg = Fragment::new(f2, c, d);
    let plane = Plane::new(&state.rs);
    match target {
        Target::Conflict => plane
            .strong_conflict(&ff, &gg)
            .map(ConflictWitness::StrongConflict),
        Target::Anticonflict => plane
            .strong_anticonflict(&ff, &gg)
            .map(ConflictWitness::StrongAnticonflict),
    }
}

enum Outcome {
    Found(Vec<Move>, ConflictWitness),
    Exhausted,
    Truncated,
}

/// Breadth-first search over move sequences of length at most `budget`.
#[allow(clippy::too_many_arguments)]
fn search(
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
    others: &[Fragment],
    placement: &Placement,
    target: Target,
    budget: usize,
    state_cap: usize,
    explored: &mut usize,
) -> Outcome {
    let mut attach: Attachments = others.iter().map(|g| (g.edge, (g.a, g.b))).collect();
    attach.insert(f.edge, (f.a, f.b));
    attach.insert(f2.edge, (f2.a, f2.b));
    let start = SearchState {
        rs: rs.clone(),
        attach,
    };
    if let Some(w) = terminal(&start, f.edge, f2.edge, target) {
        return Outcome::Found(Vec::new(), w);
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::from([start.key()]);
    let mut frontier: Vec<(SearchState, Vec<Move>)> = vec![(start, Vec::new())];
    for _ in 0..budget {
        let mut next_frontier = Vec::new();
        for (state, moves) in &frontier {
            for (mv, next) in successors(state, [f.edge, f2.edge], placement) {
                if !seen.insert(next.key()) {
                    continue;
                }
                *explored += 1;
                debug_assert!(next.rs.is_planar_embedding());
                let mut path = moves.clone();
                path.push(mv);
                if let Some(w) = terminal(&next, f.edge, f2.edge, target) {
                    return Outcome::Found(path, w);
                }
                if seen.len() > state_cap {
                    return Outcome::Truncated;
                }
                next_frontier.push((next, path));
            }
        }
        if next_frontier.is_empty() {
            return Outcome::Exhausted;
        }
        frontier = next_frontier;
    }
    Outcome::Truncated
}

#[allow(clippy::too_many_arguments)]
fn implicit(
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
    others: &[Fragment],
    placements: &[Placement],
    target: Target,
    budget: usize,
    state_cap: usize,
) -> Result<ImplicitResult> {
    check_fragments(rs, &[f, f2])?;
    let others: Vec<Fragment> = others
        .iter()
        .filter(|g| g.edge != f.edge && g.edge != f2.edge)
        .copied()
        .collect();
    let want_same = target == Target::Conflict;
    let relevant: Vec<&Placement> = placements
        .iter()
        .filter(|p| match (p.get(&f.edge), p.get(&f2.edge)) {
            (Some(a), Some(b)) => (a == b) == want_same,
            _ => false,
        })
        .collect();
    let mut explored = 0;
    let no = |explored| ImplicitResult {
        verdict: Verdict::No,
        budget,
        witness: None,
        states_explored: explored,
    };
    if relevant.is_empty() || f.shares_attachment(f2) {
        return Ok(no(0));
    }
    let mut proofs = Vec::new();
    let mut truncated = false;
    for placement in relevant {
        match search(
            rs,
            f,
            f2,
            &others,
            placement,
            target,
            budget,
            state_cap,
            &mut explored,
        ) {
            Outcome::Found(moves, terminal) => proofs.push(PlacementProof {
                placement: placement.clone(),
                moves,
                terminal,
            }),
            Outcome::Exhausted => return Ok(no(explored)),
            Outcome::Truncated => truncated = true,
        }
    }
    if truncated {
        return Ok(ImplicitResult {
            verdict: Verdict::BudgetExceeded,
            budget,
            witness: None,
            states_explored: explored,
        });
    }
    let witness = match target {
        Target::Conflict => ConflictWitness::ImplicitConflict { proofs },
        Target::Anticonflict => ConflictWitness::ImplicitAnticonflict { proofs },
    };
    Ok(ImplicitResult {
        verdict: Verdict::Yes,
        budget,
        witness: Some(witness),
        states_explored: explored,
    })
}

/// Implicit conflict: for every potentially flat placement putting `f` and
/// `f2` on the same side, some sequence of at most `budget` moves (delete an
/// edge, contract an edge, or draw another fragment into a face it can reach)
/// makes them strongly conflict. A fragment can be drawn into a face when its
/// current attachments lie on that face and no other undrawn fragment on its
/// side interleaves with it along the face boundary. With no qualifying
/// placement the answer is `No`. `Yes` needs a proof for every placement;
/// `No` means some placement's move space was exhausted.
pub fn implicit_conflict(
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
    others: &[Fragment],
    placements: &[Placement],
    budget: usize,
) -> Result<ImplicitResult> {
    implicit(
        rs,
        f,
        f2,
        others,
        placements,
        Target::Conflict,
        budget,
        STATE_CAP,
    )
}

/// Mirror of [`implicit_conflict`]: placements with `f` and `f2` on opposite
/// sides, strong anti-conflict as the goal.
pub fn implicit_anticonflict(
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
    others: &[Fragment],
    placements: &[Placement],
    budget: usize,
) -> Result<ImplicitResult> {
    implicit(
        rs,
        f,
        f2,
        others,
        placements,
        Target::Anticonflict,
        budget,
        STATE_CAP,
    )
}

/// Replays a move sequence, checking every absorption and the sphere genus.
pub fn replay_moves(
    rs: &RotationSystem,
    fragments: &[Fragment],
    placement: &Placement,
    moves: &[Move],
) -> Result<(RotationSystem, Attachments)> {
    let mut state = SearchState {
        rs: rs.clone(),
        attach: fragments.iter().map(|g| (g.edge, (g.a, g.b))).collect(),
    };
    for mv in moves {
        state = match *mv {
            Move::Delete { edge } => SearchState {
                rs: state.rs.delete_edge(edge)?,
                attach: state.attach,
            },
            Move::Contract { edge } => {
                let (rs, map) = state.rs.contract_edge(edge)?;
                let attach = state
                    .attach
                    .iter()
                    .map(|(&h, &(a, b))| (h, (map.get(a), map.get(b))))
                    .collect();
                SearchState { rs, attach }
            }
            Move::Absorb {
                fragment,
                corner_a,
                corner_b,
            } => {
                let (p, q) = *state.attach.get(&fragment).ok_or_else(|| {
                    Error::InvalidFragment(format!("fragment {fragment} not available"))
                })?;
                let faces = state.rs.trace_faces();
                let face = faces
                    .iter()
                    .find(|f| f.darts.contains(&corner_a) && f.darts.contains(&corner_b))
                    .ok_or_else(|| Error::InvalidFragment("corners on different faces".into()))?;
                let i = face.darts.iter().position(|&d| d == corner_a).unwrap();
                let j = face.darts.iter().position(|&d| d == corner_b).unwrap();
                if face.vertices[i] != p || face.vertices[j] != q {
                    return Err(Error::InvalidFragment(
                        "corners do not match attachments".into(),
                    ));
                }
                if absorption_blocked(&face.vertices, i, j, fragment, &state.attach, placement) {
                    return Err(Error::InvalidFragment(format!(
                        "fragment {fragment} is blocked"
                    )));
                }
                let rs = state.rs.insert_edge_in_face(fragment, corner_a, corner_b)?;
                let mut attach = state.attach;
                attach.remove(&fragment);
                SearchState { rs, attach }
            }
        };
        if !state.rs.is_planar_embedding() {
            return Err(Error::NotSpherical);
        }
        if !state.rs.graph().is_connected() {
            return Err(Error::NotConnected);
        }
    }
    Ok((state.rs, state.attach))
}

/// Checks any witness against `rs`, replaying move sequences for implicit
/// kinds.
pub fn verify_witness(
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
    fragments: &[Fragment],
    w: &ConflictWitness,
) -> bool {
    match w {
        ConflictWitness::StrongConflict(k) => verify_k42(rs, f, f2, k),
        ConflictWitness::StrongAnticonflict(s) => verify_separation(rs, f, f2, s),
        ConflictWitness::ImplicitConflict { proofs }
        | ConflictWitness::ImplicitAnticonflict { proofs } => {
            let conflict = matches!(w, ConflictWitness::ImplicitConflict { .. });
            !proofs.is_empty()
                && proofs.iter().all(|p| {
                    let sides_ok = match (p.placement.get(&f.edge), p.placement.get(&f2.edge)) {
                        (Some(a), Some(b)) => (a == b) == conflict,
                        _ => false,
                    };
                    let Ok((end, attach)) = replay_moves(rs, fragments, &p.placement, &p.moves)
                    else {
                        return false;
                    };
                    let (Some(&(a, b)), Some(&(c, d))) =
                        (attach.get(&f.edge), attach.get(&f2.edge))
                    else {
                        return false;
                    };
                    let (ff, gg) = (Fragment::new(f.edge, a, b), Fragment::new(f2.edge, c, d));
                    sides_ok
                        && match &p.terminal {
                            ConflictWitness::StrongConflict(k) => {
                                conflict && verify_k42(&end, &ff, &gg, k)
                            }
                            ConflictWitness::StrongAnticonflict(s) => {
                                !conflict && verify_separation(&end, &ff, &gg, s)
                            }
                            _ => false,
                        }
                })
        }
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Strong relations only. A pair may get both a negative and a positive edge.
pub fn build_strong_conflict_graph(
    _g: &Graph,
    m: &MaximalPlanarSubgraph,
    rs: &RotationSystem,
) -> Result<SignedConflictGraph> {
    check_embeds(m, rs)?;
    let frags = &m.fragments;
    let found: Vec<Vec<ConflictEdge>> = pairs(frags.len())
        .into_par_iter()
        .map(|(i, j)| {
            let (f, f2) = (&frags[i], &frags[j]);
            let plane = Plane::new(rs);
            let mut edges = Vec::new();
            if let Some(w) = plane.strong_conflict(f, f2) {
                edges.push(ConflictEdge {
                    a: f.edge,
                    b: f2.edge,
                    sign: Sign::Minus,
                    kind: RelationKind::StrongConflict,
                    witness: ConflictWitness::StrongConflict(w),
                });
            }
            if let Some(w) = plane.strong_anticonflict(f, f2) {
                edges.push(ConflictEdge {
                    a: f.edge,
                    b: f2.edge,
                    sign: Sign::Plus,
                    kind: RelationKind::StrongAnticonflict,
                    witness: ConflictWitness::StrongAnticonflict(w),
                });
            }
            edges
        })
        .collect();
    let scg = SignedConflictGraph {
        fragments: frags.clone(),
        edges: found.into_iter().flatten().collect(),
        budget: None,
        undecided: Vec::new(),
    };
    for e in &scg.edges {
        let (f, f2) = (fragment(frags, e.a), fragment(frags, e.b));
        if !verify_witness(rs, f, f2, frags, &e.witness) {
            return Err(Error::InvalidFragment(format!(
                "witness for ({}, {}) failed replay",
                e.a, e.b
            )));
        }
    }
    Ok(scg)
}

fn fragment(frags: &[Fragment], e: EdgeId) -> &Fragment {
    frags.iter().find(|f| f.edge == e).expect("known fragment")
}

fn check_embeds(m: &MaximalPlanarSubgraph, rs: &RotationSystem) -> Result<()> {
    if !m.m.is_subgraph_of(rs.graph()) || !rs.graph().is_subgraph_of(&m.m) {
        return Err(Error::NotSubgraph(
            "rotation system does not embed M".into(),
        ));
    }
    let refs: Vec<&Fragment> = m.fragments.iter().collect();
    check_fragments(rs, &refs)
}

/// Strong edges first; every sign a pair lacks strongly is then searched
/// implicitly under the placements of the strong graph.
pub fn build_conflict_graph(
    g: &Graph,
    m: &MaximalPlanarSubgraph,
    rs: &RotationSystem,
    budget: usize,
) -> Result<SignedConflictGraph> {
    build_conflict_graph_capped(g, m, rs, budget, STATE_CAP)
}

/// [`build_conflict_graph`] with each implicit search stopped after
/// `state_cap` distinct states.
pub fn build_conflict_graph_capped(
    g: &Graph,
    m: &MaximalPlanarSubgraph,
    rs: &RotationSystem,
    budget: usize,
    state_cap: usize,
) -> Result<SignedConflictGraph> {
    let strong = build_strong_conflict_graph(g, m, rs)?;
    let placements = potentially_flat_placements(&strong);
    let frags = &m.fragments;
    let results: Vec<Result<(Vec<ConflictEdge>, Vec<UndecidedPair>)>> = pairs(frags.len())
        .into_par_iter()
        .map(|(i, j)| {
            let (f, f2) = (&frags[i], &frags[j]);
            let mut edges = Vec::new();
            let mut undecided = Vec::new();
            for (sign, kind) in [
                (Sign::Minus, RelationKind::ImplicitConflict),
                (Sign::Plus, RelationKind::ImplicitAnticonflict),
            ] {
                if strong.edge(f.edge, f2.edge, sign).is_some() {
                    continue;
                }
                let target = if sign == Sign::Minus {
                    Target::Conflict
                } else {
                    Target::Anticonflict
                };
                let res = implicit(rs, f, f2, frags, &placements, target, budget, state_cap)?;
                match res.verdict {
                    Verdict::Yes => edges.push(ConflictEdge {
                        a: f.edge,
                        b: f2.edge,
                        sign,
                        kind,
                        witness: res.witness.expect("witness for yes"),
                    }),
                    Verdict::No => {}
                    Verdict::BudgetExceeded => undecided.push(UndecidedPair {
                        a: f.edge,
                        b: f2.edge,
                        kind,
                    }),
                }
            }
            Ok((edges, undecided))
        })
        .collect();
    let mut out = strong;
    out.budget = Some(budget);
    for r in results {
        let (edges, undecided) = r?;
        for e in &edges {
            if !verify_witness(
                rs,
                fragment(frags, e.a),
                fragment(frags, e.b),
                frags,
                &e.witness,
            ) {
                return Err(Error::InvalidFragment(format!(
                    "implicit witness for ({}, {}) failed replay",
                    e.a, e.b
                )));
            }
        }
        out.edges.extend(edges);
        out.undecided.extend(undecided);
    }
    out.edges
        .sort_by_key(|e| (e.a.min(e.b), e.a.max(e.b), e.sign));
    Ok(out)
}

/// Balance of the full conflict graph without building all of it: pairs are
/// searched one at a time and the scan stops at the first implicit edge that
/// makes the graph unbalanced. Returns the balance flag and the number of
/// undecided pairs met on the way.
pub fn conflict_graph_is_balanced(
    g: &Graph,
    m: &MaximalPlanarSubgraph,
    rs: &RotationSystem,
    budget: usize,
    state_cap: usize,
) -> Result<(bool, usize)> {
    let mut scg = build_strong_conflict_graph(g, m, rs)?;
    if !scg.balance().is_balanced() {
        return Ok((false, 0));
    }
    let placements = potentially_flat_placements(&scg);
    let frags = &m.fragments;
    let mut undecided = 0;
    for (i, j) in pairs(frags.len()) {
        let (f, f2) = (&frags[i], &frags[j]);
        for (sign, kind, target) in [
            (
                Sign::Minus,
                RelationKind::ImplicitConflict,
                Target::Conflict,
            ),
            (
                Sign::Plus,
                RelationKind::ImplicitAnticonflict,
                Target::Anticonflict,
            ),
        ] {
            if scg.edge(f.edge, f2.edge, sign).is_some() {
                continue;
            }
            let res = implicit(rs, f, f2, frags, &placements, target, budget, state_cap)?;
            match res.verdict {
                Verdict::Yes => {
                    scg.edges.push(ConflictEdge {
                        a: f.edge,
                        b: f2.edge,
                        sign,
                        kind,
                        witness: res.witness.expect("witness for yes"),
                    });
                    if !scg.balance().is_balanced() {
                        return Ok((false, undecided));
                    }
                }
                Verdict::No => {}
                Verdict::BudgetExceeded => undecided += 1,
            }
        }
    }
    Ok((true, undecided))
}

/// Fragments of `m` inside `g`, in edge-id order.
pub fn fragments_of(g: &Graph, m: &Graph) -> Vec<Fragment> {
    g.edges()
        .filter(|e| !m.has_edge(e.id))
        .map(|e| Fragment::new(e.id, e.u, e.v))
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::embedding::find_embedding;
    use crate::embedding::tests::octahedron;

    /// Octahedron on 1..=6 inside K6 on 1..=6; fragments are the antipodal
    /// pairs (1,4), (2,5), (3,6).
    pub(crate) fn k6_octahedral() -> (Graph, MaximalPlanarSubgraph, RotationSystem) {
        let mut k6 = Graph::with_vertices(1..=6);
        for a in 1..=6u32 {
            for b in a + 1..=6 {
                if b - a != 3 {
                    k6.add_edge(a, b).unwrap();
                }
            }
        }
        for a in 1..=3u32 {
            k6.add_edge(a, a + 3).unwrap();
        }
        let m = octahedron();
        assert!(m.is_subgraph_of(&k6));
        let frags = fragments_of(&k6, &m);
        let mps = MaximalPlanarSubgraph {
            host: k6.clone(),
            m: m.clone(),
            fragments: frags,
        };
        let rs = find_embedding(&m).unwrap();
        (k6, mps, rs)
    }

    /// Naive oracle: every choice of eight simple paths, checked through the
    /// induced embedding.
    pub(crate) fn naive_strong_conflict(rs: &RotationSystem, f: &Fragment, f2: &Fragment) -> bool {
        if f.shares_attachment(f2) {
            return false;
        }
        let g = rs.graph();
        let targets = [f.a, f.b, f2.a, f2.b];
        let all: Vec<VertexId> = g.vertices().collect();
        for &x in &all {
            for &y in &all {
                if x >= y || targets.contains(&x) || targets.contains(&y) {
                    continue;
                }
                let branch: BTreeSet<VertexId> = [x, y, f.a, f.b, f2.a, f2.b].into();
                let mut options: Vec<Vec<Vec<EdgeId>>> = Vec::new();
                for hub in [x, y] {
                    for &t in &targets {
                        options.push(simple_paths(g, hub, t, &branch));
                    }
                }
                let mut chosen: Vec<usize> = Vec::new();
                if choose(rs, &options, &mut chosen, f) {
                    return true;
                }
            }
        }
        false
    }

    fn simple_paths(
        g: &Graph,
        from: VertexId,
        to: VertexId,
        branch: &BTreeSet<VertexId>,
    ) -> Vec<Vec<EdgeId>> {
        let mut out = Vec::new();
        fn go(
            g: &Graph,
            at: VertexId,
            to: VertexId,
            branch: &BTreeSet<VertexId>,
            seen: &mut BTreeSet<VertexId>,
            path: &mut Vec<EdgeId>,
            out: &mut Vec<Vec<EdgeId>>,
        ) {
            for e in g.incident(at) {
                let z = e.other(at);
                path.push(e.id);
                if z == to {
                    out.push(path.clone());
                } else if !branch.contains(&z) && !seen.contains(&z) {
                    seen.insert(z);
                    go(g, z, to, branch, seen, path, out);
                    seen.remove(&z);
                }
                path.pop();
            }
        }
        let mut seen = BTreeSet::new();
        go(g, from, to, branch, &mut seen, &mut Vec::new(), &mut out);
        out
    }

    fn choose(
        rs: &RotationSystem,
        options: &[Vec<Vec<EdgeId>>],
        chosen: &mut Vec<usize>,
        f: &Fragment,
    ) -> bool {
        let g = rs.graph();
        let k = chosen.len();
        if k == options.len() {
            let mut edges = BTreeSet::new();
            for (i, &c) in chosen.iter().enumerate() {
                edges.extend(options[i][c].iter().copied());
            }
            let sub = g.edge_subgraph(&edges);
            let distinct_edges: usize = chosen
                .iter()
                .enumerate()
                .map(|(i, &c)| options[i][c].len())
                .sum();
            // internally disjoint iff the union has exactly the expected size
            let expected_vertices = 6 + distinct_edges - 8;
            let used: BTreeSet<VertexId> = edges
                .iter()
                .flat_map(|&e| {
                    let e = g.edge(e).unwrap();
                    [e.u, e.v]
                })
                .collect();
            if used.len() != expected_vertices || edges.len() != distinct_edges {
                return false;
            }
            let sub_rs = rs.induced_embedding(&sub.induced(&used)).unwrap();
            return !sub_rs.on_common_face(f.a, f.b);
        }
        for c in 0..options[k].len() {
            chosen.push(c);
            if choose(rs, options, chosen, f) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    #[test]
    fn octahedron_antipodal_pairs_strongly_conflict() {
        let (_, mps, rs) = k6_octahedral();
        let fr = &mps.fragments;
        assert_eq!(fr.len(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                let w = strong_conflict(&rs, &fr[i], &fr[j])
                    .unwrap()
                    .expect("conflict");
                assert!(verify_k42(&rs, &fr[i], &fr[j], &w));
                assert!(strong_conflict(&rs, &fr[j], &fr[i]).unwrap().is_some());
                assert!(naive_strong_conflict(&rs, &fr[i], &fr[j]));
                assert!(strong_anticonflict(&rs, &fr[i], &fr[j]).unwrap().is_none());
            }
        }
    }

    #[test]
    fn k6_octahedral_conflict_graph_is_negative_triangle() {
        let (k6, mps, rs) = k6_octahedral();
        let scg = build_strong_conflict_graph(&k6, &mps, &rs).unwrap();
        assert_eq!(scg.edges.len(), 3);
        assert!(scg.edges.iter().all(|e| e.sign == Sign::Minus));
        assert!(!scg.balance().is_balanced());
        assert!(potentially_flat_placements(&scg).is_empty());
        let full = build_conflict_graph(&k6, &mps, &rs, default_budget(&rs)).unwrap();
        assert!(!full.balance().is_balanced());
    }

    #[test]
    fn cycle_has_no_strong_relations() {
        let c = Graph::cycle_graph(6);
        let rs = find_embedding(&c).unwrap();
        let f = Fragment::new(100, 0, 2);
        let f2 = Fragment::new(101, 3, 5);
        let f3 = Fragment::new(102, 1, 4);
        for (a, b) in [(&f, &f2), (&f, &f3)] {
            assert!(strong_conflict(&rs, a, b).unwrap().is_none());
            assert!(strong_anticonflict(&rs, a, b).unwrap().is_none());
        }
        // cycle with two non-interleaved chords: nothing appears under minors
        let placements = vec![Placement::from([
            (100, SphereSide::Inside),
            (101, SphereSide::Inside),
        ])];
        let r = implicit_conflict(&rs, &f, &f2, &[], &placements, default_budget(&rs)).unwrap();
        assert_eq!(r.verdict, Verdict::No);
    }

    #[test]
    fn bad_fragments_rejected() {
        let (_, mps, rs) = k6_octahedral();
        let bogus = Fragment::new(99, 1, 42);
        assert!(strong_conflict(&rs, &mps.fragments[0], &bogus).is_err());
        let in_m = Fragment::new(0, 1, 2);
        assert!(strong_anticonflict(&rs, &mps.fragments[0], &in_m).is_err());
    }

    #[test]
    fn shared_attachment_pairs_have_no_strong_relation() {
        let (_, _, rs) = k6_octahedral();
        let f = Fragment::new(90, 1, 4);
        let f2 = Fragment::new(91, 4, 2);
        assert!(strong_conflict(&rs, &f, &f2).unwrap().is_none());
        assert!(strong_anticonflict(&rs, &f, &f2).unwrap().is_none());
        let placements = vec![Placement::from([
            (90, SphereSide::Inside),
            (91, SphereSide::Outside),
        ])];
        let r = implicit_anticonflict(&rs, &f, &f2, &[], &placements, 4).unwrap();
        assert_eq!(r.verdict, Verdict::No);
    }

    #[test]
    fn separating_square_gives_anticonflict() {
        // Two triangles 0-1-2 (inside) and 6-7-8 (outside) hung off the square 3-4-5-9.
        let pairs = [
            (3, 4),
            (4, 5),
            (5, 9),
            (9, 3),
            (0, 1),
            (1, 2),
            (2, 0),
            (0, 3),
            (1, 4),
            (6, 7),
            (7, 8),
            (8, 6),
            (6, 5),
            (7, 9),
        ];
        let m = Graph::from_pairs(&pairs);
        let rs = find_embedding(&m).unwrap();
        let sides = rs
            .sides_of_cycle(&Cycle::from_vertices(&m, &[3, 4, 5, 9]).unwrap())
            .unwrap();
        assert_ne!(sides.side_of(0), sides.side_of(6));
        let f = Fragment::new(100, 0, 6);
        let f2 = Fragment::new(101, 2, 8);
        let w = strong_anticonflict(&rs, &f, &f2)
            .unwrap()
            .expect("anticonflict");
        assert!(verify_separation(&rs, &f, &f2, &w));
        assert!(strong_anticonflict(&rs, &f2, &f).unwrap().is_some());
    }

    #[test]
    fn placements_follow_strong_signs() {
        let frags = vec![
            Fragment::new(1, 0, 1),
            Fragment::new(2, 2, 3),
            Fragment::new(3, 4, 5),
        ];
        let dummy = ConflictWitness::StrongConflict(K42Witness {
            hubs: (0, 0),
            paths: Vec::new(),
        });
        let scg = SignedConflictGraph {
            fragments: frags,
            edges: vec![ConflictEdge {
                a: 1,
                b: 2,
                sign: Sign::Minus,
                kind: RelationKind::StrongConflict,
                witness: dummy,
            }],
            budget: None,
            undecided: Vec::new(),
        };
        let ps = potentially_flat_placements(&scg);
        assert_eq!(ps.len(), 2);
        for p in &ps {
            assert_eq!(p[&1], SphereSide::Inside);
            assert_ne!(p[&1], p[&2]);
        }
        assert_ne!(ps[0][&3], ps[1][&3]);
    }

    #[test]
    fn reflection_keeps_verdicts() {
        let (_, mps, rs) = k6_octahedral();
        let mirror = rs.reflected();
        let fr = &mps.fragments;
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(
                    strong_conflict(&rs, &fr[i], &fr[j]).unwrap().is_some(),
                    strong_conflict(&mirror, &fr[i], &fr[j]).unwrap().is_some()
                );
            }
        }
    }
}
