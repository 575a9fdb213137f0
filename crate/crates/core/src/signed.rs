//! Signed graphs, cycle signs and Harary balance.
//!
//! A vertex pair may carry one positive and one negative edge at the same
//! time; together they form a negative 2-cycle. Two edges of the same sign
//! on one pair are rejected.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Cycle, Edge, EdgeId, Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "+" => Some(Sign::Plus),
            "-" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub sign: Sign,
}

/// Edge `i` of a signed graph has id `i` in [`SignedGraph::graph`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedGraph {
    vertices: BTreeSet<VertexId>,
    edges: Vec<SignedEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Balance {
    /// Edges inside `x` or inside `y` are positive, edges between are negative.
    Balanced {
        x: BTreeSet<VertexId>,
        y: BTreeSet<VertexId>,
    },
    Unbalanced {
        cycle: Cycle,
    },
}

impl Balance {
    pub fn is_balanced(&self) -> bool {
        matches!(self, Balance::Balanced { .. })
    }
}

impl SignedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(vs: impl IntoIterator<Item = VertexId>) -> Self {
        SignedGraph {
            vertices: vs.into_iter().collect(),
            edges: Vec::new(),
        }
    }

    pub fn from_edges(
        vs: impl IntoIterator<Item = VertexId>,
        edges: &[(VertexId, VertexId, Sign)],
    ) -> Result<Self> {
        let mut sg = Self::with_vertices(vs);
        for &(u, v, s) in edges {
            sg.add_edge(u, v, s)?;
        }
        Ok(sg)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, sign: Sign) -> Result<EdgeId> {
        if u == v {
            return Err(Error::InvalidSignedGraph(format!("loop at {u}")));
        }
        for x in [u, v] {
            if !self.vertices.contains(&x) {
                return Err(Error::UnknownVertex(x));
            }
        }
        if self
            .edges
            .iter()
            .any(|e| e.sign == sign && ((e.u, e.v) == (u, v) || (e.u, e.v) == (v, u)))
        {
            return Err(Error::InvalidSignedGraph(format!(
                "two {sign} edges between {u} and {v}"
            )));
        }
        self.edges.push(SignedEdge { u, v, sign });
        Ok(self.edges.len() as EdgeId - 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn sign(&self, e: EdgeId) -> Option<Sign> {
        self.edges.get(e as usize).map(|e| e.sign)
    }

    /// Underlying unsigned multigraph; edge ids are positions in [`Self::edges`].
    pub fn graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.vertices.iter().copied());
        for (i, e) in self.edges.iter().enumerate() {
            g.insert_edge(Edge {
                id: i as EdgeId,
                u: e.u,
                v: e.v,
            })
            .expect("valid signed edge");
        }
        g
    }

    pub fn is_all_positive(&self) -> bool {
        self.edges.iter().all(|e| e.sign == Sign::Plus)
    }

    /// Flips every edge with exactly one endpoint in `s`.
    pub fn switch(&self, s: &BTreeSet<VertexId>) -> SignedGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| SignedEdge {
                sign: if s.contains(&e.u) != s.contains(&e.v) {
                    e.sign.flip()
                } else {
                    e.sign
                },
                ..*e
            })
            .collect();
        SignedGraph {
            vertices: self.vertices.clone(),
            edges,
        }
    }
}

pub fn cycle_sign(sg: &SignedGraph, c: &Cycle) -> Result<Sign> {
    c.validate(&sg.graph())?;
    Ok(c.edges
        .iter()
        .map(|&e| sg.edges[e as usize].sign)
        .fold(Sign::Plus, Mul::mul))
}

pub fn switch(sg: &SignedGraph, s: &BTreeSet<VertexId>) -> SignedGraph {
    sg.switch(s)
}

/// Decides balance by a BFS parity labelling of each component; the
/// certificate is a Harary split or a negative cycle.
pub fn is_balanced(sg: &SignedGraph) -> Balance {
    let mut incident: BTreeMap<VertexId, Vec<(VertexId, EdgeId)>> =
        sg.vertices.iter().map(|&v| (v, Vec::new())).collect();
    for (i, e) in sg.edges.iter().enumerate() {
        incident.get_mut(&e.u).unwrap().push((e.v, i as EdgeId));
        incident.get_mut(&e.v).unwrap().push((e.u, i as EdgeId));
    }
    // label true = in Y
    let mut label: BTreeMap<VertexId, bool> = BTreeMap::new();
    let mut parent: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
    let mut depth: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &root in &sg.vertices {
        if label.contains_key(&root) {
            continue;
        }
        label.insert(root, false);
        depth.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &incident[&u] {
                let negative = sg.edges[e as usize].sign.is_negative();
                match label.get(&w) {
                    None => {
                        label.insert(w, label[&u] ^ negative);
                        parent.insert(w, (u, e));
                        depth.insert(w, depth[&u] + 1);
                        queue.push_back(w);
                    }
                    Some(&lw) => {
                        if lw != label[&u] ^ negative {
                            return Balance::Unbalanced {
                                cycle: tree_cycle(u, w, e, &parent, &depth),
                            };
                        }
                    }
                }
            }
        }
    }
    let (y, x): (BTreeSet<VertexId>, BTreeSet<VertexId>) = {
        let (y, x): (Vec<_>, Vec<_>) = label.iter().partition(|(_, &l)| l);
        (
            y.into_iter().map(|(&v, _)| v).collect(),
            x.into_iter().map(|(&v, _)| v).collect(),
        )
    };
    Balance::Balanced { x, y }
}

/// Closes the tree paths from `u` and `w` to their common ancestor with the
/// non-tree edge `e = uw`.
fn tree_cycle(
    u: VertexId,
    w: VertexId,
    e: EdgeId,
    parent: &BTreeMap<VertexId, (VertexId, EdgeId)>,
    depth: &BTreeMap<VertexId, usize>,
) -> Cycle {
    let (mut a, mut b) = (u, w);
    let (mut left_v, mut left_e) = (vec![a], Vec::new());
    let (mut right_v, mut right_e) = (vec![b], Vec::new());
    while depth[&a] > depth[&b] {
        let (p, pe) = parent[&a];
        left_e.push(pe);
        left_v.push(p);
        a = p;
    }
    while depth[&b] > depth[&a] {
        let (p, pe) = parent[&b];
        right_e.push(pe);
        right_v.push(p);
        b = p;
    }
    while a != b {
        let (p, pe) = parent[&a];
        left_e.push(pe);
        left_v.push(p);
        a = p;
        let (q, qe) = parent[&b];
        right_e.push(qe);
        right_v.push(q);
        b = q;
    }
    // left_v runs u .. lca and right_v runs w .. lca
    right_v.pop();
    left_v.reverse();
    left_e.reverse();
    let mut vertices = left_v;
    vertices.extend(right_v);
    let mut edges = left_e;
    edges.push(e);
    edges.extend(right_e);
    Cycle { vertices, edges }
}

/// Checks a balance certificate edge by edge (or the sign of the cycle).
pub fn verify_balance(sg: &SignedGraph, b: &Balance) -> bool {
    match b {
        Balance::Balanced { x, y } => {
            x.is_disjoint(y)
                && x.len() + y.len() == sg.vertex_count()
                && sg.vertices().all(|v| x.contains(&v) || y.contains(&v))
                && sg
                    .edges
                    .iter()
                    .all(|e| (x.contains(&e.u) == x.contains(&e.v)) == (e.sign == Sign::Plus))
        }
        Balance::Unbalanced { cycle } => matches!(cycle_sign(sg, cycle), Ok(Sign::Minus)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus, Plus};

    fn triangle(signs: [Sign; 3]) -> SignedGraph {
        SignedGraph::from_edges(
            0..3,
            &[(0, 1, signs[0]), (1, 2, signs[1]), (2, 0, signs[2])],
        )
        .unwrap()
    }

    fn whole_cycle(sg: &SignedGraph) -> Cycle {
        Cycle::from_vertices(
            &sg.graph(),
            &(0..sg.vertex_count() as u32).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn triangle_signs() {
        for (signs, want) in [
            ([Plus; 3], Plus),
            ([Minus, Plus, Plus], Minus),
            ([Minus, Minus, Plus], Plus),
        ] {
            let t = triangle(signs);
            assert_eq!(cycle_sign(&t, &whole_cycle(&t)).unwrap(), want);
        }
    }

    #[test]
    fn negative_triangle_unbalanced() {
        let t = triangle([Minus; 3]);
        let b = is_balanced(&t);
        assert!(!b.is_balanced());
        assert!(verify_balance(&t, &b));
    }

    #[test]
    fn forest_balanced() {
        let sg =
            SignedGraph::from_edges(0..5, &[(0, 1, Minus), (1, 2, Minus), (3, 4, Plus)]).unwrap();
        let b = is_balanced(&sg);
        assert!(b.is_balanced() && verify_balance(&sg, &b));
    }

    #[test]
    fn square_with_two_negatives_balanced() {
        let sg = SignedGraph::from_edges(
            0..4,
            &[(0, 1, Minus), (1, 2, Plus), (2, 3, Minus), (3, 0, Plus)],
        )
        .unwrap();
        assert_eq!(cycle_sign(&sg, &whole_cycle(&sg)).unwrap(), Plus);
        let b = is_balanced(&sg);
        assert!(b.is_balanced() && verify_balance(&sg, &b));
        if let Balance::Balanced { x, .. } = &b {
            assert!(x.contains(&0));
        }
    }

    #[test]
    fn opposite_signs_on_one_pair_form_negative_digon() {
        let sg = SignedGraph::from_edges(0..2, &[(0, 1, Plus), (0, 1, Minus)]).unwrap();
        let b = is_balanced(&sg);
        let Balance::Unbalanced { cycle } = &b else {
            panic!("digon must be unbalanced")
        };
        assert_eq!(cycle.len(), 2);
        assert!(verify_balance(&sg, &b));
        let mut dup = sg.clone();
        assert!(dup.add_edge(1, 0, Plus).is_err());
        assert!(dup.add_edge(1, 1, Plus).is_err());
    }

    #[test]
    fn switching_examples() {
        let t = triangle([Minus, Plus, Minus]);
        assert_eq!(t.switch(&BTreeSet::new()), t);
        let s: BTreeSet<_> = [1].into();
        assert_eq!(t.switch(&s).switch(&s), t);
        let sq = SignedGraph::from_edges(
            0..4,
            &[(0, 1, Minus), (1, 2, Plus), (2, 3, Minus), (3, 0, Plus)],
        )
        .unwrap();
        let Balance::Balanced { x, .. } = is_balanced(&sq) else {
            panic!()
        };
        assert!(sq.switch(&x).is_all_positive());
    }

    #[test]
    fn long_negative_cycle_is_reported_whole() {
        let mut edges: Vec<(u32, u32, Sign)> = (0..7).map(|i| (i, (i + 1) % 7, Plus)).collect();
        edges[3].2 = Minus;
        edges.push((0, 3, Plus));
        let sg = SignedGraph::from_edges(0..7, &edges).unwrap();
        let b = is_balanced(&sg);
        assert!(!b.is_balanced());
        assert!(verify_balance(&sg, &b));
    }
}
