//! The Petersen family, linkless embeddability by forbidden minors, the
//! family-wide conflict-graph check and the random conjecture probe.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_form;
use crate::embedding::{enumerate_embeddings_marked, Equivalence, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::maximal_planar::{
    class_key, count_all, enumerate_classes, visit_labeled, Classing, MaximalPlanarSubgraph,
    MpsCounts,
};
use crate::minor::is_minor;
use crate::planarity::is_planar;
use crate::signed::Sign;
use crate::spatial::{
    build_conflict_graph_capped, conflict_graph_is_balanced, default_budget, SignedConflictGraph,
    UndecidedPair, STATE_CAP,
};

/// Replaces the triangle `t` by a claw on a fresh vertex.
pub fn delta_y(g: &Graph, t: [VertexId; 3]) -> Result<Graph> {
    let mut out = g.clone();
    for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
        let e = out
            .edges_between(a, b)
            .next()
            .ok_or_else(|| Error::Input(format!("{t:?} is not a triangle")))?;
        out = out.delete_edge(e)?;
    }
    let c = out.fresh_vertex();
    out.add_vertex(c);
    for v in t {
        out.add_edge(c, v)?;
    }
    Ok(out)
}

/// Removes a degree-3 vertex and joins its neighbours pairwise, skipping
/// pairs that are already adjacent.
pub fn y_delta(g: &Graph, center: VertexId) -> Result<Graph> {
    if g.degree(center) != 3 {
        return Err(Error::Input(format!(
            "vertex {center} does not have degree 3"
        )));
    }
    let ns: Vec<VertexId> = g.neighbors(center).into_iter().collect();
    if ns.len() != 3 {
        return Err(Error::Input(format!(
            "vertex {center} has repeated neighbours"
        )));
    }
    let mut out = g.delete_vertex(center)?;
    for (a, b) in [(ns[0], ns[1]), (ns[1], ns[2]), (ns[0], ns[2])] {
        if !out.adjacent(a, b) {
            out.add_edge(a, b)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub name: String,
    #[serde(with = "crate::io::graph_serde")]
    pub graph: Graph,
}

fn triangles(g: &Graph) -> Vec<[VertexId; 3]> {
    let adj = g.adjacency();
    let mut out = Vec::new();
    for (&a, na) in &adj {
        for &b in na.range(a + 1..) {
            for &c in adj[&b].range(b + 1..) {
                if na.contains(&c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn name_member(g: &Graph) -> String {
    let degrees = g.degree_sequence();
    match g.vertex_count() {
        6 => "K6".into(),
        7 if degrees.contains(&6) => "K3,3,1".into(),
        7 => "P7".into(),
        8 if degrees == [3, 3, 4, 4, 4, 4, 4, 4] => "K4,4-e".into(),
        8 => "P8".into(),
        9 => "P9".into(),
        10 => "P10".into(),
        n => format!("unknown-{n}"),
    }
}

/// Closure of `K6` under both exchanges, up to isomorphism. Y–Δ steps that
/// would need an existing edge are not exchanges of the family and are
/// skipped. Ordered by vertex count, then name.
pub fn generate_family() -> Vec<FamilyMember> {
    let k6 = Graph::complete(6);
    let mut seen: HashSet<Vec<u8>> = HashSet::from([canonical_form(&k6)]);
    let mut members = vec![k6.clone()];
    let mut queue = vec![k6];
    while let Some(g) = queue.pop() {
        let mut next = Vec::new();
        for t in triangles(&g) {
            next.push(delta_y(&g, t).expect("triangle"));
        }
        for v in g.vertices() {
            if g.degree(v) == 3 {
                let h = y_delta(&g, v).expect("degree 3");
                if h.edge_count() == g.edge_count() {
                    next.push(h);
                }
            }
        }
        for h in next {
            let h = h.normalized();
            if seen.insert(canonical_form(&h)) {
                members.push(h.clone());
                queue.push(h);
            }
        }
    }
    assert_eq!(
        members.len(),
        7,
        "Petersen family closure must have seven members"
    );
    let mut out: Vec<FamilyMember> = members
        .into_iter()
        .map(|graph| FamilyMember {
            name: name_member(&graph),
            graph,
        })
        .collect();
    out.sort_by(|a, b| (a.graph.vertex_count(), &a.name).cmp(&(b.graph.vertex_count(), &b.name)));
    out
}

pub fn family() -> &'static [FamilyMember] {
    static FAMILY: OnceLock<Vec<FamilyMember>> = OnceLock::new();
    FAMILY.get_or_init(generate_family)
}

pub fn member(name: &str) -> Option<&'static FamilyMember> {
    family().iter().find(|m| m.name == name)
}

/// No Petersen-family minor.
pub fn is_linklessly_embeddable(g: &Graph) -> bool {
    let s = g.simplify();
    if is_planar(&s) {
        return true;
    }
    !family().iter().any(|m| is_minor(&s, &m.graph))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub index: usize,
    pub strong_balanced: bool,
    pub balanced: bool,
    pub complete: bool,
    pub negative_edges: usize,
    pub positive_edges: usize,
    pub implicit_edges: usize,
    /// Fragment pairs joined by both a negative and a positive edge.
    pub dual_sign_pairs: Vec<(EdgeId, EdgeId)>,
    pub undecided: Vec<UndecidedPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MReport {
    pub index: usize,
    pub fragments: Vec<(EdgeId, VertexId, VertexId)>,
    pub m_edges: usize,
    pub embeddings: Vec<EmbeddingReport>,
}

impl MReport {
    pub fn all_unbalanced(&self) -> bool {
        self.embeddings.iter().all(|e| !e.balanced)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberReport {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub counts: MpsCounts,
    pub ms: Vec<MReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    /// `None` means the default of twice the edge count of each `M`.
    pub budget: Option<usize>,
    pub members: Vec<MemberReport>,
    pub totals: MpsCounts,
    /// Conventions whose total is 45.
    pub matching_conventions: Vec<Classing>,
    pub all_unbalanced: bool,
    /// `(member, M index, embedding index)` with a balanced conflict graph.
    pub balanced_cases: Vec<(String, usize, usize)>,
    /// Balanced cases whose searches all finished within budget.
    pub balanced_complete: Vec<(String, usize, usize)>,
    pub undecided_pairs: usize,
    pub dual_sign_pairs: usize,
    /// `M`s of `K4,4-e` with a balanced strong graph but unbalanced full graph.
    pub k44e_strong_balanced_full_unbalanced: usize,
}

/// Inequivalent sphere embeddings of `M`, where equivalences must map the
/// fragment attachment pairs onto each other.
pub fn fragment_embeddings(
    mps: &MaximalPlanarSubgraph,
    eq: Equivalence,
) -> Result<Vec<RotationSystem>> {
    let marks: Vec<(VertexId, VertexId)> = mps.fragments.iter().map(|f| (f.a, f.b)).collect();
    enumerate_embeddings_marked(&mps.m, eq, &marks)
}

fn conflict_graph_for(
    mps: &MaximalPlanarSubgraph,
    rs: &RotationSystem,
    budget: Option<usize>,
    state_cap: usize,
) -> Result<SignedConflictGraph> {
    let b = budget.unwrap_or_else(|| default_budget(rs));
    build_conflict_graph_capped(&mps.host, mps, rs, b, state_cap)
}

fn embedding_report(index: usize, scg: &SignedConflictGraph) -> EmbeddingReport {
    let strong = scg.strong_only();
    EmbeddingReport {
        index,
        strong_balanced: strong.balance().is_balanced(),
        balanced: scg.balance().is_balanced(),
        complete: scg.is_complete(),
        negative_edges: scg.edges.iter().filter(|e| e.sign.is_negative()).count(),
        positive_edges: scg.edges.iter().filter(|e| !e.sign.is_negative()).count(),
        implicit_edges: scg.edges.iter().filter(|e| !e.kind.is_strong()).count(),
        dual_sign_pairs: scg
            .edges
            .iter()
            .filter(|e| e.sign.is_negative() && scg.edge(e.a, e.b, Sign::Plus).is_some())
            .map(|e| (e.a, e.b))
            .collect(),
        undecided: scg.undecided.clone(),
    }
}

pub fn analyse_m(
    index: usize,
    mps: &MaximalPlanarSubgraph,
    budget: Option<usize>,
) -> Result<MReport> {
    let embeddings = fragment_embeddings(mps, Equivalence::Isomorphic)?;
    let reports = embeddings
        .par_iter()
        .enumerate()
        .map(|(i, rs)| {
            conflict_graph_for(mps, rs, budget, STATE_CAP).map(|scg| embedding_report(i, &scg))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MReport {
        index,
        fragments: mps.fragments.iter().map(|f| (f.edge, f.a, f.b)).collect(),
        m_edges: mps.m.edge_count(),
        embeddings: reports,
    })
}

pub fn analyse_member(name: &str, g: &Graph, budget: Option<usize>) -> Result<MemberReport> {
    let counts = count_all(g)?;
    let ms = enumerate_classes(g, Classing::FragmentIso)?;
    let reports = ms
        .par_iter()
        .enumerate()
        .map(|(i, m)| analyse_m(i, m, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(MemberReport {
        name: name.to_string(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        counts,
        ms: reports,
    })
}

/// Every maximal planar subgraph of every family member, every inequivalent
/// embedding: counts under all three conventions and the balance of each
/// conflict graph.
pub fn verify_family(budget: Option<usize>) -> Result<FamilyReport> {
    let members = family()
        .iter()
        .map(|m| analyse_member(&m.name, &m.graph, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut totals = MpsCounts::default();
    for m in &members {
        totals.labeled += m.counts.labeled;
        totals.plain_iso += m.counts.plain_iso;
        totals.fragment_iso += m.counts.fragment_iso;
    }
    let matching_conventions = [Classing::Labeled, Classing::PlainIso, Classing::FragmentIso]
        .into_iter()
        .filter(|&c| totals.get(c) == 45)
        .collect();
    let mut balanced_cases = Vec::new();
    let mut balanced_complete = Vec::new();
    let mut undecided_pairs = 0;
    let mut dual_sign_pairs = 0;
    let mut k44e = 0;
    for m in &members {
        for r in &m.ms {
            for e in &r.embeddings {
                undecided_pairs += e.undecided.len();
                dual_sign_pairs += e.dual_sign_pairs.len();
                if e.balanced {
                    balanced_cases.push((m.name.clone(), r.index, e.index));
                    if e.complete {
                        balanced_complete.push((m.name.clone(), r.index, e.index));
                    }
                }
            }
            if m.name == "K4,4-e"
                && r.embeddings
                    .iter()
                    .any(|e| e.strong_balanced && !e.balanced)
            {
                k44e += 1;
            }
        }
    }
    Ok(FamilyReport {
        budget,
        members,
        totals,
        matching_conventions,
        all_unbalanced: balanced_cases.is_empty(),
        balanced_cases,
        balanced_complete,
        undecided_pairs,
        dual_sign_pairs,
        k44e_strong_balanced_full_unbalanced: k44e,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    LinkedAllUnbalanced,
    LinkedBalancedExists,
    LinklessAllUnbalanced,
    LinklessBalancedExists,
}

impl Cell {
    pub fn of(linkless: bool, balanced_exists: bool) -> Cell {
        match (linkless, balanced_exists) {
            (false, false) => Cell::LinkedAllUnbalanced,
            (false, true) => Cell::LinkedBalancedExists,
            (true, false) => Cell::LinklessAllUnbalanced,
            (true, true) => Cell::LinklessBalancedExists,
        }
    }

    /// Cells that contradict the conjecture.
    pub fn is_candidate(self) -> bool {
        matches!(
            self,
            Cell::LinkedBalancedExists | Cell::LinklessAllUnbalanced
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub linkless: bool,
    pub balanced_exists: bool,
    pub cell: Cell,
    /// First `(M index, embedding index)` with a balanced conflict graph.
    pub balanced_witness: Option<(usize, usize)>,
    /// False when the witness graph is balanced only because some pairs
    /// stayed undecided.
    pub witness_complete: bool,
    pub ms_checked: usize,
    pub undecided_pairs: usize,
}

/// Per-search state cap used by the probe.
pub const PROBE_STATE_CAP: usize = 5_000;

/// Runs the whole pipeline on one nonplanar graph; stops at the first
/// balanced conflict graph.
pub fn classify(g: &Graph, budget: Option<usize>, state_cap: usize) -> Result<Classification> {
    let linkless = is_linklessly_embeddable(g);
    let mut seen = HashSet::new();
    let mut undecided = 0;
    let mut witness = None;
    let mut witness_complete = false;
    let mut checked = 0;
    let mut failure = None;
    visit_labeled(g, |level| {
        for m in level {
            if !seen.insert(class_key(m, Classing::FragmentIso)) {
                continue;
            }
            let i = checked;
            checked += 1;
            let embeddings = match fragment_embeddings(m, Equivalence::Isomorphic) {
                Ok(e) => e,
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            };
            for (j, rs) in embeddings.iter().enumerate() {
                let b = budget.unwrap_or_else(|| default_budget(rs));
                match conflict_graph_is_balanced(&m.host, m, rs, b, state_cap) {
                    Ok((balanced, und)) => {
                        undecided += und;
                        if balanced {
                            witness = Some((i, j));
                            witness_complete = und == 0;
                            return false;
                        }
                    }
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                }
            }
        }
        true
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let balanced_exists = witness.is_some();
    Ok(Classification {
        linkless,
        balanced_exists,
        cell: Cell::of(linkless, balanced_exists),
        balanced_witness: witness,
        witness_complete,
        ms_checked: checked,
        undecided_pairs: undecided,
    })
}

/// Edge probability of the random model for `n` vertices.
pub fn edge_probability(n: usize) -> f64 {
    (2.2 * (n as f64).ln() / n as f64).min(1.0)
}

/// Erdős–Rényi graph on `n` vertices, redrawn until connected and nonplanar.
pub fn random_nonplanar(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p = edge_probability(n);
    loop {
        let mut g = Graph::with_vertices(0..n as u32);
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                if rng.gen_bool(p) {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        if g.is_connected() && !is_planar(&g) {
            return g;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub id: usize,
    #[serde(with = "crate::io::graph_serde")]
    pub graph: Graph,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCell {
    pub name: String,
    pub cell: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub seed: u64,
    pub samples: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub budget: Option<usize>,
    pub state_cap: usize,
    pub contingency: BTreeMap<Cell, usize>,
    pub family: Vec<NamedCell>,
    pub k5: NamedCell,
    pub results: Vec<ProbeSample>,
    /// Sample ids in cells that contradict the conjecture.
    pub candidates: Vec<usize>,
}

/// Samples `n_samples` random nonplanar graphs with a vertex count drawn
/// uniformly from `min_v..=max_v`. Sample `i` uses its own ChaCha stream so
/// the report does not depend on scheduling.
pub fn conjecture_probe(
    n_samples: usize,
    min_v: usize,
    max_v: usize,
    seed: u64,
    budget: Option<usize>,
    state_cap: usize,
) -> Result<ProbeReport> {
    if min_v < 5 || max_v < min_v || max_v > 12 {
        return Err(Error::Input(format!(
            "vertex range {min_v}..={max_v} must lie within 5..=12"
        )));
    }
    let results = (0..n_samples)
        .into_par_iter()
        .map(|id| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(id as u64);
            let n = rng.gen_range(min_v..=max_v);
            let graph = random_nonplanar(&mut rng, n);
            classify(&graph, budget, state_cap).map(|classification| ProbeSample {
                id,
                graph,
                classification,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut contingency: BTreeMap<Cell, usize> = [
        Cell::LinkedAllUnbalanced,
        Cell::LinkedBalancedExists,
        Cell::LinklessAllUnbalanced,
        Cell::LinklessBalancedExists,
    ]
    .into_iter()
    .map(|c| (c, 0))
    .collect();
    for r in &results {
        *contingency.get_mut(&r.classification.cell).unwrap() += 1;
    }
    let family_cells = family()
        .par_iter()
        .map(|m| {
            classify(&m.graph, budget, state_cap).map(|c| NamedCell {
                name: m.name.clone(),
                cell: c.cell,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k5 = NamedCell {
        name: "K5".into(),
        cell: classify(&Graph::complete(5), budget, state_cap)?.cell,
    };
    let candidates = results
        .iter()
        .filter(|r| r.classification.cell.is_candidate())
        .map(|r| r.id)
        .collect();
    Ok(ProbeReport {
        seed,
        samples: n_samples,
        min_vertices: min_v,
        max_vertices: max_v,
        budget,
        state_cap,
        contingency,
        family: family_cells,
        k5,
        results,
        candidates,
    })
}

/// Vertices of triangles, for callers choosing a Δ–Y site.
pub fn triangle_sites(g: &Graph) -> Vec<BTreeSet<VertexId>> {
    triangles(g)
        .into_iter()
        .map(|t| t.into_iter().collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;

    fn k331() -> Graph {
        let mut g = Graph::complete_bipartite(3, 3);
        g.add_vertex(6);
        for v in 0..6 {
            g.add_edge(6, v).unwrap();
        }
        g
    }

    #[test]
    fn exchanges_on_small_graphs() {
        let g = delta_y(&Graph::complete(4), [0, 1, 2]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 6));
        let claw = Graph::from_pairs(&[(0, 1), (0, 2), (0, 3)]);
        let t = y_delta(&claw, 0).unwrap();
        assert!(is_isomorphic(&t.normalized(), &Graph::cycle_graph(3)));
        assert!(y_delta(&Graph::complete(5), 0).is_err());
        assert!(delta_y(&Graph::cycle_graph(4), [0, 1, 2]).is_err());
    }

    #[test]
    fn delta_then_y_is_identity() {
        let k6 = Graph::complete(6);
        let d = delta_y(&k6, [0, 1, 2]).unwrap();
        let fresh = 6;
        let back = y_delta(&d, fresh).unwrap();
        assert!(is_isomorphic(&back, &k6));
    }

    #[test]
    fn k6_delta_y_is_p7_not_k331() {
        let d = delta_y(&Graph::complete(6), [0, 1, 2]).unwrap();
        assert_eq!(d.degree_sequence(), vec![3, 4, 4, 4, 5, 5, 5]);
        assert!(!is_isomorphic(&d, &k331()));
        assert_eq!(name_member(&d), "P7");
    }

    #[test]
    fn family_has_seven_members() {
        let fam = family();
        assert_eq!(fam.len(), 7);
        let names: BTreeSet<&str> = fam.iter().map(|m| m.name.as_str()).collect();
        assert_eq!(
            names,
            ["K6", "K3,3,1", "P7", "P8", "K4,4-e", "P9", "P10"].into()
        );
        assert!(fam
            .iter()
            .all(|m| m.graph.edge_count() == 15 && !is_planar(&m.graph)));
        for (i, a) in fam.iter().enumerate() {
            for b in &fam[i + 1..] {
                assert!(!is_isomorphic(&a.graph, &b.graph));
            }
        }
        let p10 = &member("P10").unwrap().graph;
        assert!(is_isomorphic(p10, &Graph::petersen()));
        assert_eq!(p10.girth(), Some(5));
        assert!(is_isomorphic(&member("K3,3,1").unwrap().graph, &k331()));
        let k44e = Graph::complete_bipartite(4, 4).delete_edge(0).unwrap();
        assert!(is_isomorphic(&member("K4,4-e").unwrap().graph, &k44e));
    }

    #[test]
    fn p10_y_delta_gives_p9() {
        let p10 = Graph::petersen();
        let p9 = y_delta(&p10, 0).unwrap();
        assert!(is_isomorphic(
            &p9.normalized(),
            &member("P9").unwrap().graph
        ));
    }

    #[test]
    fn linkless_examples() {
        assert!(is_linklessly_embeddable(&Graph::complete(4)));
        assert!(is_linklessly_embeddable(&Graph::complete(5)));
        assert!(!is_linklessly_embeddable(&Graph::complete(6)));
        assert!(!is_linklessly_embeddable(&Graph::complete(7)));
        for m in family() {
            assert!(!is_linklessly_embeddable(&m.graph));
            let minus = m
                .graph
                .delete_edge(m.graph.edge_ids().next().unwrap())
                .unwrap();
            assert!(is_linklessly_embeddable(&minus), "{} minus an edge", m.name);
        }
    }
}
