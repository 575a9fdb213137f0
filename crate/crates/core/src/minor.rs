//! Minor containment by branch-set search.
//!
//! For connected `h` and connected `g` every vertex of `g` can be assumed to
//! lie in some branch set (an unused vertex can always be merged into an
//! adjacent branch set without losing adjacencies), so the search ranges over
//! partitions of `V(g)` into exactly `|V(h)|` connected blocks.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::graph::{Dense, Graph, VertexId};

/// Branch sets in `g`, keyed by the vertex of `h` they realise.
pub type BranchSets = BTreeMap<VertexId, BTreeSet<VertexId>>;

pub fn is_minor(g: &Graph, h: &Graph) -> bool {
    minor_witness(g, h).is_some()
}

pub fn minor_witness(g: &Graph, h: &Graph) -> Option<BranchSets> {
    let g = g.simplify();
    let h = h.simplify();
    let k = h.vertex_count();
    if k == 0 {
        return Some(BranchSets::new());
    }
    if k > g.vertex_count() || h.edge_count() > g.edge_count() {
        return None;
    }
    let hd = Dense::new(&h);
    let h_connected = h.is_connected();
    let hosts: Vec<Graph> = if h_connected {
        g.components().into_iter().map(|c| g.induced(&c)).collect()
    } else {
        vec![g.clone()]
    };
    for host in hosts {
        if host.vertex_count() < k || host.edge_count() < h.edge_count() {
            continue;
        }
        let gd = Dense::new(&host);
        let mut search = Search {
            g: &gd,
            h: &hd,
            k,
            allow_unused: !h_connected,
            assign: vec![usize::MAX; gd.n()],
            blocks: vec![0u32; k],
            seen: HashSet::new(),
            found: None,
        };
        search.run(0, 0);
        if let Some(map) = search.found {
            let mut out = BranchSets::new();
            for (hi, &mask) in map.iter().enumerate() {
                let set = (0..gd.n())
                    .filter(|&v| mask >> v & 1 == 1)
                    .map(|v| gd.ids[v])
                    .collect();
                out.insert(hd.ids[hi], set);
            }
            return Some(out);
        }
    }
    None
}

struct Search<'a> {
    g: &'a Dense,
    h: &'a Dense,
    k: usize,
    allow_unused: bool,
    assign: Vec<usize>,
    blocks: Vec<u32>,
    seen: HashSet<Vec<u32>>,
    /// Branch set (as a bitmask) realising the `i`-th vertex of `h`.
    found: Option<Vec<u32>>,
}

impl Search<'_> {
    fn run(&mut self, v: usize, opened: usize) {
        if self.found.is_some() {
            return;
        }
        let n = self.g.n();
        if v == n {
            if opened == self.k {
                self.check_partition();
            }
            return;
        }
        if n - v < self.k - opened {
            return;
        }
        for b in 0..opened.min(self.k) {
            self.assign[v] = b;
            self.blocks[b] |= 1 << v;
            self.run(v + 1, opened);
            self.blocks[b] &= !(1 << v);
            if self.found.is_some() {
                return;
            }
        }
        if opened < self.k {
            self.assign[v] = opened;
            self.blocks[opened] |= 1 << v;
            self.run(v + 1, opened + 1);
            self.blocks[opened] &= !(1 << v);
        }
        if self.allow_unused && self.found.is_none() {
            self.assign[v] = usize::MAX;
            self.run(v + 1, opened);
        }
    }

    fn check_partition(&mut self) {
        if !self.blocks.iter().all(|&b| self.g.connected_within(b)) {
            return;
        }
        let k = self.k;
        let mut quotient = vec![0u32; k];
        for (i, &block) in self.blocks.iter().enumerate().take(k) {
            let mut reach = 0u32;
            let mut bits = block;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                reach |= self.g.adj[v];
            }
            for j in 0..k {
                if i != j && reach & self.blocks[j] != 0 {
                    quotient[i] |= 1 << j;
                }
            }
        }
        if !self.seen.insert(quotient.clone()) {
            return;
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.h.adj[i].count_ones()));
        let mut map = vec![usize::MAX; k];
        if embed(self.h, &quotient, &order, 0, &mut map, 0) {
            self.found = Some(map.iter().map(|&b| self.blocks[b]).collect());
        }
    }
}

/// Injects `h` into the quotient graph following `order`.
fn embed(
    h: &Dense,
    q: &[u32],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: u32,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let hv = order[depth];
    let need = h.adj[hv].count_ones();
    for t in 0..q.len() {
        if used >> t & 1 == 1 || q[t].count_ones() < need {
            continue;
        }
        let ok = order[..depth]
            .iter()
            .all(|&hw| h.adj[hv] >> hw & 1 == 0 || q[t] >> map[hw] & 1 == 1);
        if ok {
            map[hv] = t;
            if embed(h, q, order, depth + 1, map, used | 1 << t) {
                return true;
            }
            map[hv] = usize::MAX;
        }
    }
    false
}

/// Checks a branch-set witness directly: disjoint, connected, and every edge
/// of `h` realised by some edge of `g` between the corresponding sets.
pub fn verify_witness(g: &Graph, h: &Graph, w: &BranchSets) -> bool {
    let mut used = BTreeSet::new();
    for v in h.vertices() {
        let Some(set) = w.get(&v) else { return false };
        if set.is_empty() || !set.iter().all(|x| g.has_vertex(*x) && used.insert(*x)) {
            return false;
        }
        if !g.induced(set).is_connected() {
            return false;
        }
    }
    h.edges().filter(|e| !e.is_loop()).all(|e| {
        g.edges().any(|ge| {
            (w[&e.u].contains(&ge.u) && w[&e.v].contains(&ge.v))
                || (w[&e.u].contains(&ge.v) && w[&e.v].contains(&ge.u))
        })
    })
}
