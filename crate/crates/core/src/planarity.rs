//! Fast planarity test: block decomposition, then the face-by-face path
//! embedding of Demoucron, Malgrange and Pertuiset on each block.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Graph, VertexId};

pub fn is_planar(g: &Graph) -> bool {
    let s = g.simplify();
    blocks(&s).iter().all(|b| block_is_planar(b))
}

/// Edge sets of the biconnected components, as simple graphs.
fn blocks(g: &Graph) -> Vec<Vec<(VertexId, VertexId)>> {
    let adj = g.adjacency();
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut stack: Vec<(VertexId, VertexId)> = Vec::new();
    let mut out = Vec::new();
    for root in g.vertices() {
        if disc.contains_key(&root) {
            continue;
        }
        dfs(root, None, &adj, &mut disc, &mut low, &mut stack, &mut out);
    }
    out
}

fn dfs(
    v: VertexId,
    parent: Option<VertexId>,
    adj: &BTreeMap<VertexId, BTreeSet<VertexId>>,
    disc: &mut BTreeMap<VertexId, usize>,
    low: &mut BTreeMap<VertexId, usize>,
    stack: &mut Vec<(VertexId, VertexId)>,
    out: &mut Vec<Vec<(VertexId, VertexId)>>,
) {
    let t = disc.len();
    disc.insert(v, t);
    low.insert(v, t);
    for &w in &adj[&v] {
        if Some(w) == parent {
            continue;
        }
        match disc.get(&w).copied() {
            None => {
                stack.push((v, w));
                dfs(w, Some(v), adj, disc, low, stack, out);
                let lw = low[&w];
                if lw < low[&v] {
                    low.insert(v, lw);
                }
                if lw >= disc[&v] {
                    let mut block = Vec::new();
                    while let Some(e) = stack.pop() {
                        block.push(e);
                        if e == (v, w) {
                            break;
                        }
                    }
                    out.push(block);
                }
            }
            Some(dw) if dw < disc[&v] => {
                stack.push((v, w));
                if dw < low[&v] {
                    low.insert(v, dw);
                }
            }
            Some(_) => {}
        }
    }
}

struct Bridge {
    attachments: BTreeSet<VertexId>,
    /// Edges of the bridge (a chord is a single edge).
    edges: Vec<(VertexId, VertexId)>,
}

fn block_is_planar(edges: &[(VertexId, VertexId)]) -> bool {
    let vertices: BTreeSet<VertexId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let n = vertices.len();
    if n < 5 || edges.len() < 9 {
        return true;
    }
    if edges.len() > 3 * n - 6 {
        return false;
    }
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    let Some(cycle) = some_cycle(&adj) else {
        return true;
    };
    let mut placed_v: BTreeSet<VertexId> = cycle.iter().copied().collect();
    let mut placed_e: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for i in 0..cycle.len() {
        placed_e.insert(norm(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<VertexId>> = vec![cycle.clone(), cycle];
    while placed_e.len() < edges.len() {
        let bridges = bridges(&adj, &placed_v, &placed_e);
        let mut choice: Option<(usize, usize)> = None;
        for (bi, br) in bridges.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| br.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((bi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((bi, admissible[0]));
                    }
                }
            }
        }
        let (bi, fi) = choice.expect("some bridge remains");
        let path = bridge_path(&bridges[bi], &placed_v);
        for w in path.windows(2) {
            placed_e.insert(norm(w[0], w[1]));
        }
        placed_v.extend(path.iter().copied());
        let face = faces.swap_remove(fi);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
    true
}

fn norm(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

fn some_cycle(adj: &BTreeMap<VertexId, BTreeSet<VertexId>>) -> Option<Vec<VertexId>> {
    let start = *adj.keys().next()?;
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut stack = vec![(start, start)];
    let mut seen = BTreeSet::new();
    while let Some((v, p)) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        parent.insert(v, p);
        for &w in &adj[&v] {
            if w == p {
                continue;
            }
            if seen.contains(&w) {
                // back edge v-w closes a cycle through the tree path
                let mut cyc = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[&x];
                    cyc.push(x);
                }
                return Some(cyc);
            }
            stack.push((w, v));
        }
    }
    None
}

fn bridges(
    adj: &BTreeMap<VertexId, BTreeSet<VertexId>>,
    placed_v: &BTreeSet<VertexId>,
    placed_e: &BTreeSet<(VertexId, VertexId)>,
) -> Vec<Bridge> {
    let mut out = Vec::new();
    for (&a, ns) in adj {
        for &b in ns {
            if a < b
                && placed_v.contains(&a)
                && placed_v.contains(&b)
                && !placed_e.contains(&(a, b))
            {
                out.push(Bridge {
                    attachments: [a, b].into(),
                    edges: vec![(a, b)],
                });
            }
        }
    }
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for &s in adj.keys() {
        if placed_v.contains(&s) || seen.contains(&s) {
            continue;
        }
        let mut comp = vec![s];
        seen.insert(s);
        let mut attachments = BTreeSet::new();
        let mut edges = Vec::new();
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for &w in &adj[&v] {
                if placed_v.contains(&w) {
                    attachments.insert(w);
                    edges.push((v, w));
                } else {
                    if v < w {
                        edges.push((v, w));
                    }
                    if seen.insert(w) {
                        comp.push(w);
                    }
                }
            }
            i += 1;
        }
        out.push(Bridge { attachments, edges });
    }
    out
}

/// A path through the bridge between two distinct attachments.
fn bridge_path(br: &Bridge, placed_v: &BTreeSet<VertexId>) -> Vec<VertexId> {
    if br.edges.len() == 1 && placed_v.contains(&br.edges[0].0) && placed_v.contains(&br.edges[0].1)
    {
        return vec![br.edges[0].0, br.edges[0].1];
    }
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(a, b) in &br.edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let start = *br.attachments.iter().next().unwrap();
    // breadth-first from `start` through bridge-internal vertices only
    let mut prev: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some(v) = queue.pop_front() {
        if v != start && placed_v.contains(&v) {
            let mut path = vec![v];
            let mut x = v;
            while x != start {
                x = prev[&x];
                path.push(x);
            }
            path.reverse();
            return path;
        }
        for &w in &adj[&v] {
            if seen.insert(w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("a bridge of a block has two attachments")
}

fn split_face(face: &[VertexId], path: &[VertexId]) -> (Vec<VertexId>, Vec<VertexId>) {
    let (a, b) = (path[0], *path.last().unwrap());
    let n = face.len();
    let i = face.iter().position(|&v| v == a).unwrap();
    let j = face.iter().position(|&v| v == b).unwrap();
    let walk = |from: usize, to: usize| -> Vec<VertexId> {
        let mut out = vec![face[from]];
        let mut k = from;
        while k != to {
            k = (k + 1) % n;
            out.push(face[k]);
        }
        out
    };
    let interior = &path[1..path.len() - 1];
    // a .. b along the face, then back to a through the path
    let mut f1 = walk(i, j);
    f1.extend(interior.iter().rev());
    let mut f2 = walk(j, i);
    f2.extend(interior.iter());
    (f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tutte::reference_planarity;

    #[test]
    fn small_examples() {
        assert!(!is_planar(&Graph::complete(5)));
        assert!(!is_planar(&Graph::complete_bipartite(3, 3)));
        assert!(!is_planar(&Graph::petersen()));
        assert!(is_planar(&Graph::complete(4)));
        assert!(is_planar(&Graph::complete(5).delete_edge(0).unwrap()));
        // two K4 blocks sharing a vertex, and a K5 behind a bridge
        let mut g = Graph::from_pairs(&[
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 3),
            (3, 4),
            (3, 5),
            (3, 6),
            (4, 5),
            (4, 6),
            (5, 6),
        ]);
        assert!(is_planar(&g));
        for a in 7..12u32 {
            g.add_vertex(a);
        }
        for a in 7..12u32 {
            for b in a + 1..12 {
                g.add_edge(a, b).unwrap();
            }
        }
        g.add_edge(6, 7).unwrap();
        assert!(!is_planar(&g));
    }

    #[test]
    fn agrees_with_minor_oracle_on_six_vertices() {
        let pairs: Vec<(u32, u32)> = (0..6u32)
            .flat_map(|a| (a + 1..6).map(move |b| (a, b)))
            .collect();
        for mask in (0u32..1 << 15).step_by(7) {
            let chosen: Vec<(u32, u32)> = (0..15)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            let mut g = Graph::with_vertices(0..6);
            for &(a, b) in &chosen {
                g.add_edge(a, b).unwrap();
            }
            assert_eq!(is_planar(&g), reference_planarity(&g), "{chosen:?}");
        }
    }
}
