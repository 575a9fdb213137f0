//! Canonical labels for small vertex- and edge-colored simple graphs, by
//! colour refinement plus exhaustive individualization.

use std::collections::BTreeMap;

use crate::graph::{Graph, VertexId};

/// A simple graph on `0..n` with vertex colours and edge colours
/// (`0` = no edge, `c + 1` = edge of colour `c`).
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    pub vertex_colors: Vec<u32>,
    pub edges: Vec<Vec<u8>>,
}

impl ColoredGraph {
    pub fn new(n: usize) -> Self {
        ColoredGraph {
            vertex_colors: vec![0; n],
            edges: vec![vec![0; n]; n],
        }
    }

    /// Vertex `i` is the `i`-th smallest id of `g`; every edge gets colour
    /// `edge_color(edge id)`. Parallel edges keep the smallest colour.
    pub fn from_graph(g: &Graph, edge_color: impl Fn(u32) -> u8) -> (Self, Vec<VertexId>) {
        let ids: Vec<VertexId> = g.vertices().collect();
        let pos: BTreeMap<_, _> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut cg = ColoredGraph::new(ids.len());
        for e in g.edges() {
            if e.is_loop() {
                continue;
            }
            let (a, b) = (pos[&e.u], pos[&e.v]);
            let c = edge_color(e.id) + 1;
            let slot = &mut cg.edges[a][b];
            if *slot == 0 || c < *slot {
                *slot = c;
                cg.edges[b][a] = c;
            }
        }
        (cg, ids)
    }

    pub fn n(&self) -> usize {
        self.vertex_colors.len()
    }

    pub fn set_edge(&mut self, a: usize, b: usize, color: u8) {
        self.edges[a][b] = color + 1;
        self.edges[b][a] = color + 1;
    }

    /// Canonical byte label: equal iff the coloured graphs are isomorphic.
    pub fn canonical_label(&self) -> Vec<u8> {
        self.canonical().0
    }

    /// Canonical label together with one canonical ordering of the vertices
    /// (`order[k]` is the vertex placed at position `k`).
    pub fn canonical(&self) -> (Vec<u8>, Vec<usize>) {
        let n = self.n();
        let mut colors: Vec<u32> = self.vertex_colors.clone();
        colors.sort_unstable();
        colors.dedup();
        let mut cells: Vec<Vec<usize>> = colors
            .iter()
            .map(|&c| (0..n).filter(|&v| self.vertex_colors[v] == c).collect())
            .collect();
        cells.retain(|c| !c.is_empty());
        self.refine(&mut cells);
        let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
        self.search(cells, &mut best);
        let (code, order) = best.unwrap_or_default();
        let mut label = (n as u32).to_le_bytes().to_vec();
        label.extend(code);
        (label, order)
    }

    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        let n = self.n();
        loop {
            let mut cell_of = vec![0usize; n];
            for (i, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v] = i;
                }
            }
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut by_sig: BTreeMap<Vec<(u8, usize)>, Vec<usize>> = BTreeMap::new();
                for &v in cell {
                    let mut sig: Vec<(u8, usize)> = (0..n)
                        .filter(|&w| self.edges[v][w] != 0)
                        .map(|w| (self.edges[v][w], cell_of[w]))
                        .collect();
                    sig.sort_unstable();
                    by_sig.entry(sig).or_default().push(v);
                }
                next.extend(by_sig.into_values());
            }
            let stable = next.len() == cells.len();
            *cells = next;
            if stable {
                return;
            }
        }
    }

    fn code_of(&self, order: &[usize]) -> Vec<u8> {
        let n = order.len();
        let mut code = Vec::with_capacity(n * 4 + n * n);
        for &v in order {
            code.extend(self.vertex_colors[v].to_le_bytes());
        }
        for i in 0..n {
            for j in i + 1..n {
                code.push(self.edges[order[i]][order[j]]);
            }
        }
        code
    }

    fn search(&self, cells: Vec<Vec<usize>>, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
        let Some(target) = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
        else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let code = self.code_of(&order);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, order));
            }
            return;
        };
        for &v in &cells[target] {
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&cells[target + 1..]);
            self.refine(&mut next);
            self.search(next, best);
        }
    }
}

/// Canonical label of the simple graph underlying `g` (loops and parallel
/// edges are ignored).
pub fn canonical_form(g: &Graph) -> Vec<u8> {
    ColoredGraph::from_graph(g, |_| 0).0.canonical_label()
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.vertex_count() == h.vertex_count()
        && g.simplify().edge_count() == h.simplify().edge_count()
        && canonical_form(g) == canonical_form(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn relabelled_k4_gets_same_label() {
        let k4 = Graph::complete(4);
        let shuffled = k4.relabel(|v| [7, 3, 11, 0][v as usize]);
        assert_eq!(canonical_form(&k4), canonical_form(&shuffled));
    }

    #[test]
    fn k4_and_c4_differ() {
        assert_ne!(
            canonical_form(&Graph::complete(4)),
            canonical_form(&Graph::cycle_graph(4))
        );
    }

    #[test]
    fn all_octahedra_in_k6_are_one_class() {
        let k6 = Graph::complete(6);
        let mut labels = BTreeSet::new();
        let mut matchings = 0;
        // perfect matchings of {0..5}: pair 0 with a, then the rest
        for a in 1..6u32 {
            let rest: Vec<u32> = (1..6).filter(|&x| x != a).collect();
            for b in 1..4 {
                let (p, q) = (rest[0], rest[b]);
                let r: Vec<u32> = rest[1..].iter().copied().filter(|&x| x != q).collect();
                let drop = [(0, a), (p, q), (r[0], r[1])];
                let mut m = k6.clone();
                for (x, y) in drop {
                    let e = m.edges_between(x, y).next().unwrap();
                    m = m.delete_edge(e).unwrap();
                }
                labels.insert(canonical_form(&m));
                matchings += 1;
            }
        }
        assert_eq!(matchings, 15);
        assert_eq!(labels.len(), 1);
    }

    #[test]
    fn edge_colours_matter() {
        let g = Graph::cycle_graph(4);
        let (a, _) = ColoredGraph::from_graph(&g, |e| u8::from(e == 0));
        let (b, _) = ColoredGraph::from_graph(&g, |e| u8::from(e == 1));
        let (c, _) = ColoredGraph::from_graph(&g, |e| u8::from(e < 2));
        assert_eq!(a.canonical_label(), b.canonical_label());
        assert_ne!(a.canonical_label(), c.canonical_label());
    }

    #[test]
    fn petersen_is_not_prism_like() {
        let p = Graph::petersen();
        let relabeled = p.relabel(|v| (v * 3) % 10 + 20);
        assert!(is_isomorphic(&p, &relabeled));
        // 5-prism: same degree sequence, different graph
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i + 5, (i + 1) % 5 + 5));
            pairs.push((i, i + 5));
        }
        assert!(!is_isomorphic(&p, &Graph::from_pairs(&pairs)));
    }
}
