//! Property suites for invariants that hold on every input.

use std::collections::BTreeSet;

use proptest::prelude::*;

use spatial_conflict::graph::Graph;
use spatial_conflict::petersen::{delta_y, is_linklessly_embeddable, triangle_sites, y_delta};
use spatial_conflict::planarity::is_planar;
use spatial_conflict::realization::{linking_number, linking_number_along, Point};
use spatial_conflict::signed::{cycle_sign, is_balanced, verify_balance, Sign, SignedGraph};
use spatial_conflict::tutte::{reference_planarity, tutte_planarity};

fn graph_from_mask(n: u32, mask: &[bool]) -> Graph {
    let mut g = Graph::with_vertices(0..n);
    let mut bits = mask.iter();
    for a in 0..n {
        for b in a + 1..n {
            if *bits.next().unwrap() {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

fn graphs(max_n: u32) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = (n * (n - 1) / 2) as usize;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |m| graph_from_mask(n, &m))
    })
}

/// Signed graphs with a 0 (absent), 1 (+) or 2 (-) per vertex pair.
fn signed_graphs(max_n: u32) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = (n * (n - 1) / 2) as usize;
        prop::collection::vec(0u8..3, pairs).prop_map(move |codes| {
            let mut sg = SignedGraph::with_vertices(0..n);
            let mut it = codes.iter();
            for a in 0..n {
                for b in a + 1..n {
                    match it.next().unwrap() {
                        1 => {
                            sg.add_edge(a, b, Sign::Plus).unwrap();
                        }
                        2 => {
                            sg.add_edge(a, b, Sign::Minus).unwrap();
                        }
                        _ => {}
                    }
                }
            }
            sg
        })
    })
}

fn edge_pairs(g: &Graph) -> BTreeSet<(u32, u32)> {
    g.edges().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect()
}

proptest! {
    #[test]
    fn balance_matches_cycle_signs(sg in signed_graphs(6)) {
        let oracle = sg
            .graph()
            .enumerate_cycles()
            .iter()
            .all(|c| cycle_sign(&sg, c).unwrap() == Sign::Plus);
        let b = is_balanced(&sg);
        prop_assert_eq!(b.is_balanced(), oracle);
        prop_assert!(verify_balance(&sg, &b));
    }

    #[test]
    fn switching_preserves_balance(sg in signed_graphs(7), picks in prop::collection::vec(any::<bool>(), 7)) {
        let s: BTreeSet<u32> = sg.vertices().filter(|&v| picks[v as usize]).collect();
        let switched = sg.switch(&s);
        let b = is_balanced(&switched);
        prop_assert_eq!(b.is_balanced(), is_balanced(&sg).is_balanced());
        prop_assert!(verify_balance(&switched, &b));
    }

    #[test]
    fn planarity_tests_agree(g in graphs(8)) {
        let reference = reference_planarity(&g);
        prop_assert_eq!(tutte_planarity(&g).is_ok(), reference);
        prop_assert_eq!(is_planar(&g), reference);
    }

    #[test]
    fn delta_y_round_trips_and_y_delta_keeps_planarity(g in graphs(8), pick in any::<prop::sample::Index>()) {
        let sites = triangle_sites(&g);
        prop_assume!(!sites.is_empty());
        let t: Vec<u32> = sites[pick.index(sites.len())].iter().copied().collect();
        let h = delta_y(&g, [t[0], t[1], t[2]]).unwrap();
        prop_assert_eq!(h.vertex_count(), g.vertex_count() + 1);
        prop_assert_eq!(h.edge_count(), g.edge_count());
        // Y-Δ keeps planarity; Δ-Y may not (K5 minus an edge becomes K3,3)
        prop_assert!(!is_planar(&h) || is_planar(&g));
        let center = *h.vertex_set().difference(g.vertex_set()).next().unwrap();
        let back = y_delta(&h, center).unwrap();
        prop_assert_eq!(back.vertex_set(), g.vertex_set());
        prop_assert_eq!(edge_pairs(&back), edge_pairs(&g));
    }

    #[test]
    fn linking_number_is_rigid_and_symmetric(
        offset in -3.0f64..3.0,
        shift in prop::array::uniform3(-50.0f64..50.0),
        direction in prop::array::uniform3(-500i64..500),
    ) {
        let k = 20;
        let ring = |center: Point, u: Point, v: Point| -> Vec<Point> {
            (0..k)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / k as f64;
                    [0, 1, 2].map(|j| center[j] + shift[j] + t.cos() * u[j] + t.sin() * v[j])
                })
                .collect()
        };
        // the rings touch at offsets 0 and ±2 and are linked strictly between
        prop_assume!(offset.abs() > 0.05 && (offset.abs() - 2.0).abs() > 0.05);
        let a = ring([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let b = ring([offset, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
        let expected_linked = offset.abs() < 2.0;
        let lk = linking_number(&a, &b).unwrap();
        prop_assert_eq!(lk.abs() == 1, expected_linked);
        prop_assert_eq!(linking_number(&b, &a).unwrap(), lk);
        let reversed: Vec<Point> = b.iter().rev().copied().collect();
        prop_assert_eq!(linking_number(&a, &reversed).unwrap(), -lk);
        prop_assume!(direction != [0, 0, 0]);
        if let Ok(along) = linking_number_along(&a, &b, direction) {
            prop_assert_eq!(along, lk);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linklessness_is_minor_monotone(
        g in graphs(9),
        pick in any::<prop::sample::Index>(),
        contract in any::<bool>(),
    ) {
        prop_assume!(g.edge_count() > 0);
        let ids: Vec<_> = g.edge_ids().collect();
        let e = ids[pick.index(ids.len())];
        let h = if contract {
            g.contract_edge(e).unwrap().0.simplify()
        } else {
            g.delete_edge(e).unwrap()
        };
        prop_assert!(!is_linklessly_embeddable(&g) || is_linklessly_embeddable(&h));
    }
}
