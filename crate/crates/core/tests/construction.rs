use std::collections::BTreeSet;

use coarse_menger::construction::{build_counterexample, build_gadget, tree_path_s1_t2, LabeledGadget};
use coarse_menger::graph::distances_from;
use coarse_menger::{Graph, Vertex};

fn edge_set(g: &Graph) -> BTreeSet<(Vertex, Vertex)> {
    g.edges().map(|(u, v)| (u.min(v), u.max(v))).collect()
}

/// Suppresses every vertex with id at or above `keep` by walking chains of
/// degree-2 vertices, without consulting the recorded subdivisions.
fn contract(g: &Graph, keep: usize) -> (BTreeSet<(Vertex, Vertex)>, Vec<usize>) {
    let mut edges = BTreeSet::new();
    let mut chain_lengths = Vec::new();
    for u in 0..keep {
        for &first in g.neighbors(u) {
            if first < keep {
                if u < first {
                    edges.insert((u, first));
                }
                continue;
            }
            let (mut prev, mut cur, mut len) = (u, first, 1);
            while cur >= keep {
                assert_eq!(g.degree(cur), 2, "subdivision vertex {cur} has degree {}", g.degree(cur));
                let next = *g.neighbors(cur).iter().find(|&&x| x != prev).unwrap();
                (prev, cur, len) = (cur, next, len + 1);
            }
            if u < cur {
                edges.insert((u, cur));
                chain_lengths.push(len);
            }
        }
    }
    (edges, chain_lengths)
}

#[test]
fn counterexample_sizes() {
    assert_eq!(build_counterexample(1, None, None, false).unwrap().vertex_count, 99);
    assert_eq!(build_counterexample(2, None, None, false).unwrap().vertex_count, 645);
    for k in 2..=8 {
        let g = build_gadget(k).unwrap();
        assert_eq!(g.vertex_count, (1 << k) + 1);
        assert_eq!(g.m_order.len(), (1 << (k - 1)) + 2);
    }
}

#[test]
fn contraction_recovers_the_gadget() {
    for ell in 1..=2 {
        for (depth, subdiv) in [(None, None), (Some(2 * ell + 4), Some(2 * ell + 2))] {
            let ce = build_counterexample(ell, depth, subdiv, false).unwrap();
            let gk = build_gadget(ce.spec.k).unwrap();
            let (edges, lengths) = contract(&ce.graph, ce.original_count());
            assert_eq!(edges, edge_set(&gk.graph));
            // Leaf edges plus bottom-path edges, each a chain of L edges.
            let expected = (1 << (ce.spec.k - 1)) + (1 << (ce.spec.k - 1)) + 1;
            assert_eq!(lengths.len(), expected);
            assert!(lengths.iter().all(|&l| l == ce.spec.subdivision_len));
            for v in [gk.s1, gk.s2, gk.t1, gk.t2] {
                assert!(ce.z.contains(v));
            }
            assert_eq!((ce.s1, ce.s2, ce.t1, ce.t2), (gk.s1, gk.s2, gk.t1, gk.t2));
            assert!(ce.s.contains(ce.root) && ce.t.contains(ce.root));
        }
    }
}

#[test]
fn degree_is_at_most_three() {
    for k in 2..=10 {
        assert!(build_gadget(k).unwrap().graph.max_degree() <= 3);
    }
    for ell in 1..=3 {
        assert!(build_counterexample(ell, None, None, false).unwrap().graph.max_degree() <= 3);
    }
}

fn interior_floor(ce: &LabeledGadget) -> u32 {
    let dist = distances_from(&ce.graph, &[ce.root]).unwrap();
    ce.subdivided.iter().flat_map(|e| e.interior.iter()).map(|&v| dist[v].unwrap()).min().unwrap()
}

#[test]
fn subdivision_vertices_are_far_from_root() {
    for ell in 1..=3 {
        let ce = build_counterexample(ell, None, None, false).unwrap();
        assert!(interior_floor(&ce) as usize > 2 * ell, "ell={ell}");
    }
}

#[test]
fn bottom_path_is_a_path_and_tree_path_passes_root() {
    for ell in 1..=2 {
        let ce = build_counterexample(ell, None, None, false).unwrap();
        let p = tree_path_s1_t2(&ce);
        assert!(p.validate(&ce.graph).is_ok());
        assert_eq!((p.first(), p.last()), (ce.s1, ce.t2));
        assert!(p.vertices().contains(&ce.root));
    }
    for k in 2..=7 {
        let g = build_gadget(k).unwrap();
        for w in g.m_order.windows(2) {
            assert!(g.graph.has_edge(w[0], w[1]));
        }
        assert_eq!(g.z.len(), g.m_order.len());
    }
}

#[test]
fn parameter_bounds_are_enforced() {
    assert!(build_counterexample(1, Some(4), None, false).is_err());
    assert!(build_counterexample(1, None, Some(2), false).is_err());
    assert!(build_counterexample(1, Some(4), Some(2), true).is_ok());
    assert!(build_counterexample(0, None, None, false).is_err());
    assert!(build_gadget(1).is_err());
}
