use std::collections::BTreeSet;

use proptest::prelude::*;

use f1z::ambient::DEFAULT_BUDGET;
use f1z::field::first_primes;
use f1z::surgery::{graph_class, surgery_along, SurgeryOptions};
use f1z::zeta::f1_zeta;
use f1z::{
    affine_class, interpolate_class, parse_loose_graph, projective_class, AmbientModel, ClassPolynomial, LooseGraph,
};

fn name(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

/// Connected simple graph from a random spanning tree plus extra edges,
/// decorated with half-edges.
fn connected_loose_graph(max_vertices: usize) -> impl Strategy<Value = LooseGraph> {
    (1..=max_vertices)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
            (Just(n), parents, prop::collection::vec(any::<bool>(), n * n), prop::collection::vec(0..=1usize, n))
        })
        .prop_map(|(n, parents, extra, halves)| {
            let mut g = LooseGraph::new();
            for i in 0..n {
                g.add_vertex(&name(i)).unwrap();
            }
            for (i, &p) in parents.iter().enumerate() {
                g.add_edge(&name(p), &name(i + 1)).unwrap();
            }
            for a in 0..n {
                for b in a + 1..n {
                    if extra[a * n + b] && !g.has_edge(&name(a), &name(b)) {
                        g.add_edge(&name(a), &name(b)).unwrap();
                    }
                }
            }
            for (i, &h) in halves.iter().enumerate() {
                for _ in 0..h {
                    g.add_half_edge(&name(i)).unwrap();
                }
            }
            g
        })
}

/// Possibly disconnected: a random graph with some edges dropped, plus free edges.
fn loose_graph(max_vertices: usize) -> impl Strategy<Value = LooseGraph> {
    (connected_loose_graph(max_vertices), prop::collection::vec(any::<bool>(), 21), 0..=1usize).prop_map(
        |(g, drop, free)| {
            let mut out = LooseGraph::new();
            for v in g.vertices() {
                out.add_vertex(v).unwrap();
            }
            for (e, d) in g.full_edges().zip(drop.iter().cycle()) {
                if !d {
                    out.add_edge(&e.a, &e.b).unwrap();
                }
            }
            for h in g.half_edges() {
                out.add_half_edge(&h.vertex).unwrap();
            }
            for _ in 0..free {
                out.add_free_edge();
            }
            out
        },
    )
}

fn class(g: &LooseGraph) -> ClassPolynomial {
    graph_class(g, &SurgeryOptions::default()).unwrap().0
}

fn polynomial() -> impl Strategy<Value = ClassPolynomial> {
    prop::collection::vec(-5i128..=5, 0..6).prop_map(|c| ClassPolynomial::from_ascending(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(g in loose_graph(6)) {
        prop_assert_eq!(parse_loose_graph(&g.to_lg()).unwrap(), g);
    }

    #[test]
    fn resolution_keeps_degrees(g in connected_loose_graph(6)) {
        let dim = AmbientModel::build(&g).unwrap().dim();
        for e in g.full_edges() {
            let r = g.resolve_edge(&e.a, &e.b).unwrap();
            for v in g.vertices() {
                prop_assert_eq!(r.degree(v).unwrap(), g.degree(v).unwrap());
            }
            prop_assert!(!r.has_edge(&e.a, &e.b));
            prop_assert_eq!(AmbientModel::build(&r).unwrap().dim(), dim + 2);
        }
    }

    #[test]
    fn spanning_tree_is_reproducible_and_spanning(g in connected_loose_graph(7)) {
        let s = g.spanning_loose_tree().unwrap();
        prop_assert_eq!(&s, &g.spanning_loose_tree().unwrap());
        prop_assert_eq!(s.tree_edges.len(), g.vertex_count() - 1);
        let mut tree = LooseGraph::new();
        for v in g.vertices() {
            tree.add_vertex(v).unwrap();
        }
        for e in &s.tree_edges {
            tree.add_edge(&e.a, &e.b).unwrap();
        }
        prop_assert!(tree.is_loose_tree());
        let mut sorted = s.chords.clone();
        sorted.sort();
        prop_assert_eq!(&sorted, &s.chords);
        let all: BTreeSet<_> = g.full_edges().cloned().collect();
        let split: BTreeSet<_> = s.tree_edges.iter().chain(&s.chords).cloned().collect();
        prop_assert_eq!(all, split);
    }

    #[test]
    fn zeta_is_additive(p in polynomial(), r in polynomial()) {
        let (zp, zr, zs) = (f1_zeta(&p), f1_zeta(&r), f1_zeta(&(&p + &r)));
        for k in 0..6 {
            prop_assert_eq!(zs.exponent(k), zp.exponent(k) + zr.exponent(k));
        }
        prop_assert_eq!(zp.f1_class(), p);
    }

    #[test]
    fn adding_edges_keeps_points(g in loose_graph(5)) {
        let bigger = {
            let mut b = g.clone();
            let ids: Vec<String> = g.vertices().map(str::to_string).collect();
            for (i, x) in ids.iter().enumerate() {
                for y in &ids[i + 1..] {
                    if !b.has_edge(x, y) {
                        b.add_edge(x, y).unwrap();
                    }
                }
            }
            b
        };
        let (m, mb) = (AmbientModel::build(&g).unwrap(), AmbientModel::build(&bigger).unwrap());
        prop_assert_eq!(m.labels().collect::<Vec<_>>(), mb.labels().collect::<Vec<_>>());
        for pt in m.points(2, DEFAULT_BUDGET).unwrap() {
            prop_assert!(mb.member(&pt).unwrap());
        }
    }

    #[test]
    fn local_dimension_is_degree(g in loose_graph(5), q in prop::sample::select(vec![2u64, 3])) {
        let m = AmbientModel::build(&g).unwrap();
        for v in g.vertices() {
            let i = m.vertex_index(v).unwrap();
            let local = m
                .points_in_window(m.support_set(i), q, DEFAULT_BUDGET)
                .unwrap()
                .into_iter()
                .filter(|p| p.coords()[i] != 0)
                .count() as u128;
            prop_assert_eq!(local, (q as u128).pow(g.degree(v).unwrap() as u32), "vertex {}", v);
        }
    }

    #[test]
    fn cliques_span_projective_spaces(g in connected_loose_graph(6), q in prop::sample::select(vec![2u64, 3])) {
        let m = AmbientModel::build(&g).unwrap();
        let ids: Vec<&str> = g.vertices().collect();
        for mask in 1u32..(1 << ids.len()) {
            let k: Vec<&str> = (0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
            let clique = k.iter().enumerate().all(|(i, x)| k[i + 1..].iter().all(|y| g.has_edge(x, y)));
            if clique {
                let expected = ((q as u128).pow(k.len() as u32) - 1) / (q as u128 - 1);
                prop_assert_eq!(m.count_in_subspace(&k, q, DEFAULT_BUDGET).unwrap(), expected);
            }
        }
    }

    #[test]
    fn adjacency_is_local_intersection(g in loose_graph(7), q in prop::sample::select(vec![2u64, 3])) {
        let m = AmbientModel::build(&g).unwrap();
        let ids: Vec<&str> = g.vertices().collect();
        for (i, u) in ids.iter().enumerate() {
            for v in &ids[i + 1..] {
                prop_assert_eq!(g.has_edge(u, v), m.local_intersection_nonempty(u, v, q).unwrap());
            }
        }
        prop_assert_eq!(g.components().len(), m.piece_components());
    }

    #[test]
    fn counting_routes_agree(g in loose_graph(5), q in prop::sample::select(vec![2u64, 3])) {
        let m = AmbientModel::build(&g).unwrap();
        let exhaustive = m.count_points(q, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(exhaustive, m.count_points_stratified(q, DEFAULT_BUDGET).unwrap());
        prop_assert_eq!(class(&g).evaluate(q as i128), exhaustive as i128);
    }

    #[test]
    fn value_at_one_counts_vertices(g in loose_graph(6)) {
        prop_assert_eq!(class(&g).evaluate(1), g.vertex_count() as i128);
    }

    #[test]
    fn disjoint_union_adds(g in loose_graph(4), h in loose_graph(4)) {
        let mut union = g.clone();
        let rename = |v: &str| format!("x{v}");
        for v in h.vertices() {
            union.add_vertex(&rename(v)).unwrap();
        }
        for e in h.full_edges() {
            union.add_edge(&rename(&e.a), &rename(&e.b)).unwrap();
        }
        for hh in h.half_edges() {
            union.add_half_edge(&rename(&hh.vertex)).unwrap();
        }
        for _ in h.free_edges() {
            union.add_free_edge();
        }
        prop_assert_eq!(class(&union), &class(&g) + &class(&h));
    }

    #[test]
    fn chord_order_does_not_matter(g in connected_loose_graph(5), seed in any::<u64>()) {
        let s = g.spanning_loose_tree().unwrap();
        let mut order = s.chords.clone();
        // deterministic shuffle from the seed
        let mut state = seed | 1;
        for i in (1..order.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            order.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let opts = SurgeryOptions::default();
        let (a, _) = surgery_along(&g, &s, &s.chords, &opts).unwrap();
        let (b, trace) = surgery_along(&g, &s, &order, &opts).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(trace.telescopes());
    }

    #[test]
    fn interpolation_recovers_polynomials(p in polynomial(), extra in 0usize..3) {
        let bound = 5;
        let samples: Vec<(i128, i128)> =
            first_primes(bound + 1 + extra).into_iter().map(|q| (q as i128, p.evaluate(q as i128))).collect();
        prop_assert_eq!(interpolate_class(&samples, bound).unwrap(), p);
    }

    #[test]
    fn scissor_relation(n in 1u32..=10) {
        prop_assert_eq!(projective_class(n), &affine_class(n) + &projective_class(n - 1));
    }
}
