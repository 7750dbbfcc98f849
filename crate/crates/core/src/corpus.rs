//! Exhaustive families of small loose graphs, up to isomorphism, and a few
//! named fixtures.

use std::collections::BTreeSet;

use crate::aut::canonical_code;
use crate::graph::{parse_loose_graph, LooseGraph};

/// Vertex names used by generated graphs.
pub fn vertex_name(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

/// Edge lists on vertices `0..n`.
type EdgeList = Vec<(usize, usize)>;

fn to_graph(n: usize, edges: &[(usize, usize)]) -> LooseGraph {
    let mut g = LooseGraph::new();
    for i in 0..n {
        g.add_vertex(&vertex_name(i)).expect("fresh vertex");
    }
    for &(a, b) in edges {
        g.add_edge(&vertex_name(a), &vertex_name(b)).expect("valid edge");
    }
    g
}

/// Smallest adjacency bitmask over all relabelings.
fn graph_canonical(n: usize, edges: &[(usize, usize)]) -> u32 {
    let bit = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        // pairs enumerated row by row
        1u32 << (a * n - a * (a + 1) / 2 + (b - a - 1))
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u32::MAX;
    loop {
        let mask = edges.iter().fold(0u32, |m, &(a, b)| m | bit(perm[a], perm[b]));
        best = best.min(mask);
        if !next_permutation(&mut perm) {
            return best;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Connected simple graphs on exactly `n` vertices, one per isomorphism class.
fn connected_edge_lists(n: usize) -> Vec<EdgeList> {
    if n == 0 {
        return Vec::new();
    }
    let mut layer: Vec<EdgeList> = vec![Vec::new()];
    for k in 1..n {
        // every connected graph has a vertex whose removal keeps it connected
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &layer {
            for nbrs in 1u32..(1 << k) {
                let mut h = g.clone();
                h.extend((0..k).filter(|&i| nbrs >> i & 1 == 1).map(|i| (i, k)));
                if seen.insert(graph_canonical(k + 1, &h)) {
                    next.push(h);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Every connected simple graph with `1..=max_vertices` vertices, up to isomorphism.
pub fn connected_graphs(max_vertices: usize) -> Vec<LooseGraph> {
    (1..=max_vertices).flat_map(|n| connected_edge_lists(n).into_iter().map(move |e| to_graph(n, &e))).collect()
}

/// Every tree with `1..=max_vertices` vertices, up to isomorphism.
pub fn trees(max_vertices: usize) -> Vec<LooseGraph> {
    let mut out = Vec::new();
    let mut layer: Vec<LooseGraph> = vec![to_graph(1, &[])];
    for n in 1..=max_vertices {
        out.extend(layer.iter().cloned());
        if n == max_vertices {
            break;
        }
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &layer {
            for v in 0..n {
                let mut g = t.clone();
                g.add_vertex(&vertex_name(n)).expect("fresh vertex");
                g.add_edge(&vertex_name(v), &vertex_name(n)).expect("valid edge");
                if seen.insert(canonical_code(&g).expect("tree")) {
                    next.push(g);
                }
            }
        }
        layer = next;
    }
    out
}

/// Trees with at most `max_vertices` vertices carrying up to `max_half_edges`
/// half-edges per vertex, with every degree at most `max_degree`, up to isomorphism.
pub fn decorated_trees(max_vertices: usize, max_half_edges: usize, max_degree: usize) -> Vec<LooseGraph> {
    let mut out = Vec::new();
    for t in trees(max_vertices) {
        let vertices: Vec<String> = t.vertices().map(str::to_string).collect();
        let degrees: Vec<usize> = vertices.iter().map(|v| t.degree(v).expect("vertex")).collect();
        if degrees.iter().any(|&d| d > max_degree) {
            continue;
        }
        let mut seen = BTreeSet::new();
        let mut counts = vec![0usize; vertices.len()];
        loop {
            if counts.iter().zip(&degrees).all(|(c, d)| c + d <= max_degree) {
                let mut g = t.clone();
                for (v, &c) in vertices.iter().zip(&counts) {
                    for _ in 0..c {
                        g.add_half_edge(v).expect("vertex");
                    }
                }
                if seen.insert(canonical_code(&g).expect("loose tree")) {
                    out.push(g);
                }
            }
            // odometer over half-edge counts
            let mut k = 0;
            while k < counts.len() {
                counts[k] += 1;
                if counts[k] <= max_half_edges {
                    break;
                }
                counts[k] = 0;
                k += 1;
            }
            if k == counts.len() {
                break;
            }
        }
    }
    out
}

/// Named inputs used across the test suites and the CLI goldens.
pub fn fixtures() -> Vec<(&'static str, LooseGraph)> {
    const TEXTS: &[(&str, &str)] = &[
        ("vertex", "v a\n"),
        ("edge", "v a\nv b\ne a b\n"),
        ("free-edge", "f\n"),
        ("half-edge", "v a\nh a\n"),
        ("path-3", "v a\nv b\nv c\ne a b\ne b c\n"),
        ("path-4", "v a\nv b\nv c\nv d\ne a b\ne b c\ne c d\n"),
        ("star", "v w\nv x\nv y\nv z\ne w x\ne w y\ne w z\n"),
        ("loose-edge", "v b\nv c\ne b c\nh b\nh c\n"),
        ("triangle", "v a\nv b\nv c\ne a b\ne b c\ne a c\n"),
        ("square", "v a\nv b\nv c\nv d\ne a b\ne b c\ne c d\ne a d\n"),
        ("k4-minus-edge", "v a\nv b\nv c\nv d\ne a b\ne a c\ne a d\ne b c\ne c d\n"),
        ("k4", "v a\nv b\nv c\nv d\ne a b\ne a c\ne a d\ne b c\ne b d\ne c d\n"),
        ("k5", "v a\nv b\nv c\nv d\nv e\ne a b\ne a c\ne a d\ne a e\ne b c\ne b d\ne b e\ne c d\ne c e\ne d e\n"),
        ("triangle-tail", "v a\nv b\nv c\nv d\ne a b\ne b c\ne a c\ne c d\nh d\n"),
        ("two-components", "v a\nv b\ne a b\nv c\nh c\nf\n"),
    ];
    TEXTS.iter().map(|(name, text)| (*name, parse_loose_graph(text).expect("fixture parses"))).collect()
}

pub fn fixture(name: &str) -> Option<LooseGraph> {
    fixtures().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}
