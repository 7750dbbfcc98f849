//! Automorphisms of (loose) trees by canonical encoding at the center.
//!
//! Half-edges are treated as pendant nodes of their own kind, so the
//! half-edges at a common vertex are interchangeable.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{phantom_label, LooseGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAutomorphisms {
    /// Node labels: real vertex ids, then the phantom labels of half-edges.
    pub labels: Vec<String>,
    pub order: u128,
    /// Generators as permutations of node indices.
    pub generators: Vec<Vec<usize>>,
}

impl TreeAutomorphisms {
    /// A generator as a map between node labels.
    pub fn generator_map(&self, i: usize) -> BTreeMap<String, String> {
        self.generators[i]
            .iter()
            .enumerate()
            .map(|(from, &to)| (self.labels[from].clone(), self.labels[to].clone()))
            .collect()
    }
}

struct Tree {
    adj: Vec<Vec<usize>>,
    loose: Vec<bool>,
}

impl Tree {
    fn children(&self, v: usize, parent: Option<usize>) -> Vec<usize> {
        self.adj[v].iter().copied().filter(|&c| Some(c) != parent).collect()
    }

    fn code(&self, v: usize, parent: Option<usize>) -> String {
        let mut codes: Vec<String> = self.children(v, parent).into_iter().map(|c| self.code(c, Some(v))).collect();
        codes.sort();
        format!("({}{})", if self.loose[v] { 'h' } else { 'v' }, codes.concat())
    }

    /// Children grouped by isomorphism type, each group sorted by node index.
    fn groups(&self, v: usize, parent: Option<usize>) -> Vec<Vec<usize>> {
        let mut by_code: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for c in self.children(v, parent) {
            by_code.entry(self.code(c, Some(v))).or_default().push(c);
        }
        by_code.into_values().collect()
    }

    fn order(&self, v: usize, parent: Option<usize>) -> Result<u128> {
        let overflow = || Error::Overflow("counting tree automorphisms".into());
        let mut acc: u128 = 1;
        for group in self.groups(v, parent) {
            for k in 1..=group.len() as u128 {
                acc = acc.checked_mul(k).ok_or_else(overflow)?;
            }
            for &c in &group {
                acc = acc.checked_mul(self.order(c, Some(v))?).ok_or_else(overflow)?;
            }
        }
        Ok(acc)
    }

    /// Writes into `perm` an isomorphism from the subtree at `a` onto the
    /// subtree at `b` (both with equal codes).
    fn iso(&self, a: usize, pa: Option<usize>, b: usize, pb: Option<usize>, perm: &mut [usize]) {
        perm[a] = b;
        let sorted = |v: usize, p: Option<usize>| {
            let mut cs: Vec<(String, usize)> =
                self.children(v, p).into_iter().map(|c| (self.code(c, Some(v)), c)).collect();
            cs.sort();
            cs
        };
        for ((_, ca), (_, cb)) in sorted(a, pa).into_iter().zip(sorted(b, pb)) {
            self.iso(ca, Some(a), cb, Some(b), perm);
        }
    }

    fn swap(&self, a: usize, b: usize, parent: Option<usize>, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        self.iso(a, parent, b, parent, &mut perm);
        self.iso(b, parent, a, parent, &mut perm);
        perm
    }

    fn generators(&self, v: usize, parent: Option<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        for group in self.groups(v, parent) {
            for pair in group.windows(2) {
                out.push(self.swap(pair[0], pair[1], Some(v), n));
            }
            for &c in &group {
                self.generators(c, Some(v), n, out);
            }
        }
    }

    fn centers(&self) -> Vec<usize> {
        let n = self.adj.len();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for &w in &self.adj[v] {
                    if degree[w] > 0 {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
                degree[v] = 0;
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }
}

fn build(t: &LooseGraph) -> Result<(Vec<String>, Tree)> {
    if !t.is_connected() {
        return Err(Error::Disconnected);
    }
    t.check_loose_tree()?;
    let mut labels: Vec<String> = t.vertices().map(str::to_string).collect();
    let index: BTreeMap<String, usize> = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
    let mut adj = vec![Vec::new(); labels.len()];
    let mut loose = vec![false; labels.len()];
    for e in t.full_edges() {
        let (a, b) = (index[&e.a], index[&e.b]);
        adj[a].push(b);
        adj[b].push(a);
    }
    for h in t.half_edges() {
        let node = labels.len();
        labels.push(phantom_label(h));
        adj.push(vec![index[&h.vertex]]);
        adj[index[&h.vertex]].push(node);
        loose.push(true);
    }
    Ok((labels, Tree { adj, loose }))
}

/// A string that two loose trees share exactly when they are isomorphic.
pub fn canonical_code(t: &LooseGraph) -> Result<String> {
    let (_, tree) = build(t)?;
    let code = tree.centers().into_iter().map(|c| tree.code(c, None)).min();
    Ok(code.unwrap_or_default())
}

/// Order and generators of the automorphism group of a loose tree.
pub fn tree_automorphisms(t: &LooseGraph) -> Result<TreeAutomorphisms> {
    let (labels, tree) = build(t)?;
    let n = labels.len();
    let centers = tree.centers();
    let mut generators = Vec::new();
    let order = match centers.as_slice() {
        [c] => {
            tree.generators(*c, None, n, &mut generators);
            tree.order(*c, None)?
        }
        [a, b] => {
            let (a, b) = (*a, *b);
            tree.generators(a, Some(b), n, &mut generators);
            tree.generators(b, Some(a), n, &mut generators);
            let halves = tree.order(a, Some(b))?.checked_mul(tree.order(b, Some(a))?);
            let halves = halves.ok_or_else(|| Error::Overflow("counting tree automorphisms".into()))?;
            if tree.code(a, Some(b)) == tree.code(b, Some(a)) {
                let mut perm: Vec<usize> = (0..n).collect();
                tree.iso(a, Some(b), b, Some(a), &mut perm);
                tree.iso(b, Some(a), a, Some(b), &mut perm);
                generators.push(perm);
                halves * 2
            } else {
                halves
            }
        }
        _ => unreachable!("a tree has one or two centers"),
    };
    Ok(TreeAutomorphisms { labels, order, generators })
}

pub fn tree_aut_order(t: &LooseGraph) -> Result<u128> {
    Ok(tree_automorphisms(t)?.order)
}

/// The ordinary tree induced on the inner vertices (degree at least two).
pub fn inner_tree(t: &LooseGraph) -> Result<LooseGraph> {
    let split = t.boundary_and_inner()?;
    if split.inner.is_empty() {
        return Err(Error::Precondition("loose tree has no inner vertex".into()));
    }
    let inner: Vec<&str> = split.inner.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str)> = t
        .full_edges()
        .filter(|e| split.inner.contains(&e.a) && split.inner.contains(&e.b))
        .map(|e| (e.a.as_str(), e.b.as_str()))
        .collect();
    let mut g = LooseGraph::new();
    for v in &inner {
        g.add_vertex(v)?;
    }
    for (a, b) in edges {
        g.add_edge(a, b)?;
    }
    Ok(g)
}
