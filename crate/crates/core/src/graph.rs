//! Loose graphs: vertices, full edges (two endpoints), half-edges (one
//! endpoint) and free edges (no endpoint), plus the `.lg` text format.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// An unordered pair of distinct vertex ids, stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub a: String,
    pub b: String,
}

impl Edge {
    pub fn new(x: &str, y: &str) -> Self {
        if x <= y {
            Edge { a: x.to_string(), b: y.to_string() }
        } else {
            Edge { a: y.to_string(), b: x.to_string() }
        }
    }

    pub fn contains(&self, v: &str) -> bool {
        self.a == v || self.b == v
    }

    pub fn other(&self, v: &str) -> Option<&str> {
        if self.a == v {
            Some(&self.b)
        } else if self.b == v {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub vertex: String,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeEdge {
    pub tag: String,
}

/// A finite loose graph. Simple (no loops, no parallel full edges); any number
/// of half-edges per vertex and any number of free edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LooseGraph {
    vertices: BTreeSet<String>,
    full_edges: BTreeSet<Edge>,
    half_edges: Vec<HalfEdge>,
    free_edges: Vec<FreeEdge>,
}

pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl LooseGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a simple graph from vertex ids and edges; panics on invalid input.
    /// Meant for tests and fixtures.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str)]) -> Self {
        let mut g = LooseGraph::new();
        for v in vertices {
            g.add_vertex(v).expect("valid vertex");
        }
        for (x, y) in edges {
            g.add_edge(x, y).expect("valid edge");
        }
        g
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<()> {
        if !is_valid_id(id) {
            return Err(Error::Syntax { line: 0, message: format!("invalid vertex id `{id}`") });
        }
        if !self.vertices.insert(id.to_string()) {
            return Err(Error::DuplicateVertex { line: 0, vertex: id.to_string() });
        }
        Ok(())
    }

    pub fn add_edge(&mut self, x: &str, y: &str) -> Result<()> {
        if x == y {
            return Err(Error::Loop { line: 0, vertex: x.to_string() });
        }
        for v in [x, y] {
            if !self.vertices.contains(v) {
                return Err(Error::UndeclaredVertex { line: 0, vertex: v.to_string() });
            }
        }
        let e = Edge::new(x, y);
        if self.full_edges.contains(&e) {
            return Err(Error::DuplicateEdge { line: 0, a: e.a, b: e.b });
        }
        self.full_edges.insert(e);
        Ok(())
    }

    pub fn add_half_edge(&mut self, v: &str) -> Result<()> {
        if !self.vertices.contains(v) {
            return Err(Error::UndeclaredVertex { line: 0, vertex: v.to_string() });
        }
        let tag = format!("h{}", self.half_edges.len());
        self.half_edges.push(HalfEdge { vertex: v.to_string(), tag });
        Ok(())
    }

    pub fn add_free_edge(&mut self) {
        let tag = format!("f{}", self.free_edges.len());
        self.free_edges.push(FreeEdge { tag });
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.vertices.iter().map(String::as_str)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn full_edges(&self) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.full_edges.iter()
    }

    pub fn has_edge(&self, x: &str, y: &str) -> bool {
        self.full_edges.contains(&Edge::new(x, y))
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn free_edges(&self) -> &[FreeEdge] {
        &self.free_edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.free_edges.is_empty()
    }

    /// Real neighbors of `v`, in id order.
    pub fn neighbors<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        let mut out: Vec<&str> = self.full_edges.iter().filter_map(move |e| e.other(v)).collect();
        out.sort_unstable();
        out.into_iter()
    }

    pub fn half_edges_at<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a HalfEdge> + 'a {
        self.half_edges.iter().filter(move |h| h.vertex == v)
    }

    /// Number of incident full edges plus half-edges.
    pub fn degree(&self, v: &str) -> Result<usize> {
        if !self.vertices.contains(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let full = self.full_edges.iter().filter(|e| e.contains(v)).count();
        Ok(full + self.half_edges_at(v).count())
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v).unwrap_or(0)).max().unwrap_or(0)
    }

    /// Connected components of the incidence geometry. Vertex components come
    /// first, ordered by their smallest vertex id; each free edge is its own
    /// component and follows in declaration order.
    pub fn components(&self) -> Vec<LooseGraph> {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen.contains(start) {
                continue;
            }
            let mut comp: BTreeSet<&str> = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for w in self.neighbors(v) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(self.induced(&comp));
        }
        for f in &self.free_edges {
            out.push(LooseGraph { free_edges: vec![f.clone()], ..LooseGraph::default() });
        }
        out
    }

    /// Sub-loose-graph on `keep`: full edges inside `keep` and the half-edges at `keep`.
    fn induced(&self, keep: &BTreeSet<&str>) -> LooseGraph {
        LooseGraph {
            vertices: keep.iter().map(|s| s.to_string()).collect(),
            full_edges: self
                .full_edges
                .iter()
                .filter(|e| keep.contains(e.a.as_str()) && keep.contains(e.b.as_str()))
                .cloned()
                .collect(),
            half_edges: self.half_edges.iter().filter(|h| keep.contains(h.vertex.as_str())).cloned().collect(),
            free_edges: Vec::new(),
        }
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected, at least one vertex, no free edge, and no cycle among the full edges.
    pub fn is_loose_tree(&self) -> bool {
        !self.vertices.is_empty()
            && self.free_edges.is_empty()
            && self.full_edges.len() + 1 == self.vertices.len()
            && self.is_connected()
    }

    pub fn check_loose_tree(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::NotATree("no vertices".into()));
        }
        if !self.free_edges.is_empty() {
            return Err(Error::NotATree("contains a free edge".into()));
        }
        if !self.is_connected() {
            return Err(Error::NotATree("not connected".into()));
        }
        if self.full_edges.len() + 1 != self.vertices.len() {
            return Err(Error::NotATree("contains a cycle".into()));
        }
        Ok(())
    }

    /// Replaces the full edge `{x, y}` by one new half-edge at `x` and one at `y`.
    pub fn resolve_edge(&self, x: &str, y: &str) -> Result<LooseGraph> {
        let e = Edge::new(x, y);
        if !self.full_edges.contains(&e) {
            return Err(Error::EdgeNotPresent(x.to_string(), y.to_string()));
        }
        let mut g = self.clone();
        g.full_edges.remove(&e);
        let tag = format!("~{}-{}", e.a, e.b);
        g.half_edges.push(HalfEdge { vertex: e.a.clone(), tag: tag.clone() });
        g.half_edges.push(HalfEdge { vertex: e.b.clone(), tag });
        Ok(g)
    }

    /// Deterministic spanning loose tree: breadth-first search from the smallest
    /// vertex id, neighbors taken in id order. Chords come out sorted.
    pub fn spanning_loose_tree(&self) -> Result<SpanningSelection> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut tree_edges = BTreeSet::new();
        if let Some(root) = self.vertices().next() {
            let mut seen = BTreeSet::from([root]);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if seen.insert(w) {
                        tree_edges.insert(Edge::new(v, w));
                        queue.push_back(w);
                    }
                }
            }
        }
        let chords = self.full_edges.iter().filter(|e| !tree_edges.contains(*e)).cloned().collect();
        Ok(SpanningSelection { tree_edges, chords })
    }

    /// Every spanning loose tree of a connected graph, in lexicographic order of
    /// edge subsets. Fails once more than `limit` subsets would need checking.
    pub fn all_spanning_trees(&self, limit: u128) -> Result<Vec<SpanningSelection>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let edges: Vec<&Edge> = self.full_edges.iter().collect();
        let n = self.vertices.len();
        let k = n.saturating_sub(1);
        let subsets = binomial(edges.len() as u128, k as u128);
        if subsets > limit {
            return Err(Error::BudgetExceeded {
                what: "spanning-tree enumeration".into(),
                required: subsets,
                budget: limit,
            });
        }
        let index: BTreeMap<&str, usize> = self.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let mut out = Vec::new();
        let mut pick = Vec::with_capacity(k);
        choose(edges.len(), k, 0, &mut pick, &mut |chosen| {
            let mut uf = UnionFind::new(n);
            let acyclic = chosen.iter().all(|&i| uf.union(index[edges[i].a.as_str()], index[edges[i].b.as_str()]));
            if acyclic {
                let tree_edges: BTreeSet<Edge> = chosen.iter().map(|&i| edges[i].clone()).collect();
                let chords = self.full_edges.iter().filter(|e| !tree_edges.contains(*e)).cloned().collect();
                out.push(SpanningSelection { tree_edges, chords });
            }
        });
        Ok(out)
    }

    /// Boundary (real vertices of degree one plus the phantom endpoints of the
    /// completion) and inner vertices (degree at least two) of a loose tree.
    pub fn boundary_and_inner(&self) -> Result<BoundarySplit> {
        self.check_loose_tree()?;
        let mut boundary = Vec::new();
        let mut inner = Vec::new();
        for v in self.vertices() {
            match self.degree(v)? {
                1 => boundary.push(v.to_string()),
                d if d >= 2 => inner.push(v.to_string()),
                _ => {}
            }
        }
        boundary.extend(self.half_edges.iter().map(phantom_label));
        Ok(BoundarySplit { boundary, inner })
    }

    /// Serializes to the `.lg` format.
    pub fn to_lg(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            s.push_str(&format!("v {v}\n"));
        }
        for e in &self.full_edges {
            s.push_str(&format!("e {} {}\n", e.a, e.b));
        }
        for h in &self.half_edges {
            s.push_str(&format!("h {}\n", h.vertex));
        }
        for _ in &self.free_edges {
            s.push_str("f\n");
        }
        s
    }
}

/// Coordinate label of the phantom endpoint of a half-edge.
pub fn phantom_label(h: &HalfEdge) -> String {
    format!("{}.{}", h.vertex, h.tag)
}

/// Coordinate labels of the two phantom endpoints of a free edge.
pub fn free_labels(f: &FreeEdge) -> [String; 2] {
    [format!("{}.0", f.tag), format!("{}.1", f.tag)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySplit {
    pub boundary: Vec<String>,
    pub inner: Vec<String>,
}

/// A spanning loose tree of a connected loose graph and the remaining full edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningSelection {
    pub tree_edges: BTreeSet<Edge>,
    pub chords: Vec<Edge>,
}

/// Parses the `.lg` format: `v <id>`, `e <id> <id>`, `h <id>`, `f`, `#` comments.
pub fn parse_loose_graph(text: &str) -> Result<LooseGraph> {
    enum Decl<'a> {
        Edge(&'a str, &'a str),
        Half(&'a str),
        Free,
    }
    let mut g = LooseGraph::new();
    let mut decls = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: String| Error::Syntax { line, message };
        let check_id = |id: &str| {
            if is_valid_id(id) {
                Ok(())
            } else {
                Err(syntax(format!("invalid identifier `{id}`")))
            }
        };
        match tokens.as_slice() {
            [] => {}
            ["v", id] => {
                check_id(id)?;
                if !g.vertices.insert(id.to_string()) {
                    return Err(Error::DuplicateVertex { line, vertex: id.to_string() });
                }
            }
            ["e", x, y] => {
                check_id(x)?;
                check_id(y)?;
                decls.push((line, Decl::Edge(x, y)));
            }
            ["h", v] => {
                check_id(v)?;
                decls.push((line, Decl::Half(v)));
            }
            ["f"] => decls.push((line, Decl::Free)),
            [kw, ..] if ["v", "e", "h", "f"].contains(kw) => {
                return Err(syntax(format!("wrong number of arguments for `{kw}`")));
            }
            [kw, ..] => return Err(syntax(format!("unknown declaration `{kw}`"))),
        }
    }
    for (line, decl) in decls {
        let with_line = |e: Error| match e {
            Error::Loop { vertex, .. } => Error::Loop { line, vertex },
            Error::DuplicateEdge { a, b, .. } => Error::DuplicateEdge { line, a, b },
            Error::UndeclaredVertex { vertex, .. } => Error::UndeclaredVertex { line, vertex },
            other => other,
        };
        match decl {
            Decl::Edge(x, y) => g.add_edge(x, y).map_err(with_line)?,
            Decl::Half(v) => g.add_half_edge(v).map_err(with_line)?,
            Decl::Free => g.add_free_edge(),
        }
    }
    Ok(g)
}

impl FromStr for LooseGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_loose_graph(s)
    }
}

impl fmt::Display for LooseGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_lg())
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn choose(n: usize, k: usize, start: usize, pick: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if pick.len() == k {
        visit(pick);
        return;
    }
    let remaining = k - pick.len();
    for i in start..=n.saturating_sub(remaining) {
        if i >= n {
            break;
        }
        pick.push(i);
        choose(n, k, i + 1, pick, visit);
        pick.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(ids: &[&str]) -> LooseGraph {
        let edges: Vec<(&str, &str)> = ids.windows(2).map(|w| (w[0], w[1])).collect();
        LooseGraph::from_edges(ids, &edges)
    }

    fn complete(ids: &[&str]) -> LooseGraph {
        let mut edges = Vec::new();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                edges.push((*a, *b));
            }
        }
        LooseGraph::from_edges(ids, &edges)
    }

    #[test]
    fn parse_examples() {
        let g = parse_loose_graph("v a\nv b\ne a b").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.full_edges().len(), 1);

        let g = parse_loose_graph("f").unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.free_edges().len(), 1);

        assert!(matches!(parse_loose_graph("v a\ne a a"), Err(Error::Loop { line: 2, .. })));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_loose_graph("v a\nv b\ne a b\ne b a"), Err(Error::DuplicateEdge { line: 4, .. })));
        assert!(matches!(parse_loose_graph("v a\ne a z"), Err(Error::UndeclaredVertex { line: 2, .. })));
        assert!(matches!(parse_loose_graph("v a\nh q"), Err(Error::UndeclaredVertex { line: 2, .. })));
        assert!(matches!(parse_loose_graph("v a\nx a"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_loose_graph("v a b"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_loose_graph("v a-b"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_loose_graph("v a\nv a"), Err(Error::DuplicateVertex { line: 2, .. })));
    }

    #[test]
    fn parse_comments_and_blank_lines() {
        let g = parse_loose_graph("# a path\n\nv a   # first\nv b\n  e b a\nh a\nh a\nf\n").unwrap();
        assert_eq!(g.degree("a").unwrap(), 3);
        assert_eq!(g.free_edges().len(), 1);
        assert!(g.has_edge("a", "b"));
    }

    #[test]
    fn degrees() {
        let p = path(&["a", "b", "c"]);
        assert_eq!(p.degree("b").unwrap(), 2);
        let star = LooseGraph::from_edges(&["w", "x", "y", "z"], &[("w", "x"), ("w", "y"), ("w", "z")]);
        assert_eq!(star.degree("w").unwrap(), 3);
        let mut g = LooseGraph::from_edges(&["a", "b"], &[("a", "b")]);
        g.add_half_edge("a").unwrap();
        g.add_half_edge("a").unwrap();
        assert_eq!(g.degree("a").unwrap(), 3);
        assert!(matches!(g.degree("zz"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn connectivity() {
        assert!(path(&["a", "b", "c"]).is_connected());
        assert!(!LooseGraph::from_edges(&["a", "b"], &[]).is_connected());
        let mut g = LooseGraph::from_edges(&["a"], &[]);
        g.add_free_edge();
        assert!(!g.is_connected());
        let mut lone = LooseGraph::new();
        lone.add_free_edge();
        assert!(lone.is_connected());
        assert!(LooseGraph::new().is_connected());
    }

    #[test]
    fn resolution() {
        let tri = complete(&["a", "b", "c"]);
        let r = tri.resolve_edge("a", "c").unwrap();
        assert!(r.has_edge("a", "b") && r.has_edge("b", "c") && !r.has_edge("a", "c"));
        assert_eq!(r.half_edges_at("a").count(), 1);
        assert_eq!(r.half_edges_at("c").count(), 1);
        for v in ["a", "b", "c"] {
            assert_eq!(r.degree(v).unwrap(), tri.degree(v).unwrap());
        }

        let split = path(&["a", "b"]).resolve_edge("b", "a").unwrap();
        assert_eq!(split.components().len(), 2);
        assert_eq!(split.degree("a").unwrap(), 1);

        assert!(matches!(tri.resolve_edge("a", "z"), Err(Error::EdgeNotPresent(..))));
    }

    #[test]
    fn bfs_spanning_tree() {
        // Breadth-first from `a` reaches both `b` and `c` directly.
        let tri = complete(&["a", "b", "c"]);
        let sel = tri.spanning_loose_tree().unwrap();
        assert_eq!(sel.tree_edges, BTreeSet::from([Edge::new("a", "b"), Edge::new("a", "c")]));
        assert_eq!(sel.chords, vec![Edge::new("b", "c")]);

        let k4 = complete(&["a", "b", "c", "d"]);
        let sel = k4.spanning_loose_tree().unwrap();
        assert_eq!(sel.tree_edges, BTreeSet::from([Edge::new("a", "b"), Edge::new("a", "c"), Edge::new("a", "d")]));
        assert_eq!(sel.chords, vec![Edge::new("b", "c"), Edge::new("b", "d"), Edge::new("c", "d")]);

        let p = path(&["a", "b", "c", "d"]);
        assert!(p.spanning_loose_tree().unwrap().chords.is_empty());

        assert!(matches!(LooseGraph::from_edges(&["a", "b"], &[]).spanning_loose_tree(), Err(Error::Disconnected)));
    }

    #[test]
    fn counts_spanning_trees() {
        assert_eq!(complete(&["a", "b", "c"]).all_spanning_trees(1000).unwrap().len(), 3);
        assert_eq!(complete(&["a", "b", "c", "d"]).all_spanning_trees(1000).unwrap().len(), 16);
        assert_eq!(path(&["a", "b", "c"]).all_spanning_trees(1000).unwrap().len(), 1);
        assert!(complete(&["a", "b", "c", "d"]).all_spanning_trees(3).is_err());
    }

    #[test]
    fn boundary_inner() {
        let p = path(&["a", "b", "c", "d"]);
        assert_eq!(p.boundary_and_inner().unwrap().inner, vec!["b", "c"]);
        let star = LooseGraph::from_edges(&["w", "x", "y", "z"], &[("w", "x"), ("w", "y"), ("w", "z")]);
        assert_eq!(star.boundary_and_inner().unwrap().inner, vec!["w"]);
        let mut g = path(&["a", "b", "c"]);
        g.add_half_edge("c").unwrap();
        let split = g.boundary_and_inner().unwrap();
        assert_eq!(split.inner, vec!["b", "c"]);
        assert_eq!(split.boundary, vec!["a".to_string(), "c.h0".to_string()]);
        assert!(complete(&["a", "b", "c"]).boundary_and_inner().is_err());
    }

    #[test]
    fn serialize_roundtrip_fixture() {
        let text = "v a\nv b\nv c\ne a b\ne b c\nh a\nh c\nh a\nf\n";
        let g = parse_loose_graph(text).unwrap();
        assert_eq!(g.to_lg(), text);
        assert_eq!(parse_loose_graph(&g.to_lg()).unwrap(), g);
    }
}
