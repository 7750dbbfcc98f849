//! The ambient projective space of a loose graph and the rational points of
//! its scheme.
//!
//! Coordinates are the vertices of the completion: real vertices first (id
//! order), then one phantom per half-edge and two per free edge (declaration
//! order). The scheme is the union of coordinate-affine pieces
//!
//! * `A_v = { p : p_v != 0, supp(p) ⊆ {v} ∪ N̄(v) }` for each real vertex `v`,
//! * `G_f = { p : supp(p) = {u, w} }` for each free edge with phantoms `u, w`,
//!
//! so membership of a point only depends on its support.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{check_prime, PrimeField};
use crate::graph::{free_labels, phantom_label, LooseGraph};

pub const MAX_COORDS: usize = 128;

/// Default number of points (or strata) an enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 20_000_000;

/// Largest subspace (in points) that `count_in_window_auto` enumerates exhaustively.
pub const AUTO_EXHAUSTIVE_LIMIT: u128 = 100_000;

/// A set of ambient coordinates, as a bitmask.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordSet(pub u128);

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    pub fn single(i: usize) -> Self {
        CoordSet(1u128 << i)
    }

    pub fn full(n: usize) -> Self {
        if n >= 128 {
            CoordSet(u128::MAX)
        } else {
            CoordSet((1u128 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    pub fn is_subset(self, other: CoordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 | other.0)
    }

    pub fn intersection(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl FromIterator<usize> for CoordSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = CoordSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordKind {
    Vertex,
    /// Phantom endpoint of a half-edge at the given vertex.
    HalfEdge {
        vertex: String,
    },
    /// One of the two phantom endpoints of a free edge.
    FreeEdge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    pub label: String,
    pub kind: CoordKind,
}

/// A point of a finite projective space over a prime field, normalized so
/// that its first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    q: u32,
    coords: Vec<u32>,
}

impl ProjPoint {
    pub fn new(q: u64, coords: &[u64]) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let mut v: Vec<u32> = coords.iter().map(|&c| (c % q) as u32).collect();
        let lead = v
            .iter()
            .copied()
            .find(|&c| c != 0)
            .ok_or_else(|| Error::Precondition("the zero vector is not a projective point".into()))?;
        let inv = field.inv(lead);
        for c in &mut v {
            *c = field.mul(*c, inv);
        }
        Ok(ProjPoint { q: q as u32, coords: v })
    }

    /// Wraps an already normalized vector.
    pub(crate) fn from_normalized(q: u32, coords: Vec<u32>) -> Self {
        debug_assert_eq!(coords.iter().find(|&&c| c != 0), Some(&1));
        ProjPoint { q, coords }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn support(&self) -> CoordSet {
        self.coords.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// Coordinate system of the completion together with the local supports of
/// the real vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientModel {
    coords: Vec<Coordinate>,
    index: BTreeMap<String, usize>,
    vertex_count: usize,
    supports: Vec<CoordSet>,
    free_pairs: Vec<(usize, usize)>,
}

impl AmbientModel {
    pub fn build(g: &LooseGraph) -> Result<Self> {
        let mut coords: Vec<Coordinate> =
            g.vertices().map(|v| Coordinate { label: v.to_string(), kind: CoordKind::Vertex }).collect();
        let vertex_count = coords.len();
        for h in g.half_edges() {
            coords.push(Coordinate { label: phantom_label(h), kind: CoordKind::HalfEdge { vertex: h.vertex.clone() } });
        }
        let mut free_pairs = Vec::new();
        for f in g.free_edges() {
            let [u, w] = free_labels(f);
            free_pairs.push((coords.len(), coords.len() + 1));
            coords.push(Coordinate { label: u, kind: CoordKind::FreeEdge });
            coords.push(Coordinate { label: w, kind: CoordKind::FreeEdge });
        }
        if coords.len() > MAX_COORDS {
            return Err(Error::TooManyCoordinates(coords.len()));
        }
        let index: BTreeMap<String, usize> = coords.iter().enumerate().map(|(i, c)| (c.label.clone(), i)).collect();
        let mut supports = vec![CoordSet::EMPTY; vertex_count];
        for (i, s) in supports.iter_mut().enumerate() {
            s.insert(i);
        }
        for e in g.full_edges() {
            let (a, b) = (index[&e.a], index[&e.b]);
            supports[a].insert(b);
            supports[b].insert(a);
        }
        for (i, c) in coords.iter().enumerate() {
            if let CoordKind::HalfEdge { vertex } = &c.kind {
                supports[index[vertex]].insert(i);
            }
        }
        Ok(AmbientModel { coords, index, vertex_count, supports, free_pairs })
    }

    /// Number of ambient coordinates (projective dimension plus one).
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.coords.iter().map(|c| c.label.as_str())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn free_pairs(&self) -> &[(usize, usize)] {
        &self.free_pairs
    }

    pub fn coord_index(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownCoordinate(label.to_string()))
    }

    pub fn vertex_index(&self, v: &str) -> Result<usize> {
        match self.index.get(v) {
            Some(&i) if i < self.vertex_count => Ok(i),
            _ => Err(Error::UnknownVertex(v.to_string())),
        }
    }

    /// Local support `{v} ∪ N̄(v)` of the real vertex with coordinate index `i`.
    pub fn support_set(&self, i: usize) -> CoordSet {
        self.supports[i]
    }

    pub fn support(&self, v: &str) -> Result<Vec<&str>> {
        let i = self.vertex_index(v)?;
        Ok(self.supports[i].iter().map(|j| self.coords[j].label.as_str()).collect())
    }

    pub fn coord_set(&self, labels: &[&str]) -> Result<CoordSet> {
        labels.iter().map(|l| self.coord_index(l)).collect()
    }

    pub fn labels_of(&self, set: CoordSet) -> Vec<String> {
        set.iter().map(|i| self.coords[i].label.clone()).collect()
    }

    /// Membership of any point whose nonzero coordinates are exactly `s`.
    pub fn member_support(&self, s: CoordSet) -> bool {
        if s.is_empty() {
            return false;
        }
        let real = CoordSet(s.0 & CoordSet::full(self.vertex_count).0);
        if real.iter().any(|v| s.is_subset(self.supports[v])) {
            return true;
        }
        self.free_pairs.iter().any(|&(u, w)| s == CoordSet::single(u).union(CoordSet::single(w)))
    }

    pub fn member(&self, p: &ProjPoint) -> Result<bool> {
        if p.coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.coords.len() });
        }
        Ok(self.member_support(p.support()))
    }

    /// Exact number of rational points over `F_q`, by visiting every point of
    /// the ambient projective space.
    pub fn count_points(&self, q: u64, budget: u128) -> Result<u128> {
        self.count_in_window(CoordSet::full(self.dim()), q, budget)
    }

    /// Exhaustive count of member points whose support lies in `window`.
    pub fn count_in_subspace(&self, window: &[&str], q: u64, budget: u128) -> Result<u128> {
        let w = self.coord_set(window)?;
        self.count_in_window(w, q, budget)
    }

    pub fn count_in_window(&self, window: CoordSet, q: u64, budget: u128) -> Result<u128> {
        check_prime(q)?;
        let idx: Vec<usize> = window.iter().collect();
        let n = idx.len();
        let required = projective_size(q, n)?;
        if required > budget {
            return Err(Error::BudgetExceeded {
                what: format!("exhaustive enumeration of PG({}, {q})", n as i64 - 1),
                required,
                budget,
            });
        }
        // Split by leading coordinate, then by chunks of the tail.
        const CHUNK: u128 = 1 << 14;
        let mut jobs = Vec::new();
        for lead in 0..n {
            let tail = (n - lead - 1) as u32;
            let size = (q as u128).pow(tail);
            let mut start = 0;
            while start < size {
                jobs.push((lead, start, (start + CHUNK).min(size)));
                start += CHUNK;
            }
        }
        let total = jobs
            .par_iter()
            .map(|&(lead, start, end)| {
                let tail = &idx[lead + 1..];
                let mut count = 0u128;
                for code in start..end {
                    let mut s = CoordSet::single(idx[lead]);
                    let mut c = code;
                    for &j in tail {
                        if c % q as u128 != 0 {
                            s.insert(j);
                        }
                        c /= q as u128;
                    }
                    if self.member_support(s) {
                        count += 1;
                    }
                }
                count
            })
            .sum();
        Ok(total)
    }

    /// Exact count obtained by grouping points by their support: a support of
    /// size `k` carries `(q-1)^(k-1)` projective points. Each member support is
    /// attributed to the first real vertex whose local piece contains it.
    pub fn count_in_window_stratified(&self, window: CoordSet, q: u64, budget: u128) -> Result<u128> {
        check_prime(q)?;
        let mut required: u128 = 0;
        for v in 0..self.vertex_count {
            if window.contains(v) {
                let rest = self.supports[v].intersection(window).len() - 1;
                required = required.saturating_add(1u128.checked_shl(rest as u32).unwrap_or(u128::MAX));
            }
        }
        if required > budget {
            return Err(Error::BudgetExceeded { what: "support strata".into(), required, budget });
        }
        let qm1 = (q - 1) as u128;
        let weight = |k: usize| -> Result<u128> {
            qm1.checked_pow(k as u32 - 1).ok_or_else(|| Error::Overflow("counting points".into()))
        };
        let mut total: u128 = 0;
        for v in 0..self.vertex_count {
            if !window.contains(v) {
                continue;
            }
            let mut piece = self.supports[v].intersection(window);
            piece.remove(v);
            let rest: Vec<usize> = piece.iter().collect();
            for mask in 0u64..(1u64 << rest.len()) {
                let mut s = CoordSet::single(v);
                for (b, &j) in rest.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        s.insert(j);
                    }
                }
                let owned_earlier = s.iter().take_while(|&u| u < v).any(|u| s.is_subset(self.supports[u]));
                if !owned_earlier {
                    total =
                        total.checked_add(weight(s.len())?).ok_or_else(|| Error::Overflow("counting points".into()))?;
                }
            }
        }
        for &(u, w) in &self.free_pairs {
            if window.contains(u) && window.contains(w) {
                total += qm1;
            }
        }
        Ok(total)
    }

    pub fn count_points_stratified(&self, q: u64, budget: u128) -> Result<u128> {
        self.count_in_window_stratified(CoordSet::full(self.dim()), q, budget)
    }

    /// Number of connected components of the point model: affine pieces are
    /// joined whenever they share a rational point. Every support carries a
    /// point over every field, so the answer does not depend on `q`.
    pub fn piece_components(&self) -> usize {
        let n = self.vertex_count;
        let mut uf = crate::graph::UnionFind::new(n);
        for v in 0..n {
            let mut rest = self.supports[v];
            rest.remove(v);
            let rest: Vec<usize> = rest.iter().collect();
            for mask in 0u64..(1u64 << rest.len()) {
                let mut s = CoordSet::single(v);
                for (b, &j) in rest.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        s.insert(j);
                    }
                }
                for u in s.iter().filter(|&u| u < n && u != v) {
                    if s.is_subset(self.supports[u]) {
                        uf.union(u, v);
                    }
                }
            }
        }
        let roots: std::collections::BTreeSet<usize> = (0..n).map(|v| uf.find(v)).collect();
        roots.len() + self.free_pairs.len()
    }

    /// Exhaustive count for small subspaces, stratified count otherwise.
    pub fn count_in_window_auto(&self, window: CoordSet, q: u64, budget: u128) -> Result<u128> {
        match self.count_in_window(window, q, budget.min(AUTO_EXHAUSTIVE_LIMIT)) {
            Err(Error::BudgetExceeded { .. }) => self.count_in_window_stratified(window, q, budget),
            other => other,
        }
    }

    /// Every member point with support in `window`, in enumeration order.
    pub fn points_in_window(&self, window: CoordSet, q: u64, budget: u128) -> Result<Vec<ProjPoint>> {
        let mut out = Vec::new();
        for_each_point(self.dim(), window, q, budget, |p| {
            if self.member_support(p.support()) {
                out.push(p.clone());
            }
        })?;
        Ok(out)
    }

    pub fn points(&self, q: u64, budget: u128) -> Result<Vec<ProjPoint>> {
        self.points_in_window(CoordSet::full(self.dim()), q, budget)
    }

    /// Whether the local affine pieces of `u` and `v` share a rational point.
    pub fn local_intersection_nonempty(&self, u: &str, v: &str, q: u64) -> Result<bool> {
        let (iu, iv) = (self.vertex_index(u)?, self.vertex_index(v)?);
        if iu == iv {
            return Err(Error::Precondition("local intersection needs two distinct vertices".into()));
        }
        let common = self.supports[iu].intersection(self.supports[iv]);
        if !common.contains(iu) || !common.contains(iv) {
            return Ok(false);
        }
        let mut found = false;
        for_each_point(self.dim(), common, q, DEFAULT_BUDGET, |p| {
            if !found && p.coords[iu] != 0 && p.coords[iv] != 0 && self.member_support(p.support()) {
                found = true;
            }
        })?;
        Ok(found)
    }
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub(crate) fn normalize_coords(v: &mut [u32], q: u32) {
    if let Some(&lead) = v.iter().find(|&&c| c != 0) {
        let field = PrimeField::new(q as u64).expect("prime modulus");
        let inv = field.inv(lead);
        for c in v.iter_mut() {
            *c = field.mul(*c, inv);
        }
    }
}

/// `(q^n - 1) / (q - 1)`, the number of points of `PG(n-1, q)`.
pub fn projective_size(q: u64, n: usize) -> Result<u128> {
    let overflow = || Error::Overflow("sizing a projective space".into());
    let qn = (q as u128).checked_pow(n as u32).ok_or_else(overflow)?;
    Ok((qn - 1) / (q as u128 - 1))
}

/// Visits every normalized point of the ambient space whose support lies in `window`.
pub fn for_each_point(
    dim: usize,
    window: CoordSet,
    q: u64,
    budget: u128,
    mut visit: impl FnMut(&ProjPoint),
) -> Result<()> {
    check_prime(q)?;
    let idx: Vec<usize> = window.iter().filter(|&i| i < dim).collect();
    let required = projective_size(q, idx.len())?;
    if required > budget {
        return Err(Error::BudgetExceeded {
            what: format!("enumeration of PG({}, {q})", idx.len() as i64 - 1),
            required,
            budget,
        });
    }
    let q32 = q as u32;
    for lead in 0..idx.len() {
        let tail = &idx[lead + 1..];
        let mut digits = vec![0u32; tail.len()];
        loop {
            let mut coords = vec![0u32; dim];
            coords[idx[lead]] = 1;
            for (d, &j) in digits.iter().zip(tail) {
                coords[j] = *d;
            }
            visit(&ProjPoint::from_normalized(q32, coords));
            // increment the little-endian counter
            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < q32 {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
    }
    Ok(())
}
