//! Automorphism groups: tree automorphisms, projective stabilizers of the
//! point sets over tiny prime fields, and the incidence-geometry group.

pub mod incidence;
pub mod projective;
pub mod tree;

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LooseGraph;

pub use incidence::{comb_aut_order, incidence_geometry, IncidenceGeometry, Line, LineKind};
pub use projective::{
    brute_force_proj_aut, decomposition_check, inner_tree_stability_check, s_w_bruteforce, Decomposition, Stabilizer,
};
pub use tree::{canonical_code, inner_tree, tree_aut_order, tree_automorphisms, TreeAutomorphisms};

/// Default cap on the number of group elements held in memory.
pub const ELEMENT_BUDGET: usize = 2_000_000;

/// A subgroup of `PGL_n(F_q)` given by its order and generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub q: u32,
    pub coordinates: Vec<String>,
    pub order: u128,
    /// Row-major matrices with entries in `0..q`, normalized so the first
    /// nonzero entry is 1.
    pub generators: Vec<Vec<Vec<u32>>>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SwCase {
    /// `w` is the only inner vertex.
    #[serde(rename = "dagger")]
    Dagger,
    #[serde(rename = "double-dagger")]
    DoubleDagger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwParams {
    pub case: SwCase,
    /// Full edges from `w` to a degree-one vertex.
    pub e: usize,
    /// Half-edges at `w`.
    pub l: usize,
    /// Full edges from `w` to another inner vertex.
    pub i: usize,
}

pub fn sw_params(t: &LooseGraph, w: &str) -> Result<SwParams> {
    let split = t.boundary_and_inner()?;
    if !split.inner.iter().any(|v| v == w) {
        return Err(Error::Precondition(format!("`{w}` is not an inner vertex")));
    }
    let mut e = 0;
    let mut i = 0;
    for n in t.neighbors(w) {
        if t.degree(n)? >= 2 {
            i += 1;
        } else {
            e += 1;
        }
    }
    let l = t.half_edges_at(w).count();
    let case = if split.inner.len() == 1 { SwCase::Dagger } else { SwCase::DoubleDagger };
    Ok(SwParams { case, e, l, i })
}

/// Square matrices over `F_q`, stored row-major.
pub(crate) type Mat = Vec<u8>;

pub(crate) fn identity(n: usize) -> Mat {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

pub(crate) fn mat_mul(a: &[u8], b: &[u8], n: usize, q: u32) -> Mat {
    let mut out = vec![0u8; n * n];
    for r in 0..n {
        for c in 0..n {
            let mut s = 0u32;
            for k in 0..n {
                s += a[r * n + k] as u32 * b[k * n + c] as u32;
            }
            out[r * n + c] = (s % q) as u8;
        }
    }
    normalize(&mut out, q);
    out
}

/// Scales a matrix so its first nonzero entry is 1.
pub(crate) fn normalize(m: &mut [u8], q: u32) {
    if let Some(&lead) = m.iter().find(|&&x| x != 0) {
        if lead != 1 {
            let inv = crate::field::PrimeField::new(q as u64).expect("prime").inv(lead as u32);
            for x in m.iter_mut() {
                *x = ((*x as u32 * inv) % q) as u8;
            }
        }
    }
}

/// Image of a column vector.
pub(crate) fn apply(m: &[u8], v: &[u8], n: usize, q: u32) -> Vec<u8> {
    (0..n).map(|r| ((0..n).map(|k| m[r * n + k] as u32 * v[k] as u32).sum::<u32>() % q) as u8).collect()
}

/// Scales a vector so its first nonzero entry is 1.
pub(crate) fn normalize_vec(v: &mut [u8], q: u32) {
    normalize(v, q)
}

/// Every product of the generators, or a budget error.
pub(crate) fn closure(gens: &[Mat], n: usize, q: u32, limit: usize) -> Result<HashSet<Mat>> {
    let id = identity(n);
    let mut seen: HashSet<Mat> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mat_mul(&x, g, n, q);
            if !seen.contains(&y) {
                if seen.len() >= limit {
                    return Err(Error::BudgetExceeded {
                        what: "group closure".into(),
                        required: seen.len() as u128 + 1,
                        budget: limit as u128,
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Picks generators greedily from a sorted element list until their closure
/// is the whole group.
pub(crate) fn greedy_generators(elements: &BTreeSet<Mat>, n: usize, q: u32) -> Result<Vec<Mat>> {
    let mut gens: Vec<Mat> = Vec::new();
    let mut span: HashSet<Mat> = HashSet::from([identity(n)]);
    for e in elements {
        if span.len() == elements.len() {
            break;
        }
        if !span.contains(e) {
            gens.push(e.clone());
            span = closure(&gens, n, q, elements.len().max(1))?;
        }
    }
    Ok(gens)
}

pub(crate) fn to_rows(m: &[u8], n: usize) -> Vec<Vec<u32>> {
    m.chunks(n).map(|r| r.iter().map(|&x| x as u32).collect()).collect()
}
