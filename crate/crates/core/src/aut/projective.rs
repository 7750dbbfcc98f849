//! Setwise stabilizers of member-point sets in `PGL_n(F_q)`, found by a
//! column-by-column search with pruning on partial images.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::tree::{inner_tree, tree_automorphisms};
use super::{
    apply, closure, greedy_generators, identity, normalize, normalize_vec, to_rows, GroupReport, Mat, ELEMENT_BUDGET,
};
use crate::ambient::{AmbientModel, CoordSet};
use crate::error::{Error, Result};
use crate::field::{check_prime, PrimeField};
use crate::graph::{phantom_label, LooseGraph};

/// Every element of a stabilizer, each matrix normalized projectively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilizer {
    pub q: u32,
    pub labels: Vec<String>,
    pub(crate) elements: BTreeSet<Mat>,
}

impl Stabilizer {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn order(&self) -> u128 {
        self.elements.len() as u128
    }

    pub fn contains(&self, m: &[u8]) -> bool {
        self.elements.contains(m)
    }

    pub fn elements(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.elements.iter().map(Vec::as_slice)
    }

    /// The elements fixing every listed point (normalized vectors).
    pub fn fixing(&self, points: &[Vec<u8>]) -> Stabilizer {
        let n = self.dim();
        let elements =
            self.elements.iter().filter(|m| points.iter().all(|p| fixes(m, p, n, self.q))).cloned().collect();
        Stabilizer { q: self.q, labels: self.labels.clone(), elements }
    }

    pub fn generators(&self) -> Result<Vec<Mat>> {
        greedy_generators(&self.elements, self.dim(), self.q)
    }

    pub fn report(&self, notes: Vec<String>) -> Result<GroupReport> {
        let n = self.dim();
        Ok(GroupReport {
            q: self.q,
            coordinates: self.labels.clone(),
            order: self.order(),
            generators: self.generators()?.iter().map(|m| to_rows(m, n)).collect(),
            notes,
        })
    }
}

pub(crate) fn fixes(m: &[u8], p: &[u8], n: usize, q: u32) -> bool {
    let mut img = apply(m, p, n, q);
    normalize_vec(&mut img, q);
    img == p
}

/// `|PGL_n(F_q)|`.
pub fn pgl_order(n: usize, q: u64) -> Option<u128> {
    let q = q as u128;
    let qn = q.checked_pow(n as u32)?;
    let mut acc: u128 = 1;
    for i in 0..n as u32 {
        acc = acc.checked_mul(qn - q.checked_pow(i)?)?;
    }
    Some(acc / (q - 1))
}

struct Search {
    n: usize,
    q: u32,
    /// Membership of every vector of `F_q^n`, indexed little-endian base `q`.
    member: Vec<bool>,
    /// Normalized member vectors whose last nonzero coordinate is `k`.
    checks: Vec<Vec<Vec<u8>>>,
}

impl Search {
    fn encode(&self, v: &[u8]) -> usize {
        v.iter().rev().fold(0, |acc, &x| acc * self.q as usize + x as usize)
    }

    fn decode(&self, mut idx: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.n];
        for x in v.iter_mut() {
            *x = (idx % self.q as usize) as u8;
            idx /= self.q as usize;
        }
        v
    }

    fn combine(&self, x: &[u8], cols: &[Vec<u8>]) -> Vec<u8> {
        let mut out = vec![0u32; self.n];
        for (coef, col) in x.iter().zip(cols) {
            if *coef != 0 {
                for (o, c) in out.iter_mut().zip(col) {
                    *o += *coef as u32 * *c as u32;
                }
            }
        }
        out.into_iter().map(|s| (s % self.q) as u8).collect()
    }

    /// Whether the newest column keeps every determined image inside the set.
    fn admissible(&self, cols: &[Vec<u8>]) -> bool {
        let k = cols.len() - 1;
        self.checks[k].iter().all(|x| self.member[self.encode(&self.combine(x, cols))])
    }

    fn extend_span(&self, span: &[Vec<u8>], c: &[u8]) -> Vec<Vec<u8>> {
        let mut out = Vec::with_capacity(span.len() * self.q as usize);
        for s in span {
            for t in 0..self.q {
                out.push(s.iter().zip(c).map(|(&a, &b)| ((a as u32 + t * b as u32) % self.q) as u8).collect());
            }
        }
        out
    }

    fn dfs(&self, cols: &mut Vec<Vec<u8>>, span: &[Vec<u8>], out: &mut Vec<Mat>, limit: usize) -> Result<()> {
        let n = self.n;
        if cols.len() == n {
            let mut m = vec![0u8; n * n];
            for (c, col) in cols.iter().enumerate() {
                for r in 0..n {
                    m[r * n + c] = col[r];
                }
            }
            normalize(&mut m, self.q);
            out.push(m);
            if out.len() > limit {
                return Err(Error::BudgetExceeded {
                    what: "stabilizer elements".into(),
                    required: out.len() as u128,
                    budget: limit as u128,
                });
            }
            return Ok(());
        }
        let in_span: HashSet<usize> = span.iter().map(|v| self.encode(v)).collect();
        for idx in 1..self.member.len() {
            if in_span.contains(&idx) {
                continue;
            }
            cols.push(self.decode(idx));
            if self.admissible(cols) {
                let next = self.extend_span(span, cols.last().expect("pushed"));
                self.dfs(cols, &next, out, limit)?;
            }
            cols.pop();
        }
        Ok(())
    }
}

/// All elements of the setwise stabilizer of the member points.
pub fn stabilizer(model: &AmbientModel, q: u64, budget: u128) -> Result<Stabilizer> {
    check_prime(q)?;
    if q > 251 {
        return Err(Error::Precondition("projective stabilizers need q < 256".into()));
    }
    let n = model.dim();
    if n == 0 {
        return Err(Error::Precondition("empty ambient space".into()));
    }
    let required = pgl_order(n, q).ok_or_else(|| Error::Overflow("sizing the projective group".into()))?;
    if required > budget {
        return Err(Error::BudgetExceeded { what: format!("search of PGL({n}, {q})"), required, budget });
    }
    let q32 = q as u32;
    let space = (q as usize).pow(n as u32);
    let mut search = Search { n, q: q32, member: vec![false; space], checks: vec![Vec::new(); n] };
    for idx in 1..space {
        let v = search.decode(idx);
        let support: CoordSet = v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect();
        if model.member_support(support) {
            search.member[idx] = true;
            let first = v.iter().position(|&x| x != 0).expect("nonzero");
            if v[first] == 1 {
                let last = v.iter().rposition(|&x| x != 0).expect("nonzero");
                search.checks[last].push(v);
            }
        }
    }
    let firsts: Vec<Vec<u8>> =
        (1..space).map(|idx| search.decode(idx)).filter(|v| v.iter().find(|&&x| x != 0) == Some(&1)).collect();
    let parts: Vec<Vec<Mat>> = firsts
        .par_iter()
        .map(|c| {
            let mut cols = vec![c.clone()];
            let mut out = Vec::new();
            if search.admissible(&cols) {
                let span = search.extend_span(&[vec![0u8; n]], c);
                search.dfs(&mut cols, &span, &mut out, ELEMENT_BUDGET)?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let total: usize = parts.iter().map(Vec::len).sum();
    if total > ELEMENT_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "stabilizer elements".into(),
            required: total as u128,
            budget: ELEMENT_BUDGET as u128,
        });
    }
    Ok(Stabilizer {
        q: q32,
        labels: model.labels().map(str::to_string).collect(),
        elements: parts.into_iter().flatten().collect(),
    })
}

fn member_vectors(model: &AmbientModel, q: u64, budget: u128) -> Result<Vec<Vec<u8>>> {
    Ok(model.points(q, budget)?.iter().map(|p| p.coords().iter().map(|&x| x as u8).collect()).collect())
}

fn unit(n: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    v[i] = 1;
    v
}

pub fn brute_force_proj_aut(model: &AmbientModel, q: u64, budget: u128) -> Result<GroupReport> {
    let stab = stabilizer(model, q, budget)?;
    let points = member_vectors(model, q, budget)?;
    let kernel = stab.fixing(&points).order();
    let mut notes = vec![format!("member points: {}", points.len())];
    if kernel > 1 {
        notes.push(format!("elements acting trivially on the member points: {kernel}"));
    }
    stab.report(notes)
}

/// Points fixed by `S(w)`: the point of `w` and, for every other real vertex
/// `v`, the member points supported in `{v} ∪ (N̄(v) ∖ {w})` with `p_v ≠ 0`.
pub fn sw_fixed_points(model: &AmbientModel, w: &str, q: u64, budget: u128) -> Result<Vec<Vec<u8>>> {
    let iw = model.vertex_index(w)?;
    let n = model.dim();
    let mut fixed = vec![unit(n, iw)];
    for p in member_vectors(model, q, budget)? {
        let support: CoordSet = p.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect();
        let local = (0..model.vertex_count()).filter(|&v| v != iw).any(|v| {
            let mut allowed = model.support_set(v);
            allowed.remove(iw);
            p[v] != 0 && support.is_subset(allowed)
        });
        if local && !fixed.contains(&p) {
            fixed.push(p);
        }
    }
    Ok(fixed)
}

pub fn s_w_elements(model: &AmbientModel, w: &str, q: u64, budget: u128) -> Result<Stabilizer> {
    let fixed = sw_fixed_points(model, w, q, budget)?;
    Ok(stabilizer(model, q, budget)?.fixing(&fixed))
}

pub fn s_w_bruteforce(model: &AmbientModel, w: &str, q: u64, budget: u128) -> Result<GroupReport> {
    let fixed = sw_fixed_points(model, w, q, budget)?;
    let sw = stabilizer(model, q, budget)?.fixing(&fixed);
    sw.report(vec![format!("fixed points: {}", fixed.len())])
}

fn inner_vertices(t: &LooseGraph) -> Result<Vec<String>> {
    let inner = t.boundary_and_inner()?.inner;
    if inner.len() < 2 {
        return Err(Error::Precondition(format!("need at least two inner vertices, found {}", inner.len())));
    }
    Ok(inner)
}

/// Extends an automorphism of the inner tree to a permutation of all ambient
/// coordinates, matching degree-one neighbors and phantoms in sorted order.
fn lift(t: &LooseGraph, model: &AmbientModel, sigma: &BTreeMap<String, String>) -> Result<Option<Vec<usize>>> {
    let n = model.dim();
    let mut perm = vec![usize::MAX; n];
    for (from, to) in sigma {
        perm[model.vertex_index(from)?] = model.vertex_index(to)?;
        let ends = |v: &str| -> Result<(Vec<usize>, Vec<usize>)> {
            let mut leaves = Vec::new();
            for u in t.neighbors(v) {
                if t.degree(u)? == 1 {
                    leaves.push(model.vertex_index(u)?);
                }
            }
            let mut phantoms: Vec<String> = t.half_edges_at(v).map(phantom_label).collect();
            phantoms.sort();
            let phantoms = phantoms.iter().map(|l| model.coord_index(l)).collect::<Result<_>>()?;
            Ok((leaves, phantoms))
        };
        let (leaves_from, phantoms_from) = ends(from)?;
        let (leaves_to, phantoms_to) = ends(to)?;
        if leaves_from.len() != leaves_to.len() || phantoms_from.len() != phantoms_to.len() {
            return Ok(None);
        }
        for (a, b) in leaves_from.into_iter().zip(leaves_to).chain(phantoms_from.into_iter().zip(phantoms_to)) {
            perm[a] = b;
        }
    }
    let image: BTreeSet<usize> = perm.iter().copied().collect();
    if perm.contains(&usize::MAX) || image.len() != n {
        return Ok(None);
    }
    Ok(Some(perm))
}

fn permutation_matrix(perm: &[usize]) -> Mat {
    let n = perm.len();
    let mut m = vec![0u8; n * n];
    for (i, &j) in perm.iter().enumerate() {
        m[j * n + i] = 1;
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub q: u32,
    pub proj_order: u128,
    pub generated_order: u128,
    /// Order of `S(w)` for each inner vertex.
    pub sw_orders: Vec<(String, u128)>,
    pub inner_tree_order: u128,
    pub lifted_generators: usize,
    pub excluded_generators: usize,
    pub holds: bool,
}

/// Compares the group generated by the `S(w)`, the lifted inner-tree
/// automorphisms and the diagonal rescalings with the full stabilizer.
pub fn decomposition(t: &LooseGraph, q: u64, budget: u128) -> Result<Decomposition> {
    let inner = inner_vertices(t)?;
    let model = AmbientModel::build(t)?;
    let n = model.dim();
    let q32 = q as u32;
    let stab = stabilizer(&model, q, budget)?;
    let points = member_vectors(&model, q, budget)?;
    let mut gens: Vec<Mat> = Vec::new();
    let mut sw_orders = Vec::new();
    for w in &inner {
        let sw = stab.fixing(&sw_fixed_points(&model, w, q, budget)?);
        sw_orders.push((w.clone(), sw.order()));
        gens.extend(sw.generators()?);
    }
    let tree_aut = tree_automorphisms(&inner_tree(t)?)?;
    let (mut lifted, mut excluded) = (0, 0);
    for i in 0..tree_aut.generators.len() {
        match lift(t, &model, &tree_aut.generator_map(i))? {
            Some(perm) => {
                let m = permutation_matrix(&perm);
                if points.iter().all(|p| {
                    let mut img = apply(&m, p, n, q32);
                    normalize_vec(&mut img, q32);
                    points.contains(&img)
                }) {
                    gens.push(m);
                    lifted += 1;
                } else {
                    excluded += 1;
                }
            }
            None => excluded += 1,
        }
    }
    let g = PrimeField::new(q)?.primitive_root() as u8;
    if g != 1 {
        for i in 0..n {
            let mut d = identity(n);
            d[i * n + i] = g;
            normalize(&mut d, q32);
            gens.push(d);
        }
    }
    let generated = closure(&gens, n, q32, ELEMENT_BUDGET)?;
    let holds = generated.len() == stab.elements.len() && generated.iter().all(|m| stab.contains(m));
    Ok(Decomposition {
        q: q32,
        proj_order: stab.order(),
        generated_order: generated.len() as u128,
        sw_orders,
        inner_tree_order: tree_aut.order,
        lifted_generators: lifted,
        excluded_generators: excluded,
        holds,
    })
}

pub fn decomposition_check(t: &LooseGraph, q: u64, budget: u128) -> Result<bool> {
    Ok(decomposition(t, q, budget)?.holds)
}

/// Member points of inner vertices and of the lines of inner edges.
fn inner_tree_points(
    t: &LooseGraph,
    model: &AmbientModel,
    inner: &[String],
    q: u64,
    budget: u128,
) -> Result<Vec<Vec<u8>>> {
    let mut allowed: Vec<CoordSet> =
        inner.iter().map(|v| model.vertex_index(v).map(CoordSet::single)).collect::<Result<_>>()?;
    for e in t.full_edges() {
        if inner.contains(&e.a) && inner.contains(&e.b) {
            allowed.push(model.coord_set(&[&e.a, &e.b])?);
        }
    }
    Ok(member_vectors(model, q, budget)?
        .into_iter()
        .filter(|p| {
            let support: CoordSet = p.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect();
            allowed.iter().any(|a| support.is_subset(*a))
        })
        .collect())
}

pub fn inner_tree_stability_check(t: &LooseGraph, q: u64, budget: u128) -> Result<bool> {
    let inner = inner_vertices(t)?;
    let model = AmbientModel::build(t)?;
    let stab = stabilizer(&model, q, budget)?;
    let target: HashSet<Vec<u8>> = inner_tree_points(t, &model, &inner, q, budget)?.into_iter().collect();
    let (n, q32) = (model.dim(), q as u32);
    let stable = stab.elements().all(|m| {
        target.iter().all(|p| {
            let mut img = apply(m, p, n, q32);
            normalize_vec(&mut img, q32);
            target.contains(&img)
        })
    });
    Ok(stable)
}

/// Whether generators of `S(w)` and `S(w')` commute for all distinct inner `w, w'`.
pub fn sw_generators_commute(t: &LooseGraph, q: u64, budget: u128) -> Result<bool> {
    let inner = inner_vertices(t)?;
    let model = AmbientModel::build(t)?;
    let stab = stabilizer(&model, q, budget)?;
    let (n, q32) = (model.dim(), q as u32);
    let gens: Vec<Vec<Mat>> = inner
        .iter()
        .map(|w| stab.fixing(&sw_fixed_points(&model, w, q, budget)?).generators())
        .collect::<Result<_>>()?;
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            for x in a {
                for y in b {
                    if super::mat_mul(x, y, n, q32) != super::mat_mul(y, x, n, q32) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
