//! Classes of arbitrary loose graphs by surgery.
//!
//! Every chord of a spanning loose tree is resolved, the resulting loose tree
//! gets its closed-form class, and the chords are put back one at a time. Each
//! re-attachment only changes points inside the projective window spanned by
//! the closed balls of the chord's endpoints, so the class changes by the
//! difference of the two windowed classes, each interpolated from exact counts.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::ambient::{AmbientModel, CoordSet, DEFAULT_BUDGET};
use crate::class::{gm_class, interpolate_class, tree_class, ClassPolynomial};
use crate::error::{Error, Result};
use crate::field::{check_prime, first_primes};
use crate::graph::{Edge, LooseGraph, SpanningSelection};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryOptions {
    /// Work limit for each enumeration.
    pub budget: u128,
    /// Primes used for window interpolation; when `None` the smallest primes
    /// that suffice are taken.
    pub primes: Option<Vec<u64>>,
}

impl Default for SurgeryOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, primes: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryStep {
    pub edge: Edge,
    /// Window coordinates in the graph containing the edge.
    pub window: Vec<String>,
    /// The same window after resolution (two extra phantom coordinates).
    pub window_resolved: Vec<String>,
    pub class_before: ClassPolynomial,
    pub class_after: ClassPolynomial,
    pub delta: ClassPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryTrace {
    pub tree_edges: Vec<Edge>,
    pub tree_class: ClassPolynomial,
    pub steps: Vec<SurgeryStep>,
    pub final_class: ClassPolynomial,
}

impl SurgeryTrace {
    /// Final class equals the tree-stage class plus every step's delta.
    pub fn telescopes(&self) -> bool {
        let sum = self.steps.iter().fold(self.tree_class.clone(), |acc, s| &acc + &s.delta);
        sum == self.final_class
    }
}

/// Window of the edge `{x, y}`: the coordinates of the completion's closed
/// balls of radius one around `x` and `y`.
pub fn local_window(g: &LooseGraph, x: &str, y: &str) -> Result<Vec<String>> {
    if !g.has_edge(x, y) {
        return Err(Error::EdgeNotPresent(x.to_string(), y.to_string()));
    }
    let m = AmbientModel::build(g)?;
    Ok(m.labels_of(window_set(&m, x, y)?))
}

fn window_set(m: &AmbientModel, x: &str, y: &str) -> Result<CoordSet> {
    Ok(m.support_set(m.vertex_index(x)?).union(m.support_set(m.vertex_index(y)?)))
}

/// Exact counts of member points inside `window` at each prime.
fn window_counts(m: &AmbientModel, window: CoordSet, primes: &[u64], budget: u128) -> Result<Vec<(i128, i128)>> {
    primes
        .par_iter()
        .map(|&q| {
            let c = m.count_in_window_auto(window, q, budget)?;
            let c = i128::try_from(c).map_err(|_| Error::Overflow("window count".into()))?;
            Ok((q as i128, c))
        })
        .collect()
}

fn primes_for(opts: &SurgeryOptions, needed: usize) -> Result<Vec<u64>> {
    match &opts.primes {
        Some(ps) => {
            for &q in ps {
                check_prime(q)?;
            }
            if ps.len() < needed {
                return Err(Error::InsufficientSamples { needed, got: ps.len() });
            }
            Ok(ps.clone())
        }
        None => Ok(first_primes(needed)),
    }
}

/// Class change `[with] - [without]` caused by the edge, where `without` is
/// `with` with the edge resolved. Computed from the two windowed classes.
pub fn pap_delta(
    with: &LooseGraph,
    without: &LooseGraph,
    edge: &Edge,
    opts: &SurgeryOptions,
) -> Result<ClassPolynomial> {
    Ok(pap_delta_detailed(with, without, edge, opts)?.0)
}

fn pap_delta_detailed(
    with: &LooseGraph,
    without: &LooseGraph,
    edge: &Edge,
    opts: &SurgeryOptions,
) -> Result<(ClassPolynomial, Vec<String>, Vec<String>)> {
    if !with.has_edge(&edge.a, &edge.b) {
        return Err(Error::EdgeNotPresent(edge.a.clone(), edge.b.clone()));
    }
    if without.has_edge(&edge.a, &edge.b) {
        return Err(Error::Precondition(format!("edge {edge} is not resolved in the second graph")));
    }
    let m_with = AmbientModel::build(with)?;
    let m_without = AmbientModel::build(without)?;
    let w_with = window_set(&m_with, &edge.a, &edge.b)?;
    let w_without = window_set(&m_without, &edge.a, &edge.b)?;
    if w_without.len() != w_with.len() + 2 {
        return Err(Error::Precondition(format!("second graph is not the resolution of the first along {edge}")));
    }
    // degree bound |window| - 1 per side, plus one held-out prime
    let primes = primes_for(opts, w_without.len() + 1)?;
    let fit = |m: &AmbientModel, w: CoordSet| -> Result<ClassPolynomial> {
        let samples = window_counts(m, w, &primes, opts.budget)?;
        interpolate_class(&samples, w.len().saturating_sub(1))
    };
    let delta = &fit(&m_with, w_with)? - &fit(&m_without, w_without)?;
    Ok((delta, m_with.labels_of(w_with), m_without.labels_of(w_without)))
}

/// Surgery along the deterministic spanning loose tree.
pub fn surgery_class(g: &LooseGraph) -> Result<(ClassPolynomial, SurgeryTrace)> {
    surgery_class_with(g, &SurgeryOptions::default())
}

pub fn surgery_class_with(g: &LooseGraph, opts: &SurgeryOptions) -> Result<(ClassPolynomial, SurgeryTrace)> {
    let selection = g.spanning_loose_tree()?;
    surgery_along(g, &selection, &selection.chords, opts)
}

/// Surgery for a given spanning loose tree. Chords are resolved in the order
/// given and re-attached in the reverse order.
pub fn surgery_along(
    g: &LooseGraph,
    selection: &SpanningSelection,
    resolution_order: &[Edge],
    opts: &SurgeryOptions,
) -> Result<(ClassPolynomial, SurgeryTrace)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let given: BTreeSet<&Edge> = resolution_order.iter().collect();
    let chords: BTreeSet<&Edge> = selection.chords.iter().collect();
    if given != chords || given.len() != resolution_order.len() {
        return Err(Error::Precondition("resolution order must list every chord exactly once".into()));
    }
    let mut chain = vec![g.clone()];
    for e in resolution_order {
        let next = chain.last().expect("chain is never empty").resolve_edge(&e.a, &e.b)?;
        chain.push(next);
    }
    let tree = chain.last().expect("chain is never empty");
    let tree_stage = tree_class(tree)?;
    let mut class = tree_stage.clone();
    let mut steps = Vec::with_capacity(resolution_order.len());
    for (i, e) in resolution_order.iter().enumerate().rev() {
        let (delta, window, window_resolved) = pap_delta_detailed(&chain[i], &chain[i + 1], e, opts)?;
        let after = &class + &delta;
        steps.push(SurgeryStep {
            edge: e.clone(),
            window,
            window_resolved,
            class_before: class,
            class_after: after.clone(),
            delta,
        });
        class = after;
    }
    let trace = SurgeryTrace {
        tree_edges: selection.tree_edges.iter().cloned().collect(),
        tree_class: tree_stage,
        steps,
        final_class: class.clone(),
    };
    Ok((class, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassMethod {
    Empty,
    FreeEdge,
    TreeFormula,
    Surgery,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentClass {
    pub graph: LooseGraph,
    pub class: ClassPolynomial,
    pub method: ClassMethod,
    pub trace: Option<SurgeryTrace>,
}

/// Class of a connected loose graph: closed form for trees and free edges,
/// surgery otherwise.
pub fn connected_class(g: &LooseGraph, opts: &SurgeryOptions) -> Result<ComponentClass> {
    let (class, method, trace) = if g.is_empty() {
        (ClassPolynomial::zero(), ClassMethod::Empty, None)
    } else if g.vertex_count() == 0 && g.free_edges().len() == 1 {
        (gm_class(), ClassMethod::FreeEdge, None)
    } else if g.is_loose_tree() {
        (tree_class(g)?, ClassMethod::TreeFormula, None)
    } else {
        let (class, trace) = surgery_class_with(g, opts)?;
        (class, ClassMethod::Surgery, Some(trace))
    };
    Ok(ComponentClass { graph: g.clone(), class, method, trace })
}

/// Classes of every connected component; the class of the graph is their sum.
pub fn graph_class(g: &LooseGraph, opts: &SurgeryOptions) -> Result<(ClassPolynomial, Vec<ComponentClass>)> {
    let comps = g.components().iter().map(|c| connected_class(c, opts)).collect::<Result<Vec<_>>>()?;
    let total = comps.iter().map(|c| c.class.clone()).sum();
    Ok((total, comps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub spanning_trees: usize,
    pub surgeries: usize,
    pub classes: BTreeSet<Vec<(u32, i128)>>,
}

impl IndependenceReport {
    pub fn independent(&self) -> bool {
        self.classes.len() == 1
    }

    /// Only one spanning tree and nothing to re-attach.
    pub fn vacuous(&self) -> bool {
        self.spanning_trees == 1 && self.surgeries == 1
    }
}

/// Runs surgery over every spanning loose tree and every chord order.
pub fn spanning_tree_independence(g: &LooseGraph, opts: &SurgeryOptions) -> Result<IndependenceReport> {
    let trees = g.all_spanning_trees(opts.budget)?;
    let mut runs: u128 = 0;
    for t in &trees {
        runs = runs.saturating_add(factorial(t.chords.len()));
    }
    if runs > opts.budget {
        return Err(Error::BudgetExceeded { what: "surgery runs".into(), required: runs, budget: opts.budget });
    }
    let mut classes = BTreeSet::new();
    let mut surgeries = 0;
    for t in &trees {
        let mut order = t.chords.clone();
        let mut result = Ok(());
        for_each_permutation(&mut order, 0, &mut |perm| {
            if result.is_err() {
                return;
            }
            match surgery_along(g, t, perm, opts) {
                Ok((class, _)) => {
                    surgeries += 1;
                    classes.insert(class.terms().collect::<Vec<_>>());
                }
                Err(e) => result = Err(e),
            }
        });
        result?;
    }
    Ok(IndependenceReport { spanning_trees: trees.len(), surgeries, classes })
}

pub fn verify_spanning_tree_independence(g: &LooseGraph, opts: &SurgeryOptions) -> Result<bool> {
    Ok(spanning_tree_independence(g, opts)?.independent())
}

/// Global and windowed count differences for one resolution step at `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalityCheck {
    pub q: u64,
    pub global_difference: i128,
    pub window_difference: i128,
}

impl LocalityCheck {
    pub fn holds(&self) -> bool {
        self.global_difference == self.window_difference
    }
}

/// Point counts of `with` and of its resolution along `edge`, globally and
/// inside the edge window.
pub fn affection_locality(with: &LooseGraph, edge: &Edge, q: u64, budget: u128) -> Result<LocalityCheck> {
    let without = with.resolve_edge(&edge.a, &edge.b)?;
    let m_with = AmbientModel::build(with)?;
    let m_without = AmbientModel::build(&without)?;
    let w_with = window_set(&m_with, &edge.a, &edge.b)?;
    let w_without = window_set(&m_without, &edge.a, &edge.b)?;
    let full = |m: &AmbientModel| m.count_in_window_auto(CoordSet::full(m.dim()), q, budget);
    let global = full(&m_with)? as i128 - full(&m_without)? as i128;
    let local = m_with.count_in_window_auto(w_with, q, budget)? as i128
        - m_without.count_in_window_auto(w_without, q, budget)? as i128;
    Ok(LocalityCheck { q, global_difference: global, window_difference: local })
}

/// The graphs on which each surgery step re-attaches its edge, paired with the
/// edge, in re-attachment order.
pub fn surgery_steps(g: &LooseGraph, resolution_order: &[Edge]) -> Result<Vec<(LooseGraph, Edge)>> {
    let mut chain = vec![g.clone()];
    for e in resolution_order {
        let next = chain.last().expect("chain is never empty").resolve_edge(&e.a, &e.b)?;
        chain.push(next);
    }
    Ok(resolution_order.iter().enumerate().rev().map(|(i, e)| (chain[i].clone(), e.clone())).collect())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

fn for_each_permutation<T: Clone>(items: &mut Vec<T>, k: usize, visit: &mut impl FnMut(&[T])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, visit);
        items.swap(k, i);
    }
}
