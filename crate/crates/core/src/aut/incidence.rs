//! The point-line geometry of the member points and its incidence-preserving
//! permutations.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ambient::AmbientModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineKind {
    /// All `q + 1` points of the line are members.
    Projective,
    /// Exactly `q` points are members.
    CompleteAffine,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Line {
    pub kind: LineKind,
    /// Indices into the point list, increasing.
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceGeometry {
    pub q: u32,
    pub points: Vec<Vec<u32>>,
    pub lines: Vec<Line>,
}

pub fn incidence_geometry(model: &AmbientModel, q: u64, budget: u128) -> Result<IncidenceGeometry> {
    let points: Vec<Vec<u32>> = model.points(q, budget)?.iter().map(|p| p.coords().to_vec()).collect();
    let pairs = (points.len() as u128) * (points.len() as u128) / 2 * (q as u128 + 1);
    if pairs > budget {
        return Err(Error::BudgetExceeded { what: "line enumeration".into(), required: pairs, budget });
    }
    let index: BTreeMap<&[u32], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let q32 = q as u32;
    let mut lines: BTreeSet<Line> = BTreeSet::new();
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if covered.contains(&(i, j)) {
                continue;
            }
            // points of the line: p_j and p_i + t p_j
            let mut on_line = vec![j];
            for t in 0..q32 {
                let mut v: Vec<u32> = points[i].iter().zip(&points[j]).map(|(&a, &b)| (a + t * b) % q32).collect();
                crate::ambient::normalize_coords(&mut v, q32);
                if let Some(&k) = index.get(v.as_slice()) {
                    on_line.push(k);
                }
            }
            on_line.sort_unstable();
            for (a, &x) in on_line.iter().enumerate() {
                for &y in &on_line[a + 1..] {
                    covered.insert((x, y));
                }
            }
            let kind = match on_line.len() as u32 {
                k if k == q32 + 1 => LineKind::Projective,
                k if k == q32 => LineKind::CompleteAffine,
                _ => continue,
            };
            lines.insert(Line { kind, points: on_line });
        }
    }
    Ok(IncidenceGeometry { q: q32, points, lines: lines.into_iter().collect() })
}

impl IncidenceGeometry {
    /// For each pair of points, the line through both, if it is a line of the geometry.
    fn line_table(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.points.len();
        let mut table = vec![vec![None; n]; n];
        for (l, line) in self.lines.iter().enumerate() {
            for &a in &line.points {
                for &b in &line.points {
                    if a != b {
                        table[a][b] = Some(l);
                    }
                }
            }
        }
        table
    }

    /// Whether a permutation of the points maps lines onto lines.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.points.len() || perm.iter().collect::<BTreeSet<_>>().len() != perm.len() {
            return false;
        }
        let lines: BTreeSet<&[usize]> = self.lines.iter().map(|l| l.points.as_slice()).collect();
        self.lines.iter().all(|l| {
            let mut img: Vec<usize> = l.points.iter().map(|&p| perm[p]).collect();
            img.sort_unstable();
            lines.contains(img.as_slice())
        })
    }
}

/// Order of the group of incidence-preserving point permutations.
pub fn comb_aut_order(geom: &IncidenceGeometry, budget: u128) -> Result<u128> {
    let n = geom.points.len();
    let table = geom.line_table();
    // refinement invariant: sizes of the lines through each point
    let invariant: Vec<Vec<usize>> = (0..n)
        .map(|p| {
            let mut sizes: Vec<usize> =
                geom.lines.iter().filter(|l| l.points.contains(&p)).map(|l| l.points.len()).collect();
            sizes.sort_unstable();
            sizes
        })
        .collect();
    let mut search = Backtrack {
        geom,
        table,
        invariant,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
        budget,
        count: 0,
    };
    search.run(0)?;
    Ok(search.count)
}

struct Backtrack<'a> {
    geom: &'a IncidenceGeometry,
    table: Vec<Vec<Option<usize>>>,
    invariant: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: Vec<bool>,
    nodes: u128,
    budget: u128,
    count: u128,
}

impl Backtrack<'_> {
    fn consistent(&self, p: usize) -> bool {
        let ip = self.image[p];
        for a in 0..p {
            let ia = self.image[a];
            let (l, il) = (self.table[p][a], self.table[ip][ia]);
            match (l, il) {
                (None, None) => {}
                (Some(l), Some(il)) => {
                    if self.geom.lines[l].points.len() != self.geom.lines[il].points.len() {
                        return false;
                    }
                    for b in 0..a {
                        let on = self.geom.lines[l].points.contains(&b);
                        let ion = self.geom.lines[il].points.contains(&self.image[b]);
                        if on != ion {
                            return false;
                        }
                    }
                }
                _ => return false,
            }
        }
        true
    }

    fn run(&mut self, p: usize) -> Result<()> {
        let n = self.image.len();
        if p == n {
            self.count += 1;
            return Ok(());
        }
        for c in 0..n {
            if self.used[c] || self.invariant[c] != self.invariant[p] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "incidence automorphism search".into(),
                    required: self.nodes,
                    budget: self.budget,
                });
            }
            self.image[p] = c;
            if self.consistent(p) {
                self.used[c] = true;
                self.run(p + 1)?;
                self.used[c] = false;
            }
            self.image[p] = usize::MAX;
        }
        Ok(())
    }
}
