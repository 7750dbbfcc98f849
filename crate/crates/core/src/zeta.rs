//! Zeta functions attached to class polynomials.
//!
//! A class `P = Σ a_k L^k` gives the F1-zeta function `∏ (t - k)^(-a_k)` and
//! the arithmetic zeta function `∏ ζ(s - k)^(a_k)`. Both are stored as a list
//! of `(shift, exponent)` factors and rendered symbolically.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::class::{ClassPolynomial, TreeDegreeStats};
use crate::error::Result;
use crate::graph::LooseGraph;

/// Factors `(shift, exponent)`: shifts strictly increasing, no zero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZetaDescriptor {
    pub factors: Vec<(u32, i128)>,
}

impl ZetaDescriptor {
    pub fn from_exponents(exps: impl IntoIterator<Item = (u32, i128)>) -> Self {
        let mut acc: BTreeMap<u32, i128> = BTreeMap::new();
        for (k, e) in exps {
            *acc.entry(k).or_insert(0) += e;
        }
        ZetaDescriptor { factors: acc.into_iter().filter(|&(_, e)| e != 0).collect() }
    }

    pub fn exponent(&self, shift: u32) -> i128 {
        self.factors.iter().find(|(k, _)| *k == shift).map_or(0, |&(_, e)| e)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Class polynomial of an F1-zeta descriptor (inverse of [`f1_zeta`]).
    pub fn f1_class(&self) -> ClassPolynomial {
        ClassPolynomial::from_coeffs(self.factors.iter().map(|&(k, e)| (k, -e)))
    }

    /// Product form `t^(-2) (t - 2)^(-1)`.
    pub fn render_product(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|&(k, e)| {
                let base = if k == 0 { "t".to_string() } else { format!("(t - {k})") };
                format!("{base}^({e})")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Fraction form `(t-1)/(t^3 (t-2)^2)`.
    pub fn render_fraction(&self) -> String {
        let num: Vec<(u32, i128)> = self.factors.iter().filter(|f| f.1 > 0).copied().collect();
        let den: Vec<(u32, i128)> = self.factors.iter().filter(|f| f.1 < 0).map(|&(k, e)| (k, -e)).collect();
        let numerator = if num.is_empty() { "1".to_string() } else { t_product(&num) };
        match den.len() {
            0 => numerator,
            1 => format!("{numerator}/{}", t_product(&den)),
            _ => format!("{numerator}/({})", t_product(&den)),
        }
    }

    pub fn render_latex(&self) -> String {
        let part = |fs: Vec<(u32, i128)>| -> String {
            if fs.is_empty() {
                return "1".into();
            }
            fs.iter()
                .map(|&(k, e)| {
                    let base = if k == 0 { "t".to_string() } else { format!("(t-{k})") };
                    if e == 1 {
                        base
                    } else {
                        format!("{base}^{{{e}}}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let num = part(self.factors.iter().filter(|f| f.1 > 0).copied().collect());
        let den: Vec<(u32, i128)> = self.factors.iter().filter(|f| f.1 < 0).map(|&(k, e)| (k, -e)).collect();
        if den.is_empty() {
            num
        } else {
            format!("\\frac{{{num}}}{{{}}}", part(den))
        }
    }

    /// Riemann-zeta notation for arithmetic descriptors: `ζ(s-1)/ζ(s)`.
    pub fn render_riemann(&self) -> String {
        let z = |fs: &[(u32, i128)]| -> String {
            let mut out = String::new();
            for &(k, e) in fs {
                if k == 0 {
                    out.push_str("ζ(s)");
                } else {
                    let _ = write!(out, "ζ(s-{k})");
                }
                if e != 1 {
                    let _ = write!(out, "^{e}");
                }
            }
            out
        };
        let num: Vec<(u32, i128)> = self.factors.iter().filter(|f| f.1 > 0).copied().collect();
        let den: Vec<(u32, i128)> = self.factors.iter().filter(|f| f.1 < 0).map(|&(k, e)| (k, -e)).collect();
        let numerator = if num.is_empty() { "1".to_string() } else { z(&num) };
        match den.len() {
            0 => numerator,
            1 => format!("{numerator}/{}", z(&den)),
            _ => format!("{numerator}/({})", z(&den)),
        }
    }
}

fn t_product(fs: &[(u32, i128)]) -> String {
    let mut out = String::new();
    let mut prev_had_power = false;
    for &(k, e) in fs {
        if prev_had_power {
            out.push(' ');
        }
        if k == 0 {
            out.push('t');
        } else {
            let _ = write!(out, "(t-{k})");
        }
        if e != 1 {
            let _ = write!(out, "^{e}");
        }
        prev_had_power = e != 1;
    }
    out
}

/// `∏ (t - k)^(-a_k)` for `P = Σ a_k L^k`.
pub fn f1_zeta(p: &ClassPolynomial) -> ZetaDescriptor {
    ZetaDescriptor::from_exponents(p.terms().map(|(k, a)| (k, -a)))
}

/// `∏ ζ(s - k)^(a_k)` for `P = Σ a_k L^k`.
pub fn arithmetic_zeta(p: &ClassPolynomial) -> ZetaDescriptor {
    ZetaDescriptor::from_exponents(p.terms())
}

/// Closed form for a loose tree: `(t-1)^I / t^(E+I) · ∏ (t-d)^(-n_d)`.
pub fn tree_zeta(t: &LooseGraph) -> Result<ZetaDescriptor> {
    t.check_loose_tree()?;
    let stats = TreeDegreeStats::of(t)?;
    if stats.isolated {
        return Ok(ZetaDescriptor::from_exponents([(0, -1)]));
    }
    let i = stats.inner_minus_one();
    let e = stats.ends as i128;
    let mut exps = vec![(0u32, -(e + i)), (1u32, i)];
    exps.extend(stats.inner_by_degree.iter().map(|(&d, &n)| (d, -(n as i128))));
    Ok(ZetaDescriptor::from_exponents(exps))
}
