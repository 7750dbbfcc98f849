//! Integer polynomials in the Lefschetz class `L`, the classes of loose-graph
//! schemes in the Grothendieck ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LooseGraph;

/// An exact integer polynomial in `L`. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ClassPolynomial {
    coeffs: BTreeMap<u32, i128>,
}

impl ClassPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i128) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * L^k`.
    pub fn monomial(c: i128, k: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (u32, i128)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs {
            p.add_term(k, c);
        }
        p
    }

    /// Coefficients listed from the constant term upwards.
    pub fn from_ascending(coeffs: &[i128]) -> Self {
        Self::from_coeffs(coeffs.iter().enumerate().map(|(k, &c)| (k as u32, c)))
    }

    fn add_term(&mut self, k: u32, c: i128) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert(0);
        *entry = entry.checked_add(c).expect("class coefficient overflow");
        if *entry == 0 {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: u32) -> i128 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, i128)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn checked_evaluate(&self, q: i128) -> Result<i128> {
        let overflow = || Error::Overflow(format!("evaluating {self} at {q}"));
        let mut acc: i128 = 0;
        for (k, c) in self.terms() {
            let power = q.checked_pow(k).ok_or_else(overflow)?;
            acc = c.checked_mul(power).and_then(|t| acc.checked_add(t)).ok_or_else(overflow)?;
        }
        Ok(acc)
    }

    /// Value at `L = q`; for a prime `q` this is the number of `F_q`-points of
    /// the lifted scheme.
    pub fn evaluate(&self, q: i128) -> i128 {
        self.checked_evaluate(q).unwrap_or_else(|e| panic!("{e}"))
    }

    /// LaTeX rendering, e.g. `\mathbb{L}^{2} + \mathbb{L} + 1`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (k, c)) in self.terms().rev().enumerate() {
            let m = c.unsigned_abs();
            if n == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            let coef = if m == 1 { String::new() } else { m.to_string() };
            match k {
                0 => out.push_str(&m.to_string()),
                1 => out.push_str(&format!("{coef}\\mathbb{{L}}")),
                k => out.push_str(&format!("{coef}\\mathbb{{L}}^{{{k}}}")),
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("class polynomial serializes")
    }
}

impl Add for &ClassPolynomial {
    type Output = ClassPolynomial;

    fn add(self, rhs: &ClassPolynomial) -> ClassPolynomial {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &ClassPolynomial {
    type Output = ClassPolynomial;

    fn sub(self, rhs: &ClassPolynomial) -> ClassPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &ClassPolynomial {
    type Output = ClassPolynomial;

    fn neg(self) -> ClassPolynomial {
        ClassPolynomial { coeffs: self.coeffs.iter().map(|(&k, &c)| (k, -c)).collect() }
    }
}

impl Mul for &ClassPolynomial {
    type Output = ClassPolynomial;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &ClassPolynomial) -> ClassPolynomial {
        let mut out = ClassPolynomial::zero();
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out.add_term(i + j, a.checked_mul(b).expect("class coefficient overflow"));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ClassPolynomial {
            type Output = ClassPolynomial;

            fn $m(self, rhs: ClassPolynomial) -> ClassPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ClassPolynomial {
    type Output = ClassPolynomial;

    fn neg(self) -> ClassPolynomial {
        -&self
    }
}

impl std::iter::Sum for ClassPolynomial {
    fn sum<I: Iterator<Item = ClassPolynomial>>(iter: I) -> Self {
        iter.fold(ClassPolynomial::zero(), |acc, p| &acc + &p)
    }
}

/// Human form, highest power first: `2*L^2 - L + 3`.
impl fmt::Display for ClassPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (k, c)) in self.terms().rev().enumerate() {
            let magnitude = c.unsigned_abs();
            if n == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            match (k, magnitude) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("L")?,
                (1, m) => write!(f, "{m}*L")?,
                (k, 1) => write!(f, "L^{k}")?,
                (k, m) => write!(f, "{m}*L^{k}")?,
            }
        }
        Ok(())
    }
}

/// JSON shape `{"coeffs": {"0": c0, "1": c1, ...}}`, keys in numeric order.
impl Serialize for ClassPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coeffs<'a>(&'a BTreeMap<u32, i128>);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (k, c) in self.0 {
                    map.serialize_entry(&k.to_string(), c)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("coeffs", &Coeffs(&self.coeffs))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for ClassPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coeffs: BTreeMap<String, i128>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut out = ClassPolynomial::zero();
        for (k, c) in raw.coeffs {
            let k: u32 = k.parse().map_err(|_| de::Error::custom(format!("bad exponent `{k}`")))?;
            out.add_term(k, c);
        }
        Ok(out)
    }
}

/// `[A^n] = L^n`.
pub fn affine_class(n: u32) -> ClassPolynomial {
    ClassPolynomial::monomial(1, n)
}

/// `[P^n] = 1 + L + ... + L^n`.
pub fn projective_class(n: u32) -> ClassPolynomial {
    ClassPolynomial::from_coeffs((0..=n).map(|k| (k, 1)))
}

/// `[G_m] = L - 1`.
pub fn gm_class() -> ClassPolynomial {
    ClassPolynomial::from_ascending(&[-1, 1])
}

/// Closed-form class of a connected loose tree: with `n_i` vertices of degree
/// `d_i > 1`, `E` vertices of degree one and `I = Σ n_i - 1`,
/// `Σ n_i L^{d_i} - I·L + I + E`. A lone vertex of degree zero has class 1.
pub fn tree_class(t: &LooseGraph) -> Result<ClassPolynomial> {
    t.check_loose_tree()?;
    let stats = TreeDegreeStats::of(t)?;
    if stats.isolated {
        return Ok(ClassPolynomial::one());
    }
    let mut p = ClassPolynomial::from_coeffs(stats.inner_by_degree.iter().map(|(&d, &n)| (d, n as i128)));
    let i = stats.inner_minus_one();
    p = &p + &ClassPolynomial::from_ascending(&[i + stats.ends as i128, -i]);
    Ok(p)
}

/// Degree statistics of a loose tree used by the closed forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDegreeStats {
    /// Number of vertices of each degree `d > 1`.
    pub inner_by_degree: BTreeMap<u32, u64>,
    /// Number of vertices of degree one.
    pub ends: u64,
    /// The tree is a single vertex without edges.
    pub isolated: bool,
}

impl TreeDegreeStats {
    pub fn of(t: &LooseGraph) -> Result<Self> {
        let mut inner_by_degree = BTreeMap::new();
        let mut ends = 0;
        let mut isolated = false;
        for v in t.vertices() {
            match t.degree(v)? {
                0 => isolated = true,
                1 => ends += 1,
                d => *inner_by_degree.entry(d as u32).or_insert(0) += 1,
            }
        }
        Ok(Self { inner_by_degree, ends, isolated })
    }

    /// `I = Σ n_i - 1`, which is `-1` when no vertex has degree above one.
    pub fn inner_minus_one(&self) -> i128 {
        self.inner_by_degree.values().sum::<u64>() as i128 - 1
    }
}

/// The unique polynomial of degree at most `degree_bound` through the first
/// `degree_bound + 1` samples; every further sample must lie on it too.
/// Samples are `(q, count)` pairs with distinct `q`.
pub fn interpolate_class(samples: &[(i128, i128)], degree_bound: usize) -> Result<ClassPolynomial> {
    let needed = degree_bound + 1;
    if samples.len() < needed {
        return Err(Error::InsufficientSamples { needed, got: samples.len() });
    }
    for (i, (q, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(r, _)| r == q) {
            return Err(Error::DuplicateSample(*q));
        }
    }
    let fit = &samples[..needed];
    let xs: Vec<BigRational> = fit.iter().map(|&(q, _)| BigRational::from_integer(BigInt::from(q))).collect();
    // Newton divided differences.
    let mut table: Vec<BigRational> = fit.iter().map(|&(_, c)| BigRational::from_integer(BigInt::from(c))).collect();
    for level in 1..needed {
        for i in (level..needed).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Expand the Newton form into monomial coefficients (Horner from the top).
    let mut poly: Vec<BigRational> = vec![BigRational::zero(); needed];
    for i in (0..needed).rev() {
        // poly = poly * (x - xs[i]) + table[i]
        let mut next = vec![BigRational::zero(); needed];
        for (k, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k + 1 < needed {
                next[k + 1] = &next[k + 1] + c;
            }
            next[k] = &next[k] - c * &xs[i];
        }
        next[0] = &next[0] + &table[i];
        poly = next;
    }
    let mut out = ClassPolynomial::zero();
    for (k, c) in poly.iter().enumerate() {
        if !c.denom().is_one() {
            return Err(Error::NonIntegral { exponent: k, value: c.to_string() });
        }
        let c = c.numer().to_i128().ok_or_else(|| Error::Overflow("interpolating".into()))?;
        out.add_term(k as u32, c);
    }
    for &(q, count) in samples {
        let predicted = out.checked_evaluate(q)?;
        if predicted != count {
            return Err(Error::Inconsistent { q, count, predicted });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_loose_graph;

    fn p(c: &[i128]) -> ClassPolynomial {
        ClassPolynomial::from_ascending(c)
    }

    #[test]
    fn ring_operations() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert_eq!(&affine_class(2) * &affine_class(3), affine_class(5));
        assert_eq!(&p(&[3, 0, 2]) + &ClassPolynomial::zero(), p(&[3, 0, 2]));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), ClassPolynomial::zero());
        assert!((&p(&[1, 2]) - &p(&[1, 2])).terms().next().is_none());
    }

    #[test]
    fn standard_classes() {
        assert_eq!(affine_class(0), ClassPolynomial::one());
        assert_eq!(projective_class(2), p(&[1, 1, 1]));
        assert_eq!(gm_class().evaluate(7), 6);
        for n in 1..=10 {
            assert_eq!(projective_class(n), &affine_class(n) + &projective_class(n - 1));
        }
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[2, 0, 1]).evaluate(2), 6);
        assert_eq!(gm_class().evaluate(1), 0);
        assert_eq!(projective_class(3).evaluate(2), 15);
        assert!(affine_class(200).checked_evaluate(2).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(projective_class(2).to_string(), "L^2 + L + 1");
        assert_eq!(p(&[2, 0, 1]).to_string(), "L^2 + 2");
        assert_eq!(gm_class().to_string(), "L - 1");
        assert_eq!(p(&[3, -1, 2]).to_string(), "2*L^2 - L + 3");
        assert_eq!(p(&[-1, 3, -2]).to_string(), "-2*L^2 + 3*L - 1");
        assert_eq!(ClassPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&p(&[3, -1, 2])).unwrap();
        assert_eq!(j, r#"{"coeffs":{"0":3,"1":-1,"2":2}}"#);
        let back: ClassPolynomial = serde_json::from_str(&j).unwrap();
        assert_eq!(back, p(&[3, -1, 2]));
        assert_eq!(serde_json::to_string(&ClassPolynomial::zero()).unwrap(), r#"{"coeffs":{}}"#);
    }

    #[test]
    fn tree_formula() {
        let path3 = parse_loose_graph("v a\nv b\nv c\ne a b\ne b c").unwrap();
        assert_eq!(tree_class(&path3).unwrap(), p(&[2, 0, 1]));
        let edge = parse_loose_graph("v a\nv b\ne a b").unwrap();
        assert_eq!(tree_class(&edge).unwrap(), projective_class(1));
        let path4 = parse_loose_graph("v a\nv b\nv c\nv d\ne a b\ne b c\ne c d").unwrap();
        assert_eq!(tree_class(&path4).unwrap(), p(&[3, -1, 2]));
        let half = parse_loose_graph("v a\nh a").unwrap();
        assert_eq!(tree_class(&half).unwrap(), affine_class(1));
        let lone = parse_loose_graph("v a").unwrap();
        assert_eq!(tree_class(&lone).unwrap(), ClassPolynomial::one());
        // triangle with `ac` resolved
        let resolved = parse_loose_graph("v a\nv b\nv c\ne a b\ne b c\nh a\nh c").unwrap();
        assert_eq!(tree_class(&resolved).unwrap(), p(&[2, -2, 3]));
    }

    #[test]
    fn tree_formula_rejects() {
        assert!(tree_class(&parse_loose_graph("f").unwrap()).is_err());
        assert!(tree_class(&parse_loose_graph("").unwrap()).is_err());
        assert!(tree_class(&parse_loose_graph("v a\nv b\nv c\ne a b\ne b c\ne a c").unwrap()).is_err());
        assert!(tree_class(&parse_loose_graph("v a\nv b").unwrap()).is_err());
    }

    #[test]
    fn interpolation() {
        assert_eq!(interpolate_class(&[(2, 1), (3, 2)], 1).unwrap(), gm_class());
        assert_eq!(interpolate_class(&[(2, 7), (3, 13), (5, 31)], 2).unwrap(), projective_class(2));
        assert_eq!(interpolate_class(&[(2, 6), (3, 11), (5, 27)], 2).unwrap(), p(&[2, 0, 1]));
        // held-out sample agrees
        assert_eq!(interpolate_class(&[(2, 6), (3, 11), (5, 27), (7, 51)], 2).unwrap(), p(&[2, 0, 1]));
    }

    #[test]
    fn interpolation_errors() {
        assert!(matches!(interpolate_class(&[(2, 1)], 1), Err(Error::InsufficientSamples { needed: 2, got: 1 })));
        assert!(matches!(interpolate_class(&[(2, 1), (2, 1)], 1), Err(Error::DuplicateSample(2))));
        // 0, 1, 0 at 2, 3, 5 gives a parabola with a fractional coefficient
        assert!(matches!(interpolate_class(&[(2, 0), (3, 1), (5, 0)], 2), Err(Error::NonIntegral { .. })));
        assert!(matches!(
            interpolate_class(&[(2, 6), (3, 11), (5, 27), (7, 50)], 2),
            Err(Error::Inconsistent { q: 7, .. })
        ));
    }
}
