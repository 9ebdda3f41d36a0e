use crate::combinatorics::rising_pochhammer;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ModelKind {
    Ball { d: u32 },
    RankOne { r: u32, s: u32 },
    SubHardy { r: u32, s: u32 },
}

impl ModelKind {
    /// Sizes of the sphere factors carrying the basis monomials.
    pub fn factors(&self) -> Vec<usize> {
        match *self {
            ModelKind::Ball { d } => vec![d as usize],
            ModelKind::RankOne { r, s } | ModelKind::SubHardy { r, s } => vec![r as usize, s as usize],
        }
    }

    /// Number of model coordinates, i.e. the variable count of model symbols.
    pub fn nvars(&self) -> usize {
        self.factors().iter().sum()
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Ball { d } => write!(f, "ball:{d}"),
            ModelKind::RankOne { r, s } => write!(f, "rank-one:{r}:{s}"),
            ModelKind::SubHardy { r, s } => write!(f, "sub-hardy:{r}:{s}"),
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = crate::Error;

    /// Parses `ball:d`, `rank-one:r:s` or `sub-hardy:r:s`.
    fn from_str(s: &str) -> crate::Result<Self> {
        let bad = || crate::Error::InvalidParameters(format!("cannot parse model '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| parts.get(i).and_then(|p| p.parse::<u32>().ok()).ok_or_else(bad);
        let kind = match (parts[0], parts.len()) {
            ("ball", 2) => ModelKind::Ball { d: num(1)? },
            ("rank-one", 3) => ModelKind::RankOne { r: num(1)?, s: num(2)? },
            ("sub-hardy", 3) => ModelKind::SubHardy { r: num(1)?, s: num(2)? },
            _ => return Err(bad()),
        };
        match kind {
            ModelKind::Ball { d: 0 } => Err(bad()),
            ModelKind::RankOne { r, s } | ModelKind::SubHardy { r, s } if r == 0 || r > s => Err(bad()),
            k => Ok(k),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub degree: u32,
    /// Exponents over the model coordinates.
    pub label: Vec<u32>,
    pub norm_sq: BigRational,
}

#[derive(Clone, Debug)]
pub struct GradedBasis {
    kind: ModelKind,
    truncation: u32,
    elements: Vec<BasisElement>,
    index: HashMap<Vec<u32>, usize>,
    level_start: Vec<usize>,
    fact: Vec<BigInt>,
}

/// All `k`-tuples of nonnegative integers summing to `m`, lexicographically descending.
pub fn compositions(k: usize, m: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, m: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            cur.push(m);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=m).rev() {
            cur.push(first);
            rec(k - 1, m - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(k, m, &mut Vec::new(), &mut out);
    out
}

fn factorial_u(n: u64) -> BigRational {
    rising_pochhammer(&BigRational::one(), n)
}

/// `int_{S^{2k-1}} |xi^a|^2 = a! (k-1)! / (|a| + k - 1)!`.
pub fn sphere_monomial_norm_sq(a: &[u32]) -> BigRational {
    let k = a.len() as u64;
    let total: u64 = a.iter().map(|&x| x as u64).sum();
    let num = a.iter().fold(factorial_u(k - 1), |acc, &x| acc * factorial_u(x as u64));
    num / factorial_u(total + k - 1)
}

impl GradedBasis {
    pub(crate) fn build(kind: ModelKind, truncation: u32, weight: impl Fn(u32) -> BigRational) -> Self {
        let factors = kind.factors();
        let fact = factorial_table(truncation as usize + 2 * kind.nvars() + 32);
        let mut elements = Vec::new();
        let mut level_start = Vec::with_capacity(truncation as usize + 2);
        for m in 0..=truncation {
            level_start.push(elements.len());
            let w = weight(m);
            let per_factor: Vec<Vec<Vec<u32>>> = factors.iter().map(|&k| compositions(k, m)).collect();
            let mut labels: Vec<Vec<u32>> = vec![Vec::new()];
            for options in &per_factor {
                labels = labels
                    .iter()
                    .flat_map(|l| {
                        options.iter().map(move |o| {
                            let mut v = l.clone();
                            v.extend_from_slice(o);
                            v
                        })
                    })
                    .collect();
            }
            for label in labels {
                let norm_sq = &w * monomial_norm_sq(&factors, &label, &fact);
                elements.push(BasisElement { degree: m, label, norm_sq });
            }
        }
        level_start.push(elements.len());
        let index = elements.iter().enumerate().map(|(i, e)| (e.label.clone(), i)).collect();
        GradedBasis { kind, truncation, elements, index, level_start, fact }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &BasisElement {
        &self.elements[i]
    }

    pub fn position(&self, label: &[u32]) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Index range of level `m`; empty beyond the truncation.
    pub fn level(&self, m: u32) -> Range<usize> {
        if m > self.truncation {
            return self.len()..self.len();
        }
        self.level_start[m as usize]..self.level_start[m as usize + 1]
    }

    pub fn level_dimension(&self, m: u32) -> usize {
        self.level(m).len()
    }

    /// Number of basis elements of degree at most `v`.
    pub fn count_up_to(&self, v: i64) -> usize {
        if v < 0 {
            0
        } else if v >= self.truncation as i64 {
            self.len()
        } else {
            self.level_start[v as usize + 1]
        }
    }

    /// Unweighted product-of-spheres norm of an arbitrary exponent vector.
    pub fn sphere_norm_sq(&self, label: &[u32]) -> BigRational {
        monomial_norm_sq(&self.kind.factors(), label, &self.fact)
    }
}

fn monomial_norm_sq(factors: &[usize], label: &[u32], fact: &[BigInt]) -> BigRational {
    let f = |n: u64| -> BigInt {
        fact.get(n as usize).cloned().unwrap_or_else(|| factorial_u(n).to_integer())
    };
    let mut off = 0;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for &k in factors {
        let a = &label[off..off + k];
        let total: u64 = a.iter().map(|&x| x as u64).sum();
        num *= a.iter().fold(f(k as u64 - 1), |acc, &x| acc * f(x as u64));
        den *= f(total + k as u64 - 1);
        off += k;
    }
    BigRational::new(num, den)
}

fn factorial_table(n: usize) -> Vec<BigInt> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(BigInt::one());
    for i in 1..=n {
        let next = &t[i - 1] * BigInt::from(i);
        t.push(next);
    }
    t
}
