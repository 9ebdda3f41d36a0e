//! Partitions and exact Pochhammer symbols.

use crate::error::{Error, Result};
use crate::rat;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// A partition `lambda_1 >= lambda_2 >= ... > 0`, stored without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Accepts a weakly decreasing sequence; trailing zeros are dropped.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `lambda_i` with 1-based index; zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        assert!(i >= 1, "parts are 1-indexed");
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    /// Parts padded with zeros to length `r`.
    pub fn padded(&self, r: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(r.max(v.len()), 0);
        v
    }

    /// `lambda - k_l`, subtracting `k` from each of the first `l` parts.
    pub fn subtract_block(&self, l: usize, k: u32) -> Result<Partition> {
        let mut v = self.padded(l);
        for p in v.iter_mut().take(l) {
            *p = p.checked_sub(k).ok_or_else(|| {
                Error::Precondition(format!("{self} - {k}_{l} has a negative part"))
            })?;
        }
        Partition::new(v)
    }

    /// The block partition `k_l = (k, ..., k)` with `l` parts.
    pub fn block(k: u32, l: usize) -> Partition {
        Partition::new(vec![k; l]).expect("constant sequence")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `m` with at most `r` parts, in descending lexicographic order.
pub fn enumerate_partitions(r: usize, m: u32) -> Vec<Partition> {
    fn rec(left: u32, max: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, r, &mut Vec::new(), &mut out);
    out
}

/// Rising factorial `(x)_m = x (x+1) ... (x+m-1)`.
pub fn rising_pochhammer(x: &BigRational, m: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut t = x.clone();
    for _ in 0..m {
        acc *= &t;
        t += BigRational::one();
    }
    acc
}

/// Falling factorial `x^{*}_j = x (x-1) ... (x-j+1)`.
pub fn falling_pochhammer(x: &BigRational, j: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut t = x.clone();
    for _ in 0..j {
        acc *= &t;
        t -= BigRational::one();
    }
    acc
}

/// Generalized Pochhammer symbol `(s)_lambda = prod_i (s - (a/2)(i-1))_{lambda_i}`.
pub fn multivariate_pochhammer(s: &BigRational, lambda: &Partition, a: u32) -> BigRational {
    let half_a = rat(a as i64, 2);
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| rising_pochhammer(&(s - &half_a * rat(i as i64, 1)), p as u64))
        .fold(BigRational::one(), |acc, t| acc * t)
}

/// `(x)_p / (x)_q`. Works for `p < q` too, as long as no factor vanishes.
pub fn pochhammer_quotient(x: &BigRational, p: u64, q: u64) -> Result<BigRational> {
    if p >= q {
        Ok(rising_pochhammer(&(x + rat(q as i64, 1)), p - q))
    } else {
        let den = rising_pochhammer(&(x + rat(p as i64, 1)), q - p);
        if den.is_zero() {
            return Err(Error::Precondition("division by a vanishing Pochhammer symbol".into()));
        }
        Ok(den.recip())
    }
}

/// `n!` as an exact integer rational.
pub fn factorial(n: u64) -> BigRational {
    rising_pochhammer(&BigRational::one(), n)
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u64, k: u64) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    falling_pochhammer(&rat(n as i64, 1), k) / factorial(k)
}
