//! Polynomials in `z` and `conj(z)` with exact Gaussian-rational coefficients.

use crate::to_f64;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Coeff = Complex<BigRational>;

pub fn coeff_re(x: BigRational) -> Coeff {
    Complex::new(x, BigRational::zero())
}

pub fn coeff_int(re: i64, im: i64) -> Coeff {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

pub fn coeff_to_c64(c: &Coeff) -> Complex64 {
    Complex64::new(to_f64(&c.re), to_f64(&c.im))
}

/// `|c|^2` as an exact rational.
pub fn coeff_norm_sq(c: &Coeff) -> BigRational {
    &c.re * &c.re + &c.im * &c.im
}

/// Exponent pair `(alpha, beta)` of `z^alpha conj(z)^beta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub z: Vec<u32>,
    pub zbar: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { z: vec![0; nvars], zbar: vec![0; nvars] }
    }

    pub fn holo_degree(&self) -> u32 {
        self.z.iter().sum()
    }

    pub fn anti_degree(&self) -> u32 {
        self.zbar.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            zbar: self.zbar.iter().zip(&other.zbar).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl SymbolPolynomial {
    pub fn zero(nvars: usize) -> Self {
        SymbolPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coeff::one())
    }

    /// The coordinate `z_k`.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.z[k] = 1;
        Self::from_terms(nvars, [(m, Coeff::one())])
    }

    /// The conjugate coordinate `conj(z_k)`.
    pub fn conj_var(nvars: usize, k: usize) -> Self {
        Self::var(nvars, k).conj()
    }

    pub fn monomial(nvars: usize, z: Vec<u32>, zbar: Vec<u32>, c: Coeff) -> Self {
        assert!(z.len() == nvars && zbar.len() == nvars, "exponent length mismatch");
        Self::from_terms(nvars, [(Monomial { z, zbar }, c)])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        assert!(m.z.len() == self.nvars && m.zbar.len() == self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| {
                (Monomial { z: m.zbar.clone(), zbar: m.z.clone() }, c.conj())
            }),
        )
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.anti_degree() == 0)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Largest `|alpha| + |beta|` over the terms; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.holo_degree() + m.anti_degree()).max().unwrap_or(0)
    }

    pub fn holo_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::holo_degree).max().unwrap_or(0)
    }

    pub fn anti_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::anti_degree).max().unwrap_or(0)
    }

    /// `d/dz_k`.
    pub fn d_z(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.z[k] > 0 {
                let mut m2 = m.clone();
                m2.z[k] -= 1;
                out.add_term(m2, c * coeff_int(m.z[k] as i64, 0));
            }
        }
        out
    }

    /// `d/dconj(z_k)`.
    pub fn d_zbar(&self, k: usize) -> Self {
        self.conj().d_z(k).conj()
    }

    /// Replace `z_k` by `images[k]` and `conj(z_k)` by `conj(images[k])`.
    pub fn substitute(&self, images: &[SymbolPolynomial]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let conj_images: Vec<SymbolPolynomial> = images.iter().map(|p| p.conj()).collect();
        let mut pow_cache: BTreeMap<(bool, usize, u32), SymbolPolynomial> = BTreeMap::new();
        let mut power = |anti: bool, k: usize, e: u32| -> SymbolPolynomial {
            pow_cache
                .entry((anti, k, e))
                .or_insert_with(|| if anti { conj_images[k].pow(e) } else { images[k].pow(e) })
                .clone()
        };
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for k in 0..self.nvars {
                if m.z[k] > 0 {
                    t = &t * &power(false, k, m.z[k]);
                }
                if m.zbar[k] > 0 {
                    t = &t * &power(true, k, m.zbar[k]);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Pull back a symbol on `r x s` matrices (row-major `z_ij`) along
    /// `z_ij = xi1_i xi2_j`, giving a symbol in `r + s` variables.
    pub fn pullback_rank_one(&self, r: usize, s: usize) -> Self {
        assert_eq!(self.nvars, r * s, "expected an r x s matrix symbol");
        let n = r + s;
        let images: Vec<SymbolPolynomial> = (0..r)
            .flat_map(|i| (0..s).map(move |j| (i, j)))
            .map(|(i, j)| &Self::var(n, i) * &Self::var(n, r + j))
            .collect();
        self.substitute(&images)
    }

    /// Embed into a larger variable set, placing variable `k` at `offset + k`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        assert!(offset + self.nvars <= nvars);
        Self::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut z = vec![0; nvars];
                let mut zbar = vec![0; nvars];
                z[offset..offset + self.nvars].copy_from_slice(&m.z);
                zbar[offset..offset + self.nvars].copy_from_slice(&m.zbar);
                (Monomial { z, zbar }, c.clone())
            }),
        )
    }

    pub fn compile(&self) -> CompiledSymbol {
        CompiledSymbol {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let sparse = |e: &[u32]| -> Vec<(usize, u32)> {
                        e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, x)).collect()
                    };
                    (sparse(&m.z), sparse(&m.zbar), coeff_to_c64(c))
                })
                .collect(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.compile().eval(z)
    }

    /// Parse the JSON term-list form
    /// `[{"coeff": "1/2" | 3 | ["re", "im"], "z": [..], "zbar": [..]}, ...]`.
    ///
    /// Errors carry a JSON pointer relative to `value`.
    pub fn from_json(value: &serde_json::Value, nvars: usize) -> Result<Self, ParseError> {
        let arr = value.as_array().ok_or_else(|| ParseError::at("", "expected an array of terms"))?;
        let mut p = Self::zero(nvars);
        for (i, t) in arr.iter().enumerate() {
            let obj = t.as_object().ok_or_else(|| ParseError::at(&format!("/{i}"), "expected an object"))?;
            let c = match obj.get("coeff") {
                None => Coeff::one(),
                Some(v) => parse_coeff(v).map_err(|m| ParseError::at(&format!("/{i}/coeff"), &m))?,
            };
            let exps = |key: &str| -> Result<Vec<u32>, ParseError> {
                let ptr = format!("/{i}/{key}");
                match obj.get(key) {
                    None => Ok(vec![0; nvars]),
                    Some(v) => {
                        let a = v.as_array().ok_or_else(|| ParseError::at(&ptr, "expected an array"))?;
                        if a.len() != nvars {
                            return Err(ParseError::at(
                                &ptr,
                                &format!("expected {nvars} exponents, got {}", a.len()),
                            ));
                        }
                        a.iter()
                            .enumerate()
                            .map(|(j, e)| {
                                e.as_u64()
                                    .map(|x| x as u32)
                                    .ok_or_else(|| ParseError::at(&format!("{ptr}/{j}"), "expected a nonnegative integer"))
                            })
                            .collect()
                    }
                }
            };
            p.add_term(Monomial { z: exps("z")?, zbar: exps("zbar")? }, c);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    serde_json::json!({
                        "coeff": [c.re.to_string(), c.im.to_string()],
                        "z": m.z,
                        "zbar": m.zbar,
                    })
                })
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pointer: String,
    pub message: String,
}

impl ParseError {
    fn at(pointer: &str, message: &str) -> Self {
        ParseError { pointer: pointer.to_string(), message: message.to_string() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", if self.pointer.is_empty() { "/" } else { &self.pointer }, self.message)
    }
}

impl std::error::Error for ParseError {}

fn parse_rational(v: &serde_json::Value) -> Result<BigRational, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                let f = n.as_f64().ok_or("unrepresentable number")?;
                BigRational::from_float(f).ok_or_else(|| "non-finite number".to_string())
            }
        }
        serde_json::Value::String(s) => {
            s.trim().parse::<BigRational>().map_err(|_| format!("cannot parse rational '{s}'"))
        }
        _ => Err("expected a number or a rational string".into()),
    }
}

fn parse_coeff(v: &serde_json::Value) -> Result<Coeff, String> {
    match v {
        serde_json::Value::Array(a) if a.len() == 2 => {
            Ok(Complex::new(parse_rational(&a[0])?, parse_rational(&a[1])?))
        }
        serde_json::Value::Array(_) => Err("complex coefficients are [re, im]".into()),
        other => Ok(coeff_re(parse_rational(other)?)),
    }
}

impl fmt::Display for SymbolPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({} + {}i)", c.re, c.im)?;
            for (k, &e) in m.z.iter().enumerate().filter(|(_, &e)| e > 0) {
                write!(f, " z{k}^{e}")?;
            }
            for (k, &e) in m.zbar.iter().enumerate().filter(|(_, &e)| e > 0) {
                write!(f, " zb{k}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Add for &SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn add(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn sub(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn neg(self) -> SymbolPolynomial {
        self.scale(&-Coeff::one())
    }
}

impl Mul for &SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn mul(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = SymbolPolynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// Sparse `(variable, exponent)` list of one monomial factor.
type SparseExponents = Vec<(usize, u32)>;

/// Floating point evaluator for repeated use.
#[derive(Clone, Debug)]
pub struct CompiledSymbol {
    nvars: usize,
    terms: Vec<(SparseExponents, SparseExponents, Complex64)>,
}

fn ipow(x: Complex64, e: u32) -> Complex64 {
    (0..e).fold(Complex64::new(1.0, 0.0), |acc, _| acc * x)
}

impl CompiledSymbol {
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.nvars, "point dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (holo, anti, c) in &self.terms {
            let mut t = *c;
            for &(k, e) in holo {
                t *= ipow(z[k], e);
            }
            for &(k, e) in anti {
                t *= ipow(z[k].conj(), e);
            }
            acc += t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn algebra_and_conjugation() {
        let z0 = SymbolPolynomial::var(2, 0);
        let z1 = SymbolPolynomial::var(2, 1);
        let f = &(&z0 + &z1) * &z0.conj();
        assert_eq!(f.num_terms(), 2);
        assert!(!f.is_holomorphic());
        let g = &f * &f.conj();
        assert!(g.is_real());
        assert_eq!(g.degree(), 4);
        let p = Complex64::new(0.3, -0.2);
        let q = Complex64::new(-0.1, 0.7);
        let v = f.eval(&[p, q]);
        let want = (p + q) * p.conj();
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn derivatives() {
        let z0 = SymbolPolynomial::var(1, 0);
        let f = &z0.pow(3) * &z0.conj().pow(2);
        let dz = f.d_z(0);
        let dzb = f.d_zbar(0);
        assert_eq!(dz, (&z0.pow(2) * &z0.conj().pow(2)).scale(&coeff_int(3, 0)));
        assert_eq!(dzb, (&z0.pow(3) * &z0.conj()).scale(&coeff_int(2, 0)));
    }

    #[test]
    fn rank_one_pullback_of_determinant() {
        let z = |k| SymbolPolynomial::var(4, k);
        let det = &(&z(0) * &z(3)) - &(&z(1) * &z(2));
        assert!(det.pullback_rank_one(2, 2).is_zero());
        let p = z(1).pullback_rank_one(2, 2);
        assert_eq!(p, &SymbolPolynomial::var(4, 0) * &SymbolPolynomial::var(4, 3));
    }

    #[test]
    fn json_round_trip() {
        let v = serde_json::json!([
            {"coeff": "1/2", "z": [1, 0], "zbar": [0, 1]},
            {"coeff": ["0", "-3"], "z": [0, 2]}
        ]);
        let p = SymbolPolynomial::from_json(&v, 2).unwrap();
        assert_eq!(p.num_terms(), 2);
        let m = Monomial { z: vec![1, 0], zbar: vec![0, 1] };
        assert_eq!(p.coefficient(&m), coeff_re(rat(1, 2)));
        let back = SymbolPolynomial::from_json(&p.to_json(), 2).unwrap();
        assert_eq!(back, p);
        let err = SymbolPolynomial::from_json(&serde_json::json!([{"z": [1]}]), 2).unwrap_err();
        assert_eq!(err.pointer, "/0/z");
    }
}
