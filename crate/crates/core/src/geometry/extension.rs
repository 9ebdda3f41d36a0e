use super::frame::{BoundaryKind, BoundaryPoint};
use crate::combinatorics::rising_pochhammer;
use crate::error::{Error, Result};
use crate::symbol::{coeff_int, coeff_re, SymbolPolynomial};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use std::collections::HashMap;

/// Restriction of an ambient symbol to `S1` in boundary coordinates.
pub fn to_boundary(f: &SymbolPolynomial, kind: BoundaryKind) -> Result<SymbolPolynomial> {
    if f.nvars() != kind.ambient_nvars() {
        return Err(Error::SymbolDomain(format!("expected {} ambient variables", kind.ambient_nvars())));
    }
    Ok(match kind {
        BoundaryKind::Ball { .. } => f.clone(),
        BoundaryKind::TypeI { r, s } => f.pullback_rank_one(r as usize, s as usize),
    })
}

/// Poisson extension `f^(c) = int_{S_c} conj(p(c + t)) q(c + t) dt` of an
/// ambient symbol (linear in the terms `conj(z^B) z^A`), as a boundary symbol.
///
/// For `2 x s` matrices, `S_c` is the unit sphere of `eta1 w^T` with
/// `eta1 = (-conj xi1_2, conj xi1_1)` and `w` orthogonal to `xi2`. Its moments
/// are `E[w_I conj(w_J)] = perm(Pi[I, J]) / (s - 1)_k`, `Pi = 1 - xi2 xi2^*`.
pub fn poisson_extension_symbol(f: &SymbolPolynomial, kind: BoundaryKind) -> Result<SymbolPolynomial> {
    let (r, s) = match kind {
        BoundaryKind::Ball { .. } | BoundaryKind::TypeI { r: 1, .. } => return to_boundary(f, kind),
        BoundaryKind::TypeI { r: 2, s } => (2usize, s as usize),
        BoundaryKind::TypeI { r, .. } => {
            return Err(Error::UnsupportedFamily(format!("Poisson extension needs Peirce 0-rank <= 1, got {}", r - 1)))
        }
    };
    if f.nvars() != r * s {
        return Err(Error::SymbolDomain(format!("expected {} ambient variables", r * s)));
    }
    let nb = r + s;
    let na = nb + s;
    let eta = [SymbolPolynomial::conj_var(na, 1).scale(&coeff_int(-1, 0)), SymbolPolynomial::conj_var(na, 0)];
    let images: Vec<SymbolPolynomial> = (0..r)
        .flat_map(|i| (0..s).map(move |j| (i, j)))
        .map(|(i, j)| {
            let base = &SymbolPolynomial::var(na, i) * &SymbolPolynomial::var(na, r + j);
            &base + &(&eta[i] * &SymbolPolynomial::var(na, nb + j))
        })
        .collect();
    let lifted = f.substitute(&images);

    let proj = |a: usize, b: usize| -> SymbolPolynomial {
        let mut p = (&SymbolPolynomial::var(nb, r + a) * &SymbolPolynomial::conj_var(nb, r + b)).scale(&coeff_int(-1, 0));
        if a == b {
            p = &p + &SymbolPolynomial::one(nb);
        }
        p
    };
    let mut cache: HashMap<(Vec<u32>, Vec<u32>), SymbolPolynomial> = HashMap::new();
    let mut out = SymbolPolynomial::zero(nb);
    for (m, c) in lifted.terms() {
        let gamma = m.z[nb..].to_vec();
        let delta = m.zbar[nb..].to_vec();
        let k: u32 = gamma.iter().sum();
        if k != delta.iter().sum::<u32>() {
            continue;
        }
        let moment = cache
            .entry((gamma.clone(), delta.clone()))
            .or_insert_with(|| {
                let rows = expand(&gamma);
                let cols = expand(&delta);
                let perm = permanent(&rows, &cols, &proj, nb);
                let den = rising_pochhammer(&BigRational::from_integer((s as i64 - 1).into()), k as u64);
                perm.scale(&coeff_re(BigRational::one() / den))
            })
            .clone();
        let xi = SymbolPolynomial::monomial(nb, m.z[..nb].to_vec(), m.zbar[..nb].to_vec(), c.clone());
        out = &out + &(&xi * &moment);
    }
    Ok(out)
}

fn expand(e: &[u32]) -> Vec<usize> {
    e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect()
}

fn permanent(
    rows: &[usize],
    cols: &[usize],
    entry: &impl Fn(usize, usize) -> SymbolPolynomial,
    nvars: usize,
) -> SymbolPolynomial {
    if rows.is_empty() {
        return SymbolPolynomial::one(nvars);
    }
    let mut total = SymbolPolynomial::zero(nvars);
    for (k, &c) in cols.iter().enumerate() {
        let mut rest = cols.to_vec();
        rest.remove(k);
        total = &total + &(&entry(rows[0], c) * &permanent(&rows[1..], &rest, entry, nvars));
    }
    total
}

/// `f^(c)` at a boundary point.
pub fn poisson_extension(f: &SymbolPolynomial, c: &BoundaryPoint) -> Result<Complex64> {
    Ok(poisson_extension_symbol(f, c.kind())?.eval(&c.coords()))
}
