//! Exact Haar integrals on `U(2)`, the Shilov boundary of `2 x 2` matrices.
//!
//! Writing `u = e^{i phi} [[a, b], [-conj(b), conj(a)]]` with `(a, b)` uniform
//! on `S^3` and `phi` uniform on the circle, every monomial integral reduces to
//! a sphere moment `int |a|^{2p} |b|^{2q} = p! q! / (p + q + 1)!`.

use super::basis::{GradedBasis, ModelKind};
use super::operator::TruncatedOperator;
use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};
use crate::rat;
use crate::symbol::{coeff_re, Coeff, Monomial, SymbolPolynomial};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use std::sync::Arc;

/// `int_{U(2)} u^alpha conj(u)^beta du`, exponents ordered `(11, 12, 21, 22)`.
pub fn u2_monomial_integral(alpha: &[u32], beta: &[u32]) -> BigRational {
    assert!(alpha.len() == 4 && beta.len() == 4);
    let (a, b) = (alpha, beta);
    let total_a: u32 = a.iter().sum();
    let total_b: u32 = b.iter().sum();
    // powers of a, conj(a), b, conj(b) after substituting the parametrization
    let pa = a[0] + b[3];
    let pa_bar = a[3] + b[0];
    let pb = a[1] + b[2];
    let pb_bar = a[2] + b[1];
    if total_a != total_b || pa != pa_bar || pb != pb_bar {
        return BigRational::zero();
    }
    let sign = if (a[2] + b[2]) % 2 == 0 { 1 } else { -1 };
    rat(sign, 1) * factorial(pa as u64) * factorial(pb as u64) / factorial((pa + pb + 1) as u64)
}

/// Haar integral of a symbol on `2 x 2` matrices.
pub fn u2_integral(f: &SymbolPolynomial) -> Coeff {
    assert_eq!(f.nvars(), 4, "expected a 2 x 2 matrix symbol");
    f.terms()
        .map(|(m, c)| c * coeff_re(u2_monomial_integral(&m.z, &m.zbar)))
        .fold(Coeff::zero(), |acc, t| acc + t)
}

/// The polynomial `p_a` of degree `m` on `2 x 2` matrices whose restriction to
/// the rank-one manifold is `xi1^{a1} xi2^{a2}` exactly.
pub fn restricted_preimage(a1: [u32; 2], a2: [u32; 2]) -> SymbolPolynomial {
    let m = a1[0] + a1[1];
    assert_eq!(m, a2[0] + a2[1], "bidegree must be (m, m)");
    let mut p = SymbolPolynomial::zero(4);
    // matrices A with row sums a1 and column sums a2 are fixed by A_11 = k
    let lo = a1[0].saturating_sub(a2[1]);
    let hi = a1[0].min(a2[0]);
    for k in lo..=hi {
        let e = [k, a1[0] - k, a2[0] - k, a1[1] - (a2[0] - k)];
        let multinomial = factorial(m as u64) / e.iter().fold(rat(1, 1), |acc, &x| acc * factorial(x as u64));
        p.add_term(Monomial { z: e.to_vec(), zbar: vec![0; 4] }, coeff_re(multinomial));
    }
    let scale = binomial(m as u64, a1[0] as u64) * binomial(m as u64, a2[0] as u64);
    p.scale(&coeff_re(rat(1, 1) / scale))
}

fn label_parts(label: &[u32]) -> ([u32; 2], [u32; 2]) {
    ([label[0], label[1]], [label[2], label[3]])
}

/// Exact sub-Toeplitz operator `S_f = P T_f P` on the sub-Hardy model of
/// `2 x 2` matrices, for an arbitrary symbol `f` in matrix coordinates.
pub fn haar_sub_toeplitz(basis: &Arc<GradedBasis>, f: &SymbolPolynomial) -> Result<TruncatedOperator> {
    if basis.kind() != (ModelKind::SubHardy { r: 2, s: 2 }) {
        return Err(Error::UnsupportedFamily("exact Haar compression needs the sub-Hardy model of 2 x 2 matrices".into()));
    }
    if f.nvars() != 4 {
        return Err(Error::SymbolDomain("expected a 2 x 2 matrix symbol".into()));
    }
    let terms: Vec<(&Monomial, &Coeff)> = f.terms().collect();
    let cols = (0..basis.len())
        .into_par_iter()
        .map(|j| {
            let (b1, b2) = label_parts(&basis.element(j).label);
            let pb = restricted_preimage(b1, b2);
            let mut col = Vec::new();
            for (m, c) in &terms {
                // torus weights fix the only row that can pair with this term
                let row_w = [m.z[0] + m.z[1], m.z[2] + m.z[3]];
                let row_wb = [m.zbar[0] + m.zbar[1], m.zbar[2] + m.zbar[3]];
                let col_w = [m.z[0] + m.z[2], m.z[1] + m.z[3]];
                let col_wb = [m.zbar[0] + m.zbar[2], m.zbar[1] + m.zbar[3]];
                let shifted = |base: [u32; 2], up: [u32; 2], down: [u32; 2]| -> Option<[u32; 2]> {
                    let x0 = (base[0] + up[0]).checked_sub(down[0])?;
                    let x1 = (base[1] + up[1]).checked_sub(down[1])?;
                    Some([x0, x1])
                };
                let (Some(a1), Some(a2)) = (shifted(b1, row_w, row_wb), shifted(b2, col_w, col_wb)) else {
                    continue;
                };
                let mut label = a1.to_vec();
                label.extend_from_slice(&a2);
                let Some(i) = basis.position(&label) else { continue };
                let pa = restricted_preimage(a1, a2);
                let term = SymbolPolynomial::from_terms(4, [((*m).clone(), (*c).clone())]);
                let val = u2_integral(&(&(&term * &pb) * &pa.conj()));
                if !val.is_zero() {
                    col.push((i, val * coeff_re(rat(1, 1) / &basis.element(i).norm_sq)));
                }
            }
            col
        })
        .collect();
    let shift = f
        .terms()
        .map(|(m, _)| m.holo_degree() as i32 - m.anti_degree() as i32)
        .fold((i32::MAX, i32::MIN), |(lo, hi), s| (lo.min(s), hi.max(s)));
    let shift = if f.is_zero() { (0, 0) } else { shift };
    let valid = basis.truncation() as i64 - f.degree() as i64;
    Ok(TruncatedOperator::from_columns(basis.clone(), cols, valid, shift))
}
