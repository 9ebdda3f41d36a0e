use super::basis::{GradedBasis, ModelKind};
use super::operator::TruncatedOperator;
use crate::catalog::{descriptor_for, DomainDescriptor, DomainFamily};
use crate::error::{Error, Result};
use crate::rat;
use crate::symbol::{coeff_re, Coeff, SymbolPolynomial};
use num_rational::BigRational;
use rayon::prelude::*;
use std::sync::Arc;

pub fn build_ball_model(d: u32, truncation: u32) -> Result<Arc<GradedBasis>> {
    if d == 0 {
        return Err(Error::InvalidParameters("ball model needs d >= 1".into()));
    }
    Ok(Arc::new(GradedBasis::build(ModelKind::Ball { d }, truncation, |_| rat(1, 1))))
}

pub fn build_rank_one_model(r: u32, s: u32, truncation: u32) -> Result<Arc<GradedBasis>> {
    descriptor_for(DomainFamily::TypeI { r, s })?;
    Ok(Arc::new(GradedBasis::build(ModelKind::RankOne { r, s }, truncation, |_| rat(1, 1))))
}

/// Rank-one monomials with the sub-Hardy norms `w_m ||xi^a||^2`.
pub fn build_sub_hardy_model(r: u32, s: u32, truncation: u32) -> Result<Arc<GradedBasis>> {
    let desc = descriptor_for(DomainFamily::TypeI { r, s })?;
    Ok(Arc::new(GradedBasis::build(ModelKind::SubHardy { r, s }, truncation, |m| {
        unitary_weight(&desc, m)
    })))
}

/// `(ra/2)_m / (a/2)_m`, the ratio between sub-Hardy and rank-one norms on level `m`.
pub fn unitary_weight(desc: &DomainDescriptor, m: u32) -> BigRational {
    let half_a = desc.half_a();
    let top = &half_a * rat(desc.r as i64, 1);
    crate::combinatorics::rising_pochhammer(&top, m as u64)
        / crate::combinatorics::rising_pochhammer(&half_a, m as u64)
}

/// [`unitary_weight`] for the type I domain underlying a model (1 for the ball).
pub fn unitary_weight_for(kind: ModelKind, m: u32) -> BigRational {
    match kind {
        ModelKind::Ball { .. } => rat(1, 1),
        ModelKind::RankOne { r, s } | ModelKind::SubHardy { r, s } => {
            let desc = descriptor_for(DomainFamily::TypeI { r, s }).expect("validated model");
            unitary_weight(&desc, m)
        }
    }
}

fn level_shift(kind: ModelKind, z: &[u32], zbar: &[u32]) -> Result<i32> {
    match kind {
        ModelKind::Ball { .. } => Ok(z.iter().sum::<u32>() as i32 - zbar.iter().sum::<u32>() as i32),
        ModelKind::RankOne { r, .. } | ModelKind::SubHardy { r, .. } => {
            let r = r as usize;
            let d1 = z[..r].iter().sum::<u32>() as i32 - zbar[..r].iter().sum::<u32>() as i32;
            let d2 = z[r..].iter().sum::<u32>() as i32 - zbar[r..].iter().sum::<u32>() as i32;
            if d1 != d2 {
                return Err(Error::SymbolDomain(
                    "term is not invariant under the circle action xi1 -> t xi1, xi2 -> conj(t) xi2".into(),
                ));
            }
            Ok(d1)
        }
    }
}

/// Compressed multiplication `P(f .)` on the sphere-product Hardy space, with
/// `f` written in model coordinates.
pub fn toeplitz_matrix(basis: &Arc<GradedBasis>, f: &SymbolPolynomial) -> Result<TruncatedOperator> {
    let kind = basis.kind();
    if matches!(kind, ModelKind::SubHardy { .. }) {
        return Err(Error::SymbolDomain("sub-Hardy models take holomorphic symbols via sub_toeplitz".into()));
    }
    if f.nvars() != kind.nvars() {
        return Err(Error::SymbolDomain(format!(
            "symbol has {} variables, model {kind} has {}",
            f.nvars(),
            kind.nvars()
        )));
    }
    let mut terms = Vec::new();
    let mut shift = (i32::MAX, i32::MIN);
    for (m, c) in f.terms() {
        let s = level_shift(kind, &m.z, &m.zbar)?;
        shift = (shift.0.min(s), shift.1.max(s));
        terms.push((m.z.clone(), m.zbar.clone(), c.clone()));
    }
    if terms.is_empty() {
        shift = (0, 0);
    }
    let cols = (0..basis.len())
        .into_par_iter()
        .map(|j| {
            let a = &basis.element(j).label;
            let mut col = Vec::new();
            for (alpha, beta, c) in &terms {
                let up: Vec<u32> = a.iter().zip(alpha).map(|(x, y)| x + y).collect();
                if up.iter().zip(beta).any(|(u, b)| u < b) {
                    continue;
                }
                let target: Vec<u32> = up.iter().zip(beta).map(|(u, b)| u - b).collect();
                if let Some(i) = basis.position(&target) {
                    let ratio = basis.sphere_norm_sq(&up) / basis.sphere_norm_sq(&target);
                    col.push((i, c * coeff_re(ratio)));
                }
            }
            col
        })
        .collect();
    let valid = basis.truncation() as i64 - f.degree() as i64;
    Ok(TruncatedOperator::from_columns(basis.clone(), cols, valid, shift))
}

/// Sub-Toeplitz operator of a holomorphic polynomial `p` on `r x s`
/// matrices (row-major variables) acting on the sub-Hardy model. In
/// monomial coordinates it is plain multiplication by the pull-back of `p`.
pub fn sub_toeplitz(basis: &Arc<GradedBasis>, p: &SymbolPolynomial) -> Result<TruncatedOperator> {
    let (r, s) = match basis.kind() {
        ModelKind::SubHardy { r, s } => (r as usize, s as usize),
        other => return Err(Error::SymbolDomain(format!("sub-Toeplitz operators live on sub-Hardy models, not {other}"))),
    };
    if !p.is_holomorphic() || p.nvars() != r * s {
        return Err(Error::SymbolDomain(format!("expected a holomorphic symbol in {} matrix variables", r * s)));
    }
    let pulled = p.pullback_rank_one(r, s);
    let terms: Vec<(Vec<u32>, Coeff)> = pulled.terms().map(|(m, c)| (m.z.clone(), c.clone())).collect();
    let cols = (0..basis.len())
        .into_par_iter()
        .map(|j| {
            let a = &basis.element(j).label;
            terms
                .iter()
                .filter_map(|(alpha, c)| {
                    let t: Vec<u32> = a.iter().zip(alpha).map(|(x, y)| x + y).collect();
                    basis.position(&t).map(|i| (i, c.clone()))
                })
                .collect()
        })
        .collect();
    let degs: Vec<i32> = p.terms().map(|(m, _)| m.holo_degree() as i32).collect();
    let shift = (degs.iter().copied().min().unwrap_or(0), degs.iter().copied().max().unwrap_or(0));
    let valid = basis.truncation() as i64 - p.degree() as i64;
    Ok(TruncatedOperator::from_columns(basis.clone(), cols, valid, shift))
}

/// `S_{z_ij}` on the sub-Hardy model (0-based row and column of the coordinate).
pub fn sub_toeplitz_linear(basis: &Arc<GradedBasis>, i: usize, j: usize) -> Result<TruncatedOperator> {
    let (r, s) = match basis.kind() {
        ModelKind::SubHardy { r, s } => (r as usize, s as usize),
        other => return Err(Error::SymbolDomain(format!("{other} is not a sub-Hardy model"))),
    };
    if i >= r || j >= s {
        return Err(Error::Precondition(format!("coordinate z_({i},{j}) outside {r} x {s}")));
    }
    sub_toeplitz(basis, &SymbolPolynomial::var(r * s, i * s + j))
}

/// Diagonal operator `f(m)` on level `m`.
pub fn level_function(basis: &Arc<GradedBasis>, f: impl Fn(u32) -> BigRational) -> TruncatedOperator {
    TruncatedOperator::level_diagonal(basis.clone(), f)
}

/// The grading operator: multiplication by `m` on level `m`.
pub fn lambda_operator(basis: &Arc<GradedBasis>) -> TruncatedOperator {
    level_function(basis, |m| rat(m as i64, 1))
}

/// `(Lambda + 1)^{-1}`.
pub fn lambda_resolvent(basis: &Arc<GradedBasis>) -> TruncatedOperator {
    level_function(basis, |m| rat(1, m as i64 + 1))
}

/// Directional derivative `d/dz_k` on the ball model.
pub fn derivative_operator(basis: &Arc<GradedBasis>, k: usize) -> Result<TruncatedOperator> {
    let d = match basis.kind() {
        ModelKind::Ball { d } => d as usize,
        other => return Err(Error::SymbolDomain(format!("derivatives are defined on ball models, not {other}"))),
    };
    if k >= d {
        return Err(Error::Precondition(format!("coordinate {k} outside C^{d}")));
    }
    let cols = (0..basis.len())
        .map(|j| {
            let a = &basis.element(j).label;
            if a[k] == 0 {
                return Vec::new();
            }
            let mut t = a.clone();
            t[k] -= 1;
            vec![(basis.position(&t).expect("lower degree is present"), crate::symbol::coeff_int(a[k] as i64, 0))]
        })
        .collect();
    Ok(TruncatedOperator::from_columns(basis.clone(), cols, basis.truncation() as i64, (-1, -1)))
}

/// `d p / d z_k` for a holomorphic polynomial.
pub fn holomorphic_derivative(p: &SymbolPolynomial, k: usize) -> Result<SymbolPolynomial> {
    if !p.is_holomorphic() {
        return Err(Error::Precondition("holomorphic derivative of a mixed symbol".into()));
    }
    if k >= p.nvars() {
        return Err(Error::Precondition(format!("coordinate {k} out of range")));
    }
    Ok(p.d_z(k))
}
