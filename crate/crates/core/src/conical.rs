//! Norms, dimensions and adjoint-action coefficients of conical polynomials
//! `N_lambda = N_1^{lambda_1 - lambda_2} ... N_r^{lambda_r}`.
//!
//! Everything here is exact. The Hardy norm `||N_lambda||^2_S` and the
//! dimension of the Peter-Weyl component `P_lambda(Z)` are closed-form
//! products over pairs `i < j <= r`.

use crate::catalog::{DomainDescriptor, DomainFamily};
use crate::combinatorics::{
    factorial, falling_pochhammer, multivariate_pochhammer, rising_pochhammer, Partition,
};
use crate::error::{Error, Result};
use crate::rat;
use crate::symbol::{coeff_norm_sq, Coeff, Monomial, SymbolPolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct ConicalContext {
    pub desc: DomainDescriptor,
}

impl ConicalContext {
    pub fn new(desc: DomainDescriptor) -> Self {
        ConicalContext { desc }
    }

    fn check_length(&self, lambda: &Partition) -> Result<()> {
        if lambda.len() > self.desc.r as usize {
            return Err(Error::Precondition(format!(
                "{lambda} has more than r = {} parts",
                self.desc.r
            )));
        }
        Ok(())
    }

    fn rho(&self) -> &BigRational {
        &self.desc.rho
    }

    fn b(&self) -> BigRational {
        rat(self.desc.b as i64, 1)
    }
}

/// `||N_lambda||^2` in the normalized Hardy space of the Shilov boundary.
pub fn conical_norm_sq(ctx: &ConicalContext, lambda: &Partition) -> Result<BigRational> {
    ctx.check_length(lambda)?;
    let a = ctx.desc.a;
    let r = ctx.desc.r as usize;
    let half_a = ctx.desc.half_a();
    let mut acc = multivariate_pochhammer(&(ctx.rho() - ctx.b()), lambda, a)
        / multivariate_pochhammer(ctx.rho(), lambda, a);
    for i in 1..=r {
        for j in (i + 1)..=r {
            let diff = (lambda.part(i) - lambda.part(j)) as u64;
            let gap = rat((j - i) as i64, 1);
            let num = rising_pochhammer(&(BigRational::one() + &half_a * (&gap - rat(1, 1))), diff);
            let den = rising_pochhammer(&(BigRational::one() + &half_a * &gap), diff);
            acc = acc * num / den;
        }
    }
    Ok(acc)
}

/// `||N_{(m, tail)}||^2 / ||N_{(m0, tail)}||^2` for `m >= m0`, telescoped so
/// that large `m` only costs `O(m - m0)` rational multiplications of small
/// factors.
pub fn conical_norm_sq_step_ratio(
    ctx: &ConicalContext,
    tail: &[u32],
    m0: u32,
    m: u32,
) -> Result<BigRational> {
    assert!(m >= m0);
    let r = ctx.desc.r as usize;
    if tail.len() + 1 > r || tail.first().copied().unwrap_or(0) > m0 {
        return Err(Error::Precondition("invalid first-row extension".into()));
    }
    let half_a = ctx.desc.half_a();
    let b = ctx.b();
    let mut parts = vec![0u32; r];
    parts[1..=tail.len()].copy_from_slice(tail);
    let mut acc = BigRational::one();
    for x in m0..m {
        // raising lambda_1 from x to x + 1 multiplies by one factor per Pochhammer symbol
        let xr = rat(x as i64, 1);
        let mut f = (ctx.rho() - &b + &xr) / (ctx.rho() + &xr);
        for (idx, &pj) in parts.iter().enumerate().skip(1) {
            let d = rat(x as i64 - pj as i64, 1);
            let gap = rat(idx as i64, 1);
            f *= (BigRational::one() + &half_a * (&gap - rat(1, 1)) + &d)
                / (BigRational::one() + &half_a * &gap + &d);
        }
        acc *= f;
    }
    Ok(acc)
}

/// Dimension of `P_lambda(Z)`; verified to be an integer.
pub fn rep_dimension(ctx: &ConicalContext, lambda: &Partition) -> Result<BigInt> {
    ctx.check_length(lambda)?;
    let a = ctx.desc.a;
    let r = ctx.desc.r as usize;
    let half_a = ctx.desc.half_a();
    let mut acc = multivariate_pochhammer(ctx.rho(), lambda, a)
        / multivariate_pochhammer(&(ctx.rho() - ctx.b()), lambda, a);
    for i in 1..=r {
        for j in (i + 1)..=r {
            let d = rat(lambda.part(i) as i64 - lambda.part(j) as i64, 1);
            let g = &half_a * rat((j - i) as i64, 1);
            let g1 = &half_a * rat((j - i - 1) as i64, 1);
            acc *= (&d + &g) / &g;
            let am1 = (a - 1) as u64;
            acc *= rising_pochhammer(&(&d + rat(1, 1) + &g1), am1)
                / rising_pochhammer(&(rat(1, 1) + &g1), am1);
        }
    }
    if !acc.is_integer() {
        return Err(Error::Consistency(format!("dim P_{lambda} = {acc} is not an integer")));
    }
    Ok(acc.to_integer())
}

/// `dim P_(m)(Z)` for the one-row partition `(m, 0, ..., 0)`.
pub fn graded_dimension(ctx: &ConicalContext, m: u32) -> Result<BigInt> {
    let desc = &ctx.desc;
    if m < desc.b {
        return rep_dimension(ctx, &Partition::new(vec![m])?);
    }
    let half_a = desc.half_a();
    let mr = rat(m as i64, 1);
    let top = &half_a * rat(desc.r as i64 - 1, 1);
    let mut acc = rising_pochhammer(&(&mr + rat(1, 1) + &top), desc.b as u64)
        / rising_pochhammer(&(rat(1, 1) + &top), desc.b as u64);
    for j in 2..=desc.r as i64 {
        let g = &half_a * rat(j - 1, 1);
        let g2 = &half_a * rat(j - 2, 1);
        let am1 = (desc.a - 1) as u64;
        acc *= (&mr + &g) / &g;
        acc *= rising_pochhammer(&(&mr + rat(1, 1) + &g2), am1) / rising_pochhammer(&(rat(1, 1) + &g2), am1);
    }
    if !acc.is_integer() {
        return Err(Error::Consistency(format!("dim P_{m} = {acc} is not an integer")));
    }
    Ok(acc.to_integer())
}

fn check_block(ctx: &ConicalContext, lambda: &Partition, l: usize, k: u32) -> Result<Partition> {
    ctx.check_length(lambda)?;
    if l == 0 || l > ctx.desc.r as usize {
        return Err(Error::Precondition(format!("block length {l} outside 1..=r")));
    }
    lambda.subtract_block(l, k)
}

/// `(rho)_lambda / (rho)_{lambda - k_l}` as a product of falling factorials.
pub fn block_shift_ratio(ctx: &ConicalContext, lambda: &Partition, l: usize, k: u32) -> Result<BigRational> {
    check_block(ctx, lambda, l, k)?;
    let half_a = ctx.desc.half_a();
    let r = ctx.desc.r as i64;
    Ok((1..=l)
        .map(|j| {
            let x = rat(lambda.part(j) as i64, 1) + &half_a * rat(r - j as i64, 1) + ctx.b();
            falling_pochhammer(&x, k as u64)
        })
        .fold(BigRational::one(), |acc, t| acc * t))
}

/// Coefficient `c` in `T*_{N_l^k} N_lambda = c N_{lambda - k_l}` for `lambda`
/// with at most `l` parts and `k <= lambda_l`.
pub fn adjoint_shift_coefficient(
    ctx: &ConicalContext,
    lambda: &Partition,
    l: usize,
    k: u32,
) -> Result<BigRational> {
    check_block(ctx, lambda, l, k)?;
    if lambda.len() > l {
        return Err(Error::Precondition(format!("{lambda} has more than l = {l} parts")));
    }
    let half_a = ctx.desc.half_a();
    let r = ctx.desc.r as i64;
    let mut acc = BigRational::one();
    for j in 1..=l {
        let lj = rat(lambda.part(j) as i64, 1);
        let num = falling_pochhammer(&(&lj + &half_a * rat(l as i64 - j as i64, 1)), k as u64);
        let den = falling_pochhammer(&(&lj + &half_a * rat(r - j as i64, 1) + ctx.b()), k as u64);
        acc = acc * num / den;
    }
    Ok(acc)
}

/// Explicit monomial expansion of `N_lambda` on `r x s` matrices, with `N_l`
/// the leading `l x l` principal minor. Variables are row-major `z_ij`.
pub fn conical_polynomial_expand(ctx: &ConicalContext, lambda: &Partition) -> Result<SymbolPolynomial> {
    let (r, s) = match ctx.desc.family {
        DomainFamily::TypeI { r, s } => (r as usize, s as usize),
        other => return Err(Error::UnsupportedFamily(format!("{other}: conical expansion needs type I"))),
    };
    ctx.check_length(lambda)?;
    let nvars = r * s;
    let mut out = SymbolPolynomial::one(nvars);
    for l in 1..=r {
        let e = lambda.part(l) - lambda.part(l + 1);
        if e > 0 {
            out = &out * &leading_minor(l, r, s).pow(e);
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn permutation_sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 { 1 } else { -1 }
}

/// Leading `l x l` minor of an `r x s` matrix of variables.
fn leading_minor(l: usize, r: usize, s: usize) -> SymbolPolynomial {
    let mut det = SymbolPolynomial::zero(r * s);
    for p in permutations(l) {
        let mut m = Monomial::one(r * s);
        for (i, &j) in p.iter().enumerate() {
            m.z[i * s + j] += 1;
        }
        det.add_term(m, Coeff::new(rat(permutation_sign(&p), 1), BigRational::zero()));
    }
    det
}

/// Fischer-Fock norm `sum_alpha |c_alpha|^2 alpha!` of a holomorphic polynomial.
pub fn fock_norm_sq(p: &SymbolPolynomial) -> Result<BigRational> {
    if !p.is_holomorphic() {
        return Err(Error::Precondition("Fock norm needs a holomorphic polynomial".into()));
    }
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let af = m.z.iter().fold(BigRational::one(), |a, &e| a * factorial(e as u64));
        acc += coeff_norm_sq(c) * af;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::descriptor_for;
    use crate::combinatorics::{binomial, enumerate_partitions};
    use proptest::prelude::*;

    fn ctx(f: DomainFamily) -> ConicalContext {
        ConicalContext::new(descriptor_for(f).unwrap())
    }

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    const I22: DomainFamily = DomainFamily::TypeI { r: 2, s: 2 };
    const I23: DomainFamily = DomainFamily::TypeI { r: 2, s: 3 };

    #[test]
    fn norm_examples() {
        // sphere moment of |z_1|^4 on S^3: 2! 1! / 3!
        assert_eq!(conical_norm_sq(&ctx(DomainFamily::Ball { d: 2 }), &p(&[2])).unwrap(), rat(1, 3));
        for k in 0..6 {
            assert_eq!(conical_norm_sq(&ctx(I22), &p(&[k, k])).unwrap(), rat(1, 1));
        }
        // Haar moment of |u_11|^2 on U(2)
        assert_eq!(conical_norm_sq(&ctx(I22), &p(&[1])).unwrap(), rat(1, 2));
        assert!(conical_norm_sq(&ctx(DomainFamily::Ball { d: 3 }), &p(&[1, 1])).is_err());
    }

    #[test]
    fn dimension_examples() {
        for d in 1..5u32 {
            let c = ctx(DomainFamily::Ball { d });
            for m in 0..7u32 {
                let want = binomial((m + d - 1) as u64, m as u64).to_integer();
                assert_eq!(rep_dimension(&c, &p(&[m])).unwrap(), want);
            }
        }
        assert_eq!(rep_dimension(&ctx(I22), &p(&[1])).unwrap(), 4.into());
        assert_eq!(rep_dimension(&ctx(I22), &p(&[1, 1])).unwrap(), 1.into());
        assert_eq!(graded_dimension(&ctx(DomainFamily::Ball { d: 2 }), 3).unwrap(), 4.into());
        assert_eq!(graded_dimension(&ctx(I22), 2).unwrap(), 9.into());
    }

    #[test]
    fn graded_dimension_matches_one_row_partition() {
        for f in crate::catalog::standard_instances() {
            let c = ctx(f);
            for m in 0..10 {
                assert_eq!(graded_dimension(&c, m).unwrap(), rep_dimension(&c, &p(&[m])).unwrap(), "{f} m={m}");
            }
        }
    }

    #[test]
    fn graded_dimension_growth() {
        // dim P_(m) ~ c m^{b + a(r-1)} = c m^2 for I(2,2)
        let c = ctx(I22);
        let q = |m: u32| {
            let v: BigRational = BigRational::from_integer(graded_dimension(&c, m).unwrap());
            crate::to_f64(&(v / rat((m as i64) * (m as i64), 1)))
        };
        assert!((q(4000) - q(2000)).abs() < 1e-3);
    }

    #[test]
    fn ratio_examples() {
        let b3 = ctx(DomainFamily::Ball { d: 3 });
        assert_eq!(block_shift_ratio(&b3, &p(&[7]), 1, 1).unwrap(), rat(9, 1));
        assert_eq!(block_shift_ratio(&ctx(I22), &p(&[2, 1]), 2, 1).unwrap(), rat(3, 1));
        assert_eq!(block_shift_ratio(&ctx(I23), &p(&[3, 2]), 2, 0).unwrap(), rat(1, 1));
        assert!(block_shift_ratio(&ctx(I22), &p(&[2, 2]), 1, 1).is_err());
    }

    #[test]
    fn block_shift_ratio_is_pochhammer_quotient() {
        for f in [I22, I23, DomainFamily::TypeIII { r: 2 }, DomainFamily::TypeII { r: 2, eps: 1 }] {
            let c = ctx(f);
            let rho = c.desc.rho.clone();
            for m in 0..7 {
                for lam in enumerate_partitions(c.desc.r as usize, m) {
                    for l in 1..=c.desc.r as usize {
                        for k in 0..=lam.part(l) {
                            let Ok(mu) = lam.subtract_block(l, k) else { continue };
                            let q = multivariate_pochhammer(&rho, &lam, c.desc.a)
                                / multivariate_pochhammer(&rho, &mu, c.desc.a);
                            assert_eq!(block_shift_ratio(&c, &lam, l, k).unwrap(), q);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn adjoint_coefficient_examples() {
        let c = ctx(I22);
        for m in 1..10 {
            assert_eq!(adjoint_shift_coefficient(&c, &p(&[m]), 1, 1).unwrap(), rat(m as i64, m as i64 + 1));
        }
        let b = ctx(DomainFamily::Ball { d: 3 });
        let m = 5u32;
        assert_eq!(
            adjoint_shift_coefficient(&b, &p(&[m]), 1, m).unwrap(),
            factorial(m as u64) / falling_pochhammer(&rat((m + 2) as i64, 1), m as u64)
        );
        assert_eq!(adjoint_shift_coefficient(&c, &p(&[3, 1]), 2, 0).unwrap(), rat(1, 1));
        assert!(adjoint_shift_coefficient(&c, &p(&[3, 1]), 1, 1).is_err());
    }

    #[test]
    fn expansion_examples() {
        let c = ctx(I22);
        let z = |k| SymbolPolynomial::var(4, k);
        let det = &(&z(0) * &z(3)) - &(&z(1) * &z(2));
        assert_eq!(conical_polynomial_expand(&c, &p(&[1, 1])).unwrap(), det);
        assert_eq!(conical_polynomial_expand(&c, &p(&[1])).unwrap(), z(0));
        assert_eq!(conical_polynomial_expand(&c, &p(&[2, 1])).unwrap(), &z(0) * &det);
        assert!(conical_polynomial_expand(&ctx(DomainFamily::TypeIII { r: 2 }), &p(&[1])).is_err());
    }

    #[test]
    fn fock_examples() {
        let z = |k| SymbolPolynomial::var(4, k);
        assert_eq!(fock_norm_sq(&z(0)).unwrap(), rat(1, 1));
        assert_eq!(fock_norm_sq(&z(0).pow(2)).unwrap(), rat(2, 1));
        let det = &(&z(0) * &z(3)) - &(&z(1) * &z(2));
        assert_eq!(fock_norm_sq(&det).unwrap(), rat(2, 1));
        assert!(fock_norm_sq(&z(0).conj()).is_err());
    }

    #[test]
    fn norm_dimension_quotient_identity() {
        for f in crate::catalog::standard_instances() {
            let c = ctx(f);
            let (a, r, b) = (c.desc.a, c.desc.r as usize, c.desc.b as u64);
            let half_a = c.desc.half_a();
            for m in 0..6 {
                for lam in enumerate_partitions(r, m) {
                    let lhs = multivariate_pochhammer(&c.desc.rho, &lam, a)
                        / multivariate_pochhammer(&(&c.desc.rho - rat(b as i64, 1)), &lam, a);
                    let mut rhs = BigRational::one();
                    for j in 1..=r {
                        let g = &half_a * rat((r - j) as i64, 1);
                        rhs *= rising_pochhammer(&(rat(lam.part(j) as i64 + 1, 1) + &g), b)
                            / rising_pochhammer(&(rat(1, 1) + &g), b);
                    }
                    assert_eq!(lhs, rhs, "{f} {lam}");
                }
            }
        }
    }

    #[test]
    fn step_ratio_matches_direct_quotient() {
        for f in [I22, I23, DomainFamily::TypeIII { r: 2 }] {
            let c = ctx(f);
            for tail in [vec![], vec![1], vec![2]] {
                let m0 = 3;
                let mut lam0 = vec![m0];
                lam0.extend(&tail);
                let base = conical_norm_sq(&c, &p(&lam0)).unwrap();
                for m in m0..12 {
                    let mut lam = vec![m];
                    lam.extend(&tail);
                    let direct = conical_norm_sq(&c, &p(&lam)).unwrap() / &base;
                    assert_eq!(conical_norm_sq_step_ratio(&c, &tail, m0, m).unwrap(), direct);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn adjoint_coefficient_consistent_with_norms(m in 0u32..12, t in 0u32..6, k in 0u32..8) {
            let c = ctx(I23);
            let lam = p(&[m.max(t), t.min(m)]);
            prop_assume!(k <= lam.part(2));
            let coef = adjoint_shift_coefficient(&c, &lam, 2, k).unwrap();
            let mu = lam.subtract_block(2, k).unwrap();
            prop_assert_eq!(coef * conical_norm_sq(&c, &mu).unwrap(), conical_norm_sq(&c, &lam).unwrap());
        }
    }
}
