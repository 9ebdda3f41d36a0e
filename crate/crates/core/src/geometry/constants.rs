use crate::catalog::{peirce1_data, DomainDescriptor, Peirce1Data};
use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};
use crate::models::compositions;
use crate::rat;
use num_rational::BigRational;
use num_traits::Zero;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// `Gamma_V(s) = (2 pi)^{(d_V - r_V)/2} prod_{j=1}^{r_V} Gamma(s - (a_V/2)(j - 1))`;
/// 1 for the zero cone.
pub fn gindikin_gamma(data: &Peirce1Data, s: f64) -> Result<f64> {
    if data.r_v == 0 {
        return Ok(1.0);
    }
    let half = data.a_v as f64 / 2.0;
    let mut value = (2.0 * PI).powf((data.d_v as f64 - data.r_v as f64) / 2.0);
    for j in 0..data.r_v {
        let arg = s - half * j as f64;
        if arg <= 0.0 {
            return Err(Error::Precondition(format!("Gamma argument {arg} is not positive")));
        }
        value *= gamma(arg);
    }
    Ok(value)
}

/// `Gamma_V(p_V - (n - 1)/r_V) / Gamma_V(p_V)`.
pub fn gamma_quotient_branch(desc: &DomainDescriptor) -> Result<f64> {
    let data = peirce1_data(desc)?;
    if data.r_v == 0 {
        return Ok(1.0);
    }
    let p = data.p_v.ok_or_else(|| {
        Error::UnsupportedFamily(format!("{}: reducible Peirce 1-space has no Gamma quotient", desc.family))
    })? as f64;
    let shift = (desc.n as f64 - 1.0) / data.r_v as f64;
    Ok(gindikin_gamma(&data, p - shift)? / gindikin_gamma(&data, p)?)
}

/// `1 / (Gamma(r) Gamma(r + b))`.
pub fn a2_branch(desc: &DomainDescriptor) -> f64 {
    1.0 / (gamma(desc.r as f64) * gamma((desc.r + desc.b) as f64))
}

/// Contact volume of `S1`: the gamma quotient when `a != 2` or `r = 1`,
/// otherwise `1 / (Gamma(r) Gamma(r + b))`.
pub fn dixmier_constant(desc: &DomainDescriptor) -> Result<f64> {
    if desc.a != 2 || desc.r == 1 {
        gamma_quotient_branch(desc)
    } else {
        Ok(a2_branch(desc))
    }
}

/// Eigenvalue sum of `prod_i [T_{conj z_i}, T_{z_i}]` on level `m` of the
/// Hardy space of the sphere in `C^d`:
/// `s_m = sum_{|alpha| = m} prod_i ((alpha_i + 1)/(m + d) - alpha_i/(m + d - 1))`.
pub fn ball_shell_sum(d: u32, m: u32) -> BigRational {
    let (m_i, d_i) = (m as i64, d as i64);
    let mut total = BigRational::zero();
    for alpha in compositions(d as usize, m) {
        let mut p = rat(1, 1);
        for &a in &alpha {
            let a = a as i64;
            let second = if m_i + d_i > 1 { rat(a, m_i + d_i - 1) } else { rat(0, 1) };
            p *= rat(a + 1, m_i + d_i) - second;
        }
        total += p;
    }
    total
}

/// `lim m s_m = sum_k binom(d, k) (-1)^k / (k + d - 1)!`.
pub fn ball_shell_asymptote(d: u32) -> BigRational {
    (0..=d as u64)
        .map(|k| {
            let sign = if k % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
            sign * binomial(d as u64, k) / factorial(k + d as u64 - 1)
        })
        .sum()
}

/// Dixmier trace of the ball shell product: shells of size `~ m^{d-1}` make
/// the log-mean converge to `lim m s_m / d`.
pub fn ball_shell_oracle(d: u32) -> BigRational {
    ball_shell_asymptote(d) / rat(d as i64, 1)
}
