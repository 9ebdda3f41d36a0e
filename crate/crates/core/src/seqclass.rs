//! Sequences of the form `c_m = c0 + c1/(m+1) + w_m` with `m^2 w_m` bounded,
//! fitted from exact samples, composed under sums, products and quotients,
//! and tested for membership over decade windows.

use crate::combinatorics::Partition;
use crate::conical::{adjoint_shift_coefficient, conical_norm_sq, conical_norm_sq_step_ratio, ConicalContext};
use crate::error::{Error, Result};
use crate::{rat, to_f64};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

pub type Samples = BTreeMap<u64, BigRational>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceFit {
    pub c0: f64,
    pub c1: f64,
    /// Largest `m^2 |c_m - c0 - c1/(m+1)|` over the sampled window.
    pub remainder_bound: f64,
    pub window: (u64, u64),
    pub positive: bool,
    /// Sampled `(m, w_m)` pairs.
    #[serde(skip)]
    pub residuals: Vec<(u64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineOp {
    Sum,
    Product,
    Quotient,
}

/// Geometric grid of about `per_decade` points per decade in `[m_min, m_max]`,
/// always containing both endpoints and `m_max - 1`.
pub fn decade_grid(m_min: u64, m_max: u64, per_decade: usize) -> Vec<u64> {
    assert!(m_min >= 1 && m_max > m_min);
    let decades = (m_max as f64 / m_min as f64).log10().max(1.0);
    let count = (decades * per_decade as f64).ceil() as usize;
    let mut grid: Vec<u64> = (0..=count)
        .map(|i| {
            let t = i as f64 / count as f64;
            (m_min as f64 * (m_max as f64 / m_min as f64).powf(t)).round() as u64
        })
        .map(|m| m.clamp(m_min, m_max))
        .collect();
    grid.push(m_max - 1);
    grid.push(m_max);
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Fit `c0, c1` exactly from the two largest sampled `m` in the window.
pub fn fit_asymptotics(samples: &Samples, window: (u64, u64)) -> Result<SequenceFit> {
    let (lo, hi) = window;
    let pts: Vec<(u64, &BigRational)> = samples.range(lo..=hi).map(|(&m, v)| (m, v)).collect();
    if pts.len() < 8 {
        return Err(Error::InsufficientSamples(format!("{} samples in [{lo}, {hi}], need 8", pts.len())));
    }
    let (m_first, m_last) = (pts[0].0, pts[pts.len() - 1].0);
    if m_last < 10 * m_first.max(1) {
        return Err(Error::InsufficientSamples(format!("samples [{m_first}, {m_last}] span less than a decade")));
    }
    let (m1, y1) = pts[pts.len() - 2];
    let (m2, y2) = pts[pts.len() - 1];
    let x1 = rat(1, m1 as i64 + 1);
    let x2 = rat(1, m2 as i64 + 1);
    let c1 = (y1 - y2) / (&x1 - &x2);
    let c0 = y2 - &c1 * &x2;
    let mut bound = 0f64;
    let mut residuals = Vec::with_capacity(pts.len());
    for &(m, y) in &pts {
        let w = y - &c0 - &c1 * rat(1, m as i64 + 1);
        let wf = to_f64(&w);
        bound = bound.max(to_f64(&(w.abs() * rat((m * m) as i64, 1))));
        residuals.push((m, wf));
    }
    Ok(SequenceFit {
        c0: to_f64(&c0),
        c1: to_f64(&c1),
        remainder_bound: bound,
        window: (m_first, m_last),
        positive: c0 > BigRational::zero(),
        residuals,
    })
}

/// Compose two fits. Remainder bounds are propagated so that, at every `m` in
/// the common window, the composed sequence stays within the new bound.
pub fn combine(f: &SequenceFit, g: &SequenceFit, op: CombineOp) -> Result<SequenceFit> {
    let lo = f.window.0.max(g.window.0);
    let hi = f.window.1.min(g.window.1);
    if lo > hi {
        return Err(Error::Precondition("fits have disjoint windows".into()));
    }
    let xmax = 1.0 / (lo as f64 + 1.0);
    let mmin2 = (lo as f64).powi(2);
    let (r, rp) = (f.remainder_bound, g.remainder_bound);
    let (c0, c1, rem) = match op {
        CombineOp::Sum => (f.c0 + g.c0, f.c1 + g.c1, r + rp),
        CombineOp::Product => {
            let rem = (f.c1 * g.c1).abs()
                + f.c0.abs() * rp
                + g.c0.abs() * r
                + xmax * (f.c1.abs() * rp + g.c1.abs() * r)
                + r * rp / mmin2;
            (f.c0 * g.c0, f.c0 * g.c1 + f.c1 * g.c0, rem)
        }
        CombineOp::Quotient => {
            if !g.positive {
                return Err(Error::NotPositive);
            }
            let g_min = g.c0 - g.c1.abs() * xmax - rp / mmin2;
            if g_min <= 0.0 {
                return Err(Error::NotPositive);
            }
            let q0 = f.c0 / g.c0;
            let q1 = (f.c1 * g.c0 - f.c0 * g.c1) / (g.c0 * g.c0);
            let rem = (r + q0.abs() * rp + (q1 * g.c1).abs() + q1.abs() * xmax * rp) / g_min;
            (q0, q1, rem)
        }
    };
    Ok(SequenceFit {
        c0,
        c1,
        remainder_bound: rem,
        window: (lo, hi),
        positive: c0 > 0.0,
        residuals: Vec::new(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub fits: Vec<SequenceFit>,
    pub positive: bool,
    /// No window bound exceeds twice its predecessor (plus a small absolute floor).
    pub bounded: bool,
}

pub const STANDARD_WINDOWS: [(u64, u64); 3] = [(10, 100), (100, 1000), (1000, 10000)];

/// Fit each window separately and look for growth of the remainder bound.
pub fn membership_test(samples: &Samples, windows: &[(u64, u64)]) -> Result<MembershipReport> {
    let fits = windows.iter().map(|&w| fit_asymptotics(samples, w)).collect::<Result<Vec<_>>>()?;
    let floor = 1e-6;
    let bounded = fits.windows(2).all(|p| p[1].remainder_bound <= 2.0 * p[0].remainder_bound + floor);
    let positive = fits.iter().all(|f| f.positive);
    Ok(MembershipReport { fits, positive, bounded })
}

fn grid_for(windows: &[(u64, u64)]) -> Vec<u64> {
    let mut g: Vec<u64> = windows.iter().flat_map(|&(a, b)| decade_grid(a, b, 24)).collect();
    g.sort_unstable();
    g.dedup();
    g
}

fn first_row(m: u32, tail: &Partition) -> Result<Partition> {
    let mut v = vec![m];
    v.extend_from_slice(tail.parts());
    Partition::new(v)
}

/// Exact samples of `m -> ||N_(m-k, gamma)||^2 / ||N_(m, alpha)||^2` on the
/// decade grids of `windows`.
pub fn norm_ratio_samples(
    ctx: &ConicalContext,
    alpha: &Partition,
    gamma: &Partition,
    k: u32,
    windows: &[(u64, u64)],
) -> Result<Samples> {
    let r = ctx.desc.r as usize;
    if alpha.len() + 1 > r || gamma.len() + 1 > r {
        return Err(Error::Precondition("alpha and gamma need at most r - 1 parts".into()));
    }
    for j in 1..r {
        if k + gamma.part(j) < alpha.part(j) {
            return Err(Error::Precondition(format!("k + gamma_{j} < alpha_{j}")));
        }
    }
    let grid = grid_for(windows);
    let start = grid[0] as u32;
    if start < k + gamma.part(1) || start < alpha.part(1) {
        return Err(Error::Precondition("window starts below the first valid m".into()));
    }
    let mut c = conical_norm_sq(ctx, &first_row(start - k, gamma)?)? / conical_norm_sq(ctx, &first_row(start, alpha)?)?;
    let mut out = Samples::new();
    let mut m = start;
    for &target in &grid {
        while (m as u64) < target {
            c = c * conical_norm_sq_step_ratio(ctx, gamma.parts(), m - k, m - k + 1)?
                / conical_norm_sq_step_ratio(ctx, alpha.parts(), m, m + 1)?;
            m += 1;
        }
        out.insert(target, c.clone());
    }
    Ok(out)
}

pub fn norm_ratio_sequence(
    ctx: &ConicalContext,
    alpha: &Partition,
    gamma: &Partition,
    k: u32,
    window: (u64, u64),
) -> Result<SequenceFit> {
    let s = norm_ratio_samples(ctx, alpha, gamma, k, &[window])?;
    let fit = fit_asymptotics(&s, window)?;
    if !fit.positive {
        return Err(Error::Consistency("norm ratio sequence fitted with c0 <= 0".into()));
    }
    Ok(fit)
}

/// Samples of `m -> adjoint_shift_coefficient((m, tail), l, k)`.
pub fn adjoint_coefficient_samples(
    ctx: &ConicalContext,
    tail: &Partition,
    l: usize,
    k: u32,
    windows: &[(u64, u64)],
) -> Result<Samples> {
    grid_for(windows)
        .into_iter()
        .map(|m| Ok((m, adjoint_shift_coefficient(ctx, &first_row(m as u32, tail)?, l, k)?)))
        .collect()
}

/// Samples of a real-valued function on the decade grids.
pub fn float_samples(f: impl Fn(u64) -> f64, windows: &[(u64, u64)]) -> Result<Samples> {
    grid_for(windows)
        .into_iter()
        .map(|m| {
            BigRational::from_float(f(m))
                .map(|v| (m, v))
                .ok_or_else(|| Error::Precondition(format!("non-finite sample at m = {m}")))
        })
        .collect()
}

/// Samples of an exact rational function on the decade grids.
pub fn exact_samples(f: impl Fn(u64) -> BigRational, windows: &[(u64, u64)]) -> Samples {
    grid_for(windows).into_iter().map(|m| (m, f(m))).collect()
}
