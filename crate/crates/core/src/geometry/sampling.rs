use super::constants::dixmier_constant;
use super::extension::poisson_extension_symbol;
use super::frame::{BoundaryKind, BoundaryPoint, BracketKernel, RealFrame};
use crate::catalog::DomainDescriptor;
use crate::error::{Error, Result};
use crate::symbol::SymbolPolynomial;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

const CHUNK: usize = 4096;

fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Points of chunk `index`: stream `index` of the generator seeded by `seed`.
fn chunk_points(kind: BoundaryKind, seed: u64, index: usize, len: usize) -> Vec<BoundaryPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    (0..len)
        .map(|_| match kind {
            BoundaryKind::Ball { d } => BoundaryPoint::Ball { c: unit_vector(&mut rng, d as usize) },
            BoundaryKind::TypeI { r, s } => {
                let xi1 = unit_vector(&mut rng, r as usize);
                let xi2 = unit_vector(&mut rng, s as usize);
                BoundaryPoint::TypeI { xi1, xi2 }
            }
        })
        .collect()
}

fn chunks(count: usize) -> impl ParallelIterator<Item = (usize, usize)> {
    let n = count.div_ceil(CHUNK);
    (0..n).into_par_iter().map(move |k| (k, CHUNK.min(count - k * CHUNK)))
}

/// I.i.d. points of `S1` under its `K`-invariant probability: uniform unit
/// vectors, or independent uniform pairs `(xi1, xi2)`.
pub fn sample_s1(kind: BoundaryKind, count: usize, seed: u64) -> Vec<BoundaryPoint> {
    let parts: Vec<Vec<BoundaryPoint>> = chunks(count).map(|(k, len)| chunk_points(kind, seed, k, len)).collect();
    parts.into_iter().flatten().collect()
}

/// Normalisation phase `kappa`, entering the constant as `kappa^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::One, Phase::I, Phase::MinusOne, Phase::MinusI];

    pub fn value(self) -> Complex64 {
        match self {
            Phase::One => Complex64::new(1.0, 0.0),
            Phase::I => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    pub fn pow(self, n: u32) -> Complex64 {
        self.value().powu(n)
    }
}

/// The phase fixed by calibration against the exact ball oracles.
pub const PINNED_PHASE: Phase = Phase::I;

pub const CONVENTION: &str = "C = V * i^n / n, V the contact volume of S1, ds the K-invariant probability on S1";

/// `C = V kappa^n / n`.
pub fn trace_formula_constant(desc: &DomainDescriptor, phase: Phase) -> Result<Complex64> {
    Ok(phase.pow(desc.n) * (dixmier_constant(desc)? / desc.n as f64))
}

/// Picks the phase minimising `sum |kappa^n raw - reference|` over
/// observations `(n, raw, reference)`, with `raw` the estimate at `kappa = 1`.
pub fn calibrate_phase(observations: &[(u32, Complex64, f64)]) -> Phase {
    let cost = |p: Phase| -> f64 { observations.iter().map(|&(n, raw, t)| (p.pow(n) * raw - t).norm()).sum() };
    Phase::ALL
        .into_iter()
        .min_by(|a, b| cost(*a).partial_cmp(&cost(*b)).unwrap())
        .expect("four candidates")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceFormulaRhs {
    pub value: f64,
    pub value_imag: f64,
    /// Standard error of the complex mean, scaled by `|C|`.
    pub stderr: f64,
    pub constant: [f64; 2],
    pub convention: String,
    pub samples: usize,
    pub seed: u64,
}

/// Mean and standard error of `prod_j {f^_j, g^_j}` over `count` samples.
pub fn trace_formula_integral(
    pairs: &[(SymbolPolynomial, SymbolPolynomial)],
    desc: &DomainDescriptor,
    count: usize,
    seed: u64,
) -> Result<(Complex64, f64)> {
    if pairs.len() != desc.n as usize {
        return Err(Error::PairCount { expected: desc.n as usize, got: pairs.len() });
    }
    if count < 2 {
        return Err(Error::InsufficientSamples("at least two samples".into()));
    }
    let kind = BoundaryKind::from_family(desc.family)?;
    let kernels = pairs
        .iter()
        .map(|(f, g)| {
            let fh = poisson_extension_symbol(f, kind)?;
            let gh = poisson_extension_symbol(g, kind)?;
            BracketKernel::new(&fh, &gh, kind)
        })
        .collect::<Result<Vec<_>>>()?;
    let partial: Vec<Result<(Complex64, f64)>> = chunks(count)
        .map(|(k, len)| {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut sq = 0.0;
            for p in chunk_points(kind, seed, k, len) {
                let frame = RealFrame::at(&p)?;
                let x = p.coords();
                let v: Complex64 = kernels.iter().map(|kn| kn.eval_in(&frame, &x)).product();
                sum += v;
                sq += v.norm_sqr();
            }
            Ok((sum, sq))
        })
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sq = 0.0;
    for p in partial {
        let (s, q) = p?;
        sum += s;
        sq += q;
    }
    let n = count as f64;
    let mean = sum / n;
    let var = ((sq - n * mean.norm_sqr()) / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

/// `C int_{S1} prod_j {f^_j, g^_j} ds` for `n` ambient symbol pairs, with the
/// pinned phase.
pub fn trace_formula_rhs(
    pairs: &[(SymbolPolynomial, SymbolPolynomial)],
    desc: &DomainDescriptor,
    count: usize,
    seed: u64,
) -> Result<TraceFormulaRhs> {
    let (mean, err) = trace_formula_integral(pairs, desc, count, seed)?;
    let c = trace_formula_constant(desc, PINNED_PHASE)?;
    let v = c * mean;
    Ok(TraceFormulaRhs {
        value: v.re,
        value_imag: v.im,
        stderr: err * c.norm(),
        constant: [c.re, c.im],
        convention: CONVENTION.to_string(),
        samples: count,
        seed,
    })
}
