//! Singular values and eigenvalues of truncated operators, Macaev-ideal
//! diagnostics and Dixmier-trace estimation by logarithmic means.

use crate::error::{Error, Result};
use crate::models::TruncatedOperator;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SpectralMetadata {
    pub model: String,
    pub truncation: u32,
    pub valid_degree: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Values sorted by decreasing magnitude (ties keep production order).
/// `values` are nonnegative unless `signed` is set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub values: Vec<f64>,
    pub valid_count: usize,
    pub signed: bool,
    pub metadata: SpectralMetadata,
}

impl SpectralReport {
    /// A report over a synthetic sequence; every value counts as valid.
    pub fn from_values(mut values: Vec<f64>, signed: bool) -> Self {
        sort_by_magnitude(&mut values);
        let valid_count = values.len();
        SpectralReport { values, valid_count, signed, metadata: SpectralMetadata::default() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.metadata.label = Some(label.into());
        self
    }

    pub fn valid_values(&self) -> &[f64] {
        &self.values[..self.valid_count]
    }

    /// `|lambda_j|` over the valid window.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.valid_values().iter().map(|x| x.abs()).collect()
    }
}

fn sort_by_magnitude(values: &mut [f64]) {
    values.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap_or(std::cmp::Ordering::Equal));
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the sparsity graph of the valid block, each
/// as a sorted index list, ordered by smallest member.
fn components(n: usize, triplets: &[(usize, usize, Complex64)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    for &(i, j, _) in triplets {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

#[derive(Clone, Copy)]
enum Mode {
    Singular,
    Hermitian,
    AntiHermitian,
}

fn extract(op: &TruncatedOperator, mode: Mode) -> Result<SpectralReport> {
    let n = op.valid_dimension();
    if n == 0 {
        return Err(Error::EmptySpectrum);
    }
    let triplets = op.orthonormal_triplets();
    let comps = components(n, &triplets);
    let mut slot = vec![(0usize, 0usize); n];
    for (c, members) in comps.iter().enumerate() {
        for (k, &i) in members.iter().enumerate() {
            slot[i] = (c, k);
        }
    }
    let mut blocks: Vec<DMatrix<Complex64>> =
        comps.iter().map(|m| DMatrix::from_element(m.len(), m.len(), Complex64::new(0.0, 0.0))).collect();
    for &(i, j, v) in &triplets {
        let (c, a) = slot[i];
        let (_, b) = slot[j];
        blocks[c][(a, b)] += v;
    }
    let per_block: Vec<Vec<f64>> = blocks
        .into_par_iter()
        .map(|a| match mode {
            Mode::Singular => {
                if a.nrows() == 1 {
                    vec![a[(0, 0)].norm()]
                } else {
                    a.singular_values().iter().copied().collect()
                }
            }
            Mode::Hermitian | Mode::AntiHermitian => {
                let h = match mode {
                    Mode::Hermitian => (&a + a.adjoint()) * Complex64::new(0.5, 0.0),
                    _ => (&a - a.adjoint()) * Complex64::new(0.0, -0.5),
                };
                if h.nrows() == 1 {
                    vec![h[(0, 0)].re]
                } else {
                    h.symmetric_eigenvalues().iter().copied().collect()
                }
            }
        })
        .collect();

    let top = op.valid_degree().min(op.basis().truncation() as i64);
    let level_preserving = op.shift() == (0, 0);
    let mut threshold: f64 = 0.0;
    if level_preserving {
        for (members, vals) in comps.iter().zip(&per_block) {
            if op.basis().element(members[0]).degree as i64 == top {
                threshold = vals.iter().fold(threshold, |t, v| t.max(v.abs()));
            }
        }
    }
    let mut values: Vec<f64> = per_block.into_iter().flatten().collect();
    sort_by_magnitude(&mut values);
    let valid_count =
        if level_preserving { values.iter().filter(|v| v.abs() > threshold).count() } else { values.len() };
    Ok(SpectralReport {
        values,
        valid_count,
        signed: !matches!(mode, Mode::Singular),
        metadata: SpectralMetadata {
            model: op.basis().kind().to_string(),
            truncation: op.basis().truncation(),
            valid_degree: op.valid_degree(),
            label: None,
        },
    })
}

/// Singular values of the valid block in the orthonormal frame.
///
/// For operators preserving the grading, `valid_count` counts the values
/// exceeding every value of the top valid level; otherwise all values count.
pub fn singular_values(op: &TruncatedOperator) -> Result<SpectralReport> {
    extract(op, Mode::Singular)
}

/// Eigenvalues of the hermitian part `(T + T*)/2` of the valid block.
pub fn hermitian_eigenvalues(op: &TruncatedOperator) -> Result<SpectralReport> {
    extract(op, Mode::Hermitian)
}

/// Eigenvalues of `(T - T*)/2i`.
pub fn anti_hermitian_eigenvalues(op: &TruncatedOperator) -> Result<SpectralReport> {
    extract(op, Mode::AntiHermitian)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MacaevDiagnostic {
    /// `sup_j j^{1/n} |lambda_j|` over the valid window.
    pub sup_stat: f64,
    /// Least-squares slope of `log |lambda_j|` against `log j`.
    pub slope: f64,
    /// `(j, S_j / log j)` for `n = 1`, `(j, S_j / j^{1 - 1/n})` otherwise, on a geometric grid.
    pub partial_sum_ratio: Vec<(usize, f64)>,
    /// The supremum restricted to each decade `[10^k, 10^{k+1})`.
    pub decade_sups: Vec<f64>,
    /// No decade supremum exceeds twice the previous one.
    pub bounded: bool,
}

pub fn macaev_diagnostic(report: &SpectralReport, n: u32) -> Result<MacaevDiagnostic> {
    if n == 0 {
        return Err(Error::Precondition("Macaev index must be >= 1".into()));
    }
    let lam = report.magnitudes();
    if lam.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let p = 1.0 / n as f64;
    let mut sup_stat: f64 = 0.0;
    let mut decade_sups = Vec::new();
    let mut decade = 0u32;
    let mut current: f64 = 0.0;
    for (k, &l) in lam.iter().enumerate() {
        let j = k + 1;
        let d = (j as f64).log10().floor() as u32;
        if d != decade {
            decade_sups.push(current);
            current = 0.0;
            decade = d;
        }
        let s = (j as f64).powf(p) * l;
        sup_stat = sup_stat.max(s);
        current = current.max(s);
    }
    decade_sups.push(current);
    let bounded = decade_sups.windows(2).all(|w| w[1] <= 2.0 * w[0] + 1e-12);

    let pts: Vec<(f64, f64)> = lam
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.0)
        .map(|(k, &l)| (((k + 1) as f64).ln(), l.ln()))
        .collect();
    let slope = if pts.len() >= 2 { least_squares(&pts).1 } else { f64::NAN };

    let mut partial_sum_ratio = Vec::new();
    let mut sum = 0.0;
    let mut next = 2usize;
    for (k, &l) in lam.iter().enumerate() {
        sum += l;
        let j = k + 1;
        if j == next || j == lam.len() && j >= 2 {
            let jf = j as f64;
            let den = if n == 1 { jf.ln() } else { jf.powf(1.0 - p) };
            partial_sum_ratio.push((j, sum / den));
            next = (next as f64 * 1.25).ceil() as usize;
        }
    }
    Ok(MacaevDiagnostic { sup_stat, slope, partial_sum_ratio, decade_sups, bounded })
}

/// Ordinary least squares `y = t + k x`; returns `(t, k, stderr(t))`.
fn least_squares(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let k = sxy / sxx;
    let t = my - k * mx;
    let stderr = if pts.len() > 2 {
        let rss: f64 = pts.iter().map(|p| (p.1 - t - k * p.0).powi(2)).sum();
        let sumx2: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        (rss / (n - 2.0) * sumx2 / (n * sxx)).sqrt()
    } else {
        0.0
    };
    (t, k, stderr)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DixmierEstimate {
    pub limit: f64,
    /// `(N, Lambda_N)` on the extrapolation grid, largest `N` first.
    pub fit_curve: Vec<(usize, f64)>,
    pub stderr: f64,
    /// Coefficient of `1/log N` in the fit.
    pub kappa: f64,
}

/// Minimum number of valid values accepted by [`dixmier_estimate`].
pub const MIN_VALID: usize = 100;

/// Log-means `Lambda_N = S_N / log N` on `N_k = ceil(N_max 2^-k)`, `k = 0..5`,
/// extrapolated with `Lambda_N = t + kappa / log N`. Signed reports are
/// summed with signs.
pub fn dixmier_estimate(report: &SpectralReport) -> Result<DixmierEstimate> {
    let vals = report.valid_values();
    if vals.len() < MIN_VALID {
        return Err(Error::InsufficientSamples(format!(
            "{} valid values, at least {MIN_VALID} needed",
            vals.len()
        )));
    }
    let mut partial = Vec::with_capacity(vals.len());
    let mut s = 0.0;
    for &v in vals {
        s += if report.signed { v } else { v.abs() };
        partial.push(s);
    }
    let n_max = vals.len() as f64;
    let fit_curve: Vec<(usize, f64)> = (0..6)
        .map(|k| {
            let n = (n_max / f64::powi(2.0, k)).ceil() as usize;
            (n, partial[n - 1] / (n as f64).ln())
        })
        .collect();
    let pts: Vec<(f64, f64)> = fit_curve.iter().map(|&(n, l)| (1.0 / (n as f64).ln(), l)).collect();
    let (limit, kappa, stderr) = least_squares(&pts);
    Ok(DixmierEstimate { limit, fit_curve, stderr, kappa })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorDixmier {
    pub limit_re: f64,
    pub limit_im: f64,
    pub stderr: f64,
    pub hermitian: DixmierEstimate,
    /// Present when the operator is not exactly self-adjoint.
    pub anti_hermitian: Option<DixmierEstimate>,
    pub valid_count: usize,
    pub metadata: SpectralMetadata,
}

/// `tr_w(T) = tr_w(H) + i tr_w(K)` with `H`, `K` the hermitian and
/// anti-hermitian parts, each estimated from its signed eigenvalues.
pub fn dixmier_from_operator(op: &TruncatedOperator) -> Result<(OperatorDixmier, SpectralReport)> {
    let h = hermitian_eigenvalues(op)?;
    let eh = dixmier_estimate(&h)?;
    let ek = if op.is_hermitian() { None } else { Some(dixmier_estimate(&anti_hermitian_eigenvalues(op)?)?) };
    let stderr = ek.as_ref().map_or(eh.stderr, |k| eh.stderr.hypot(k.stderr));
    Ok((
        OperatorDixmier {
            limit_re: eh.limit,
            limit_im: ek.as_ref().map_or(0.0, |k| k.limit),
            stderr,
            hermitian: eh,
            anti_hermitian: ek,
            valid_count: h.valid_count,
            metadata: h.metadata.clone(),
        },
        h,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_ball_model, build_rank_one_model, lambda_resolvent, level_function, toeplitz_matrix};
    use crate::rat;
    use crate::symbol::SymbolPolynomial;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn disk_commutator(m: u32) -> TruncatedOperator {
        let b = build_ball_model(1, m).unwrap();
        let z = SymbolPolynomial::var(1, 0);
        let t = toeplitz_matrix(&b, &z).unwrap();
        let ts = toeplitz_matrix(&b, &z.conj()).unwrap();
        ts.commutator(&t).unwrap()
    }

    #[test]
    fn trivial_spectra() {
        let b = build_ball_model(2, 3).unwrap();
        let zero = TruncatedOperator::zero(b.clone());
        let r = singular_values(&zero).unwrap();
        assert_eq!(r.values.len(), b.len());
        assert!(r.values.iter().all(|&v| v == 0.0));
        let circle = build_ball_model(1, 2).unwrap();
        let diag = level_function(&circle, |m| [rat(3, 1), rat(1, 1), rat(2, 1)][m as usize].clone());
        assert_eq!(singular_values(&diag).unwrap().values, vec![3.0, 2.0, 1.0]);
        let c = singular_values(&disk_commutator(12)).unwrap();
        assert_abs_diff_eq!(c.values[0], 1.0, epsilon = 1e-14);
        assert!(c.values[1..].iter().all(|v| v.abs() < 1e-14));
        assert_eq!(c.valid_count, 1);
    }

    #[test]
    fn eigen_modes() {
        let c = disk_commutator(10);
        let h = hermitian_eigenvalues(&c).unwrap();
        assert!(h.signed);
        assert_abs_diff_eq!(h.values[0], 1.0, epsilon = 1e-14);
        let k = anti_hermitian_eigenvalues(&c).unwrap();
        assert!(k.values.iter().all(|v| v.abs() < 1e-14));
        assert!(matches!(singular_values(&c.clone().with_valid_degree(-1)), Err(Error::EmptySpectrum)));
    }

    #[test]
    fn components_respect_blocks() {
        let b = build_ball_model(2, 8).unwrap();
        let f = &SymbolPolynomial::var(2, 0) * &SymbolPolynomial::var(2, 1).conj();
        let a = toeplitz_matrix(&b, &f).unwrap();
        let sparse = singular_values(&a).unwrap();
        let dense = a.to_dense_orthonormal().singular_values();
        let mut dv: Vec<f64> = dense.iter().copied().collect();
        dv.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (x, y) in sparse.values.iter().zip(&dv) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn macaev_examples() {
        for n in 1..4u32 {
            let vals: Vec<f64> = (1..=2000).map(|j| (j as f64).powf(-1.0 / n as f64)).collect();
            let d = macaev_diagnostic(&SpectralReport::from_values(vals, false), n).unwrap();
            assert_abs_diff_eq!(d.sup_stat, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(d.slope, -1.0 / n as f64, epsilon = 1e-10);
            assert!(d.bounded);
        }
        let vals: Vec<f64> = (1..=5000).map(|j| 1.0 / ((j + 1) as f64).ln()).collect();
        let d = macaev_diagnostic(&SpectralReport::from_values(vals, false), 1).unwrap();
        assert!(!d.bounded);
        assert!(d.decade_sups.windows(2).all(|w| w[1] > 2.0 * w[0]));
        assert!(macaev_diagnostic(&SpectralReport::from_values(vec![1.0], false), 0).is_err());
    }

    #[test]
    fn resolvent_is_in_weak_ideal() {
        let b = build_rank_one_model(2, 2, 30).unwrap();
        let r = singular_values(&lambda_resolvent(&b)).unwrap();
        let d = macaev_diagnostic(&r, 3).unwrap();
        assert!(d.bounded);
        let ratios: Vec<f64> = d.partial_sum_ratio.iter().map(|p| p.1).collect();
        let tail = &ratios[ratios.len() / 2..];
        let (lo, hi) = tail.iter().fold((f64::MAX, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
        assert!(hi / lo < 1.1, "S_j / j^(2/3) not stabilizing: {lo} .. {hi}");
    }

    #[test]
    fn dixmier_examples() {
        let harmonic: Vec<f64> = (1..=20000).map(|j| 1.0 / j as f64).collect();
        let e = dixmier_estimate(&SpectralReport::from_values(harmonic, false)).unwrap();
        assert_abs_diff_eq!(e.limit, 1.0, epsilon = 1e-3);
        assert_eq!(e.fit_curve.len(), 6);
        assert_eq!(e.fit_curve[5].0, 625);
        let geometric: Vec<f64> = (1..=500).map(|j| 0.5f64.powi(j)).collect();
        let e = dixmier_estimate(&SpectralReport::from_values(geometric, false)).unwrap();
        assert_abs_diff_eq!(e.limit, 0.0, epsilon = 1e-4);
        let short = SpectralReport::from_values(vec![1.0; 99], false);
        assert!(matches!(dixmier_estimate(&short), Err(Error::InsufficientSamples(_))));
    }

    #[test]
    fn ball_shell_product() {
        let b = build_ball_model(2, 200).unwrap();
        let z = |k| SymbolPolynomial::var(2, k);
        let c = |k| toeplitz_matrix(&b, &z(k).conj()).unwrap().commutator(&toeplitz_matrix(&b, &z(k)).unwrap()).unwrap();
        let t = c(0).multiply(&c(1)).unwrap();
        let (est, report) = dixmier_from_operator(&t).unwrap();
        assert!(est.anti_hermitian.is_none());
        assert!(report.valid_count >= MIN_VALID);
        // shell sums m s_m tend to 1/6, so log-means tend to 1/12
        assert!((est.limit_re - 1.0 / 12.0).abs() < 0.1 / 12.0, "{}", est.limit_re);
    }

    proptest! {
        #[test]
        fn estimate_is_linear_and_permutation_invariant(a in 0.1f64..10.0, seed in 0u64..1000) {
            let vals: Vec<f64> = (1..=400).map(|j| 1.0 / j as f64 + 1.0 / (j * j) as f64).collect();
            let base = dixmier_estimate(&SpectralReport::from_values(vals.clone(), false)).unwrap();
            let scaled = dixmier_estimate(&SpectralReport::from_values(vals.iter().map(|v| a * v).collect(), false)).unwrap();
            prop_assert!((scaled.limit - a * base.limit).abs() < 1e-9 * a.max(1.0));
            let mut shuffled = vals;
            let k = (seed as usize) % shuffled.len();
            shuffled.rotate_left(k);
            shuffled.reverse();
            let p = dixmier_estimate(&SpectralReport::from_values(shuffled, false)).unwrap();
            prop_assert!((p.limit - base.limit).abs() < 1e-12);
        }
    }
}
