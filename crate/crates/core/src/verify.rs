//! Named end-to-end checks shared by the acceptance suite and the CLI.

use crate::catalog::{descriptor_for, peirce1_data, standard_instances, DomainFamily};
use crate::combinatorics::{binomial, enumerate_partitions, multivariate_pochhammer, rising_pochhammer, Partition};
use crate::conical::{
    adjoint_shift_coefficient, conical_norm_sq, conical_polynomial_expand, fock_norm_sq, graded_dimension,
    rep_dimension, ConicalContext,
};
use crate::error::{Error, Result};
use crate::geometry::{
    a2_branch, ball_shell_asymptote, ball_shell_oracle, ball_shell_sum, calibrate_phase, gamma_quotient_branch,
    poisson_extension_symbol, trace_formula_constant, trace_formula_integral, trace_formula_rhs, BoundaryKind, Phase,
    PINNED_PHASE,
};
use crate::models::haar::haar_sub_toeplitz;
use crate::models::{
    build_ball_model, build_rank_one_model, build_sub_hardy_model, derivative_operator, level_function,
    sub_toeplitz_linear, toeplitz_matrix, unitary_weight, TruncatedOperator,
};
use crate::seqclass::{membership_test, norm_ratio_samples, STANDARD_WINDOWS};
use crate::spectral::{dixmier_from_operator, macaev_diagnostic, singular_values, OperatorDixmier};
use crate::symbol::{coeff_int, coeff_re, SymbolPolynomial};
use crate::{rat, to_f64, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::{Arc, Mutex};
use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    /// Monte-Carlo samples per boundary integral.
    pub samples: usize,
    pub seed: u64,
    /// Truncation of the rank-two commutator decay check (at least 25).
    pub decay_truncation: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: 1_000_000, seed: 20240917, decay_truncation: 25 }
    }
}

/// Identifiers and names of all checks, in run order.
pub const CHECKS: [(&str, &str); 16] = [
    ("01", "norm-identity"),
    ("02", "pochhammer-reciprocity"),
    ("03", "dimension-sums"),
    ("04", "adjoint-shift-norms"),
    ("05", "class-s-membership"),
    ("06", "resolvent-partial-sums"),
    ("07", "conjugate-symbol-derivative"),
    ("08", "sub-toeplitz-conical-action"),
    ("09", "commutator-decay"),
    ("10", "ball-dixmier-trace"),
    ("10b", "ball-dixmier-trace-shell-oracle"),
    ("11", "boundary-integral"),
    ("11b", "boundary-integral-second-family"),
    ("12", "constant-branches"),
    ("13", "rank-two-trend"),
    ("14", "haar-compression-decay"),
];

struct Outcome {
    computed: f64,
    reference: f64,
    tolerance: f64,
    pass: bool,
    detail: String,
}

fn exact(failures: usize, checked: usize, what: &str) -> Outcome {
    Outcome {
        computed: failures as f64,
        reference: 0.0,
        tolerance: 0.0,
        pass: failures == 0 && checked > 0,
        detail: format!("{failures} mismatches among {checked} {what}"),
    }
}

fn within(computed: f64, reference: f64, tolerance: f64, detail: String) -> Outcome {
    Outcome { computed, reference, tolerance, pass: (computed - reference).abs() <= tolerance, detail }
}

/// Shared state between checks: expensive spectral estimates computed once.
#[derive(Default)]
pub struct Context {
    ball2: Mutex<Option<Arc<OperatorDixmier>>>,
}

impl Context {
    fn ball2(&self) -> Result<Arc<OperatorDixmier>> {
        let mut slot = self.ball2.lock().expect("poisoned");
        if let Some(v) = slot.as_ref() {
            return Ok(v.clone());
        }
        let v = Arc::new(ball_product_estimate(200)?);
        *slot = Some(v.clone());
        Ok(v)
    }
}

fn ball_commutator_product(m: u32, pairs: &[(SymbolPolynomial, SymbolPolynomial)]) -> Result<TruncatedOperator> {
    let d = pairs[0].0.nvars() as u32;
    let basis = build_ball_model(d, m)?;
    commutator_product(&move |f| toeplitz_matrix(&basis, f), pairs)
}

/// `prod_j [T_(f_j), T_(g_j)]` for a Toeplitz builder.
pub fn commutator_product(
    toeplitz: &dyn Fn(&SymbolPolynomial) -> Result<TruncatedOperator>,
    pairs: &[(SymbolPolynomial, SymbolPolynomial)],
) -> Result<TruncatedOperator> {
    let mut acc: Option<TruncatedOperator> = None;
    for (f, g) in pairs {
        let c = toeplitz(f)?.commutator(&toeplitz(g)?)?;
        acc = Some(match acc {
            None => c,
            Some(a) => a.multiply(&c)?,
        });
    }
    acc.ok_or_else(|| Error::Precondition("empty pair list".into()))
}

fn z(n: usize, k: usize) -> SymbolPolynomial {
    SymbolPolynomial::var(n, k)
}

fn diagonal_pairs(d: usize) -> Vec<(SymbolPolynomial, SymbolPolynomial)> {
    (0..d).map(|k| (z(d, k).conj(), z(d, k))).collect()
}

fn second_family() -> Vec<(SymbolPolynomial, SymbolPolynomial)> {
    let u = &z(2, 0) + &z(2, 1);
    vec![(u.conj(), z(2, 0)), (z(2, 0).conj(), u)]
}

fn ball_product_estimate(m: u32) -> Result<OperatorDixmier> {
    Ok(dixmier_from_operator(&ball_commutator_product(m, &diagonal_pairs(2))?)?.0)
}

fn norm_identity() -> Result<Outcome> {
    let start = Instant::now();
    let (mut checked, mut failures) = (0, 0);
    for fam in [DomainFamily::TypeI { r: 2, s: 2 }, DomainFamily::TypeI { r: 2, s: 3 }] {
        let ctx = ConicalContext::new(descriptor_for(fam)?);
        for m in 0..=6 {
            for lambda in enumerate_partitions(2, m) {
                let lhs = conical_norm_sq(&ctx, &lambda)?;
                let fock = fock_norm_sq(&conical_polynomial_expand(&ctx, &lambda)?)?;
                let rhs = fock / multivariate_pochhammer(&ctx.desc.rho, &lambda, ctx.desc.a);
                checked += 1;
                failures += usize::from(lhs != rhs);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut o = exact(failures, checked, "partitions with |lambda| <= 6");
    o.pass &= secs < 60.0;
    Ok(o)
}

fn reciprocity(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut failures) = (0, 0);
    while checked < 1000 {
        let m: u64 = rng.random_range(0..=14);
        let b: u64 = rng.random_range(0..=m);
        let x = rat(rng.random_range(-60..=60), rng.random_range(1..=24));
        if x.is_integer() && x <= rat(0, 1) && x > rat(-(m as i64), 1) {
            continue;
        }
        let lhs = rising_pochhammer(&(&x + rat(b as i64, 1)), m) / rising_pochhammer(&x, m);
        let rhs = rising_pochhammer(&(&x + rat(m as i64, 1)), b) / rising_pochhammer(&x, b);
        checked += 1;
        failures += usize::from(lhs != rhs);
    }
    Ok(exact(failures, checked, "random (x, b, m)"))
}

fn dimension_sums() -> Result<Outcome> {
    let (mut checked, mut failures) = (0, 0);
    for fam in standard_instances() {
        let desc = descriptor_for(fam)?;
        if desc.r > 3 {
            continue;
        }
        let ctx = ConicalContext::new(desc.clone());
        for m in 0..=8u32 {
            let mut total = num_bigint::BigInt::from(0);
            for lambda in enumerate_partitions(desc.r as usize, m) {
                total += rep_dimension(&ctx, &lambda)?;
            }
            let want = binomial((desc.d + m - 1) as u64, m as u64);
            checked += 1;
            failures += usize::from(BigRational::from_integer(total) != want);
        }
        if let DomainFamily::TypeI { r, s } = fam {
            for m in 0..=12u32 {
                let want = binomial((m + r - 1) as u64, m as u64) * binomial((m + s - 1) as u64, m as u64);
                checked += 1;
                failures += usize::from(BigRational::from_integer(graded_dimension(&ctx, m)?) != want);
            }
        }
    }
    Ok(exact(failures, checked, "dimension identities"))
}

fn adjoint_shift_norms(seed: u64) -> Result<Outcome> {
    let fams = [
        DomainFamily::TypeI { r: 2, s: 2 },
        DomainFamily::TypeI { r: 2, s: 3 },
        DomainFamily::TypeIII { r: 2 },
        DomainFamily::TypeII { r: 2, eps: 0 },
    ];
    let ctxs = fams.iter().map(|f| Ok(ConicalContext::new(descriptor_for(*f)?))).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for t in 0..500 {
        let ctx = &ctxs[t % ctxs.len()];
        let l: usize = rng.random_range(1..=2);
        let (lambda, k) = if l == 1 {
            let m = rng.random_range(1..=24u32);
            (Partition::new(vec![m])?, rng.random_range(1..=m))
        } else {
            let p2 = rng.random_range(1..=12u32);
            let p1 = rng.random_range(p2..=24u32);
            (Partition::new(vec![p1, p2])?, rng.random_range(1..=p2))
        };
        let c = adjoint_shift_coefficient(ctx, &lambda, l, k)?;
        let lower = conical_norm_sq(ctx, &lambda.subtract_block(l, k)?)?;
        failures += usize::from(c * lower != conical_norm_sq(ctx, &lambda)?);
    }
    Ok(exact(failures, 500, "random (lambda, l, k)"))
}

fn class_s_membership() -> Result<Outcome> {
    let mut instances = Vec::new();
    for (fam, take) in [(DomainFamily::TypeI { r: 2, s: 2 }, 10), (DomainFamily::TypeI { r: 2, s: 3 }, 10)] {
        let mut found = Vec::new();
        'outer: for k in 1..=3u32 {
            for a in 0..=2u32 {
                for g in 0..=2u32 {
                    if k + g >= a {
                        found.push((fam, a, g, k));
                        if found.len() == take {
                            break 'outer;
                        }
                    }
                }
            }
        }
        instances.extend(found);
    }
    let part = |x: u32| if x == 0 { Ok(Partition::empty()) } else { Partition::new(vec![x]) };
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for &(fam, a, g, k) in &instances {
        let ctx = ConicalContext::new(descriptor_for(fam)?);
        let samples = norm_ratio_samples(&ctx, &part(a)?, &part(g)?, k, &STANDARD_WINDOWS)?;
        let rep = membership_test(&samples, &STANDARD_WINDOWS)?;
        let growth = rep.fits.windows(2).map(|w| w[1].remainder_bound / w[0].remainder_bound.max(1e-300)).fold(0.0, f64::max);
        worst = worst.max(growth);
        failures += usize::from(!(rep.positive && rep.bounded));
    }
    let mut o = exact(failures, instances.len(), "(alpha, gamma, k) instances");
    o.detail += &format!(", largest window-to-window growth of m^2 |w_m| bound {worst:.3}");
    Ok(o)
}

fn resolvent_partial_sums() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for fam in [DomainFamily::TypeI { r: 2, s: 2 }, DomainFamily::Ball { d: 3 }] {
        let desc = descriptor_for(fam)?;
        let n = desc.n as f64;
        let ctx = ConicalContext::new(desc);
        let (lo, hi) = (1_000usize, 100_000usize);
        let (mut j, mut sum, mut m) = (0usize, 0.0f64, 0u32);
        let (mut min, mut max) = (f64::MAX, 0.0f64);
        while j < hi {
            let dim = to_f64(&BigRational::from_integer(graded_dimension(&ctx, m)?)) as usize;
            let lam = 1.0 / (m as f64 + 1.0);
            for _ in 0..dim {
                j += 1;
                sum += lam;
                if j >= lo {
                    let ratio = sum / (j as f64).powf(1.0 - 1.0 / n);
                    min = min.min(ratio);
                    max = max.max(ratio);
                }
                if j == hi {
                    break;
                }
            }
            m += 1;
        }
        let var = max / min - 1.0;
        worst = worst.max(var);
        parts.push(format!("{fam}: {:.2}%", 100.0 * var));
    }
    Ok(Outcome {
        computed: worst,
        reference: 0.0,
        tolerance: 0.05,
        pass: worst < 0.05,
        detail: format!("relative spread of S_j / j^(1-1/n) over j in [1e3, 1e5]: {}", parts.join(", ")),
    })
}

fn conjugate_symbol_derivative() -> Result<Outcome> {
    let (d, m) = (2u32, 15u32);
    let basis = build_ball_model(d, m)?;
    let u_list = [z(2, 0), z(2, 1), &z(2, 0) + &z(2, 1).scale(&coeff_int(0, 1))];
    let resolvent = level_function(&basis, |k| rat(1, (k + d - 1).max(1) as i64));
    let (mut checked, mut failures) = (0, 0);
    for u in &u_list {
        let adj = toeplitz_matrix(&basis, u)?.adjoint();
        let mut deriv = TruncatedOperator::zero(basis.clone());
        for k in 0..d as usize {
            let c = u.coefficient(&crate::symbol::Monomial {
                z: (0..d as usize).map(|i| u32::from(i == k)).collect(),
                zbar: vec![0; d as usize],
            });
            deriv = deriv.add(&derivative_operator(&basis, k)?.scale(&c.conj()))?;
        }
        let rhs = deriv.multiply(&resolvent)?;
        let v = adj.valid_degree().min(rhs.valid_degree());
        checked += 1;
        failures += usize::from(!adj.block_eq(&rhs, v));
    }
    let mut o = exact(failures, checked, "linear symbols on the degree <= 14 block");
    o.detail += " (resolvent at the source degree)";
    Ok(o)
}

fn sub_toeplitz_conical_action() -> Result<Outcome> {
    let m_max = 12u32;
    let sub = build_sub_hardy_model(2, 2, m_max)?;
    let rank_one = build_rank_one_model(2, 2, m_max)?;
    let ctx = ConicalContext::new(descriptor_for(DomainFamily::TypeI { r: 2, s: 2 })?);
    let s = sub_toeplitz_linear(&sub, 0, 0)?;
    let s_adj = s.adjoint();
    let t_adj = toeplitz_matrix(&rank_one, &(&z(4, 0) * &z(4, 2)).conj())?;
    let mut failures = 0;
    for m in 1..=m_max {
        let j = sub.position(&[m, 0, m, 0]).expect("conical monomial");
        let i = sub.position(&[m - 1, 0, m - 1, 0]).expect("conical monomial");
        let c = adjoint_shift_coefficient(&ctx, &Partition::new(vec![m])?, 1, 1)?;
        failures += usize::from(s_adj.column(j) != [(i, coeff_re(c.clone()))]);
        let ratio = unitary_weight(&ctx.desc, m - 1) / unitary_weight(&ctx.desc, m);
        failures += usize::from(t_adj.column(j) != [(i, coeff_re(c * ratio))]);
    }
    // orthonormal multiplier form: S_u = T_u diag(sqrt((m + r a/2)/(m + a/2))) on the source level
    let tu = toeplitz_matrix(&rank_one, &(&z(4, 0) * &z(4, 2)))?.with_valid_degree(s.valid_degree());
    let a = s.to_dense_orthonormal();
    let b = tu.to_dense_orthonormal();
    let mut dev: f64 = 0.0;
    for col in 0..a.ncols() {
        let m = sub.element(col).degree as f64;
        let mult = ((m + 2.0) / (m + 1.0)).sqrt();
        for row in 0..a.nrows() {
            dev = dev.max((a[(row, col)] - b[(row, col)] * mult).norm());
        }
    }
    let mut o = exact(failures + usize::from(dev > 1e-12), 2 * m_max as usize + 1, "conical-line entries and the multiplier form");
    o.detail += &format!(", multiplier-form deviation {dev:.1e}");
    Ok(o)
}

fn commutator_decay(m: u32) -> Result<Outcome> {
    let sub = build_sub_hardy_model(2, 2, m)?;
    let s = sub_toeplitz_linear(&sub, 0, 0)?;
    let c = s.commutator(&s.adjoint())?;
    let report = singular_values(&c)?;
    let diag = macaev_diagnostic(&report, 3)?;
    let mut o = within(
        diag.slope,
        -1.0 / 3.0,
        0.1,
        format!(
            "M = {m}, {} valid values of {}, sup j^(1/3) lambda_j = {:.4}, decade sups {:?}",
            report.valid_count,
            report.values.len(),
            diag.sup_stat,
            diag.decade_sups.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>()
        ),
    );
    o.pass &= diag.bounded && m >= 25;
    Ok(o)
}

fn ball_dixmier(ctx: &Context, reference: f64) -> Result<Outcome> {
    let est = ctx.ball2()?;
    Ok(within(
        est.limit_re,
        reference,
        0.1 * reference,
        format!("M = 200, {} valid eigenvalues, fit stderr {:.2e}", est.valid_count, est.stderr),
    ))
}

fn ball_dixmier_oracle(ctx: &Context) -> Result<Outcome> {
    let mut o = ball_dixmier(ctx, to_f64(&ball_shell_oracle(2)))?;
    let mut bad = 0;
    for m in 0..=30u32 {
        let direct: BigRational = (0..=m)
            .map(|a| {
                let f = |x: u32| rat(x as i64 + 1, m as i64 + 2) - rat(x as i64, m as i64 + 1);
                f(a) * f(m - a)
            })
            .sum();
        bad += usize::from(direct != ball_shell_sum(2, m));
    }
    let ms = to_f64(&(ball_shell_sum(2, 20000) * rat(20000, 1)));
    let shell_ok = bad == 0 && ball_shell_asymptote(2) == rat(1, 6) && (ms - 1.0 / 6.0).abs() < 1e-4;
    o.pass &= shell_ok;
    o.detail += &format!(
        "; shell sums s_m exact for m <= 30 ({bad} mismatches), m s_m at m = 20000: {ms:.6}, lim m s_m = 1/6, log-mean limit (1/6)/2 = 1/12"
    );
    Ok(o)
}

fn boundary_integral(ctx: &Context, opts: &VerifyOptions) -> Result<Outcome> {
    let est = ctx.ball2()?;
    let d2 = descriptor_for(DomainFamily::Ball { d: 2 })?;
    let d3 = descriptor_for(DomainFamily::Ball { d: 3 })?;
    let (m2, _) = trace_formula_integral(&diagonal_pairs(2), &d2, opts.samples, opts.seed)?;
    let (m3, _) = trace_formula_integral(&diagonal_pairs(3), &d3, opts.samples, opts.seed)?;
    let raw2 = m2 * trace_formula_constant(&d2, Phase::One)?;
    let raw3 = m3 * trace_formula_constant(&d3, Phase::One)?;
    let phase = calibrate_phase(&[(2, raw2, est.limit_re), (3, raw3, to_f64(&ball_shell_oracle(3)))]);
    let rhs = trace_formula_rhs(&diagonal_pairs(2), &d2, opts.samples, opts.seed)?;
    let tol = 0.1 * est.limit_re.abs() + rhs.stderr + est.stderr;
    let mut o = within(
        rhs.value,
        est.limit_re,
        tol,
        format!(
            "Ball(2): boundary integral {:.5} +- {:.1e} ({} samples) vs spectral {:.5}; calibrated phase {phase:?}, pinned {PINNED_PHASE:?}",
            rhs.value, rhs.stderr, opts.samples, est.limit_re
        ),
    );
    o.pass &= phase == PINNED_PHASE;
    Ok(o)
}

fn boundary_integral_second_family(opts: &VerifyOptions) -> Result<Outcome> {
    let pairs = second_family();
    let est = dixmier_from_operator(&ball_commutator_product(200, &pairs)?)?.0;
    let d2 = descriptor_for(DomainFamily::Ball { d: 2 })?;
    let rhs = trace_formula_rhs(&pairs, &d2, opts.samples, opts.seed)?;
    let tol = 0.1 * est.limit_re.abs() + rhs.stderr + est.stderr;
    Ok(within(
        rhs.value,
        est.limit_re,
        tol,
        format!(
            "f = conj(z1 + z2), g = z1 with its adjoint pair: boundary integral {:.5} +- {:.1e} vs spectral {:.5} (M = 200)",
            rhs.value, rhs.stderr, est.limit_re
        ),
    ))
}

fn constant_branches() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for b in 0..=5u32 {
        for fam in [DomainFamily::Ball { d: b + 1 }, DomainFamily::TypeI { r: 1, s: b + 1 }] {
            let desc = descriptor_for(fam)?;
            worst = worst.max((gamma_quotient_branch(&desc)? / a2_branch(&desc) - 1.0).abs());
        }
    }
    let (mut rows, mut zv_fail) = (0, 0);
    for fam in standard_instances() {
        let desc = descriptor_for(fam)?;
        if desc.a == 2 {
            continue;
        }
        let data = peirce1_data(&desc)?;
        rows += 1;
        zv_fail += usize::from(data.p_v.map(|p| data.r_v * p) != Some(desc.r * desc.a + desc.b));
    }
    Ok(Outcome {
        computed: worst,
        reference: 0.0,
        tolerance: 1e-12,
        pass: worst <= 1e-12 && zv_fail == 0 && rows > 0,
        detail: format!("max relative branch gap for r = 1, b = 0..5; r_V p_V = r a + b fails on {zv_fail} of {rows} rows with a != 2"),
    })
}

fn rank_two_trend(opts: &VerifyOptions) -> Result<Outcome> {
    let kind = BoundaryKind::TypeI { r: 2, s: 2 };
    let desc = descriptor_for(DomainFamily::TypeI { r: 2, s: 2 })?;
    let us = [z(4, 0), z(4, 1), z(4, 2)];
    let pairs: Vec<_> = us.iter().map(|u| (u.conj(), u.clone())).collect();
    let rhs = trace_formula_rhs(&pairs, &desc, opts.samples, opts.seed)?;
    let hats = pairs
        .iter()
        .map(|(f, g)| Ok((poisson_extension_symbol(f, kind)?, poisson_extension_symbol(g, kind)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut errs = Vec::new();
    let mut ests = Vec::new();
    for m in [15u32, 20, 25] {
        let basis = build_rank_one_model(2, 2, m)?;
        let op = commutator_product(&|f| toeplitz_matrix(&basis, f), &hats)?;
        let est = dixmier_from_operator(&op)?.0;
        errs.push((est.limit_re - rhs.value).abs() / rhs.value.abs());
        ests.push(est.limit_re);
    }
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    Ok(Outcome {
        computed: errs[2],
        reference: 0.0,
        tolerance: f64::NAN,
        pass: monotone,
        detail: format!(
            "boundary integral {:.5} +- {:.1e}; log-mean estimates {:?} at M = 15, 20, 25; relative errors {:?}",
            rhs.value,
            rhs.stderr,
            ests.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>(),
            errs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>()
        ),
    })
}

fn haar_compression_decay() -> Result<Outcome> {
    let m = 16u32;
    let sub = build_sub_hardy_model(2, 2, m)?;
    let rank_one = build_rank_one_model(2, 2, m)?;
    let f = &z(4, 0).conj() * &z(4, 0);
    let s = haar_sub_toeplitz(&sub, &f)?;
    let fh = poisson_extension_symbol(&f, BoundaryKind::TypeI { r: 2, s: 2 })?;
    let t = toeplitz_matrix(&rank_one, &fh)?.with_valid_degree(s.valid_degree());
    if sub.elements().iter().zip(rank_one.elements()).any(|(a, b)| a.label != b.label) {
        return Err(Error::Consistency("sub-Hardy and rank-one labels disagree".into()));
    }
    let diff = s.to_dense_orthonormal() - t.to_dense_orthonormal();
    let mut sv: Vec<f64> = diff.singular_values().iter().copied().filter(|x| *x > 1e-13).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let report = crate::spectral::SpectralReport::from_values(sv, false);
    let diag = macaev_diagnostic(&report, 3)?;
    Ok(Outcome {
        computed: diag.slope,
        reference: -1.0 / 3.0,
        tolerance: 0.0,
        pass: diag.slope <= -1.0 / 3.0,
        detail: format!("M = {m}, {} nonzero singular values of the difference, largest {:.4}", report.values.len(), report.values[0]),
    })
}

/// Run one check by id.
pub fn run_check(id: &str, ctx: &Context, opts: &VerifyOptions) -> CheckResult {
    let name = CHECKS.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown");
    let start = Instant::now();
    let outcome = match id {
        "01" => norm_identity(),
        "02" => reciprocity(opts.seed),
        "03" => dimension_sums(),
        "04" => adjoint_shift_norms(opts.seed),
        "05" => class_s_membership(),
        "06" => resolvent_partial_sums(),
        "07" => conjugate_symbol_derivative(),
        "08" => sub_toeplitz_conical_action(),
        "09" => commutator_decay(opts.decay_truncation),
        "10" => ball_dixmier(ctx, to_f64(&ball_shell_asymptote(2))),
        "10b" => ball_dixmier_oracle(ctx),
        "11" => boundary_integral(ctx, opts),
        "11b" => boundary_integral_second_family(opts),
        "12" => constant_branches(),
        "13" => rank_two_trend(opts),
        "14" => haar_compression_decay(),
        other => Err(Error::Precondition(format!("unknown check '{other}'"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(o) => CheckResult {
            id: id.to_string(),
            name: name.to_string(),
            computed: o.computed,
            reference: o.reference,
            tolerance: o.tolerance,
            pass: o.pass,
            detail: o.detail,
            seconds,
        },
        Err(e) => CheckResult {
            id: id.to_string(),
            name: name.to_string(),
            computed: f64::NAN,
            reference: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
            detail: format!("error: {e}"),
            seconds,
        },
    }
}

/// Run every check in order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CheckResult> {
    let ctx = Context::default();
    CHECKS.iter().map(|(id, _)| run_check(id, &ctx, opts)).collect()
}
