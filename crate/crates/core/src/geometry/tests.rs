use super::*;
use crate::catalog::{descriptor_for, peirce1_data, DomainFamily};
use crate::symbol::{coeff_int, SymbolPolynomial};
use crate::{rat, to_f64};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn v(n: usize, k: usize) -> SymbolPolynomial {
    SymbolPolynomial::var(n, k)
}

fn gaussian(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    (0..d).map(|_| c(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect()
}

fn normalize(x: Vec<Complex64>) -> Vec<Complex64> {
    let n = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    x.into_iter().map(|z| z / n).collect()
}

fn dot(u: &[Complex64], w: &[Complex64]) -> Complex64 {
    u.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// Random orthonormal vectors orthogonal to `x`.
fn random_complement(rng: &mut ChaCha8Rng, x: &[Complex64]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    while out.len() + 1 < x.len() {
        let mut w = gaussian(rng, x.len());
        for b in std::iter::once(x.to_vec()).chain(out.iter().cloned()) {
            let p = dot(&w, &b);
            for (wi, bi) in w.iter_mut().zip(&b) {
                *wi -= p * bi;
            }
        }
        out.push(normalize(w));
    }
    out
}

type Curve = Box<dyn Fn(f64) -> Vec<Complex64>>;

/// Bracket from a random frame, curves on `S1` and central differences.
fn fd_bracket(phi: &SymbolPolynomial, psi: &SymbolPolynomial, p: &BoundaryPoint, rng: &mut ChaCha8Rng) -> Complex64 {
    let (curves, ambient): (Vec<Curve>, Vec<Vec<Complex64>>) = match p {
        BoundaryPoint::Ball { c: x } => {
            let mut curves: Vec<Curve> = Vec::new();
            let mut amb = Vec::new();
            for w in random_complement(rng, x) {
                for rot in [c(1.0, 0.0), c(0.0, 1.0)] {
                    let t: Vec<Complex64> = w.iter().map(|z| z * rot).collect();
                    amb.push(t.clone());
                    let x = x.clone();
                    curves.push(Box::new(move |h| normalize(x.iter().zip(&t).map(|(a, b)| a + b * h).collect())));
                }
            }
            (curves, amb)
        }
        BoundaryPoint::TypeI { xi1, xi2 } => {
            let mut curves: Vec<Curve> = Vec::new();
            let mut amb = Vec::new();
            let outer = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
                a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
            };
            for u in random_complement(rng, xi1) {
                for rot in [c(1.0, 0.0), c(0.0, 1.0)] {
                    let t: Vec<Complex64> = u.iter().map(|z| z * rot).collect();
                    amb.push(outer(&t, xi2));
                    let (a, b) = (xi1.clone(), xi2.clone());
                    curves.push(Box::new(move |h| {
                        let moved = normalize(a.iter().zip(&t).map(|(x, y)| x + y * h).collect());
                        moved.into_iter().chain(b.iter().copied()).collect()
                    }));
                }
            }
            for w in random_complement(rng, xi2) {
                for rot in [c(1.0, 0.0), c(0.0, 1.0)] {
                    let t: Vec<Complex64> = w.iter().map(|z| z * rot).collect();
                    amb.push(outer(xi1, &t));
                    let (a, b) = (xi1.clone(), xi2.clone());
                    curves.push(Box::new(move |h| {
                        let moved = normalize(b.iter().zip(&t).map(|(x, y)| x + y * h).collect());
                        a.iter().copied().chain(moved).collect()
                    }));
                }
            }
            (curves, amb)
        }
    };
    let h = 1e-5;
    let deriv = |f: &SymbolPolynomial| -> Vec<Complex64> {
        curves.iter().map(|g| (f.eval(&g(h)) - f.eval(&g(-h))) / (2.0 * h)).collect()
    };
    let m = ambient.len();
    let omega = DMatrix::from_fn(m, m, |k, l| {
        ((dot(&ambient[k], &ambient[l]) - dot(&ambient[l], &ambient[k])) / c(0.0, 1.0)).re
    });
    let inv = omega.try_inverse().unwrap().map(|x| c(x, 0.0));
    let zeta = inv * DVector::from_vec(deriv(phi));
    zeta.iter().zip(deriv(psi)).map(|(a, b)| a * b).sum()
}

fn random_point(kind: BoundaryKind, rng: &mut ChaCha8Rng) -> BoundaryPoint {
    match kind {
        BoundaryKind::Ball { d } => BoundaryPoint::ball(normalize(gaussian(rng, d as usize))).unwrap(),
        BoundaryKind::TypeI { r, s } => BoundaryPoint::type_i(
            normalize(gaussian(rng, r as usize)),
            normalize(gaussian(rng, s as usize)),
        )
        .unwrap(),
    }
}

#[test]
fn frame_examples() {
    let f = peirce_frame(&BoundaryPoint::ball(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap());
    assert_eq!(f.dim(), 1);
    assert!(f.directions[0][0].norm() < 1e-15 && (f.directions[0][1].norm() - 1.0).abs() < 1e-15);
    assert_eq!(f.reeb, vec![c(0.0, 1.0), c(0.0, 0.0)]);

    let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
    let f = peirce_frame(&BoundaryPoint::type_i(e1.clone(), e1.clone()).unwrap());
    assert_eq!(f.dim(), 2);
    for d in &f.directions {
        assert!(d[0].norm() < 1e-15 && d[3].norm() < 1e-15);
        assert!((d[1].norm() + d[2].norm() - 1.0).abs() < 1e-15);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = random_point(BoundaryKind::TypeI { r: 2, s: 3 }, &mut rng);
    let f = peirce_frame(&p);
    assert_eq!(f.dim(), 3);
    assert_eq!(f.dim() as u32 + 1, descriptor_for(DomainFamily::TypeI { r: 2, s: 3 }).unwrap().n);
    for (a, x) in f.directions.iter().enumerate() {
        assert!(dot(x, &f.c).norm() < 1e-14, "Z1 lies in the kernel of the contact form");
        for (b, y) in f.directions.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((dot(x, y) - want).norm() < 1e-14);
        }
    }
}

#[test]
fn ball_bracket_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let p = random_point(BoundaryKind::Ball { d: 2 }, &mut rng);
        let x = p.coords();
        let b = boundary_bracket(&v(2, 0).conj(), &v(2, 0), &p).unwrap();
        assert!((b - c(0.0, -x[1].norm_sqr())).norm() < 1e-13);
    }
}

#[test]
fn bracket_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let kind = BoundaryKind::TypeI { r: 2, s: 2 };
    let phi = to_boundary(&(&v(4, 0).conj() * &v(4, 3)), kind).unwrap();
    let psi = to_boundary(&(&v(4, 1) + &v(4, 2).conj()), kind).unwrap();
    for _ in 0..10 {
        let p = random_point(kind, &mut rng);
        assert!(boundary_bracket(&phi, &phi, &p).unwrap().norm() < 1e-13);
        let a = boundary_bracket(&phi, &psi, &p).unwrap();
        let b = boundary_bracket(&psi, &phi, &p).unwrap();
        assert!((a + b).norm() < 1e-13);
        let two = boundary_bracket(&phi.scale(&coeff_int(2, 0)), &psi, &p).unwrap();
        assert!((two - a * 2.0).norm() < 1e-13);
        let one = SymbolPolynomial::one(4);
        assert!(boundary_bracket(&phi, &one, &p).unwrap().norm() < 1e-15);
    }
    assert!(boundary_bracket(&v(3, 0), &v(3, 1), &random_point(kind, &mut rng)).is_err());
}

#[test]
fn bracket_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cases: Vec<(BoundaryKind, SymbolPolynomial, SymbolPolynomial)> = vec![
        (BoundaryKind::Ball { d: 2 }, v(2, 0).conj(), v(2, 0)),
        (BoundaryKind::Ball { d: 2 }, &v(2, 0).conj() * &v(2, 1), &v(2, 1).pow(2) + &v(2, 0).conj()),
        (BoundaryKind::Ball { d: 3 }, &v(3, 0).conj() * &v(3, 2), &v(3, 1) * &v(3, 2)),
        (
            BoundaryKind::TypeI { r: 2, s: 2 },
            to_boundary(&v(4, 0).conj(), BoundaryKind::TypeI { r: 2, s: 2 }).unwrap(),
            to_boundary(&(&(&v(4, 0) * &v(4, 3)) + &v(4, 1)), BoundaryKind::TypeI { r: 2, s: 2 }).unwrap(),
        ),
    ];
    let mut worst: f64 = 0.0;
    for (kind, phi, psi) in &cases {
        for _ in 0..100 {
            let p = random_point(*kind, &mut rng);
            let exact = boundary_bracket(phi, psi, &p).unwrap();
            let fd = fd_bracket(phi, psi, &p, &mut rng);
            worst = worst.max((exact - fd).norm());
        }
    }
    assert!(worst <= 1e-8, "max deviation {worst}");
}

#[test]
fn bracket_ignores_second_order_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let ball = BoundaryKind::Ball { d: 3 };
    let radius = &(&(&(&v(3, 0) * &v(3, 0).conj()) + &(&v(3, 1) * &v(3, 1).conj())) + &(&v(3, 2) * &v(3, 2).conj()))
        - &SymbolPolynomial::one(3);
    let h = &v(3, 1).conj() + &v(3, 0).pow(2);
    let phi = &v(3, 0).conj() * &v(3, 2);
    let psi = &v(3, 1) + &v(3, 2).conj();
    let bumped = &phi + &(&radius.pow(2) * &h);
    for _ in 0..10 {
        let p = random_point(ball, &mut rng);
        let a = boundary_bracket(&phi, &psi, &p).unwrap();
        let b = boundary_bracket(&bumped, &psi, &p).unwrap();
        assert!((a - b).norm() < 1e-12);
    }
    let kind = BoundaryKind::TypeI { r: 2, s: 2 };
    let r1 = &(&(&v(4, 0) * &v(4, 0).conj()) + &(&v(4, 1) * &v(4, 1).conj())) - &SymbolPolynomial::one(4);
    let phi = to_boundary(&(&v(4, 0).conj() * &v(4, 3)), kind).unwrap();
    let psi = to_boundary(&v(4, 2), kind).unwrap();
    let bumped = &phi + &(&r1.pow(2) * &(&v(4, 2) * &v(4, 1).conj()));
    for _ in 0..10 {
        let p = random_point(kind, &mut rng);
        let a = boundary_bracket(&phi, &psi, &p).unwrap();
        let b = boundary_bracket(&bumped, &psi, &p).unwrap();
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn poisson_extension_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let f = &(&v(3, 0).conj() * &v(3, 1)) + &v(3, 2).pow(2);
    for _ in 0..5 {
        let p = random_point(BoundaryKind::Ball { d: 3 }, &mut rng);
        assert!((poisson_extension(&f, &p).unwrap() - f.eval(&p.coords())).norm() < 1e-14);
    }
    let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
    let p = BoundaryPoint::type_i(e1.clone(), e1).unwrap();
    let det = &(&v(4, 0) * &v(4, 3)) - &(&v(4, 1) * &v(4, 2));
    assert!((poisson_extension(&(&det.conj() * &det), &p).unwrap() - 1.0).norm() < 1e-14);
    let z11 = &v(4, 0).conj() * &v(4, 0);
    assert!((poisson_extension(&z11, &p).unwrap() - 1.0).norm() < 1e-14);

    let kind = BoundaryKind::TypeI { r: 2, s: 2 };
    let hat = poisson_extension_symbol(&z11, kind).unwrap();
    for _ in 0..5 {
        let q = random_point(kind, &mut rng);
        let x = q.coords();
        let want = x[0].norm_sqr() * x[2].norm_sqr() + x[1].norm_sqr() * x[3].norm_sqr();
        assert!((hat.eval(&x) - want).norm() < 1e-14);
    }
    assert!(poisson_extension_symbol(&v(9, 0), BoundaryKind::TypeI { r: 3, s: 3 }).is_err());
}

#[test]
fn poisson_extension_matches_circle_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let kind = BoundaryKind::TypeI { r: 2, s: 2 };
    let p1 = &(&v(4, 0) * &v(4, 3)) + &v(4, 1).pow(2);
    let q1 = &(&v(4, 2) * &v(4, 0)) - &v(4, 3);
    let f = &p1.conj() * &q1;
    let hat = poisson_extension_symbol(&f, kind).unwrap();
    for _ in 0..5 {
        let BoundaryPoint::TypeI { xi1, xi2 } = random_point(kind, &mut rng) else { unreachable!() };
        let eta = [-xi1[1].conj(), xi1[0].conj()];
        let w = [-xi2[1].conj(), xi2[0].conj()];
        let steps = 64;
        let mut acc = c(0.0, 0.0);
        for k in 0..steps {
            let t = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / steps as f64);
            let z: Vec<Complex64> =
                (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| xi1[i] * xi2[j] + eta[i] * w[j] * t).collect();
            acc += f.eval(&z);
        }
        let x: Vec<Complex64> = xi1.iter().chain(&xi2).copied().collect();
        assert!((hat.eval(&x) - acc / steps as f64).norm() < 1e-12);
    }
    let kind3 = BoundaryKind::TypeI { r: 2, s: 3 };
    let g = &v(6, 0) * &v(6, 4);
    let restricted = to_boundary(&g, kind3).unwrap();
    assert_eq!(poisson_extension_symbol(&g, kind3).unwrap(), restricted);
}

#[test]
fn gamma_examples() {
    let ball = |d| peirce1_data(&descriptor_for(DomainFamily::Ball { d }).unwrap()).unwrap();
    let one = ball(2);
    assert!((gindikin_gamma(&one, 4.5).unwrap() - statrs::function::gamma::gamma(4.5)).abs() < 1e-12);
    let t2 = peirce1_data(&descriptor_for(DomainFamily::TypeII { r: 2, eps: 0 }).unwrap()).unwrap();
    assert_eq!((t2.r_v, t2.a_v), (2, 2));
    let want = (2.0 * std::f64::consts::PI).powf((t2.d_v as f64 - 2.0) / 2.0)
        * statrs::function::gamma::gamma(3.0)
        * statrs::function::gamma::gamma(2.0);
    assert!((gindikin_gamma(&t2, 3.0).unwrap() / want - 1.0).abs() < 1e-12);
    let t3 = peirce1_data(&descriptor_for(DomainFamily::TypeIII { r: 2 }).unwrap()).unwrap();
    assert_eq!((t3.r_v, t3.p_v), (1, Some(2)));
    assert!((gindikin_gamma(&t3, 1.0).unwrap() / gindikin_gamma(&t3, 2.0).unwrap() - 1.0).abs() < 1e-15);
    assert!(gindikin_gamma(&t2, 0.5).is_err());
}

#[test]
fn constant_examples() {
    let k = |f| dixmier_constant(&descriptor_for(f).unwrap()).unwrap();
    assert!((k(DomainFamily::Ball { d: 2 }) - 1.0).abs() < 1e-15);
    assert!((k(DomainFamily::TypeIII { r: 2 }) - 1.0).abs() < 1e-15);
    for d in 1..8u32 {
        let want = 1.0 / to_f64(&crate::combinatorics::factorial(d as u64 - 1));
        assert!((k(DomainFamily::Ball { d }) / want - 1.0).abs() < 1e-12);
    }
    for b in 0..=5u32 {
        for fam in [DomainFamily::Ball { d: b + 1 }, DomainFamily::TypeI { r: 1, s: b + 1 }] {
            let desc = descriptor_for(fam).unwrap();
            let q = gamma_quotient_branch(&desc).unwrap();
            assert!((q / a2_branch(&desc) - 1.0).abs() < 1e-12, "{fam}");
        }
    }
    assert!((k(DomainFamily::TypeI { r: 2, s: 3 }) - 0.5).abs() < 1e-12);
}

#[test]
fn shell_oracle() {
    assert_eq!(ball_shell_sum(2, 0), rat(1, 2) * rat(1, 2));
    for m in [1u32, 2, 5] {
        let direct: crate::BigRational = (0..=m)
            .map(|a| (rat(a as i64 + 1, m as i64 + 2) - rat(a as i64, m as i64 + 1)) * (rat((m - a) as i64 + 1, m as i64 + 2) - rat((m - a) as i64, m as i64 + 1)))
            .sum();
        assert_eq!(ball_shell_sum(2, m), direct);
    }
    assert_eq!(ball_shell_asymptote(2), rat(1, 6));
    assert_eq!(ball_shell_asymptote(3), rat(7, 60));
    assert_eq!(ball_shell_oracle(2), rat(1, 12));
    let ms = to_f64(&(ball_shell_sum(2, 2000) * rat(2000, 1)));
    assert!((ms - 1.0 / 6.0).abs() < 1e-3);
    let ms3 = to_f64(&(ball_shell_sum(3, 400) * rat(400, 1)));
    assert!((ms3 - 7.0 / 60.0).abs() < 2e-3);
}

#[test]
fn sampler_moments() {
    let kind = BoundaryKind::TypeI { r: 2, s: 2 };
    let pts = sample_s1(kind, 20000, 7);
    assert_eq!(pts.len(), 20000);
    let amb: Vec<Vec<Complex64>> = pts.iter().map(BoundaryPoint::ambient).collect();
    let cc: f64 = amb.iter().map(|a| a.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum::<f64>() / 20000.0;
    assert!((cc - 1.0).abs() < 1e-12);
    let mean: Complex64 = amb.iter().map(|a| a[0]).sum::<Complex64>() / 20000.0;
    assert!(mean.norm() < 5.0 * 0.5 / (20000f64).sqrt());
    let sq: f64 = amb.iter().map(|a| a[0].norm_sqr()).sum::<f64>() / 20000.0;
    assert!((sq - 0.25).abs() < 0.01);
    assert_eq!(sample_s1(kind, 20000, 7), pts);
    assert_eq!(sample_s1(kind, 5000, 7)[..], pts[..5000]);
    assert_ne!(sample_s1(kind, 10, 8)[0], pts[0]);
}

#[test]
fn rhs_basics() {
    let desc = descriptor_for(DomainFamily::Ball { d: 2 }).unwrap();
    let z = |k| v(2, k);
    let pairs = vec![(z(0).conj(), z(0)), (z(1).conj(), SymbolPolynomial::one(2))];
    let r = trace_formula_rhs(&pairs, &desc, 1000, 1).unwrap();
    assert_eq!((r.value, r.value_imag), (0.0, 0.0));
    assert!(matches!(trace_formula_rhs(&pairs[..1], &desc, 1000, 1), Err(crate::Error::PairCount { expected: 2, got: 1 })));
    let pairs = vec![(z(0).conj(), z(0)), (z(1).conj(), z(1))];
    let flipped = vec![(z(0), z(0).conj()), (z(1).conj(), z(1))];
    let a = trace_formula_integral(&pairs, &desc, 3000, 9).unwrap().0;
    let b = trace_formula_integral(&flipped, &desc, 3000, 9).unwrap().0;
    assert!((a + b).norm() < 1e-14);
    let r = trace_formula_rhs(&pairs, &desc, 200_000, 2).unwrap();
    assert!((r.value - 1.0 / 12.0).abs() < 5.0 * r.stderr + 1e-9, "{} +- {}", r.value, r.stderr);
    assert!(r.value_imag.abs() < 1e-12);
    assert_eq!(trace_formula_rhs(&pairs, &desc, 5000, 4).unwrap(), trace_formula_rhs(&pairs, &desc, 5000, 4).unwrap());
}

#[test]
fn phase_calibration_selects_pinned_phase() {
    let mut obs = Vec::new();
    for d in 2..=3u32 {
        let desc = descriptor_for(DomainFamily::Ball { d }).unwrap();
        let pairs: Vec<_> = (0..d as usize).map(|k| (v(d as usize, k).conj(), v(d as usize, k))).collect();
        let (mean, _) = trace_formula_integral(&pairs, &desc, 100_000, 3).unwrap();
        let raw = mean * trace_formula_constant(&desc, Phase::One).unwrap();
        obs.push((desc.n, raw, to_f64(&ball_shell_oracle(d))));
    }
    assert_eq!(calibrate_phase(&obs), PINNED_PHASE);
    let d3 = obs[1];
    assert!(((PINNED_PHASE.pow(3) * d3.1).re / d3.2 - 1.0).abs() < 0.03);
}
