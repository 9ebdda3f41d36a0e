use criterion::{criterion_group, criterion_main, Criterion};
use dixmier_core::catalog::{descriptor_for, DomainFamily};
use dixmier_core::combinatorics::{enumerate_partitions, Partition};
use dixmier_core::conical::{conical_norm_sq, ConicalContext};
use dixmier_core::geometry::{sample_s1, BoundaryKind, BracketKernel};
use dixmier_core::models::{build_ball_model, build_sub_hardy_model, sub_toeplitz_linear, toeplitz_matrix};
use dixmier_core::spectral::{dixmier_from_operator, singular_values};
use dixmier_core::SymbolPolynomial;
use std::hint::black_box;

fn norms(c: &mut Criterion) {
    let ctx = ConicalContext::new(descriptor_for(DomainFamily::TypeI { r: 3, s: 4 }).unwrap());
    let parts: Vec<Partition> = (0..=12).flat_map(|m| enumerate_partitions(3, m)).collect();
    c.bench_function("conical_norms_I34_weight12", |b| {
        b.iter(|| parts.iter().map(|l| conical_norm_sq(&ctx, l).unwrap()).collect::<Vec<_>>())
    });
}

fn assembly(c: &mut Criterion) {
    let f = &SymbolPolynomial::var(2, 0) * &SymbolPolynomial::conj_var(2, 1);
    c.bench_function("toeplitz_ball2_M60", |b| {
        b.iter(|| {
            let basis = build_ball_model(2, 60).unwrap();
            toeplitz_matrix(&basis, black_box(&f)).unwrap()
        })
    });
}

fn spectra(c: &mut Criterion) {
    let sub = build_sub_hardy_model(2, 2, 12).unwrap();
    let s = sub_toeplitz_linear(&sub, 0, 0).unwrap();
    let comm = s.commutator(&s.adjoint()).unwrap();
    c.bench_function("singular_values_subhardy22_M12", |b| b.iter(|| singular_values(black_box(&comm)).unwrap()));

    let basis = build_ball_model(2, 80).unwrap();
    let t = |k| {
        let z = SymbolPolynomial::var(2, k);
        toeplitz_matrix(&basis, &z.conj()).unwrap().commutator(&toeplitz_matrix(&basis, &z).unwrap()).unwrap()
    };
    let prod = t(0).multiply(&t(1)).unwrap();
    c.bench_function("dixmier_ball2_M80", |b| b.iter(|| dixmier_from_operator(black_box(&prod)).unwrap()));
}

fn brackets(c: &mut Criterion) {
    let kind = BoundaryKind::TypeI { r: 2, s: 3 };
    let pts = sample_s1(kind, 1000, 1);
    let nv = kind.boundary_nvars();
    let phi = SymbolPolynomial::var(nv, 0).conj();
    let psi = &SymbolPolynomial::var(nv, 1) * &SymbolPolynomial::var(nv, 2);
    let kernel = BracketKernel::new(&phi, &psi, kind).unwrap();
    c.bench_function("bracket_I23_1000_points", |b| {
        b.iter(|| pts.iter().map(|p| kernel.eval(p).unwrap()).sum::<dixmier_core::Complex64>())
    });
}

criterion_group!(benches, norms, assembly, spectra, brackets);
criterion_main!(benches);
