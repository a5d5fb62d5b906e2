use criterion::{black_box, criterion_group, criterion_main, Criterion};
use cpsym_core::algebras::{catalog, Scenario};
use cpsym_core::cproj::{cproj_field_residual, hsc_classify, pair_samples};
use cpsym_core::families::{build_companion, build_frame, sample_points};
use cpsym_core::{CaseSpec, Family, Jet};

fn jets(c: &mut Criterion) {
    let x = Jet::seed_point(&[0.3, -0.2, 0.5, 0.1], 4).unwrap();
    c.bench_function("jet: exp(x0 x1) / (1 + x2²), order 4", |b| {
        b.iter(|| {
            let num = x[0].try_mul(&x[1]).unwrap().exp();
            let den = x[2].try_mul(&x[2]).unwrap().add_scalar(1.0);
            black_box(num.try_div(&den).unwrap())
        })
    });
}

fn frames(c: &mut Criterion) {
    for fam in [Family::L1, Family::C2, Family::D2a] {
        let spec = CaseSpec::new(fam);
        let p = sample_points(&spec, 1, 1).unwrap()[0];
        c.bench_function(&format!("frame + companion + Christoffel: {fam}"), |b| {
            b.iter(|| {
                let g = build_frame(&spec, &p, 2).unwrap();
                let gh = build_companion(&spec, &p, 2).unwrap();
                black_box((g.christoffel().unwrap(), gh))
            })
        });
    }
}

fn field_fit(c: &mut Criterion) {
    let spec = CaseSpec::new(Family::L3);
    let pts = sample_points(&spec, 20, 1).unwrap();
    let samples = pair_samples(&spec, &pts, 2).unwrap();
    let v = catalog(&spec, Scenario::Only).unwrap().fields.remove(0);
    c.bench_function("field residual: L3 generator, 20 points", |b| {
        b.iter(|| black_box(cproj_field_residual(&samples, &v, None).unwrap()))
    });
    c.bench_function("hsc classification: C1, 30 pairs", |b| {
        let spec = CaseSpec::new(Family::C1);
        b.iter(|| black_box(hsc_classify(&spec, 30, 42, 1e-8).unwrap()))
    });
}

criterion_group!(benches, jets, frames, field_fit);
criterion_main!(benches);
