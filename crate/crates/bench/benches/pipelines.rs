use cmsf_core::fixtures::{generate, FixtureOptions};
use cmsf_core::{run_frame, run_sequence, PipelineConfig, Variant};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

const VARIANTS: [Variant; 3] = [Variant::AtGdinoSam, Variant::OwodBind, Variant::SamBind];

fn bench_pipelines(c: &mut Criterion) {
    let fixture = generate(&FixtureOptions::default()).expect("fixture");
    let backend = fixture.backend().expect("valid bundle");
    let frames = fixture.all_frames();
    let cfg = PipelineConfig::default();

    let mut group = c.benchmark_group("frame");
    for v in VARIANTS {
        group.bench_function(v.slug(), |b| {
            b.iter(|| run_frame(v, black_box(&frames[0]), &cfg, &backend).expect("run"))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("sequence");
    group.sample_size(20);
    for v in VARIANTS {
        group.bench_function(v.slug(), |b| {
            b.iter(|| run_sequence(black_box(&frames), &cfg, &backend, v).expect("run"))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_pipelines);
criterion_main!(benches);
