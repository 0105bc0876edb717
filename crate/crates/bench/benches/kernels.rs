use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use difmod::cplx::min_inj_resolution;
use difmod::dmod::{contractible_all4, strip_general};
use difmod::linalg::{smith, Mat};
use difmod::verify::gen::{random_diffmod, random_module, GenStats};
use difmod::verify::GenConfig;
use difmod::{Module, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_smith(c: &mut Criterion) {
    let mut g = c.benchmark_group("smith");
    for desc in ["Z/8", "F3[x]/(x^3)"] {
        let ring = Ring::parse(desc).unwrap().component(0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [8usize, 16, 32] {
            let a = Mat::from_fn(ring, n, n, |_, _| ring.random(&mut rng));
            g.bench_with_input(BenchmarkId::new(desc, n), &a, |b, a| b.iter(|| smith(black_box(a))));
        }
    }
    g.finish();
}

fn bench_resolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("min_inj_resolution");
    for desc in ["Z/4", "Z/27", "F2[x]/(x^4)"] {
        let ring = Ring::parse(desc).unwrap();
        let k = Module::local(&ring, &[1]).unwrap();
        g.bench_function(BenchmarkId::new(desc, "residue_field_L10"), |b| b.iter(|| min_inj_resolution(black_box(&k), 10)));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_module(&ring, &mut rng, 4);
        g.bench_function(BenchmarkId::new(desc, "random_L8"), |b| b.iter(|| min_inj_resolution(black_box(&m), 8)));
    }
    g.finish();
}

fn bench_diffmods(c: &mut Criterion) {
    let cfg = GenConfig { rings: vec!["Z/8".into()], max_dim: 6, ..GenConfig::default() };
    let ring = Ring::parse("Z/8").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut stats = GenStats::default();
    let dms: Vec<_> = (0..16).map(|_| random_diffmod(&cfg, &ring, &mut rng, &mut stats)).collect();
    c.bench_function("strip_general/Z8_x16", |b| {
        b.iter(|| dms.iter().map(|dm| strip_general(black_box(dm)).unwrap().pairs.length()).sum::<usize>())
    });
    c.bench_function("contractible_all4/Z8_x16", |b| {
        b.iter(|| dms.iter().filter(|dm| contractible_all4(black_box(dm)).unwrap().c1).count())
    });
}

criterion_group!(benches, bench_smith, bench_resolution, bench_diffmods);
criterion_main!(benches);
