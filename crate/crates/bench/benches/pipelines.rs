use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ccspg_core::ccs::parse_ccs;
use ccspg_core::diagrams::find_iso;
use ccspg_core::equiv::fair_eq_ccs;
use ccspg_core::plays::{check_play, decompose_play};
use ccspg_core::sampling::{random_play, SampleParams};
use ccspg_core::strategies::{is_bot_strat, StrategyState, DEFAULT_STATE_CAP};

fn bench_plays(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let params = SampleParams::default();
    let plays: Vec<_> = (0..32)
        .map(|_| random_play(&mut rng, &params).cospan)
        .collect();

    c.bench_function("check_play/random", |b| {
        b.iter(|| {
            for p in &plays {
                assert!(check_play(std::hint::black_box(p)).unwrap().is_accept());
            }
        })
    });

    c.bench_function("decompose_play/random", |b| {
        b.iter(|| {
            for p in &plays {
                std::hint::black_box(decompose_play(p).unwrap());
            }
        })
    });

    let biggest = plays
        .iter()
        .max_by_key(|p| p.net.cells.len())
        .expect("some play")
        .clone();
    c.bench_function("find_iso/self", |b| {
        b.iter(|| {
            assert!(find_iso(
                std::hint::black_box(&biggest.net),
                std::hint::black_box(&biggest.net)
            )
            .is_some())
        })
    });
}

fn bench_equivalences(c: &mut Criterion) {
    let p = parse_ccs("channels 3; 1?.(2?.0 + 3?.0)").unwrap();
    let q = parse_ccs("channels 3; 1?.2?.0 + 1?.3?.0").unwrap();
    c.bench_function("fair_eq_ccs/coffee", |b| {
        b.iter(|| {
            let v = fair_eq_ccs(
                std::hint::black_box(&p),
                std::hint::black_box(&q),
                None,
                DEFAULT_STATE_CAP,
            )
            .unwrap();
            assert!(!v.is_equivalent());
        })
    });

    let sync = parse_ccs("channels 1; (1?.tick.0 | 1!.0)").unwrap();
    let state = StrategyState::of_process(&sync);
    c.bench_function("is_bot_strat/sync", |b| {
        b.iter(|| assert!(is_bot_strat(std::hint::black_box(&state), DEFAULT_STATE_CAP).unwrap()))
    });
}

criterion_group!(benches, bench_plays, bench_equivalences);
criterion_main!(benches);
