use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gridgame::cascade::edge_loads;
use gridgame::grid::generate_synthetic;
use gridgame::strategy::greedy_attacker_response;
use gridgame::{solve_full_enumeration, GridGame, MixedStrategy, PureStrategy};
use rayon::ThreadPool;

fn pools() -> Vec<(&'static str, ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", one), ("pool", all)]
}

fn grid(n: usize) -> gridgame::GridNetwork {
    generate_synthetic(n, n + n / 4, 0.35, 0.3, 7).unwrap()
}

fn bench_edge_loads(c: &mut Criterion) {
    let mut group = c.benchmark_group("edge_loads");
    for n in [30, 100] {
        let g = grid(n);
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| pool.install(|| edge_loads(g)))
            });
        }
    }
    group.finish();
}

fn bench_full_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_enumeration");
    group.sample_size(10);
    let g = grid(12);
    for (name, pool) in pools() {
        group.bench_function(name, |b| {
            b.iter(|| {
                // fresh game so the payoff cache starts empty
                let game = GridGame::new(g.clone(), 0.3).unwrap();
                pool.install(|| solve_full_enumeration(&game, 1, 1).unwrap().value)
            })
        });
    }
    group.finish();
}

fn bench_greedy_attack(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_attack");
    group.sample_size(10);
    for n in [30, 60] {
        let g = grid(n);
        let none = MixedStrategy::pure(PureStrategy::empty(0));
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| {
                    let game = GridGame::new(g.clone(), 0.5).unwrap();
                    pool.install(|| greedy_attacker_response(&game, &none, 3).unwrap().value)
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_edge_loads, bench_full_enumeration, bench_greedy_attack);
criterion_main!(benches);
