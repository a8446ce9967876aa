//! Benchmarks for the hot paths: polynomial products, the Haantjes torsion
//! of the elliptic operator, exact canonicity brackets and the chain
//! solver.

use criterion::{criterion_group, criterion_main, Criterion};

use haantjes::models::{catalog, hamiltonian, integrals, CatalogName, ParamEnv};
use haantjes::phase::poisson_bracket;
use haantjes::separation::elliptic_map;
use haantjes::solver::{solve_chain, AnsatzSpec, ChainOutcome};
use haantjes::tensor::haantjes_torsion;

fn bench_poly_mul(c: &mut Criterion) {
    let env = ParamEnv::symbolic(5);
    let h = hamiltonian(&env, 5).unwrap();
    c.bench_function("hamiltonian_square_order5", |b| {
        b.iter(|| std::hint::black_box(h.mul_ref(&h)))
    });
}

fn bench_haantjes_torsion(c: &mut Criterion) {
    let env = ParamEnv::symbolic_elliptic();
    let ke = catalog(CatalogName::Ke, &env).unwrap().tensor;
    c.bench_function("haantjes_torsion_elliptic", |b| {
        b.iter(|| std::hint::black_box(haantjes_torsion(&ke).is_zero()))
    });
}

fn bench_elliptic_bracket(c: &mut Criterion) {
    let env = ParamEnv::symbolic_elliptic();
    let map = elliptic_map(&env).unwrap();
    c.bench_function("elliptic_bracket_q1_p1", |b| {
        b.iter(|| {
            std::hint::black_box(
                poisson_bracket(&map.forward[0], &map.forward[2]).is_zero(),
            )
        })
    });
}

fn bench_chain_solver(c: &mut Criterion) {
    let env = ParamEnv::symbolic(2);
    let h = hamiltonian(&env, 2).unwrap();
    let (_, _, i2) = integrals(&env).unwrap();
    let spec = AnsatzSpec::degree(2).with_positions_only_a();
    c.bench_function("solve_chain_i2_degree2", |b| {
        b.iter(|| {
            let out = solve_chain(&h, &i2, &spec).unwrap();
            std::hint::black_box(matches!(out, ChainOutcome::Family(_)))
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_poly_mul, bench_haantjes_torsion, bench_elliptic_bracket, bench_chain_solver
}
criterion_main!(benches);
