use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use stoqforge::circuit::{acceptance_probability, Basis, Circuit};
use stoqforge::hamiltonian::{compile, history_state};
use stoqforge::numerics::{ground_state, SolverConfig, SparseMatrix};

fn random_circuit(seed: u64, n: usize, m: usize, p: usize, gates: usize) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Circuit::random(&mut rng, n, m, p, gates, Basis::Z).unwrap()
}

fn acceptance(c: &mut Criterion) {
    let mut group = c.benchmark_group("acceptance_probability");
    for p in [4usize, 8, 12] {
        let circuit = random_circuit(1, 2, 2, p, 40);
        group.bench_with_input(BenchmarkId::from_parameter(p), &circuit, |b, circuit| {
            b.iter(|| acceptance_probability(black_box(circuit), "10", 24).unwrap())
        });
    }
    group.finish();
}

fn assembly(c: &mut Criterion) {
    let circuit = random_circuit(2, 1, 1, 1, 6);
    let compiled = compile(&circuit, "1", 2, 20).unwrap();
    c.bench_function("assemble_11_qubits", |b| {
        b.iter(|| SparseMatrix::assemble(black_box(&compiled.hamiltonian), false, 20).unwrap())
    });
}

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("ground_state");
    group.sample_size(10);
    for (gates, idle) in [(3usize, 2usize), (4, 4)] {
        let circuit = random_circuit(3, 1, 1, 1, gates);
        let compiled = compile(&circuit, "1", idle, 20).unwrap();
        let qubits = compiled.hamiltonian.n_total();
        group.bench_with_input(
            BenchmarkId::from_parameter(qubits),
            &compiled,
            |b, compiled| {
                b.iter(|| {
                    ground_state(
                        black_box(&compiled.hamiltonian),
                        2,
                        &SolverConfig::default(),
                    )
                    .unwrap()
                })
            },
        );
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let circuit = random_circuit(4, 2, 2, 2, 8);
    let compiled = compile(&circuit, "01", 4, 20).unwrap();
    let eta = history_state(&compiled).unwrap();
    c.bench_function("sample_history_10k", |b| {
        b.iter(|| black_box(&eta).sample(10_000, 7))
    });
}

criterion_group!(benches, acceptance, assembly, eigensolver, sampling);
criterion_main!(benches);
