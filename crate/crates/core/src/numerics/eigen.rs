use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sparse::SparseMatrix;
use crate::error::NumericsError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which solver produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMethod {
    Dense,
    Lanczos,
}

/// Eigensolver settings. Sizes are in qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Registers up to this size go straight to the dense solver.
    pub dense_below: usize,
    /// Hard cap for dense diagonalisation (also used as fallback).
    pub dense_cap: usize,
    /// Hard cap for sparse assembly.
    pub sparse_cap: usize,
    /// Convergence threshold on `‖Av − θv‖ / ‖A‖`.
    pub tol: f64,
    pub max_restarts: usize,
    pub krylov_dim: usize,
    /// Seeds the start-vector perturbation and breakdown restarts.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dense_below: 9,
            dense_cap: 12,
            sparse_cap: 22,
            tol: 1e-12,
            max_restarts: 500,
            krylov_dim: 64,
            seed: 0,
        }
    }
}

pub(crate) struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub method: SolverMethod,
    pub iterations: usize,
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale(v: &mut [Complex64], s: f64) {
    for x in v {
        *x *= s;
    }
}

/// Rotates `v` so its largest-magnitude entry (first on ties) is real and
/// positive.
pub(crate) fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_norm = -1.0;
    for (i, x) in v.iter().enumerate() {
        let n = x.norm();
        if n > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / best_norm;
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

/// Lowest `k` eigenpairs of a dense Hermitian matrix.
pub(crate) fn dense_lowest(a: &SparseMatrix, k: usize) -> Eigenpairs {
    let dim = a.dim();
    let dense = a.to_dense();
    let (values, columns): (Vec<f64>, Vec<Vec<Complex64>>) = if a.is_real(0.0) {
        let m = DMatrix::from_fn(dim, dim, |r, c| dense[r * dim + c].re);
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        order
            .into_iter()
            .take(k)
            .map(|i| {
                let col = eig
                    .eigenvectors
                    .column(i)
                    .iter()
                    .map(|&x| Complex64::new(x, 0.0))
                    .collect();
                (eig.eigenvalues[i], col)
            })
            .unzip()
    } else {
        let m = DMatrix::from_fn(dim, dim, |r, c| dense[r * dim + c]);
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        order
            .into_iter()
            .take(k)
            .map(|i| {
                (
                    eig.eigenvalues[i],
                    eig.eigenvectors.column(i).iter().copied().collect(),
                )
            })
            .unzip()
    };
    let vectors = columns
        .into_iter()
        .map(|mut v| {
            let n = norm(&v);
            scale(&mut v, 1.0 / n);
            fix_phase(&mut v);
            v
        })
        .collect();
    Eigenpairs {
        values,
        vectors,
        method: SolverMethod::Dense,
        iterations: 0,
    }
}

/// Removes the components of `v` along the orthonormal `basis`, twice.
fn orthogonalize(basis: &[Vec<Complex64>], v: &mut [Complex64]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, v);
            axpy(-c, b, v);
        }
    }
}

fn start_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    // all-ones plus a small seeded perturbation so that no symmetry sector
    // is missed
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(1.0 + 0.1 * rng.random_range(-1.0..1.0), 0.0))
        .collect();
    let n = norm(&v);
    scale(&mut v, 1.0 / n);
    v
}

fn random_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect()
}

/// Thick-restart Lanczos with full reorthogonalisation.
pub(crate) fn lanczos_lowest(
    a: &SparseMatrix,
    k: usize,
    cfg: &SolverConfig,
) -> Result<Eigenpairs, NumericsError> {
    let dim = a.dim();
    let scale_ref = a.norm_bound().max(f64::MIN_POSITIVE);
    let m = cfg.krylov_dim.max(2 * k + 8).min(dim);
    let keep = (k + (m - k) / 2).min(m - 1).max(k);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);

    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    let mut images: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    // projected matrix G = Vᴴ A V, kept in full
    let mut g = DMatrix::<Complex64>::zeros(m, m);
    let mut next = start_vector(dim, cfg.seed);
    let mut complete = false;
    let mut worst = f64::INFINITY;

    for restart in 0..=cfg.max_restarts {
        while basis.len() < m && !complete {
            let j = basis.len();
            let w = a.apply(&next);
            basis.push(std::mem::take(&mut next));
            for i in 0..=j {
                let gij = dot(&basis[i], &w);
                g[(i, j)] = gij;
                g[(j, i)] = gij.conj();
            }
            g[(j, j)] = Complex64::new(g[(j, j)].re, 0.0);
            let mut f = w.clone();
            images.push(w);
            orthogonalize(&basis, &mut f);
            let mut fnorm = norm(&f);
            if fnorm <= 1e-10 * scale_ref {
                // invariant subspace: continue with a fresh direction
                if basis.len() == dim {
                    complete = true;
                    break;
                }
                f = random_vector(dim, &mut rng);
                orthogonalize(&basis, &mut f);
                fnorm = norm(&f);
                if fnorm <= 1e-12 {
                    complete = true;
                    break;
                }
            }
            scale(&mut f, 1.0 / fnorm);
            next = f;
        }

        let size = basis.len();
        let sub = g.view((0, 0), (size, size)).into_owned();
        let eig = SymmetricEigen::new(sub);
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let ritz = |idx: usize, from: &[Vec<Complex64>]| -> Vec<Complex64> {
            let mut v = vec![ZERO; dim];
            for (t, b) in from.iter().enumerate() {
                axpy(eig.eigenvectors[(t, idx)], b, &mut v);
            }
            v
        };

        let wanted = k.min(size);
        worst = 0.0f64;
        let mut values = Vec::with_capacity(wanted);
        let mut vectors = Vec::with_capacity(wanted);
        for &idx in order.iter().take(wanted) {
            let theta = eig.eigenvalues[idx];
            let x = ritz(idx, &basis);
            let mut r = ritz(idx, &images);
            axpy(Complex64::new(-theta, 0.0), &x, &mut r);
            worst = worst.max(norm(&r) / scale_ref);
            values.push(theta);
            vectors.push(x);
        }
        if wanted == k && (worst <= cfg.tol || complete) {
            let vectors = vectors
                .into_iter()
                .map(|mut v| {
                    let n = norm(&v);
                    scale(&mut v, 1.0 / n);
                    fix_phase(&mut v);
                    v
                })
                .collect();
            return Ok(Eigenpairs {
                values,
                vectors,
                method: SolverMethod::Lanczos,
                iterations: restart,
            });
        }
        if restart == cfg.max_restarts {
            break;
        }

        // thick restart on the lowest `keep` Ritz vectors
        let kept: Vec<usize> = order.iter().take(keep.min(size)).copied().collect();
        let new_basis: Vec<Vec<Complex64>> = kept.iter().map(|&i| ritz(i, &basis)).collect();
        let new_images: Vec<Vec<Complex64>> = kept.iter().map(|&i| ritz(i, &images)).collect();
        basis = new_basis;
        images = new_images;
        g.fill(ZERO);
        for (t, &i) in kept.iter().enumerate() {
            g[(t, t)] = Complex64::new(eig.eigenvalues[i], 0.0);
        }
        // re-orthogonalise the continuation vector against the compressed basis
        orthogonalize(&basis, &mut next);
        let n = norm(&next);
        if n <= 1e-12 {
            next = random_vector(dim, &mut rng);
            orthogonalize(&basis, &mut next);
        }
        let n = norm(&next);
        scale(&mut next, 1.0 / n);
    }
    Err(NumericsError::NoConvergence {
        iterations: cfg.max_restarts,
        residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{pauli, Hamiltonian, LocalTerm, TermLabel};

    fn random_stoquastic(n: usize, terms: usize, seed: u64) -> Hamiltonian {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for _ in 0..terms {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            let zz = pauli::scale(
                pauli::kron(&pauli::Z, &pauli::Z),
                rng.random_range(-1.0..1.0),
            );
            let xx = pauli::scale(
                pauli::kron(&pauli::X, &pauli::X),
                -rng.random_range(0.0..1.0),
            );
            let m: Vec<f64> = zz.iter().zip(xx).map(|(p, q)| p + q).collect();
            out.push(LocalTerm::real(vec![a, b], &m, TermLabel::User).unwrap());
            let x = pauli::scale(pauli::X, -rng.random_range(0.0..1.0));
            out.push(LocalTerm::real(vec![a], &x, TermLabel::User).unwrap());
        }
        Hamiltonian::new(n, out).unwrap()
    }

    #[test]
    fn lanczos_matches_dense() {
        for seed in 0..5 {
            let h = random_stoquastic(8, 12, seed);
            let a = SparseMatrix::assemble(&h, false, 10).unwrap();
            let dense = dense_lowest(&a, 3);
            let sparse = lanczos_lowest(&a, 3, &SolverConfig::default()).unwrap();
            for (x, y) in dense.values.iter().zip(&sparse.values) {
                assert!((x - y).abs() < 1e-9, "seed {seed}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn small_space_is_exhausted() {
        let x = LocalTerm::real(vec![0], &pauli::scale(pauli::X, -1.0), TermLabel::User).unwrap();
        let h = Hamiltonian::new(1, vec![x]).unwrap();
        let a = SparseMatrix::assemble(&h, false, 4).unwrap();
        let pairs = lanczos_lowest(&a, 2, &SolverConfig::default()).unwrap();
        assert!((pairs.values[0] + 1.0).abs() < 1e-12);
        assert!((pairs.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_is_canonical() {
        let mut v = vec![Complex64::new(0.0, -0.6), Complex64::new(0.0, -0.8)];
        fix_phase(&mut v);
        assert!((v[1] - Complex64::new(0.8, 0.0)).norm() < 1e-15);
        assert!((v[0] - Complex64::new(0.6, 0.0)).norm() < 1e-15);
    }
}
