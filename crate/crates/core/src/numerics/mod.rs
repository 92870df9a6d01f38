//! Sparse assembly, eigensolvers, overlap bounds and instance verification.

mod eigen;
mod sparse;
mod verify;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::NumericsError;
use crate::hamiltonian::{Hamiltonian, PinnedHamiltonian};

pub use eigen::{SolverConfig, SolverMethod};
pub use sparse::{SparseMatrix, SPARSE_QUBIT_CAP};
pub use verify::{verify_instance, ClaimResult, Tolerances, Verdict, VerifyConfig};

/// Gaps below this flag the ground space as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Required bound on `‖Hv − λv‖ / ‖H‖` for every returned pair.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Lowest eigenpairs of an unscaled Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Ascending, unscaled.
    pub eigenvalues: Vec<f64>,
    pub norm_scale: f64,
    pub ground_vector: Vec<Complex64>,
    /// `λ₁ − λ₀`; absent on a one-dimensional space.
    pub gap: Option<f64>,
    pub degenerate: bool,
    /// `‖Hv₀ − λ₀v₀‖`.
    pub residual: f64,
    /// Residual of every returned pair.
    pub residuals: Vec<f64>,
    pub overlaps: BTreeMap<String, f64>,
    pub method: SolverMethod,
    pub restarts: usize,
    /// Eigenvectors of every returned pair; not serialised.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl SpectralReport {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `norm_scale · λ₀`.
    pub fn scaled_ground_energy(&self) -> f64 {
        self.eigenvalues[0] * self.norm_scale
    }

    /// Eigenvectors whose eigenvalue lies within [`DEGENERACY_TOL`] of `λ₀`.
    pub fn ground_space(&self) -> impl Iterator<Item = &Vec<Complex64>> {
        let e0 = self.eigenvalues[0];
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .filter(move |(e, _)| **e - e0 < DEGENERACY_TOL)
            .map(|(_, v)| v)
    }
}

/// Lowest `k` eigenpairs of `h` (unscaled). At least two pairs are computed
/// whenever the space allows, so the gap is always available.
pub fn ground_state(
    h: &Hamiltonian,
    k: usize,
    cfg: &SolverConfig,
) -> Result<SpectralReport, NumericsError> {
    let n = h.n_total();
    let cap = cfg.sparse_cap.max(cfg.dense_cap);
    if n > cap {
        return Err(NumericsError::DimensionCap {
            qubits: n,
            cap,
            kind: "sparse",
        });
    }
    let a = SparseMatrix::assemble(h, false, cfg.sparse_cap.max(cfg.dense_cap))?;
    spectrum_of(&a, h.norm_scale(), k, cfg)
}

pub fn spectrum_of(
    a: &SparseMatrix,
    norm_scale: f64,
    k: usize,
    cfg: &SolverConfig,
) -> Result<SpectralReport, NumericsError> {
    let dim = a.dim();
    let qubits = dim.trailing_zeros() as usize;
    if k == 0 || k > dim {
        return Err(NumericsError::TooManyEigenpairs { requested: k, dim });
    }
    let k_eff = k.max(2).min(dim);
    let pairs = if qubits <= cfg.dense_below.min(cfg.dense_cap) {
        eigen::dense_lowest(a, k_eff)
    } else {
        match eigen::lanczos_lowest(a, k_eff, cfg) {
            Ok(p) => p,
            Err(_) if qubits <= cfg.dense_cap => eigen::dense_lowest(a, k_eff),
            Err(e) => return Err(e),
        }
    };
    let scale_ref = a.norm_bound().max(f64::MIN_POSITIVE);
    let residuals: Vec<f64> = pairs
        .values
        .iter()
        .zip(&pairs.vectors)
        .map(|(&lam, v)| {
            let mut r = a.apply(v);
            for (ri, vi) in r.iter_mut().zip(v) {
                *ri -= vi * lam;
            }
            eigen::norm(&r)
        })
        .collect();
    if let Some(&worst) = residuals.iter().max_by(|x, y| x.total_cmp(y)) {
        if worst > RESIDUAL_TOL * scale_ref {
            return Err(NumericsError::NoConvergence {
                iterations: pairs.iterations,
                residual: worst / scale_ref,
            });
        }
    }
    let gap = (pairs.values.len() > 1).then(|| pairs.values[1] - pairs.values[0]);
    let mut eigenvalues = pairs.values;
    let eigenvectors = pairs.vectors;
    let residual = residuals[0];
    let mut residuals = residuals;
    eigenvalues.truncate(k);
    residuals.truncate(k);
    Ok(SpectralReport {
        ground_vector: eigenvectors[0].clone(),
        eigenvalues,
        norm_scale,
        gap,
        degenerate: gap.is_some_and(|g| g < DEGENERACY_TOL),
        residual,
        residuals,
        overlaps: BTreeMap::new(),
        method: pairs.method,
        restarts: pairs.iterations,
        eigenvectors,
    })
}

/// Bounds on `|⟨a|c⟩|²` given `‖a − b‖ ≤ A` and `|⟨b|c⟩|² = B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormTriple {
    pub a: f64,
    pub b: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn norm_tracking_bounds(a: f64, b: f64) -> Result<NormTriple, NumericsError> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(NumericsError::Domain(format!(
            "distance bound must be non-negative, got {a}"
        )));
    }
    if !(0.0..=1.0).contains(&b) {
        return Err(NumericsError::Domain(format!(
            "overlap must lie in [0, 1], got {b}"
        )));
    }
    let root = b.sqrt();
    let lower = if a <= root { (root - a).powi(2) } else { 0.0 };
    let upper = (root + a).powi(2).min(1.0);
    Ok(NormTriple { a, b, lower, upper })
}

/// Whether `v` is, up to a global phase, real and entrywise non-negative
/// within `tol`.
pub fn perron_frobenius_check(v: &[Complex64], tol: f64) -> bool {
    let mut w = v.to_vec();
    eigen::fix_phase(&mut w);
    w.iter().all(|x| x.im.abs() <= tol && x.re >= -tol)
}

/// Energies of a pinned embedding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinnedEnergy {
    /// Minimum over states with the pinned qubit in `|−⟩`.
    pub pinned: f64,
    /// Unrestricted `λ₀(Ĥ)`, which may lie below `pinned`.
    pub global: f64,
}

pub fn pinned_energy(
    p: &PinnedHamiltonian,
    cfg: &SolverConfig,
) -> Result<PinnedEnergy, NumericsError> {
    let block = p.minus_block()?;
    let pinned = ground_state(&block, 1, cfg)?.ground_energy();
    let global = ground_state(&p.hamiltonian, 1, cfg)?.ground_energy();
    Ok(PinnedEnergy { pinned, global })
}

/// `⟨v|H|v⟩` for an unscaled Hamiltonian.
pub fn expectation(
    h: &Hamiltonian,
    v: &[Complex64],
    qubit_cap: usize,
) -> Result<f64, NumericsError> {
    let a = SparseMatrix::assemble(h, false, qubit_cap)?;
    if v.len() != a.dim() {
        return Err(NumericsError::Domain(format!(
            "vector of length {} for dimension {}",
            v.len(),
            a.dim()
        )));
    }
    Ok(a.expectation(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{pauli, LocalTerm, TermLabel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn minus_x_ground_is_plus() {
        let h = Hamiltonian::new(
            1,
            vec![LocalTerm::real(vec![0], &pauli::scale(pauli::X, -1.0), TermLabel::User).unwrap()],
        )
        .unwrap();
        let r = ground_state(&h, 1, &SolverConfig::default()).unwrap();
        assert!((r.ground_energy() + 1.0).abs() < 1e-14);
        assert_eq!(r.eigenvalues.len(), 1);
        assert!((r.gap.unwrap() - 2.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for x in &r.ground_vector {
            assert!((x - Complex64::new(s, 0.0)).norm() < 1e-14);
        }
        assert!(perron_frobenius_check(&r.ground_vector, 1e-8));
    }

    #[test]
    fn eigenpair_requests_are_checked() {
        let h = Hamiltonian::new(1, vec![]).unwrap();
        assert!(matches!(
            ground_state(&h, 3, &SolverConfig::default()),
            Err(NumericsError::TooManyEigenpairs {
                requested: 3,
                dim: 2
            })
        ));
        let r = ground_state(&h, 2, &SolverConfig::default()).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn lanczos_path_agrees_with_dense_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10;
        let mut terms = Vec::new();
        for q in 0..n {
            let m = pauli::scale(pauli::X, -rng.random_range(0.1..1.0));
            terms.push(LocalTerm::real(vec![q], &m, TermLabel::User).unwrap());
            let zz = pauli::scale(
                pauli::kron(&pauli::Z, &pauli::Z),
                rng.random_range(-1.0..1.0),
            );
            terms.push(LocalTerm::real(vec![q, (q + 1) % n], &zz, TermLabel::User).unwrap());
        }
        let h = Hamiltonian::new(n, terms).unwrap();
        let sparse = ground_state(&h, 2, &SolverConfig::default()).unwrap();
        assert_eq!(sparse.method, SolverMethod::Lanczos);
        let dense_cfg = SolverConfig {
            dense_below: 10,
            ..SolverConfig::default()
        };
        let dense = ground_state(&h, 2, &dense_cfg).unwrap();
        assert_eq!(dense.method, SolverMethod::Dense);
        for (a, b) in sparse.eigenvalues.iter().zip(&dense.eigenvalues) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(perron_frobenius_check(&sparse.ground_vector, 1e-8));
    }

    #[test]
    fn norm_tracking_examples() {
        let t = norm_tracking_bounds(0.0, 0.25).unwrap();
        assert_eq!((t.lower, t.upper), (0.25, 0.25));
        let t = norm_tracking_bounds(0.6, 0.25).unwrap();
        assert_eq!(t.lower, 0.0);
        assert_eq!(t.upper, 1.0);
        let t = norm_tracking_bounds(0.0, 1.0).unwrap();
        assert_eq!((t.lower, t.upper), (1.0, 1.0));
        assert!(norm_tracking_bounds(-0.1, 0.5).is_err());
        assert!(norm_tracking_bounds(0.1, 1.5).is_err());
        assert!(norm_tracking_bounds(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn norm_tracking_is_monotone() {
        let mut prev = norm_tracking_bounds(0.0, 0.3).unwrap();
        for i in 1..100 {
            let t = norm_tracking_bounds(i as f64 * 0.01, 0.3).unwrap();
            assert!(t.lower <= prev.lower && t.upper >= prev.upper);
            prev = t;
        }
    }

    #[test]
    fn perron_check_rejects_mixed_signs() {
        let v = [Complex64::new(0.6, 0.0), Complex64::new(-0.8, 0.0)];
        assert!(!perron_frobenius_check(&v, 1e-8));
        let v = [Complex64::new(0.0, 0.6), Complex64::new(0.0, 0.8)];
        assert!(perron_frobenius_check(&v, 1e-8));
    }
}
