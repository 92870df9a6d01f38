//! Exact minimisation of a diagonal Hamiltonian over subset-state members.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Hamiltonian;
use crate::bits::{format_bits, Bits};
use crate::error::HamiltonianError;
use crate::subsetstate::SubsetState;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSolution {
    /// Unscaled energy `⟨x|H|x⟩`.
    pub energy: f64,
    pub argmin: Bits,
    /// `argmin` as a qubit-0-first bit string.
    pub string: String,
}

/// `⟨z|H|z⟩`, summed term by term in storage order.
pub fn diagonal_energy(h: &Hamiltonian, z: Bits) -> f64 {
    let mut acc = 0.0;
    for term in h.terms() {
        let local = term
            .qubits()
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &q)| {
                acc | ((((z >> q) & 1) as usize) << k)
            });
        acc += term.entry(local, local).re;
    }
    acc
}

/// `min_{x ∈ S} ⟨x|H|x⟩`, ties broken by the lexicographically smallest string.
pub fn solve_diagonal(
    h: &Hamiltonian,
    s: &SubsetState,
) -> Result<DiagonalSolution, HamiltonianError> {
    if let Some(term) = h.terms().iter().find(|t| !t.is_diagonal()) {
        return Err(HamiltonianError::NotDiagonal(term.label().to_string()));
    }
    if !s.is_plain() {
        return Err(HamiltonianError::Parameter(
            "subset state must carry identity isometries".into(),
        ));
    }
    if s.n() != h.n_total() {
        return Err(HamiltonianError::Parameter(format!(
            "subset state on {} qubits, Hamiltonian on {}",
            s.n(),
            h.n_total()
        )));
    }
    let n = s.n();
    let energies: Vec<f64> = s
        .members()
        .par_iter()
        .map(|&z| diagonal_energy(h, z))
        .collect();
    let mut best: Option<(f64, String, Bits)> = None;
    for (&z, &e) in s.members().iter().zip(&energies) {
        let string = format_bits(z, n);
        let better = match &best {
            None => true,
            Some((be, bs, _)) => e < *be || (e == *be && string < *bs),
        };
        if better {
            best = Some((e, string, z));
        }
    }
    let (energy, string, argmin) = best.expect("subset states are non-empty");
    Ok(DiagonalSolution {
        energy,
        argmin,
        string,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{pauli, LocalTerm, TermLabel};
    use super::*;
    use crate::numerics::SparseMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_z() {
        let z1 = LocalTerm::real(vec![1], &pauli::Z, TermLabel::User).unwrap();
        let h = Hamiltonian::new(2, vec![z1]).unwrap();
        // members differ only on qubit 1
        let s = SubsetState::from_strings(2, &["00", "01"]).unwrap();
        let sol = solve_diagonal(&h, &s).unwrap();
        assert_eq!((sol.energy, sol.string.as_str()), (-1.0, "01"));
    }

    #[test]
    fn zz_pair() {
        let zz = LocalTerm::real(
            vec![0, 1],
            &pauli::kron(&pauli::Z, &pauli::Z),
            TermLabel::User,
        )
        .unwrap();
        let h = Hamiltonian::new(2, vec![zz]).unwrap();
        let s = SubsetState::from_strings(2, &["00", "01"]).unwrap();
        let sol = solve_diagonal(&h, &s).unwrap();
        assert_eq!((sol.energy, sol.string.as_str()), (-1.0, "01"));
    }

    #[test]
    fn ties_pick_smallest_string() {
        let h = Hamiltonian::new(3, vec![]).unwrap();
        // "100" < "010" as integers but not as strings
        let s = SubsetState::from_strings(3, &["010", "100", "001"]).unwrap();
        assert_eq!(solve_diagonal(&h, &s).unwrap().string, "001");
    }

    #[test]
    fn rejects_off_diagonal_terms() {
        let x = LocalTerm::real(vec![0], &pauli::X, TermLabel::User).unwrap();
        let h = Hamiltonian::new(1, vec![x]).unwrap();
        let s = SubsetState::from_strings(1, &["0"]).unwrap();
        assert!(matches!(
            solve_diagonal(&h, &s),
            Err(HamiltonianError::NotDiagonal(_))
        ));
    }

    #[test]
    fn matches_assembled_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 12;
        let mut terms = Vec::new();
        for _ in 0..30 {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            let m: Vec<f64> = (0..16)
                .map(|i| {
                    if i % 5 == 0 {
                        rng.random_range(-1.0..1.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            terms.push(LocalTerm::real(vec![a, b], &m, TermLabel::User).unwrap());
        }
        let h = Hamiltonian::new(n, terms).unwrap();
        let diag = SparseMatrix::assemble(&h, false, 14).unwrap().diagonal();
        let members: std::collections::BTreeSet<Bits> =
            (0..50).map(|_| rng.random_range(0..1u128 << n)).collect();
        let s = SubsetState::from_members(n, members.into_iter().collect()).unwrap();
        let sol = solve_diagonal(&h, &s).unwrap();
        let brute = s
            .members()
            .iter()
            .map(|&z| diag[z as usize].re)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(sol.energy, brute);
        assert_eq!(diag[sol.argmin as usize].re, sol.energy);
    }
}
