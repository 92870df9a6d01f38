//! Stoquastic embedding of `{X, Z, XX, ZZ}` Hamiltonians with one pinned
//! auxiliary qubit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Hamiltonian, LocalTerm, TermLabel, STOQUASTIC_TOL};
use crate::error::HamiltonianError;

/// `Ĥ = V ⊗ I − P ⊗ X_q`, to be read with qubit `q` fixed in `|−⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinnedHamiltonian {
    pub hamiltonian: Hamiltonian,
    pub pinned_qubit: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum P1 {
    I,
    X,
    Y,
    Z,
}

const P1S: [P1; 4] = [P1::I, P1::X, P1::Y, P1::Z];

fn p1_entry(p: P1, r: usize, c: usize) -> Complex64 {
    let (zero, one, i) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    );
    match (p, r, c) {
        (P1::I, r, c) => {
            if r == c {
                one
            } else {
                zero
            }
        }
        (P1::X, r, c) => {
            if r != c {
                one
            } else {
                zero
            }
        }
        (P1::Y, 0, 1) => -i,
        (P1::Y, 1, 0) => i,
        (P1::Y, _, _) => zero,
        (P1::Z, 0, 0) => one,
        (P1::Z, 1, 1) => -one,
        (P1::Z, _, _) => zero,
    }
}

/// Entry of a Pauli string; `string[k]` acts on local qubit `k`.
fn pauli_entry(string: &[P1], r: usize, c: usize) -> Complex64 {
    string
        .iter()
        .enumerate()
        .fold(Complex64::new(1.0, 0.0), |acc, (k, &p)| {
            acc * p1_entry(p, (r >> k) & 1, (c >> k) & 1)
        })
}

fn pauli_strings(arity: usize) -> Vec<Vec<P1>> {
    (0..1usize << (2 * arity))
        .map(|code| (0..arity).map(|k| P1S[(code >> (2 * k)) & 3]).collect())
        .collect()
}

/// X-type strings contain only I and X with at least one X.
fn is_x_type(s: &[P1]) -> bool {
    s.iter().all(|&p| p == P1::I || p == P1::X) && s.contains(&P1::X)
}

fn allowed(s: &[P1]) -> bool {
    s.iter().all(|&p| p == P1::I || p == P1::X) || s.iter().all(|&p| p == P1::I || p == P1::Z)
}

/// Splits a term into its stoquastic part `V` and positive X-type part `P`.
fn split_term(term: &LocalTerm) -> Result<(Vec<f64>, Vec<f64>), HamiltonianError> {
    let arity = term.arity();
    if arity > 2 {
        return Err(HamiltonianError::InteractionSet(format!(
            "{} on {} qubits",
            term.label(),
            arity
        )));
    }
    let dim = term.dim();
    let mut v = vec![0.0; dim * dim];
    let mut p = vec![0.0; dim * dim];
    for string in pauli_strings(arity) {
        let mut coeff = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                coeff += pauli_entry(&string, c, r) * term.entry(r, c);
            }
        }
        coeff /= dim as f64;
        if coeff.norm() <= STOQUASTIC_TOL {
            continue;
        }
        if !allowed(&string) {
            return Err(HamiltonianError::InteractionSet(term.label().to_string()));
        }
        if coeff.im.abs() > STOQUASTIC_TOL {
            return Err(HamiltonianError::ComplexCoefficient(
                term.label().to_string(),
            ));
        }
        let target = if is_x_type(&string) && coeff.re > 0.0 {
            &mut p
        } else {
            &mut v
        };
        for r in 0..dim {
            for c in 0..dim {
                target[r * dim + c] += coeff.re * pauli_entry(&string, r, c).re;
            }
        }
    }
    Ok((v, p))
}

/// Embeds `h2` as `V ⊗ I − P ⊗ X_q` on `n + 1` qubits with `q = n`.
///
/// Every term of `h2` must act on at most two qubits with real coefficients
/// on `I, X, Z, XX, ZZ`. The `⟨−|_q` block of the result equals `V + P = h2`.
pub fn pin_embed(h2: &Hamiltonian) -> Result<PinnedHamiltonian, HamiltonianError> {
    let q = h2.n_total();
    let mut terms = Vec::new();
    for term in h2.terms() {
        let (v, p) = split_term(term)?;
        if v.iter().any(|&x| x != 0.0) {
            terms.push(LocalTerm::real(term.qubits().to_vec(), &v, term.label())?);
        }
        if p.iter().any(|&x| x != 0.0) {
            let dim = term.dim();
            let big = 2 * dim;
            let mut m = vec![0.0; big * big];
            for r in 0..dim {
                for c in 0..dim {
                    // X on the new top bit
                    m[r * big + (c + dim)] = -p[r * dim + c];
                    m[(r + dim) * big + c] = -p[r * dim + c];
                }
            }
            let mut qubits = term.qubits().to_vec();
            qubits.push(q);
            terms.push(LocalTerm::real(qubits, &m, TermLabel::Pin)?);
        }
    }
    let hamiltonian = Hamiltonian::new(q + 1, terms)?.with_norm_scale(h2.norm_scale())?;
    Ok(PinnedHamiltonian {
        hamiltonian,
        pinned_qubit: q,
    })
}

impl PinnedHamiltonian {
    /// `⟨s|_q Ĥ |s⟩_q` for `|s⟩ = |+⟩` (`sign = 1`) or `|−⟩` (`sign = −1`),
    /// as a Hamiltonian on the remaining qubits.
    pub fn block(&self, sign: f64) -> Result<Hamiltonian, HamiltonianError> {
        restrict_to_x_state(&self.hamiltonian, self.pinned_qubit, sign)
    }

    /// The `|−⟩_q` block, which reproduces the embedded Hamiltonian.
    pub fn minus_block(&self) -> Result<Hamiltonian, HamiltonianError> {
        self.block(-1.0)
    }
}

/// Contracts qubit `q` of `h` against `|s⟩ = (|0⟩ + sign·|1⟩)/√2`.
/// Qubits above `q` shift down by one.
pub fn restrict_to_x_state(
    h: &Hamiltonian,
    q: usize,
    sign: f64,
) -> Result<Hamiltonian, HamiltonianError> {
    if q >= h.n_total() {
        return Err(HamiltonianError::QubitRange {
            qubit: q,
            n_total: h.n_total(),
        });
    }
    let amp = [1.0, sign];
    let relabel = |x: usize| if x > q { x - 1 } else { x };
    let mut terms = Vec::with_capacity(h.terms().len());
    for term in h.terms() {
        let Some(pos) = term.qubits().iter().position(|&x| x == q) else {
            let qubits = term.qubits().iter().map(|&x| relabel(x)).collect();
            terms.push(LocalTerm::new(
                qubits,
                term.matrix().to_vec(),
                term.label(),
            )?);
            continue;
        };
        let rest: Vec<usize> = term
            .qubits()
            .iter()
            .filter(|&&x| x != q)
            .map(|&x| relabel(x))
            .collect();
        let dim = 1usize << rest.len();
        let expand = |local: usize, bit: usize| {
            let low = local & ((1 << pos) - 1);
            let high = (local >> pos) << (pos + 1);
            low | (bit << pos) | high
        };
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..2 {
                    for b in 0..2 {
                        acc += term.entry(expand(r, a), expand(c, b)) * (amp[a] * amp[b] * 0.5);
                    }
                }
                m[r * dim + c] = acc;
            }
        }
        terms.push(LocalTerm::new(rest, m, term.label())?);
    }
    Hamiltonian::new(h.n_total() - 1, terms)?.with_norm_scale(h.norm_scale())
}

#[cfg(test)]
mod tests {
    use super::super::pauli;
    use super::*;
    use crate::numerics::SparseMatrix;

    fn dense(h: &Hamiltonian) -> Vec<Complex64> {
        SparseMatrix::assemble(h, false, 12).unwrap().to_dense()
    }

    #[test]
    fn plus_x_becomes_minus_xx() {
        let h2 = Hamiltonian::new(
            1,
            vec![LocalTerm::real(vec![0], &pauli::X, TermLabel::User).unwrap()],
        )
        .unwrap();
        let pinned = pin_embed(&h2).unwrap();
        assert_eq!(pinned.pinned_qubit, 1);
        let terms = pinned.hamiltonian.terms();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].qubits(), &[0, 1]);
        let want = pauli::scale(pauli::kron(&pauli::X, &pauli::X), -1.0);
        for (got, w) in terms[0].matrix().iter().zip(want) {
            assert_eq!(got.re, w);
        }
        assert!(
            super::super::is_stoquastic(&pinned.hamiltonian, 12)
                .unwrap()
                .stoquastic
        );
        let block = dense(&pinned.minus_block().unwrap());
        let orig = dense(&h2);
        for (a, b) in block.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn stoquastic_input_has_no_pin_terms() {
        let zz = LocalTerm::real(
            vec![0, 1],
            &pauli::kron(&pauli::Z, &pauli::Z),
            TermLabel::User,
        )
        .unwrap();
        let mx = LocalTerm::real(vec![1], &pauli::scale(pauli::X, -0.5), TermLabel::User).unwrap();
        let h2 = Hamiltonian::new(2, vec![zz, mx]).unwrap();
        let pinned = pin_embed(&h2).unwrap();
        assert!(pinned
            .hamiltonian
            .terms()
            .iter()
            .all(|t| t.label() != TermLabel::Pin));
        assert!(pinned.hamiltonian.locality() <= 2);
    }

    #[test]
    fn blocks_are_v_minus_and_plus_p() {
        // h = 0.7 XX − 0.3 X₀ + 0.2 Z₁; V = −0.3 X₀ + 0.2 Z₁, P = 0.7 XX
        let xx = LocalTerm::real(
            vec![0, 1],
            &pauli::scale(pauli::kron(&pauli::X, &pauli::X), 0.7),
            TermLabel::User,
        )
        .unwrap();
        let x0 = LocalTerm::real(vec![0], &pauli::scale(pauli::X, -0.3), TermLabel::User).unwrap();
        let z1 = LocalTerm::real(vec![1], &pauli::scale(pauli::Z, 0.2), TermLabel::User).unwrap();
        let h2 = Hamiltonian::new(2, vec![xx, x0.clone(), z1.clone()]).unwrap();
        let pinned = pin_embed(&h2).unwrap();
        let v = Hamiltonian::new(2, vec![x0, z1]).unwrap();
        let plus = dense(&pinned.block(1.0).unwrap());
        let minus = dense(&pinned.minus_block().unwrap());
        let dv = dense(&v);
        let dh = dense(&h2);
        for i in 0..16 {
            // V − P = 2V − h
            assert!((plus[i] - (dv[i] * 2.0 - dh[i])).norm() < 1e-14);
            assert!((minus[i] - dh[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_outside_interaction_set() {
        let xz = LocalTerm::real(
            vec![0, 1],
            &pauli::kron(&pauli::X, &pauli::Z),
            TermLabel::User,
        )
        .unwrap();
        let h = Hamiltonian::new(2, vec![xz]).unwrap();
        assert!(matches!(
            pin_embed(&h),
            Err(HamiltonianError::InteractionSet(_))
        ));

        let y = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        let h = Hamiltonian::new(
            1,
            vec![LocalTerm::new(vec![0], y, TermLabel::User).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            pin_embed(&h),
            Err(HamiltonianError::InteractionSet(_))
        ));

        let three = LocalTerm::real(vec![0, 1, 2], &[0.0; 64], TermLabel::User).unwrap();
        let h = Hamiltonian::new(3, vec![three]).unwrap();
        assert!(matches!(
            pin_embed(&h),
            Err(HamiltonianError::InteractionSet(_))
        ));
    }
}
