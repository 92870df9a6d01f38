//! Clock construction for a pre-idled reversible circuit.
//!
//! With `K̂` gates the clock register holds `K̂` qubits `c_1..c_K̂` placed after
//! the circuit's `n + m + p` qubits, and time `t` is the unary word
//! `1^t 0^{K̂−t}`. The Hamiltonian is
//!
//! * `IN`: `(Σ_j Π^(x̄_j)_j + Σ_zero |1⟩⟨1| + Σ_plus |−⟩⟨−|) ⊗ |0⟩⟨0|_{c_1}`,
//! * `CLOCK`: `|01⟩⟨01|` on every adjacent pair `(c_t, c_{t+1})`,
//! * `PROP_t`: `|t−1⟩⟨t−1| + |t⟩⟨t| − R_t ⊗ |t⟩⟨t−1| − R_t ⊗ |t−1⟩⟨t|`, read
//!   off two clock qubits at the ends of the chain and three in the interior.
//!
//! Its kernel is spanned by the history state with `t = 0..=K̂`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Hamiltonian, LocalTerm, TermLabel};
use crate::bits::Bits;
use crate::circuit::{pre_idle, AcceptRule, Basis, Circuit, Gate, GateKind};
use crate::error::{CircuitError, HamiltonianError};
use crate::subsetstate::{build_history_subset, SubsetState};

/// Clock-only terms never touch more than this many qubits.
pub const CLOCK_LOCALITY_CAP: usize = 3;

/// Output of [`compile`]: the Hamiltonian plus the layout needed downstream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompiledHamiltonian {
    pub hamiltonian: Hamiltonian,
    /// The pre-idled circuit the clock follows.
    pub circuit: Circuit,
    pub input: String,
    pub pre_idle: usize,
}

impl CompiledHamiltonian {
    /// `n + m + p`.
    pub fn system_qubits(&self) -> usize {
        self.circuit.width()
    }

    /// `K̂ = K + N`.
    pub fn clock_len(&self) -> usize {
        self.circuit.len()
    }

    /// Index of clock qubit `c_i`, `i` in `1..=K̂`.
    pub fn clock_qubit(&self, i: usize) -> usize {
        self.system_qubits() + i - 1
    }
}

/// Members of `|x, 0^m, +^p⟩` expanded over all `2^p` plus-ancilla values.
pub fn initial_subset(c: &Circuit, x: &str) -> Result<SubsetState, HamiltonianError> {
    let input = c.input_label(x)?;
    let members: Vec<Bits> = (0..1u64 << c.p()).map(|b| c.branch(input, b)).collect();
    Ok(SubsetState::from_members(c.width(), members)?)
}

/// History state `η = (K̂+1)^{-1/2} Σ_{t=0}^{K̂} |φ_t⟩|t⟩` as a plain subset
/// state on `n + m + p + K̂` qubits.
pub fn history_state(compiled: &CompiledHamiltonian) -> Result<SubsetState, HamiltonianError> {
    let s0 = initial_subset(&compiled.circuit, &compiled.input)?;
    Ok(build_history_subset(&s0, compiled.circuit.gates(), true)?)
}

fn projector_term(
    qubit: usize,
    clock: usize,
    diag: [f64; 4],
) -> Result<LocalTerm, HamiltonianError> {
    // local bit 0 = system qubit, bit 1 = c_1; the clock factor is |0⟩⟨0|
    let mut m = [0.0; 16];
    for (r, row) in [0usize, 1].iter().enumerate() {
        for (c, col) in [0usize, 1].iter().enumerate() {
            m[row * 4 + col] = diag[r * 2 + c];
        }
    }
    LocalTerm::real(vec![qubit, clock], &m, TermLabel::In)
}

/// Gate action on a local index whose bit `k` is `gate.qubits()[k]`.
fn local_gate(kind: GateKind, local: usize) -> usize {
    let arity = kind.arity();
    match kind {
        GateKind::Identity => local,
        GateKind::X => local ^ 1,
        _ => {
            let controls = (1 << (arity - 1)) - 1;
            if local & controls == controls {
                local ^ (1 << (arity - 1))
            } else {
                local
            }
        }
    }
}

/// Propagation term for step `t`. `clock` lists the clock qubits it reads and
/// `before`/`after` are their local patterns at times `t−1` and `t`.
fn propagation_term(
    gate: &Gate,
    clock: &[usize],
    before: usize,
    after: usize,
    t: usize,
) -> Result<LocalTerm, HamiltonianError> {
    let gate_qubits: Vec<usize> = gate.support().to_vec();
    let ga = gate_qubits.len();
    let arity = ga + clock.len();
    let dim = 1usize << arity;
    let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
    let one = Complex64::new(1.0, 0.0);
    for g in 0..1usize << ga {
        let rg = if ga == 0 {
            g
        } else {
            local_gate(gate.kind(), g)
        };
        for pattern in [before, after] {
            let i = g | (pattern << ga);
            matrix[i * dim + i] += one;
        }
        // −R ⊗ |after⟩⟨before| − R ⊗ |before⟩⟨after|
        let (col, row) = (g | (before << ga), rg | (after << ga));
        matrix[row * dim + col] -= one;
        let (col, row) = (g | (after << ga), rg | (before << ga));
        matrix[row * dim + col] -= one;
    }
    let mut qubits = gate_qubits;
    qubits.extend_from_slice(clock);
    LocalTerm::new(qubits, matrix, TermLabel::Prop(t))
}

/// Compiles `c` on input `x`, padded with `pre_idle_count` identity gates,
/// into the clock Hamiltonian. `qubit_cap` bounds `n + m + p + K̂`.
pub fn compile(
    c: &Circuit,
    x: &str,
    pre_idle_count: usize,
    qubit_cap: usize,
) -> Result<CompiledHamiltonian, HamiltonianError> {
    if c.basis() != Basis::Z || c.rule() != AcceptRule::OutputQubit {
        return Err(CircuitError::BasisMismatch {
            expected: "Z".into(),
            found: c.basis().to_string(),
        }
        .into());
    }
    let input = c.input_label(x)?;
    let circuit = pre_idle(c, pre_idle_count);
    let width = circuit.width();
    let k_hat = circuit.len();
    let n_total = width + k_hat;
    if n_total > qubit_cap {
        return Err(CircuitError::WidthCap {
            width: n_total,
            cap: qubit_cap,
        }
        .into());
    }
    let clock = |i: usize| width + i - 1;
    let mut terms = Vec::new();

    let c1 = clock(1);
    for j in 0..circuit.n() {
        // Π^(x̄_j) = I − |x_j⟩⟨x_j|
        let diag = if (input >> j) & 1 == 1 {
            [1.0, 0.0, 0.0, 0.0]
        } else {
            [0.0, 0.0, 0.0, 1.0]
        };
        terms.push(projector_term(j, c1, diag)?);
    }
    for j in circuit.n()..circuit.plus_offset() {
        terms.push(projector_term(j, c1, [0.0, 0.0, 0.0, 1.0])?);
    }
    for j in circuit.plus_qubits() {
        // |−⟩⟨−|
        terms.push(projector_term(j, c1, [0.5, -0.5, -0.5, 0.5])?);
    }

    for t in 1..k_hat {
        // |0⟩_{c_t}|1⟩_{c_{t+1}}: local index 0b10
        let mut m = [0.0; 16];
        m[2 * 4 + 2] = 1.0;
        terms.push(LocalTerm::real(
            vec![clock(t), clock(t + 1)],
            &m,
            TermLabel::Clock,
        )?);
    }

    for (idx, gate) in circuit.gates().iter().enumerate() {
        let t = idx + 1;
        let term = if k_hat == 1 {
            propagation_term(gate, &[clock(1)], 0b0, 0b1, t)?
        } else if t == 1 {
            // (c_1, c_2): 00 → 10
            propagation_term(gate, &[clock(1), clock(2)], 0b00, 0b01, t)?
        } else if t == k_hat {
            // (c_{K̂−1}, c_K̂): 10 → 11
            propagation_term(gate, &[clock(t - 1), clock(t)], 0b01, 0b11, t)?
        } else {
            // (c_{t−1}, c_t, c_{t+1}): 100 → 110
            propagation_term(
                gate,
                &[clock(t - 1), clock(t), clock(t + 1)],
                0b001,
                0b011,
                t,
            )?
        };
        terms.push(term);
    }

    let hamiltonian = Hamiltonian::new(n_total, terms)?.normalized();
    Ok(CompiledHamiltonian {
        hamiltonian,
        circuit,
        input: x.to_string(),
        pre_idle: pre_idle_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::is_stoquastic;
    use crate::numerics::SparseMatrix;

    fn energy_of_basis(h: &Hamiltonian, label: usize) -> f64 {
        let m = SparseMatrix::assemble(h, false, 20).unwrap();
        m.diagonal()[label].re
    }

    #[test]
    fn one_gate_layout() {
        let c = Circuit::new(1, 0, 0, vec![Gate::x(0)], Basis::Z).unwrap();
        let compiled = compile(&c, "1", 0, 20).unwrap();
        let h = &compiled.hamiltonian;
        assert_eq!(h.n_total(), 2);
        assert_eq!(compiled.clock_len(), 1);
        // one IN term, no CLOCK term, one PROP term
        let labels: Vec<TermLabel> = h.terms().iter().map(|t| t.label()).collect();
        assert_eq!(labels, vec![TermLabel::In, TermLabel::Prop(1)]);
    }

    #[test]
    fn input_penalty() {
        let c = Circuit::new(2, 1, 1, vec![Gate::x(0), Gate::cnot(0, 1)], Basis::Z).unwrap();
        let compiled = compile(&c, "10", 0, 20).unwrap();
        let h = &compiled.hamiltonian;
        // |x̄_0 = 0, x_1 = 0, 0, 0⟩|t=0⟩: wrong first input bit
        assert!(energy_of_basis(h, 0b0000) >= 1.0);
        // correct input at t=0 still pays the |−⟩ penalty diagonal 1/2 plus
        // the propagation diagonal 1
        assert!((energy_of_basis(h, 0b0001) - 1.5).abs() < 1e-15);
        // zero ancilla set at t=0
        assert!(energy_of_basis(h, 0b0101) >= 1.0);
    }

    #[test]
    fn clock_terms_penalise_illegal_words() {
        let c = Circuit::new(1, 0, 0, vec![Gate::x(0), Gate::x(0), Gate::x(0)], Basis::Z).unwrap();
        let compiled = compile(&c, "0", 0, 20).unwrap();
        let clock = |word: &str| crate::bits::parse_bits(word).unwrap().0 as usize;
        let h = &compiled.hamiltonian;
        let diag = SparseMatrix::assemble(h, false, 20).unwrap().diagonal();
        let clock_energy = |word: &str| {
            h.terms()
                .iter()
                .filter(|t| t.label() == TermLabel::Clock)
                .map(|t| {
                    let local = crate::bits::gather(clock(word) << 1, t.qubits());
                    t.entry(local, local).re
                })
                .sum::<f64>()
        };
        for legal in ["000", "100", "110", "111"] {
            assert_eq!(clock_energy(legal), 0.0);
        }
        for illegal in ["010", "001", "101", "011"] {
            assert!(clock_energy(illegal) >= 1.0);
            assert!(diag[clock(illegal) << 1].re >= 1.0);
        }
    }

    #[test]
    fn locality_by_gate_type() {
        let xc = Circuit::new(
            3,
            0,
            0,
            vec![Gate::x(0), Gate::cnot(0, 1), Gate::cnot(1, 2), Gate::x(2)],
            Basis::Z,
        )
        .unwrap();
        assert!(compile(&xc, "000", 0, 24).unwrap().hamiltonian.locality() <= 5);

        let tof_mid = Circuit::new(
            3,
            0,
            0,
            vec![Gate::x(0), Gate::toffoli(0, 1, 2), Gate::x(2)],
            Basis::Z,
        )
        .unwrap();
        assert_eq!(
            compile(&tof_mid, "010", 0, 24)
                .unwrap()
                .hamiltonian
                .locality(),
            6
        );

        // a Toffoli at the boundary only pairs with two clock qubits
        let tof_edge =
            Circuit::new(3, 0, 0, vec![Gate::toffoli(0, 1, 2), Gate::x(0)], Basis::Z).unwrap();
        assert_eq!(
            compile(&tof_edge, "110", 0, 24)
                .unwrap()
                .hamiltonian
                .locality(),
            5
        );

        let single = Circuit::new(2, 0, 0, vec![Gate::cnot(0, 1)], Basis::Z).unwrap();
        assert!(
            compile(&single, "10", 0, 24)
                .unwrap()
                .hamiltonian
                .locality()
                <= 5
        );
    }

    #[test]
    fn clock_only_terms_stay_small() {
        let c = Circuit::new(2, 0, 1, vec![Gate::cnot(2, 0), Gate::x(1)], Basis::Z).unwrap();
        let compiled = compile(&c, "01", 3, 24).unwrap();
        for term in compiled.hamiltonian.terms() {
            if term.qubits().iter().all(|&q| q >= compiled.system_qubits()) {
                assert!(term.arity() <= CLOCK_LOCALITY_CAP);
            }
        }
    }

    #[test]
    fn compiled_is_stoquastic() {
        let c = Circuit::new(
            2,
            1,
            1,
            vec![
                Gate::cnot(3, 2),
                Gate::toffoli(0, 2, 1),
                Gate::x(0),
                Gate::cnot(1, 0),
            ],
            Basis::Z,
        )
        .unwrap();
        let compiled = compile(&c, "01", 2, 24).unwrap();
        assert!(is_stoquastic(&compiled.hamiltonian, 24).unwrap().stoquastic);
    }

    #[test]
    fn errors() {
        let c = Circuit::new(2, 0, 0, vec![Gate::x(0)], Basis::Z).unwrap();
        assert!(matches!(
            compile(&c, "00", 30, 8),
            Err(HamiltonianError::Circuit(CircuitError::WidthCap {
                width: 33,
                cap: 8
            }))
        ));
        let x = Circuit::new(2, 0, 0, vec![Gate::x(0)], Basis::X).unwrap();
        assert!(matches!(
            compile(&x, "00", 0, 8),
            Err(HamiltonianError::Circuit(
                CircuitError::BasisMismatch { .. }
            ))
        ));
    }
}
