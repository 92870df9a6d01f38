//! Classically reversible verification circuits.
//!
//! A circuit acts on `n` input qubits, `m` ancillae prepared in `|0⟩` and `p`
//! ancillae prepared in `|+⟩`, in that order. Every gate is an X, CNOT,
//! Toffoli or explicit identity, so the unitary permutes basis states and the
//! acceptance probability can be computed by following the `2^p` equally
//! weighted branches of `|+^p⟩` instead of a state vector.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{format_bits, low_mask, parse_bits_exact, Bits};
use crate::error::CircuitError;

/// Default desk-scale width cap.
pub const DEFAULT_WIDTH_CAP: usize = 24;

/// Hard ceiling for branch counting with 64-bit integers.
const MAX_PLUS_ANCILLAE: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Cnot,
    Toffoli,
    Identity,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::Identity => 1,
            GateKind::Cnot => 2,
            GateKind::Toffoli => 3,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Identity => "ID",
        }
    }
}

/// A reversible gate. The last qubit in `qubits` is the flipped target; the
/// others are controls.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self, CircuitError> {
        let gate = Gate { kind, qubits };
        if gate.qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                gate: kind.mnemonic().to_string(),
                expected: kind.arity(),
                got: gate.qubits.len(),
            });
        }
        for (i, &q) in gate.qubits.iter().enumerate() {
            if gate.qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateTarget {
                    gate: gate.to_string(),
                    qubit: q,
                });
            }
        }
        Ok(gate)
    }

    pub fn x(target: usize) -> Self {
        Gate {
            kind: GateKind::X,
            qubits: vec![target],
        }
    }

    pub fn identity(target: usize) -> Self {
        Gate {
            kind: GateKind::Identity,
            qubits: vec![target],
        }
    }

    /// # Panics
    /// If `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, vec![control, target]).expect("distinct CNOT qubits")
    }

    /// # Panics
    /// If the three qubits are not distinct.
    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Self::new(GateKind::Toffoli, vec![c1, c2, target]).expect("distinct Toffoli qubits")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    /// Qubits the gate touches, target last.
    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gates have at least one qubit")
    }

    pub fn controls(&self) -> &[usize] {
        &self.qubits[..self.qubits.len() - 1]
    }

    /// Qubits on which the gate acts non-trivially (empty for identity).
    pub fn support(&self) -> &[usize] {
        match self.kind {
            GateKind::Identity => &[],
            _ => &self.qubits,
        }
    }

    /// Image of a basis state.
    #[inline]
    pub fn apply(&self, bits: Bits) -> Bits {
        match self.kind {
            GateKind::Identity => bits,
            GateKind::X => bits ^ (1 << self.qubits[0]),
            _ => {
                let fire = self.controls().iter().all(|&c| (bits >> c) & 1 == 1);
                if fire {
                    bits ^ (1 << self.target())
                } else {
                    bits
                }
            }
        }
    }

    fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.mnemonic())?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
        })
    }
}

/// How the final state is turned into accept/reject.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AcceptRule {
    /// Measure the output qubit in the circuit basis; accept on `1` (Z) or `+` (X).
    OutputQubit,
    /// Measure the first `n + m` qubits in Z; accept iff the outcome equals the
    /// input followed by `0^m`.
    InputEcho,
}

/// A classically reversible verification circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    m: usize,
    p: usize,
    gates: Vec<Gate>,
    basis: Basis,
    output_qubit: usize,
    rule: AcceptRule,
}

/// Exact acceptance probability as the ratio `accepted / total`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Acceptance {
    pub accepted: u64,
    pub total: u64,
}

impl Acceptance {
    pub fn probability(&self) -> f64 {
        self.accepted as f64 / self.total as f64
    }
}

impl Circuit {
    pub fn new(
        n: usize,
        m: usize,
        p: usize,
        gates: Vec<Gate>,
        basis: Basis,
    ) -> Result<Self, CircuitError> {
        let circuit = Circuit {
            n,
            m,
            p,
            gates,
            basis,
            output_qubit: 0,
            rule: AcceptRule::OutputQubit,
        };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn with_output_qubit(mut self, qubit: usize) -> Result<Self, CircuitError> {
        self.output_qubit = qubit;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), CircuitError> {
        if self.gates.is_empty() {
            return Err(CircuitError::EmptyCircuit);
        }
        let width = self.width();
        if self.output_qubit >= width {
            return Err(CircuitError::WidthViolation {
                qubit: self.output_qubit,
                width,
            });
        }
        if width > crate::bits::MAX_LABEL_QUBITS {
            return Err(CircuitError::WidthCap {
                width,
                cap: crate::bits::MAX_LABEL_QUBITS,
            });
        }
        for gate in &self.gates {
            if let Some(&q) = gate.qubits().iter().find(|&&q| q >= width) {
                return Err(CircuitError::WidthViolation { qubit: q, width });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn width(&self) -> usize {
        self.n + self.m + self.p
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Gate count `K`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn output_qubit(&self) -> usize {
        self.output_qubit
    }

    pub fn rule(&self) -> AcceptRule {
        self.rule
    }

    /// First index of the `|+⟩` ancilla block.
    pub fn plus_offset(&self) -> usize {
        self.n + self.m
    }

    pub fn plus_qubits(&self) -> std::ops::Range<usize> {
        self.plus_offset()..self.width()
    }

    /// Number of leading gates that act only on input and `|0⟩` ancilla
    /// qubits, i.e. before any gate touches a `|+⟩` ancilla.
    pub fn plus_free_prefix(&self) -> usize {
        let limit = self.plus_offset();
        self.gates
            .iter()
            .take_while(|g| g.support().iter().all(|&q| q < limit))
            .count()
    }

    /// Basis label of `|x, 0^m⟩` with every `|+⟩` ancilla set to 0.
    pub fn input_label(&self, x: &str) -> Result<Bits, CircuitError> {
        parse_bits_exact(x, self.n)
    }

    /// Runs every gate on a basis state.
    pub fn run(&self, bits: Bits) -> Bits {
        self.gates.iter().fold(bits, |b, g| g.apply(b))
    }

    /// Labels of the `2^p` branches of `|x, 0^m, +^p⟩`, in order of the
    /// integer formed by the plus-ancilla bits.
    pub fn branch(&self, input: Bits, index: u64) -> Bits {
        input | ((index as Bits) << self.plus_offset())
    }

    pub fn check_cap(&self, cap: usize) -> Result<(), CircuitError> {
        if self.width() > cap {
            return Err(CircuitError::WidthCap {
                width: self.width(),
                cap,
            });
        }
        if self.p > MAX_PLUS_ANCILLAE {
            return Err(CircuitError::WidthCap {
                width: self.p,
                cap: MAX_PLUS_ANCILLAE,
            });
        }
        Ok(())
    }

    /// Draws a random circuit. X/CNOT/Toffoli are chosen uniformly among the
    /// kinds that fit the width.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        n: usize,
        m: usize,
        p: usize,
        gate_count: usize,
        basis: Basis,
    ) -> Result<Self, CircuitError> {
        let width = n + m + p;
        let kinds: &[GateKind] = match width {
            0 => return Err(CircuitError::WidthViolation { qubit: 0, width }),
            1 => &[GateKind::X],
            2 => &[GateKind::X, GateKind::Cnot],
            _ => &[GateKind::X, GateKind::Cnot, GateKind::Toffoli],
        };
        let gates = (0..gate_count)
            .map(|_| {
                let kind = kinds[rng.random_range(0..kinds.len())];
                let mut qubits = Vec::with_capacity(kind.arity());
                while qubits.len() < kind.arity() {
                    let q = rng.random_range(0..width);
                    if !qubits.contains(&q) {
                        qubits.push(q);
                    }
                }
                Gate { kind, qubits }
            })
            .collect();
        Circuit::new(n, m, p, gates, basis)
    }

    pub fn parse(text: &str) -> Result<Self, CircuitError> {
        parse_circuit(text)
    }

    /// Text form accepted by [`parse_circuit`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "n={} m={} p={} basis={}",
            self.n, self.m, self.p, self.basis
        );
        if self.output_qubit != 0 {
            out.push_str(&format!(" output={}", self.output_qubit));
        }
        if self.rule == AcceptRule::InputEcho {
            out.push_str(" accept=echo");
        }
        out.push('\n');
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

fn syntax(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses the `.crqvc` text format.
///
/// ```text
/// # comment
/// n=1 m=0 p=1 basis=Z
/// CNOT 1 0
/// ```
///
/// The header may also carry `output=<q>` and `accept=echo`.
pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut header: Option<(usize, usize, usize, Basis, usize, AcceptRule)> = None;
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            let (mut n, mut m, mut p) = (None, None, None);
            let mut basis = Basis::Z;
            let mut output = 0;
            let mut rule = AcceptRule::OutputQubit;
            for token in line.split_whitespace() {
                let (key, value) = token
                    .split_once('=')
                    .ok_or_else(|| syntax(lineno, format!("expected key=value, got {token:?}")))?;
                let int = || {
                    value
                        .parse::<usize>()
                        .map_err(|_| syntax(lineno, format!("invalid integer {value:?} for {key}")))
                };
                match key {
                    "n" => n = Some(int()?),
                    "m" => m = Some(int()?),
                    "p" => p = Some(int()?),
                    "output" => output = int()?,
                    "basis" => {
                        basis = match value {
                            "Z" | "z" => Basis::Z,
                            "X" | "x" => Basis::X,
                            _ => return Err(syntax(lineno, format!("unknown basis {value:?}"))),
                        }
                    }
                    "accept" => {
                        rule = match value {
                            "output" => AcceptRule::OutputQubit,
                            "echo" => AcceptRule::InputEcho,
                            _ => {
                                return Err(syntax(
                                    lineno,
                                    format!("unknown accept rule {value:?}"),
                                ))
                            }
                        }
                    }
                    _ => return Err(syntax(lineno, format!("unknown header key {key:?}"))),
                }
            }
            let missing = |name: &str| syntax(lineno, format!("header is missing {name}="));
            header = Some((
                n.ok_or_else(|| missing("n"))?,
                m.ok_or_else(|| missing("m"))?,
                p.ok_or_else(|| missing("p"))?,
                basis,
                output,
                rule,
            ));
            continue;
        }
        let mut tokens = line.split_whitespace();
        let name = tokens.next().expect("non-empty line");
        let kind = match name.to_ascii_uppercase().as_str() {
            "X" => GateKind::X,
            "CNOT" | "CX" => GateKind::Cnot,
            "TOFFOLI" | "CCX" => GateKind::Toffoli,
            "ID" | "I" => GateKind::Identity,
            _ => return Err(syntax(lineno, format!("unknown gate {name:?}"))),
        };
        let qubits = tokens
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| syntax(lineno, format!("invalid qubit index {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        gates.push(Gate::new(kind, qubits)?);
    }
    let (n, m, p, basis, output, rule) = header.ok_or_else(|| syntax(0, "missing header line"))?;
    let mut circuit = Circuit::new(n, m, p, gates, basis)?.with_output_qubit(output)?;
    circuit.rule = rule;
    Ok(circuit)
}

/// Exact acceptance probability of `c` on input `x`.
///
/// The `2^p` branches of the `|+⟩` ancillae are pushed through the gates
/// individually. For a Z-basis output the accepted branches are counted
/// directly. For an X-basis output, `⟨φ|U†X U|φ⟩` is the fraction of branches
/// whose image with the output bit flipped is again an image, and the
/// probability is `1/2 + 1/2·⟨φ|U†X U|φ⟩`.
pub fn acceptance_probability(
    c: &Circuit,
    x: &str,
    cap: usize,
) -> Result<Acceptance, CircuitError> {
    c.check_cap(cap)?;
    let input = c.input_label(x)?;
    let branches: u64 = 1 << c.p;
    let out_mask: Bits = 1 << c.output_qubit;
    match (c.rule, c.basis) {
        (AcceptRule::OutputQubit, Basis::Z) => {
            let accepted = (0..branches)
                .into_par_iter()
                .filter(|&b| c.run(c.branch(input, b)) & out_mask != 0)
                .count() as u64;
            Ok(Acceptance {
                accepted,
                total: branches,
            })
        }
        (AcceptRule::OutputQubit, Basis::X) => {
            let mut images: Vec<Bits> = (0..branches)
                .into_par_iter()
                .map(|b| c.run(c.branch(input, b)))
                .collect();
            images.par_sort_unstable();
            let paired = images
                .par_iter()
                .filter(|&&img| images.binary_search(&(img ^ out_mask)).is_ok())
                .count() as u64;
            Ok(Acceptance {
                accepted: branches + paired,
                total: 2 * branches,
            })
        }
        (AcceptRule::InputEcho, _) => {
            let mask = low_mask(c.plus_offset());
            let accepted = (0..branches)
                .into_par_iter()
                .filter(|&b| c.run(c.branch(input, b)) & mask == input)
                .count() as u64;
            Ok(Acceptance {
                accepted,
                total: branches,
            })
        }
    }
}

/// Prepends `idle` identity gates acting on the output qubit.
pub fn pre_idle(c: &Circuit, idle: usize) -> Circuit {
    let mut out = c.clone();
    let mut gates = vec![Gate::identity(c.output_qubit); idle];
    gates.extend_from_slice(&c.gates);
    out.gates = gates;
    out
}

/// Builds `Ω = U† X_out U` for an X-basis circuit, accepting iff the first
/// `n + m` qubits read back the input followed by zeros. For every input,
/// `Pr[Ω accepts] = 2·Pr[U accepts] − 1`.
pub fn omega_transform(c: &Circuit) -> Result<Circuit, CircuitError> {
    if c.basis != Basis::X || c.rule != AcceptRule::OutputQubit {
        return Err(CircuitError::BasisMismatch {
            expected: "X".into(),
            found: c.basis.to_string(),
        });
    }
    let mut gates = c.gates.clone();
    gates.push(Gate::x(c.output_qubit));
    gates.extend(c.gates.iter().rev().cloned());
    Ok(Circuit {
        n: c.n,
        m: c.m,
        p: c.p,
        gates,
        basis: Basis::Z,
        output_qubit: c.output_qubit,
        rule: AcceptRule::InputEcho,
    })
}

/// A boolean wire in the majority network: either a known constant or a qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Signal {
    Const(bool),
    Wire(usize),
}

struct MajorityBuilder {
    next: usize,
    gates: Vec<Gate>,
}

impl MajorityBuilder {
    fn fresh(&mut self) -> usize {
        let q = self.next;
        self.next += 1;
        q
    }

    fn and(&mut self, a: Signal, b: Signal) -> Signal {
        match (a, b) {
            (Signal::Const(false), _) | (_, Signal::Const(false)) => Signal::Const(false),
            (Signal::Const(true), s) | (s, Signal::Const(true)) => s,
            (Signal::Wire(x), Signal::Wire(y)) => {
                let t = self.fresh();
                self.gates.push(Gate::toffoli(x, y, t));
                Signal::Wire(t)
            }
        }
    }

    fn or(&mut self, a: Signal, b: Signal) -> Signal {
        match (a, b) {
            (Signal::Const(true), _) | (_, Signal::Const(true)) => Signal::Const(true),
            (Signal::Const(false), s) | (s, Signal::Const(false)) => s,
            (Signal::Wire(x), Signal::Wire(y)) => {
                // a ⊕ b ⊕ ab = a ∨ b
                let t = self.fresh();
                self.gates.push(Gate::cnot(x, t));
                self.gates.push(Gate::cnot(y, t));
                self.gates.push(Gate::toffoli(x, y, t));
                Signal::Wire(t)
            }
        }
    }
}

/// Reversible threshold network: `reached[j]` after `i` votes holds "at least
/// `j` of the first `i` votes are 1". Only counts that can still reach the
/// threshold are materialised. Returns the majority wire, the gates and the
/// number of fresh `|0⟩` ancillae used, which are numbered from `first_ancilla`.
fn majority_network(votes: &[usize], first_ancilla: usize) -> (usize, Vec<Gate>, usize) {
    let rounds = votes.len();
    let threshold = rounds / 2 + 1;
    let mut builder = MajorityBuilder {
        next: first_ancilla,
        gates: Vec::new(),
    };
    let mut reached = vec![Signal::Const(false); threshold + 1];
    reached[0] = Signal::Const(true);
    for (i, &vote) in votes.iter().enumerate() {
        let seen = i + 1;
        let lowest_useful = threshold.saturating_sub(rounds - seen).max(1);
        let mut next = reached.clone();
        for j in lowest_useful..=threshold.min(seen) {
            let extended = builder.and(Signal::Wire(vote), reached[j - 1]);
            next[j] = builder.or(reached[j], extended);
        }
        reached = next;
    }
    let wire = match reached[threshold] {
        Signal::Wire(w) => w,
        Signal::Const(_) => unreachable!("majority of at least one vote depends on the votes"),
    };
    let used = builder.next - first_ancilla;
    (wire, builder.gates, used)
}

/// Runs `rounds` independent copies of `c` and writes the majority of their
/// outputs onto qubit 0.
///
/// Layout of the result: the original `n` input qubits, then the `|0⟩`
/// ancillae of copy 0, then for each further copy a block of `n + m` zeroed
/// qubits (its input is CNOT-copied from the shared input), then the majority
/// network's ancillae, then all `rounds · p` plus-ancillae (copy by copy).
/// After the network, three CNOTs swap the majority wire into qubit 0.
pub fn amplify(c: &Circuit, rounds: usize, cap: usize) -> Result<Circuit, CircuitError> {
    if rounds == 0 || rounds % 2 == 0 {
        return Err(CircuitError::InvalidRounds(rounds));
    }
    if c.basis != Basis::Z || c.rule != AcceptRule::OutputQubit {
        return Err(CircuitError::BasisMismatch {
            expected: "Z".into(),
            found: c.basis.to_string(),
        });
    }
    if rounds == 1 {
        c.check_cap(cap)?;
        return Ok(c.clone());
    }
    let (n, m, p) = (c.n, c.m, c.p);
    let block = n + m;
    let gadget_base = block + (rounds - 1) * block;
    // dry run to size the network; its ancilla count depends only on `rounds`
    let dummy: Vec<usize> = (0..rounds).collect();
    let (_, _, gadget_size) = majority_network(&dummy, rounds);
    let plus_base = gadget_base + gadget_size;
    let width = plus_base + rounds * p;
    if width > cap {
        return Err(CircuitError::WidthCap { width, cap });
    }

    let place = |copy: usize, q: usize| -> usize {
        if q >= block {
            plus_base + copy * p + (q - block)
        } else if copy == 0 {
            q
        } else {
            block + (copy - 1) * block + q
        }
    };

    let mut gates = Vec::new();
    for copy in 1..rounds {
        for j in 0..n {
            gates.push(Gate::cnot(j, place(copy, j)));
        }
    }
    for copy in 0..rounds {
        gates.extend(c.gates.iter().map(|g| g.remap(|q| place(copy, q))));
    }
    let votes: Vec<usize> = (0..rounds)
        .map(|copy| place(copy, c.output_qubit))
        .collect();
    let (majority, network, used) = majority_network(&votes, gadget_base);
    debug_assert_eq!(used, gadget_size);
    gates.extend(network);
    if majority != 0 {
        gates.push(Gate::cnot(majority, 0));
        gates.push(Gate::cnot(0, majority));
        gates.push(Gate::cnot(majority, 0));
    }
    Circuit::new(n, plus_base - n, rounds * p, gates, Basis::Z)
}

/// Number of `|0⟩` ancillae the majority network uses for `rounds` votes.
pub fn majority_ancillae(rounds: usize) -> usize {
    if rounds <= 1 {
        return 0;
    }
    let dummy: Vec<usize> = (0..rounds).collect();
    majority_network(&dummy, rounds).2
}

/// Acceptance statistics and the threshold pair they are judged against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceStats {
    pub p_accept: f64,
    pub alpha: f64,
    pub beta: f64,
    pub f_rounds: usize,
}

impl AcceptanceStats {
    /// Statistics of an unamplified bounded-error circuit, `(α, β) = (2/3, 1/3)`.
    pub fn bounded_error(p_accept: f64) -> Self {
        AcceptanceStats {
            p_accept,
            alpha: 2.0 / 3.0,
            beta: 1.0 / 3.0,
            f_rounds: 1,
        }
    }

    /// Statistics after a `rounds`-fold majority vote.
    pub fn amplified(&self, rounds: usize) -> Self {
        AcceptanceStats {
            p_accept: majority_probability(self.p_accept, rounds),
            alpha: majority_probability(self.alpha, rounds),
            beta: majority_probability(self.beta, rounds),
            f_rounds: self.f_rounds * rounds,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.p_accept >= self.alpha
    }

    pub fn is_no(&self) -> bool {
        self.p_accept <= self.beta
    }
}

/// Probability that the majority of `rounds` independent trials succeeds
/// when each succeeds with probability `p`.
pub fn majority_probability(p: f64, rounds: usize) -> f64 {
    let threshold = rounds / 2 + 1;
    (threshold..=rounds)
        .map(|k| binomial(rounds, k) * p.powi(k as i32) * (1.0 - p).powi((rounds - k) as i32))
        .sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Smallest odd round count whose majority vote turns `(2/3, 1/3)` into
/// thresholds at least as good as `(1 − 2^{−f}, 2^{−f})`.
pub fn rounds_for_error_exponent(f: u32) -> usize {
    let target = 0.5f64.powi(f as i32);
    let mut rounds = 1;
    while majority_probability(1.0 / 3.0, rounds) > target {
        rounds += 2;
    }
    rounds
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Formats the first `n` bits of a label as an input string.
pub fn format_input(bits: Bits, n: usize) -> String {
    format_bits(bits, n)
}
