//! Local Hamiltonians: explicit small matrices on listed qubits.
//!
//! A [`LocalTerm`] stores a `2^a × 2^a` row-major matrix; bit `k` of a local
//! row/column index is the state of `qubits[k]`. A [`Hamiltonian`] is a sum of
//! such terms on `n_total` qubits together with a positive `norm_scale` that
//! maps it to the `‖H‖ ≤ 1` normalisation.

mod compile;
mod diagonal;
mod guided;
mod pin;

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::HamiltonianError;
use crate::numerics::SparseMatrix;

pub use compile::{
    compile, history_state, initial_subset, CompiledHamiltonian, CLOCK_LOCALITY_CAP,
};
pub use diagonal::{diagonal_energy, solve_diagonal, DiagonalSolution};
pub use guided::{
    build_guided_instance, delta_bound, output_term, perturb, state_distance, truncated_history,
    EpsilonSource, GuideDetails, GuideEncoding, GuideOptions, GuidedInstance, InstanceClaim,
    PerturbationConfig, PerturbedHamiltonian, DEFAULT_SLACK,
};
pub use pin::{pin_embed, restrict_to_x_state, PinnedHamiltonian};

/// Largest term arity accepted anywhere.
pub const LOCALITY_CAP: usize = 6;

/// Hermiticity tolerance for term matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Off-diagonal entries above this are a stoquasticity violation.
pub const STOQUASTIC_TOL: f64 = 1e-12;

/// Provenance of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermLabel {
    In,
    Clock,
    Prop(usize),
    Out,
    Pin,
    User,
}

impl fmt::Display for TermLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermLabel::In => f.write_str("IN"),
            TermLabel::Clock => f.write_str("CLOCK"),
            TermLabel::Prop(t) => write!(f, "PROP_{t}"),
            TermLabel::Out => f.write_str("OUT"),
            TermLabel::Pin => f.write_str("PIN"),
            TermLabel::User => f.write_str("USER"),
        }
    }
}

impl FromStr for TermLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "IN" => TermLabel::In,
            "CLOCK" => TermLabel::Clock,
            "OUT" => TermLabel::Out,
            "PIN" => TermLabel::Pin,
            "USER" => TermLabel::User,
            _ => {
                let t = s
                    .strip_prefix("PROP_")
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| format!("unknown term label {s:?}"))?;
                TermLabel::Prop(t)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalTerm {
    qubits: Vec<usize>,
    matrix: Vec<Complex64>,
    label: TermLabel,
}

impl LocalTerm {
    pub fn new(
        qubits: Vec<usize>,
        matrix: Vec<Complex64>,
        label: TermLabel,
    ) -> Result<Self, HamiltonianError> {
        if qubits.len() > LOCALITY_CAP {
            return Err(HamiltonianError::ArityCap(qubits.len()));
        }
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[..i].contains(&q) {
                return Err(HamiltonianError::DuplicateQubit(q));
            }
        }
        let dim = 1usize << qubits.len();
        if matrix.len() != dim * dim {
            return Err(HamiltonianError::MatrixShape {
                expected: dim * dim,
                got: matrix.len(),
            });
        }
        let term = LocalTerm {
            qubits,
            matrix,
            label,
        };
        let deviation = term.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(HamiltonianError::NotHermitian {
                label: label.to_string(),
                deviation,
            });
        }
        Ok(term)
    }

    /// Real-valued convenience constructor.
    pub fn real(
        qubits: Vec<usize>,
        matrix: &[f64],
        label: TermLabel,
    ) -> Result<Self, HamiltonianError> {
        Self::new(
            qubits,
            matrix.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            label,
        )
    }

    fn hermitian_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn label(&self) -> TermLabel {
        self.label
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits.len()
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim() + col]
    }

    pub fn is_diagonal(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|r| (0..dim).all(|c| r == c || self.entry(r, c).norm() <= STOQUASTIC_TOL))
    }

    /// Largest absolute row sum, an upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        let dim = self.dim();
        (0..dim)
            .map(|r| (0..dim).map(|c| self.entry(r, c).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> LocalTerm {
        LocalTerm {
            qubits: self.qubits.clone(),
            matrix: self.matrix.iter().map(|v| v * factor).collect(),
            label: self.label,
        }
    }

    /// Non-zero entries of each local row as `(column, value)`.
    pub fn row_structure(&self) -> Vec<Vec<(usize, Complex64)>> {
        let dim = self.dim();
        (0..dim)
            .map(|r| {
                (0..dim)
                    .filter_map(|c| {
                        let v = self.entry(r, c);
                        (v != Complex64::new(0.0, 0.0)).then_some((c, v))
                    })
                    .collect()
            })
            .collect()
    }
}

/// A sum of local terms on `n_total` qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    n_total: usize,
    terms: Vec<LocalTerm>,
    norm_scale: f64,
}

/// Result of the stoquasticity scan; `witness` is the first offending
/// `(row, col, value)` in row-major order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoquasticCheck {
    pub stoquastic: bool,
    pub witness: Option<(usize, usize, Complex64)>,
}

impl Hamiltonian {
    pub fn new(n_total: usize, terms: Vec<LocalTerm>) -> Result<Self, HamiltonianError> {
        for term in &terms {
            if let Some(&q) = term.qubits.iter().find(|&&q| q >= n_total) {
                return Err(HamiltonianError::QubitRange { qubit: q, n_total });
            }
        }
        Ok(Hamiltonian {
            n_total,
            terms,
            norm_scale: 1.0,
        })
    }

    pub fn with_norm_scale(mut self, scale: f64) -> Result<Self, HamiltonianError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(HamiltonianError::NormScale(scale));
        }
        self.norm_scale = scale;
        Ok(self)
    }

    /// Sets `norm_scale = 1 / Σ_j ‖h_j‖_∞`, which guarantees `‖scale·H‖ ≤ 1`.
    pub fn normalized(self) -> Self {
        let bound = self.norm_bound();
        let scale = if bound > 0.0 { 1.0 / bound } else { 1.0 };
        Hamiltonian {
            norm_scale: scale,
            ..self
        }
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn norm_scale(&self) -> f64 {
        self.norm_scale
    }

    /// Triangle-inequality bound on the unscaled operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(LocalTerm::norm_bound).sum()
    }

    /// Largest term arity.
    pub fn locality(&self) -> usize {
        self.terms.iter().map(LocalTerm::arity).max().unwrap_or(0)
    }

    pub fn push(&mut self, term: LocalTerm) -> Result<(), HamiltonianError> {
        if let Some(&q) = term.qubits.iter().find(|&&q| q >= self.n_total) {
            return Err(HamiltonianError::QubitRange {
                qubit: q,
                n_total: self.n_total,
            });
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "n_total={}\nnorm_scale={:?}\n",
            self.n_total, self.norm_scale
        );
        for term in &self.terms {
            let qubits: Vec<String> = term.qubits.iter().map(|q| q.to_string()).collect();
            out.push_str(if qubits.is_empty() { "-" } else { "" });
            out.push_str(&qubits.join(","));
            for v in &term.matrix {
                let _ = write!(out, " {:?},{:?}", v.re, v.im);
            }
            let _ = writeln!(out, " {}", term.label);
        }
        out
    }

    /// Parses the `.ham` text format:
    ///
    /// ```text
    /// n_total=2
    /// norm_scale=1.0
    /// 0 0.0,0.0 1.0,0.0 1.0,0.0 0.0,0.0 USER
    /// ```
    ///
    /// Each term line is the comma-separated qubit tuple (`-` for none), the
    /// row-major `re,im` entries and the label. Extra `key=value` header lines
    /// are returned alongside the Hamiltonian.
    pub fn parse_with_meta(text: &str) -> Result<(Self, Vec<(String, String)>), HamiltonianError> {
        let syntax = |line: usize, message: String| HamiltonianError::Syntax { line, message };
        let mut n_total = None;
        let mut norm_scale = 1.0;
        let mut meta = Vec::new();
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() == 1 {
                if let Some((key, value)) = line.split_once('=') {
                    match key {
                        "n_total" => {
                            n_total = Some(value.parse::<usize>().map_err(|_| {
                                syntax(lineno, format!("invalid n_total {value:?}"))
                            })?)
                        }
                        "norm_scale" => {
                            norm_scale = value.parse::<f64>().map_err(|_| {
                                syntax(lineno, format!("invalid norm_scale {value:?}"))
                            })?
                        }
                        _ => meta.push((key.to_string(), value.to_string())),
                    }
                    continue;
                }
            }
            if tokens.len() < 3 {
                return Err(syntax(
                    lineno,
                    "term needs qubits, entries and a label".into(),
                ));
            }
            let qubits = if tokens[0] == "-" {
                Vec::new()
            } else {
                tokens[0]
                    .split(',')
                    .map(|q| {
                        q.parse::<usize>()
                            .map_err(|_| syntax(lineno, format!("invalid qubit {q:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            };
            let label: TermLabel = tokens[tokens.len() - 1]
                .parse()
                .map_err(|e: String| syntax(lineno, e))?;
            let matrix = tokens[1..tokens.len() - 1]
                .iter()
                .map(|t| {
                    let (re, im) = t.split_once(',').unwrap_or((t, "0"));
                    match (re.parse::<f64>(), im.parse::<f64>()) {
                        (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
                        _ => Err(syntax(lineno, format!("invalid entry {t:?}"))),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            terms.push(LocalTerm::new(qubits, matrix, label)?);
        }
        let n_total = n_total.ok_or_else(|| syntax(0, "missing n_total=".into()))?;
        let h = Hamiltonian::new(n_total, terms)?.with_norm_scale(norm_scale)?;
        Ok((h, meta))
    }

    pub fn parse(text: &str) -> Result<Self, HamiltonianError> {
        Ok(Self::parse_with_meta(text)?.0)
    }
}

/// Checks that every off-diagonal entry of the assembled matrix is real and
/// at most [`STOQUASTIC_TOL`].
pub fn is_stoquastic(
    h: &Hamiltonian,
    qubit_cap: usize,
) -> Result<StoquasticCheck, crate::error::NumericsError> {
    let m = SparseMatrix::assemble(h, false, qubit_cap)?;
    Ok(m.stoquastic_check(STOQUASTIC_TOL))
}

/// Largest term arity.
pub fn locality(h: &Hamiltonian) -> usize {
    h.locality()
}

/// `(η, ε)` parameters of a Hamiltonian simulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulatorParams {
    pub eta: f64,
    pub epsilon: f64,
}

/// Thresholds for the simulating Hamiltonian: `(a + ε, b − ε)`.
pub fn simulator_thresholds(
    a: f64,
    b: f64,
    params: SimulatorParams,
) -> Result<(f64, f64), HamiltonianError> {
    let half_gap = (b - a) / 2.0;
    if !(params.epsilon >= 0.0 && params.epsilon < half_gap) {
        return Err(HamiltonianError::EpsilonTooLarge {
            epsilon: params.epsilon,
            half_gap,
        });
    }
    Ok((a + params.epsilon, b - params.epsilon))
}

/// Single-qubit Pauli matrices, row-major.
pub mod pauli {
    pub const I: [f64; 4] = [1.0, 0.0, 0.0, 1.0];
    pub const X: [f64; 4] = [0.0, 1.0, 1.0, 0.0];
    pub const Z: [f64; 4] = [1.0, 0.0, 0.0, -1.0];

    /// Kronecker product with `a` on local qubit 0 and `b` on local qubit 1.
    pub fn kron(a: &[f64; 4], b: &[f64; 4]) -> [f64; 16] {
        let mut out = [0.0; 16];
        for r in 0..4 {
            for c in 0..4 {
                let (r0, r1) = (r & 1, r >> 1);
                let (c0, c1) = (c & 1, c >> 1);
                out[r * 4 + c] = a[r0 * 2 + c0] * b[r1 * 2 + c1];
            }
        }
        out
    }

    pub fn scale<const N: usize>(m: [f64; N], s: f64) -> [f64; N] {
        m.map(|v| v * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_validation() {
        assert!(matches!(
            LocalTerm::real(vec![0, 1, 2, 3, 4, 5, 6], &[0.0; 1 << 14], TermLabel::User),
            Err(HamiltonianError::ArityCap(7))
        ));
        assert!(matches!(
            LocalTerm::real(vec![0, 0], &[0.0; 16], TermLabel::User),
            Err(HamiltonianError::DuplicateQubit(0))
        ));
        assert!(matches!(
            LocalTerm::real(vec![0], &[0.0; 3], TermLabel::User),
            Err(HamiltonianError::MatrixShape {
                expected: 4,
                got: 3
            })
        ));
        assert!(matches!(
            LocalTerm::real(vec![0], &[0.0, 1.0, 0.0, 0.0], TermLabel::User),
            Err(HamiltonianError::NotHermitian { .. })
        ));
        let t = LocalTerm::real(vec![3], &pauli::X, TermLabel::User).unwrap();
        assert!(matches!(
            Hamiltonian::new(2, vec![t]),
            Err(HamiltonianError::QubitRange {
                qubit: 3,
                n_total: 2
            })
        ));
    }

    #[test]
    fn stoquastic_examples() {
        let minus_x =
            LocalTerm::real(vec![0], &pauli::scale(pauli::X, -1.0), TermLabel::User).unwrap();
        let h = Hamiltonian::new(1, vec![minus_x]).unwrap();
        let check = is_stoquastic(&h, 20).unwrap();
        assert!(check.stoquastic);
        assert_eq!(check.witness, None);

        let plus_x = LocalTerm::real(vec![0], &pauli::X, TermLabel::User).unwrap();
        let h = Hamiltonian::new(1, vec![plus_x]).unwrap();
        let check = is_stoquastic(&h, 20).unwrap();
        assert!(!check.stoquastic);
        assert_eq!(check.witness, Some((0, 1, Complex64::new(1.0, 0.0))));
    }

    #[test]
    fn complex_off_diagonal_is_not_stoquastic() {
        // Y has purely imaginary off-diagonals
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
        assert!(!is_stoquastic(&h, 20).unwrap().stoquastic);
    }

    #[test]
    fn simulator_threshold_examples() {
        let p = |epsilon| SimulatorParams { eta: 0.0, epsilon };
        let (a, b) = simulator_thresholds(0.1, 0.5, p(0.1)).unwrap();
        assert!((a - 0.2).abs() < 1e-15 && (b - 0.4).abs() < 1e-15);
        assert_eq!(simulator_thresholds(0.1, 0.5, p(0.0)).unwrap(), (0.1, 0.5));
        assert!(matches!(
            simulator_thresholds(0.1, 0.5, p((0.5 - 0.1) / 2.0)),
            Err(HamiltonianError::EpsilonTooLarge { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let zz = LocalTerm::real(
            vec![0, 2],
            &pauli::kron(&pauli::Z, &pauli::Z),
            TermLabel::Clock,
        )
        .unwrap();
        let x =
            LocalTerm::real(vec![1], &pauli::scale(pauli::X, -0.25), TermLabel::Prop(3)).unwrap();
        let h = Hamiltonian::new(3, vec![zz, x]).unwrap().normalized();
        let text = h.to_text();
        assert_eq!(Hamiltonian::parse(&text).unwrap(), h);
        let (_, meta) = Hamiltonian::parse_with_meta(&format!("{text}pinned=2\n")).unwrap();
        assert_eq!(meta, vec![("pinned".to_string(), "2".to_string())]);
        assert!(matches!(
            Hamiltonian::parse("n_total=1\n0 1,0 0,0 0,0 1,0 BOGUS\n"),
            Err(HamiltonianError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn kron_places_first_factor_on_low_bit() {
        let zi = pauli::kron(&pauli::Z, &pauli::I);
        // local index 1 has qubit 0 set
        assert_eq!(zi[1 * 4 + 1], -1.0);
        assert_eq!(zi[2 * 4 + 2], 1.0);
    }
}
