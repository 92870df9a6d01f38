//! Output penalty, perturbed Hamiltonian and guided-instance assembly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::compile::{compile, history_state, initial_subset, CompiledHamiltonian};
use super::{Hamiltonian, LocalTerm, TermLabel};
use crate::circuit::acceptance_probability;
use crate::error::{Error, HamiltonianError};
use crate::numerics::{ground_state, norm_tracking_bounds, SolverConfig};
use crate::subsetstate::{build_history_subset, Isometry, SubsetState};

/// Default slack constant `C` in the `C/Δ` eigenvalue envelope.
///
/// Fitted at desk scale: across random circuits with `K̂ ≤ 8` and
/// `Δ ≥ 112·K̂³` the measured `Δ·|λ₀(H̃) − ⟨η|H_out|η⟩|` stays below 0.33.
pub const DEFAULT_SLACK: f64 = 1.0;

/// Perturbation strength `Δ` and the circuit's error exponent `f`
/// (error probability at most `2^{-f}`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    pub delta: f64,
    pub error_exponent: u32,
    /// Slack constant `C` of the `C/Δ` envelope used for the thresholds.
    pub slack: f64,
}

impl PerturbationConfig {
    /// Smallest admissible strength `Δ = 112·K̂³`.
    pub fn at_bound(k_hat: usize, error_exponent: u32) -> Self {
        PerturbationConfig {
            delta: delta_bound(k_hat),
            error_exponent,
            slack: DEFAULT_SLACK,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        PerturbationConfig {
            delta: self.delta * factor,
            ..self
        }
    }
}

/// `112·K̂³`.
pub fn delta_bound(k_hat: usize) -> f64 {
    112.0 * (k_hat as f64).powi(3)
}

/// `H̃ = Δ·Ĥ + Ĥ_out` with its thresholds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbedHamiltonian {
    /// Unscaled terms; `norm_scale` normalises to `‖H̃‖ ≤ 1`.
    pub hamiltonian: Hamiltonian,
    pub config: PerturbationConfig,
    pub clock_len: usize,
    /// `2^{-f}/(K̂+1) + C/Δ` before normalisation.
    pub a_raw: f64,
    /// `(1 − 2^{-f})/(K̂+1) − C/Δ` before normalisation.
    pub b_raw: f64,
    pub a: f64,
    pub b: f64,
}

/// `Π^(0)_out ⊗ |1⟩⟨1|_{c_K̂}`. On legal clock words `c_K̂ = 1` only at
/// `t = K̂`, so this equals `Π^(0)_out ⊗ |K̂⟩⟨K̂|` there.
pub fn output_term(compiled: &CompiledHamiltonian) -> Result<LocalTerm, HamiltonianError> {
    let out = compiled.circuit.output_qubit();
    let last = compiled.clock_qubit(compiled.clock_len());
    let mut m = [0.0; 16];
    // local bit 0 = output qubit (0), bit 1 = c_K̂ (1)
    m[2 * 4 + 2] = 1.0;
    LocalTerm::real(vec![out, last], &m, TermLabel::Out)
}

pub fn perturb(
    compiled: &CompiledHamiltonian,
    cfg: PerturbationConfig,
) -> Result<PerturbedHamiltonian, HamiltonianError> {
    let k_hat = compiled.clock_len();
    let bound = delta_bound(k_hat);
    if !(cfg.delta >= bound) {
        return Err(HamiltonianError::DeltaTooSmall {
            delta: cfg.delta,
            bound,
        });
    }
    if !(cfg.slack >= 0.0 && cfg.slack.is_finite()) {
        return Err(HamiltonianError::Parameter(format!(
            "slack must be non-negative, got {}",
            cfg.slack
        )));
    }
    let mut terms: Vec<LocalTerm> = compiled
        .hamiltonian
        .terms()
        .iter()
        .map(|t| t.scaled(cfg.delta))
        .collect();
    terms.push(output_term(compiled)?);
    let hamiltonian = Hamiltonian::new(compiled.hamiltonian.n_total(), terms)?.normalized();
    let err = 0.5f64.powi(cfg.error_exponent as i32);
    let slots = (k_hat + 1) as f64;
    let a_raw = err / slots + cfg.slack / cfg.delta;
    let b_raw = (1.0 - err) / slots - cfg.slack / cfg.delta;
    let scale = hamiltonian.norm_scale();
    Ok(PerturbedHamiltonian {
        hamiltonian,
        config: cfg,
        clock_len: k_hat,
        a_raw,
        b_raw,
        a: a_raw * scale,
        b: b_raw * scale,
    })
}

/// How `|+⟩` ancillae appear in the guide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuideEncoding {
    /// One member per time step; plus-ancilla coordinates carry the
    /// `|0⟩ ↦ |+⟩` isometry.
    Isometric,
    /// Plain subset state listing all `2^p` plus-ancilla values per time step.
    Expanded,
}

/// Where the distance `ε = ‖ξ − η‖` in the overlap promise comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EpsilonSource {
    /// Diagonalise `H̃` and measure it.
    Measured(SolverConfig),
    Given(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuideOptions {
    pub encoding: GuideEncoding,
    pub epsilon: EpsilonSource,
    pub qubit_cap: usize,
    /// Declared lower bound on `b − a` (normalised scale).
    pub gap_budget: f64,
}

impl Default for GuideOptions {
    fn default() -> Self {
        GuideOptions {
            encoding: GuideEncoding::Isometric,
            epsilon: EpsilonSource::Measured(SolverConfig::default()),
            qubit_cap: crate::circuit::DEFAULT_WIDTH_CAP,
            gap_budget: 0.0,
        }
    }
}

/// Which side of the promise the instance asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceClaim {
    /// `λ₀ ≤ a`.
    Yes,
    /// `λ₀ ≥ b`.
    No,
}

/// Provenance of a guide built from a circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuideDetails {
    pub truncation: usize,
    pub k_hat: usize,
    pub plus_free_limit: usize,
    /// `(Q+1)/(K̂+1)`.
    pub raw_overlap: f64,
    pub epsilon: f64,
    pub encoding: GuideEncoding,
    pub accept_probability: f64,
}

/// A guided local Hamiltonian instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuidedInstance {
    pub ham: Hamiltonian,
    /// Thresholds on the normalised spectrum `norm_scale · λ`.
    pub a: f64,
    pub b: f64,
    pub guide: SubsetState,
    /// Promised lower bound on `‖Π₀|guide⟩‖²`.
    pub delta: f64,
    pub gap_budget: f64,
    pub claim: Option<InstanceClaim>,
    pub details: Option<GuideDetails>,
}

/// `ζ = (Q+1)^{-1/2} Σ_{t=0}^{Q} |φ_t⟩|t⟩` on the full `n+m+p+K̂` register;
/// clock qubits beyond `c_Q` are fixed to 0.
pub fn truncated_history(
    compiled: &CompiledHamiltonian,
    truncation: usize,
    encoding: GuideEncoding,
) -> Result<SubsetState, HamiltonianError> {
    let circuit = &compiled.circuit;
    let k_hat = compiled.clock_len();
    if truncation > k_hat {
        return Err(HamiltonianError::TruncationTooLate {
            q: truncation,
            limit: k_hat,
        });
    }
    let s0 = match encoding {
        GuideEncoding::Expanded => initial_subset(circuit, &compiled.input)?,
        GuideEncoding::Isometric => {
            let x = circuit.input_label(&compiled.input)?;
            let mut isometries = vec![Isometry::identity(); circuit.width()];
            for j in circuit.plus_qubits() {
                isometries[j] = Isometry::plus_encoder();
            }
            SubsetState::new(circuit.width(), vec![x], isometries)?
        }
    };
    let head = build_history_subset(&s0, &circuit.gates()[..truncation], true)?;
    if truncation == k_hat {
        return Ok(head);
    }
    let idle = SubsetState::from_members(k_hat - truncation, vec![0])?;
    Ok(head.tensor(&idle)?)
}

/// Builds the guided instance for circuit `c` on input `x`: compiles with
/// `pre_idle_count` identity gates, perturbs with `cfg`, and attaches the
/// truncated history up to time `truncation` as the guide.
pub fn build_guided_instance(
    c: &crate::circuit::Circuit,
    x: &str,
    pre_idle_count: usize,
    truncation: usize,
    cfg: PerturbationConfig,
    opts: &GuideOptions,
) -> Result<GuidedInstance, Error> {
    let compiled = compile(c, x, pre_idle_count, opts.qubit_cap)?;
    let perturbed = perturb(&compiled, cfg)?;
    let k_hat = compiled.clock_len();
    let limit = pre_idle_count + c.plus_free_prefix();
    if truncation > limit {
        return Err(HamiltonianError::TruncationTooLate {
            q: truncation,
            limit,
        }
        .into());
    }
    if truncation >= k_hat {
        return Err(HamiltonianError::DegenerateOverlap { q: truncation }.into());
    }
    let guide = truncated_history(&compiled, truncation, opts.encoding)?;
    let raw_overlap = (truncation + 1) as f64 / (k_hat + 1) as f64;

    let epsilon = match &opts.epsilon {
        EpsilonSource::Given(e) => *e,
        EpsilonSource::Measured(solver) => {
            let report = ground_state(&perturbed.hamiltonian, 1, solver)?;
            let eta = history_state(&compiled)?.to_dense(opts.qubit_cap)?;
            state_distance(&report.ground_vector, &eta)
        }
    };
    let bounds = norm_tracking_bounds(epsilon, raw_overlap)?;
    if !(bounds.lower > 0.0) {
        return Err(HamiltonianError::Parameter(format!(
            "epsilon {epsilon} leaves no overlap guarantee for (Q+1)/(K̂+1) = {raw_overlap}"
        ))
        .into());
    }

    let accept = acceptance_probability(&compiled.circuit, x, opts.qubit_cap)?.probability();
    let err = 0.5f64.powi(cfg.error_exponent as i32);
    let p_zero = 1.0 - accept;
    let claim = if p_zero <= err {
        Some(InstanceClaim::Yes)
    } else if p_zero >= 1.0 - err {
        Some(InstanceClaim::No)
    } else {
        None
    };

    Ok(GuidedInstance {
        ham: perturbed.hamiltonian,
        a: perturbed.a,
        b: perturbed.b,
        guide,
        delta: bounds.lower,
        gap_budget: opts.gap_budget,
        claim,
        details: Some(GuideDetails {
            truncation,
            k_hat,
            plus_free_limit: limit,
            raw_overlap,
            epsilon,
            encoding: opts.encoding,
            accept_probability: accept,
        }),
    })
}

/// `min_θ ‖e^{iθ}|u⟩ − |v⟩‖`, evaluated entrywise.
pub fn state_distance(u: &[Complex64], v: &[Complex64]) -> f64 {
    let inner: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let phase = if inner.norm() > 0.0 {
        inner / inner.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    u.iter()
        .zip(v)
        .map(|(a, b)| (a * phase - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Basis, Circuit, Gate};
    use crate::subsetstate::overlap;

    fn sample_circuit() -> Circuit {
        // two plus-free gates, then one touching the plus ancilla (qubit 2)
        Circuit::new(
            1,
            1,
            1,
            vec![Gate::cnot(0, 1), Gate::x(1), Gate::cnot(2, 0)],
            Basis::Z,
        )
        .unwrap()
    }

    #[test]
    fn delta_bound_is_enforced() {
        let compiled = compile(&sample_circuit(), "1", 1, 20).unwrap();
        let k_hat = compiled.clock_len();
        assert_eq!(k_hat, 4);
        let mut cfg = PerturbationConfig::at_bound(k_hat, 2);
        assert_eq!(cfg.delta, 112.0 * 64.0);
        assert!(perturb(&compiled, cfg).is_ok());
        cfg.delta -= 1.0;
        assert!(matches!(
            perturb(&compiled, cfg),
            Err(HamiltonianError::DeltaTooSmall { .. })
        ));
    }

    #[test]
    fn thresholds_follow_formula() {
        let compiled = compile(&sample_circuit(), "1", 0, 20).unwrap();
        let cfg = PerturbationConfig {
            delta: 10_000.0,
            error_exponent: 2,
            slack: 3.0,
        };
        let p = perturb(&compiled, cfg).unwrap();
        assert!((p.a_raw - (0.25 / 4.0 + 3.0 / 10_000.0)).abs() < 1e-15);
        assert!((p.b_raw - (0.75 / 4.0 - 3.0 / 10_000.0)).abs() < 1e-15);
        assert!((p.a - p.a_raw * p.hamiltonian.norm_scale()).abs() < 1e-18);
        assert!(p.hamiltonian.norm_bound() * p.hamiltonian.norm_scale() <= 1.0 + 1e-12);
    }

    #[test]
    fn truncated_guide_overlap() {
        let compiled = compile(&sample_circuit(), "1", 2, 20).unwrap();
        let eta = history_state(&compiled).unwrap();
        let k_hat = compiled.clock_len();
        for q in 0..=4 {
            for encoding in [GuideEncoding::Isometric, GuideEncoding::Expanded] {
                let zeta = truncated_history(&compiled, q, encoding).unwrap();
                let ov = overlap(&zeta, &eta).unwrap();
                let want = (q + 1) as f64 / (k_hat + 1) as f64;
                assert!((ov.probability - want).abs() < 1e-12, "q={q} {encoding:?}");
            }
        }
        let iso = truncated_history(&compiled, 3, GuideEncoding::Isometric).unwrap();
        assert_eq!(iso.len(), 4);
        let exp = truncated_history(&compiled, 3, GuideEncoding::Expanded).unwrap();
        assert_eq!(exp.len(), 8);
    }

    #[test]
    fn truncation_limits() {
        let c = sample_circuit();
        let opts = GuideOptions {
            epsilon: EpsilonSource::Given(0.01),
            ..GuideOptions::default()
        };
        let cfg = PerturbationConfig::at_bound(5, 2);
        // N + L = 2 + 2
        assert!(matches!(
            build_guided_instance(&c, "1", 2, 5, cfg, &opts),
            Err(Error::Hamiltonian(HamiltonianError::TruncationTooLate {
                q: 5,
                limit: 4
            }))
        ));
        let inst = build_guided_instance(&c, "1", 2, 4, cfg, &opts).unwrap();
        let details = inst.details.unwrap();
        assert_eq!(details.raw_overlap, 5.0 / 6.0);
        assert!((inst.delta - ((5.0f64 / 6.0).sqrt() - 0.01).powi(2)).abs() < 1e-15);

        // a plus-free circuit lets Q reach K̂, where the overlap would be 1
        let trivial = Circuit::new(1, 0, 0, vec![Gate::x(0)], Basis::Z).unwrap();
        let cfg = PerturbationConfig::at_bound(3, 2);
        assert!(matches!(
            build_guided_instance(&trivial, "0", 2, 3, cfg, &opts),
            Err(Error::Hamiltonian(HamiltonianError::DegenerateOverlap {
                q: 3
            }))
        ));
    }

    #[test]
    fn claim_follows_acceptance() {
        let opts = GuideOptions {
            epsilon: EpsilonSource::Given(0.0),
            ..GuideOptions::default()
        };
        let accept = Circuit::new(1, 0, 0, vec![Gate::x(0)], Basis::Z).unwrap();
        let cfg = PerturbationConfig::at_bound(3, 2);
        let yes = build_guided_instance(&accept, "0", 2, 1, cfg, &opts).unwrap();
        assert_eq!(yes.claim, Some(InstanceClaim::Yes));
        let no = build_guided_instance(&accept, "1", 2, 1, cfg, &opts).unwrap();
        assert_eq!(no.claim, Some(InstanceClaim::No));
    }
}
