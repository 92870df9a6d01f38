use serde::{Deserialize, Serialize};

use super::{SolverConfig, SparseMatrix};
use crate::error::NumericsError;
use crate::hamiltonian::{GuidedInstance, InstanceClaim, LOCALITY_CAP, STOQUASTIC_TOL};
use crate::subsetstate::overlap_dense;

/// Tolerances applied to every threshold comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub stoquastic: f64,
    pub energy: f64,
    pub overlap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            stoquastic: STOQUASTIC_TOL,
            energy: 1e-12,
            overlap: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub solver: SolverConfig,
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub claims: Vec<ClaimResult>,
    /// `norm_scale · λ₀`.
    pub lambda0: f64,
    pub lambda0_raw: f64,
    /// Normalised gap `norm_scale · (λ₁ − λ₀)`.
    pub gap: Option<f64>,
    pub degenerate: bool,
    /// `‖Π₀|ζ⟩‖²`.
    pub overlap: f64,
    pub tolerances: Tolerances,
}

/// Recomputes the ground state of `g.ham` and checks each claim of the
/// instance.
pub fn verify_instance(g: &GuidedInstance, cfg: &VerifyConfig) -> Result<Verdict, NumericsError> {
    let tol = cfg.tolerances;
    let h = &g.ham;
    let cap = cfg.solver.sparse_cap.max(cfg.solver.dense_cap);
    let mut claims = Vec::new();

    let matrix = SparseMatrix::assemble(h, false, cap)?;
    let stoq = matrix.stoquastic_check(tol.stoquastic);
    claims.push(ClaimResult {
        claim: "stoquastic".into(),
        pass: stoq.stoquastic,
        measured: stoq.witness.map_or(0.0, |(_, _, v)| v.re.max(v.im.abs())),
        threshold: tol.stoquastic,
        detail: match stoq.witness {
            Some((r, c, v)) => format!("off-diagonal entry ({r}, {c}) = {} + {}i", v.re, v.im),
            None => "all off-diagonal entries non-positive".into(),
        },
    });

    let locality = h.locality();
    claims.push(ClaimResult {
        claim: "locality".into(),
        pass: locality <= LOCALITY_CAP,
        measured: locality as f64,
        threshold: LOCALITY_CAP as f64,
        detail: format!("largest term acts on {locality} qubits"),
    });

    let report = super::spectrum_of(&matrix, h.norm_scale(), 2.min(matrix.dim()), &cfg.solver)?;
    if g.guide.n() != h.n_total() {
        return Err(NumericsError::Domain(format!(
            "guide on {} qubits, Hamiltonian on {}",
            g.guide.n(),
            h.n_total()
        )));
    }
    let mut overlap = 0.0;
    for v in report.ground_space() {
        overlap += overlap_dense(&g.guide, v)?.probability;
    }
    claims.push(ClaimResult {
        claim: "overlap".into(),
        pass: overlap >= g.delta - tol.overlap,
        measured: overlap,
        threshold: g.delta,
        detail: format!(
            "|Π₀ ζ|² over a {}-fold ground space",
            report.ground_space().count()
        ),
    });

    let lambda0 = report.scaled_ground_energy();
    let (pass, threshold, detail) = match g.claim {
        Some(InstanceClaim::Yes) => (
            lambda0 <= g.a + tol.energy,
            g.a,
            "claim yes: λ₀ ≤ a".to_string(),
        ),
        Some(InstanceClaim::No) => (
            lambda0 >= g.b - tol.energy,
            g.b,
            "claim no: λ₀ ≥ b".to_string(),
        ),
        None => {
            let low = lambda0 <= g.a + tol.energy;
            let high = lambda0 >= g.b - tol.energy;
            let side = if low {
                "λ₀ ≤ a"
            } else if high {
                "λ₀ ≥ b"
            } else {
                "λ₀ inside (a, b)"
            };
            (
                low || high,
                if low { g.a } else { g.b },
                format!("no claim: {side}"),
            )
        }
    };
    claims.push(ClaimResult {
        claim: "energy".into(),
        pass,
        measured: lambda0,
        threshold,
        detail,
    });

    claims.push(ClaimResult {
        claim: "gap-budget".into(),
        pass: g.b - g.a >= g.gap_budget,
        measured: g.b - g.a,
        threshold: g.gap_budget,
        detail: "b − a against the declared budget".into(),
    });

    Ok(Verdict {
        pass: claims.iter().all(|c| c.pass),
        claims,
        lambda0,
        lambda0_raw: report.ground_energy(),
        gap: report.gap.map(|x| x * h.norm_scale()),
        degenerate: report.degenerate,
        overlap,
        tolerances: tol,
    })
}
