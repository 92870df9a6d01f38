//! Compiler from classically reversible verification circuits to local
//! stoquastic Hamiltonians, with semi-classical subset-state guides and the
//! exact spectral checks that certify each construction at desk scale.
//!
//! The pipeline is: [`circuit`] (parse, simulate, amplify, pre-idle) →
//! [`hamiltonian`] (clock construction, perturbation, guided instances,
//! pinning, diagonal solver) → [`numerics`] (eigensolvers, overlap bounds,
//! instance verification). [`subsetstate`] supplies the guiding states.

pub mod bits;
pub mod circuit;
pub mod error;
pub mod hamiltonian;
pub mod numerics;
pub mod subsetstate;

pub use bits::Bits;
pub use circuit::{Acceptance, AcceptanceStats, Basis, Circuit, Gate, GateKind};
pub use error::{CircuitError, Error, HamiltonianError, NumericsError, StateError};
pub use hamiltonian::{
    GuidedInstance, Hamiltonian, InstanceClaim, LocalTerm, PerturbationConfig, PinnedHamiltonian,
    TermLabel,
};
pub use numerics::{NormTriple, SolverConfig, SparseMatrix, SpectralReport, Verdict};
pub use subsetstate::{Isometry, Overlap, SubsetState};
