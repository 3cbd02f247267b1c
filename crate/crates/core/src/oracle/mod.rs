//! Exact-diagonalization verifier on the full `2^N` spin Hilbert space.
//!
//! Everything here is dense and brute force on purpose: it shares no code
//! path with the analytic modules it checks beyond the coupling matrix.
//!
//! Basis convention: spin 1 is the most significant bit of the basis index,
//! and a clear bit is spin up (`m = +1/2`). For two spins the order is
//! `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.

mod decompose;
mod experiments;
mod hamiltonian;
mod linalg;
mod operators;

pub use decompose::{coherence_decompose, coherence_intensities, CoherenceDecomposition};
pub use experiments::{
    mq_experiment, relaxation_profile, relaxation_profile_mixed, thermal_transfer_ratio, transfer_oracle, MqExperiment,
    RelaxKind, TransferOracle, TransferOracleResult, TransferRoute,
};
pub use hamiltonian::{build_hamiltonian, flip_flop_constant, unitary_even_flip, HamiltonianKind, FLIP_FLOP_SCALE};
pub use linalg::{evolve, Propagator};
pub use operators::{exact_unit_phase, Convention, DensityMatrix, SpinOperator};

use crate::error::{Error, Result};

/// Largest chain the oracle accepts. A dense `2^12 × 2^12` complex matrix
/// takes 256 MiB and evolution holds about four of them at once.
pub const MAX_ORACLE_SPINS: usize = 12;

pub(crate) fn check_capacity(n_spins: usize) -> Result<()> {
    if n_spins > MAX_ORACLE_SPINS {
        return Err(Error::Capacity { n_spins, limit: MAX_ORACLE_SPINS });
    }
    Ok(())
}
