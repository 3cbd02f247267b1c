//! Simulation of multiple-quantum (MQ) NMR dynamics in one-dimensional
//! spin-1/2 chains.
//!
//! The crate covers three analytic pieces and one brute-force verifier:
//!
//! * [`fermion`]: free-fermion solutions for MQ coherence intensities on the
//!   preparation period and for polarization transfer along an open chain.
//! * [`relaxation`]: the ZZ-model theory of coherence relaxation on the
//!   evolution period (stationary zeroth-order intensity, second-order decay,
//!   second moments and Gaussian relaxation times).
//! * [`oracle`]: dense exact diagonalization on up to
//!   [`oracle::MAX_ORACLE_SPINS`] spins, used to validate everything above.
//! * [`model`] and [`bessel`]: chain geometry, dipolar couplings and the
//!   Bessel kernel shared by the analytic modules.
//!
//! Units are rad/s for couplings and frequencies and seconds for times.
//! Spin indices are 1-based.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod fermion;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod relaxation;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use model::{build_couplings, Boundary, ChainSpec, CouplingMatrix, CouplingMode, CouplingModel};

/// Nearest-neighbor dipolar coupling of the 19F chains in calcium
/// fluorapatite with the field along the chain, rad/s.
pub const FLUORAPATITE_D_NN: f64 = 16.4e3;
