use num_complex::Complex64;

use super::check_capacity;
use super::decompose::{coherence_decompose, coherence_intensities};
use super::hamiltonian::{build_hamiltonian, HamiltonianKind, FLIP_FLOP_SCALE};
use super::linalg::Propagator;
use super::operators::{trace_product, CMat, Convention, DensityMatrix, SpinOperator};
use crate::error::{Error, Result};
use crate::fermion::{ChainExtent, CoherenceSpectrum};
use crate::model::{build_couplings, Boundary, ChainSpec, CouplingMatrix};
use crate::relaxation::RelaxationCurve;

fn check_time(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::Domain(format!("{name} must be finite and non-negative, got {v}")));
    }
    Ok(())
}

/// `Tr(I_z²) = N·2^{N−2}`.
fn iz_norm(n_spins: usize) -> f64 {
    n_spins as f64 * (1u64 << n_spins) as f64 / 4.0
}

/// Preparation period of the MQ experiment: `I_z` evolved under `H⁽⁰⁾`.
#[derive(Debug, Clone)]
pub struct MqExperiment {
    n_spins: usize,
    propagator: Propagator,
    iz_eigen: CMat,
}

impl MqExperiment {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        spec.validate()?;
        check_capacity(spec.n_spins)?;
        Self::from_couplings(&build_couplings(spec)?)
    }

    pub fn from_couplings(couplings: &CouplingMatrix) -> Result<Self> {
        let n = couplings.n_spins();
        check_capacity(n)?;
        let h0 = build_hamiltonian(HamiltonianKind::TwoQuantum, couplings)?;
        let propagator = Propagator::new(&h0)?;
        let iz_eigen = propagator.to_eigenbasis(&SpinOperator::total_iz(n)?.matrix);
        Ok(Self { n_spins: n, propagator, iz_eigen })
    }

    /// `σ(τ) = e^{−iH⁽⁰⁾τ} I_z e^{iH⁽⁰⁾τ}`.
    pub fn sigma(&self, tau: f64) -> Result<DensityMatrix> {
        check_time("tau", tau)?;
        let rotated = self.propagator.rotate_in_eigenbasis(&self.iz_eigen, tau);
        Ok(DensityMatrix {
            n_spins: self.n_spins,
            matrix: self.propagator.from_eigenbasis(&rotated),
            convention: Convention::Deviation,
        })
    }

    /// `G_n = Tr(σ_n σ_−n)/Tr(I_z²)` for `n = −N..=N`.
    pub fn intensities(&self, tau: f64) -> Result<CoherenceSpectrum> {
        let sigma = self.sigma(tau)?;
        Ok(CoherenceSpectrum {
            intensities: coherence_intensities(&sigma),
            tau,
            extent: ChainExtent::Finite(self.n_spins),
        })
    }
}

/// Brute-force MQ intensities of the preparation period.
pub fn mq_experiment(spec: &ChainSpec, tau: f64) -> Result<CoherenceSpectrum> {
    MqExperiment::new(spec)?.intensities(tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelaxKind {
    Zz,
    SecularDipolar,
}

impl RelaxKind {
    fn hamiltonian(self) -> HamiltonianKind {
        match self {
            RelaxKind::Zz => HamiltonianKind::Zz,
            RelaxKind::SecularDipolar => HamiltonianKind::SecularDipolar,
        }
    }
}

/// `F_0`, `F_2` and `F_−2` along the evolution period, with preparation and
/// relaxation both driven by the couplings of `spec`.
pub fn relaxation_profile(spec: &ChainSpec, tau: f64, kind: RelaxKind, times: &[f64]) -> Result<Vec<RelaxationCurve>> {
    spec.validate()?;
    check_capacity(spec.n_spins)?;
    let couplings = build_couplings(spec)?;
    relaxation_profile_mixed(&couplings, &couplings, tau, kind, times)
}

/// [`relaxation_profile`] with separate couplings for the preparation
/// (`H⁽⁰⁾`) and evolution periods.
pub fn relaxation_profile_mixed(
    preparation: &CouplingMatrix,
    relaxation: &CouplingMatrix,
    tau: f64,
    kind: RelaxKind,
    times: &[f64],
) -> Result<Vec<RelaxationCurve>> {
    let n = preparation.n_spins();
    if relaxation.n_spins() != n {
        return Err(Error::DimensionMismatch { expected: n, found: relaxation.n_spins() });
    }
    times.iter().try_for_each(|&t| check_time("t", t))?;
    let sigma = MqExperiment::from_couplings(preparation)?.sigma(tau)?;
    let parts = coherence_decompose(&sigma);
    let dim = sigma.matrix.nrows();
    let propagator = Propagator::new(&build_hamiltonian(kind.hamiltonian(), relaxation)?)?;
    let eigen = |order: i32| match parts.component(order) {
        Some(c) => propagator.to_eigenbasis(&c.matrix),
        None => CMat::zeros(dim, dim),
    };
    let (s0, s2, sm2) = (eigen(0), eigen(2), eigen(-2));
    let norm = iz_norm(n);
    let curve = |order: i32, a: &CMat, b: &CMat| RelaxationCurve {
        tau,
        order,
        times: times.to_vec(),
        f_values: times.iter().map(|&t| propagator.correlation(a, b, t).re / norm).collect(),
    };
    Ok(vec![curve(0, &s0, &s0), curve(2, &s2, &sm2), curve(-2, &sm2, &s2)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferRoute {
    /// Evolution under `c·H_ff`, the image of `H⁽⁰⁾` under the even-site flip.
    FlipFlop,
    /// Evolution under the MQ Hamiltonian `H⁽⁰⁾` itself.
    TwoQuantum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferOracleResult {
    pub ratio: f64,
    /// Set when `l` or `m` is even; the analytic transfer formula is derived
    /// for odd sites only.
    pub parity_flagged: bool,
}

/// Polarization transfer on an open chain by exact diagonalization.
#[derive(Debug, Clone)]
pub struct TransferOracle {
    n_spins: usize,
    propagator: Propagator,
}

impl TransferOracle {
    pub fn new(spec: &ChainSpec, route: TransferRoute) -> Result<Self> {
        spec.validate()?;
        check_capacity(spec.n_spins)?;
        if spec.boundary != Boundary::Open {
            return Err(Error::InvalidSpec("state transfer is defined on open chains".into()));
        }
        let couplings = build_couplings(spec)?;
        let h = match route {
            TransferRoute::FlipFlop => {
                build_hamiltonian(HamiltonianKind::FlipFlop, &couplings)?.scaled(FLIP_FLOP_SCALE)
            }
            TransferRoute::TwoQuantum => build_hamiltonian(HamiltonianKind::TwoQuantum, &couplings)?,
        };
        Ok(Self { n_spins: spec.n_spins, propagator: Propagator::new(&h)? })
    }

    fn site(&self, i: usize) -> Result<CMat> {
        if !(1..=self.n_spins).contains(&i) {
            return Err(Error::Domain(format!("site {i} outside 1..={}", self.n_spins)));
        }
        Ok(self.propagator.to_eigenbasis(&SpinOperator::iz(self.n_spins, i)?.matrix))
    }

    /// `⟨I_mz⟩(t)/⟨I_lz⟩(0)` starting from the deviation `ρ(0) ∝ I_lz`.
    pub fn ratio(&self, source: usize, target: usize, t: f64) -> Result<TransferOracleResult> {
        Ok(self.profile(source, target, &[t])?[0])
    }

    pub fn profile(&self, source: usize, target: usize, times: &[f64]) -> Result<Vec<TransferOracleResult>> {
        times.iter().try_for_each(|&t| check_time("t", t))?;
        let a = self.site(source)?;
        let b = self.site(target)?;
        let norm = (1u64 << self.n_spins) as f64 / 4.0;
        let parity_flagged = source.is_multiple_of(2) || target.is_multiple_of(2);
        Ok(times
            .iter()
            .map(|&t| TransferOracleResult { ratio: self.propagator.correlation(&a, &b, t).re / norm, parity_flagged })
            .collect())
    }
}

pub fn transfer_oracle(
    spec: &ChainSpec,
    source: usize,
    target: usize,
    t: f64,
    route: TransferRoute,
) -> Result<TransferOracleResult> {
    TransferOracle::new(spec, route)?.ratio(source, target, t)
}

/// Transfer ratio starting from the full thermal state
/// `ρ(0) = e^{βI_lz}/Z` with no high-temperature expansion.
pub fn thermal_transfer_ratio(
    spec: &ChainSpec,
    source: usize,
    target: usize,
    t: f64,
    beta: f64,
    route: TransferRoute,
) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let n = spec.n_spins;
    let oracle = TransferOracle::new(spec, route)?;
    for i in [source, target] {
        if !(1..=n).contains(&i) {
            return Err(Error::Domain(format!("site {i} outside 1..={n}")));
        }
    }
    let il = SpinOperator::iz(n, source)?;
    let im = SpinOperator::iz(n, target)?;
    let z = (1u64 << n) as f64 * (0.5 * beta).cosh();
    let mut rho0 = SpinOperator::zeros(n)?;
    for b in 0..rho0.dim() {
        rho0.matrix[(b, b)] = Complex64::new((beta * il.matrix[(b, b)].re).exp() / z, 0.0);
    }
    let rho0 = DensityMatrix::from_operator(rho0, Convention::Normalized);
    let initial = trace_product(&rho0.matrix, &il.matrix).re;
    let evolved = oracle.propagator.evolve(&rho0, t)?;
    Ok(trace_product(&evolved.matrix, &im.matrix).re / initial)
}
