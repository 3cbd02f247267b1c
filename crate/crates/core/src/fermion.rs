//! Free-fermion solutions for nearest-neighbor chains.
//!
//! Two results live here. The MQ coherence intensities of the preparation
//! period, for the infinite chain (closed form in `J_0`) and for a finite
//! ring, and the polarization transfer ratio between two sites of an open
//! chain.
//!
//! On a ring the Jordan–Wigner fermions obey periodic boundary conditions in
//! the odd-parity sector and antiperiodic ones in the even sector. Exact ring
//! intensities average over both wavevector sets; the periodic set alone is
//! off by terms of order `J_N(4Dτ)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bessel::bessel_j;
use crate::error::{Error, Result};
use crate::model::{Boundary, ChainSpec, CouplingMode};
use crate::numeric::{compensated_sum, CompensatedSum};

/// Boundary condition seen by the fermions in one parity sector of a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingSector {
    /// `k = 2πn/N`, odd fermion parity.
    Periodic,
    /// `k = 2π(n + 1/2)/N`, even fermion parity.
    Antiperiodic,
}

/// Single-particle modes `ε_k = D cos k + ω₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionSpectrum {
    pub boundary: Boundary,
    pub wavevectors: Vec<f64>,
    pub energies: Vec<f64>,
    pub larmor_offset: f64,
}

impl FermionSpectrum {
    fn from_wavevectors(boundary: Boundary, wavevectors: Vec<f64>, d: f64, omega0: f64) -> Self {
        let energies = wavevectors.iter().map(|k| d * k.cos() + omega0).collect();
        Self { boundary, wavevectors, energies, larmor_offset: omega0 }
    }

    /// Open chain, `k = πn/(N+1)` for `n = 1..N`. `d` may carry either sign.
    pub fn open(n_spins: usize, d: f64, omega0: f64) -> Self {
        let step = PI / (n_spins + 1) as f64;
        let ks = (1..=n_spins).map(|n| step * n as f64).collect();
        Self::from_wavevectors(Boundary::Open, ks, d, omega0)
    }

    /// One parity sector of an even ring, `n = −N/2 .. N/2−1`.
    pub fn ring_sector(n_spins: usize, d: f64, omega0: f64, sector: RingSector) -> Self {
        let half = (n_spins / 2) as i64;
        let shift = match sector {
            RingSector::Periodic => 0.0,
            RingSector::Antiperiodic => 0.5,
        };
        let step = 2.0 * PI / n_spins as f64;
        let ks = (-half..half).map(|n| step * (n as f64 + shift)).collect();
        Self::from_wavevectors(Boundary::Cyclic, ks, d, omega0)
    }

    pub fn len(&self) -> usize {
        self.wavevectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavevectors.is_empty()
    }
}

fn require_free_fermion(spec: &ChainSpec) -> Result<()> {
    spec.validate()?;
    if spec.coupling.mode != CouplingMode::NearestNeighbor {
        return Err(Error::UnsupportedModel(
            "the free-fermion solution exists only for nearest-neighbor couplings".into(),
        ));
    }
    Ok(())
}

fn require_ring(spec: &ChainSpec) -> Result<()> {
    require_free_fermion(spec)?;
    if spec.boundary != Boundary::Cyclic {
        return Err(Error::InvalidSpec("a cyclic chain is required".into()));
    }
    if spec.n_spins % 2 == 1 || spec.n_spins < 4 {
        return Err(Error::InvalidSpec(format!(
            "ring formulas need an even number of spins >= 4, got {}",
            spec.n_spins
        )));
    }
    Ok(())
}

fn require_open(spec: &ChainSpec) -> Result<()> {
    require_free_fermion(spec)?;
    if spec.boundary != Boundary::Open {
        return Err(Error::InvalidSpec("an open chain is required".into()));
    }
    Ok(())
}

fn check_time(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::Domain(format!("{name} must be finite and non-negative, got {value}")));
    }
    Ok(())
}

/// Fermion spectrum of a nearest-neighbor chain. Rings return the periodic
/// wavevector set.
pub fn spectrum(spec: &ChainSpec, omega0: f64) -> Result<FermionSpectrum> {
    match spec.boundary {
        Boundary::Open => {
            require_open(spec)?;
            Ok(FermionSpectrum::open(spec.n_spins, spec.d_nn(), omega0))
        }
        Boundary::Cyclic => {
            require_ring(spec)?;
            Ok(FermionSpectrum::ring_sector(spec.n_spins, spec.d_nn(), omega0, RingSector::Periodic))
        }
    }
}

/// Wavevectors of both ring sectors, `πj/N` for `j = 0..2N`.
pub(crate) fn ring_wavevectors(n_spins: usize) -> impl Iterator<Item = f64> {
    let step = PI / n_spins as f64;
    (0..2 * n_spins).map(move |j| step * j as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainExtent {
    Finite(usize),
    Infinite,
}

/// Intensities `G_n` (or `F_n`) keyed by coherence order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceSpectrum {
    pub intensities: BTreeMap<i32, f64>,
    pub tau: f64,
    pub extent: ChainExtent,
}

impl CoherenceSpectrum {
    pub fn get(&self, order: i32) -> f64 {
        self.intensities.get(&order).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.intensities.values().copied())
    }

    /// Largest intensity at any order outside `{0, ±2}`.
    pub fn max_outside_zero_and_two(&self) -> f64 {
        self.intensities.iter().filter(|(n, _)| !matches!(n, 0 | 2 | -2)).map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }

    fn zero_two(g0: f64, g2: f64, tau: f64, extent: ChainExtent) -> Self {
        let intensities = BTreeMap::from([(-2, g2), (0, g0), (2, g2)]);
        Self { intensities, tau, extent }
    }
}

/// Infinite-chain intensities `G_0 = (1 + J_0(4Dτ))/2`, `G_±2 = (1 − J_0(4Dτ))/4`.
pub fn mq_intensities_infinite(tau: f64, d_nn: f64) -> Result<CoherenceSpectrum> {
    check_time("tau", tau)?;
    let j0 = bessel_j(0, 4.0 * d_nn * tau)?;
    Ok(CoherenceSpectrum::zero_two(0.5 + 0.5 * j0, 0.25 - 0.25 * j0, tau, ChainExtent::Infinite))
}

/// Exact intensities on an even nearest-neighbor ring:
/// `G_0 = ⟨cos²(2Dτ sin k)⟩`, `G_±2 = ⟨sin²(2Dτ sin k)⟩/2`, averaged over the
/// wavevectors of both parity sectors.
pub fn mq_intensities_finite(tau: f64, spec: &ChainSpec) -> Result<CoherenceSpectrum> {
    require_ring(spec)?;
    check_time("tau", tau)?;
    let n = spec.n_spins;
    let x = 2.0 * spec.d_nn() * tau;
    let mut cos2 = CompensatedSum::new();
    let mut sin2 = CompensatedSum::new();
    for k in ring_wavevectors(n) {
        let (s, c) = (x * k.sin()).sin_cos();
        cos2.add(c * c);
        sin2.add(s * s);
    }
    let count = (2 * n) as f64;
    Ok(CoherenceSpectrum::zero_two(cos2.value() / count, 0.5 * sin2.value() / count, tau, ChainExtent::Finite(n)))
}

/// Polarization found on `target` at time `t` relative to the initial
/// polarization of `source`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferResult {
    pub source: usize,
    pub target: usize,
    pub time: f64,
    pub ratio: f64,
}

/// Mode amplitudes `sin(kl)·sin(km)` and energies for one (source, target)
/// pair, reusable across times.
#[derive(Debug, Clone)]
struct TransferKernel {
    weights: Vec<f64>,
    energies: Vec<f64>,
    prefactor: f64,
}

impl TransferKernel {
    fn new(spectrum: &FermionSpectrum, source: usize, target: usize) -> Self {
        let weights =
            spectrum.wavevectors.iter().map(|k| (k * source as f64).sin() * (k * target as f64).sin()).collect();
        let n1 = (spectrum.len() + 1) as f64;
        Self { weights, energies: spectrum.energies.clone(), prefactor: 4.0 / (n1 * n1) }
    }

    fn ratio(&self, t: f64) -> f64 {
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for (w, e) in self.weights.iter().zip(&self.energies) {
            let phase = Complex64::from_polar(1.0, -e * t);
            re.add(w * phase.re);
            im.add(w * phase.im);
        }
        let amp = Complex64::new(re.value(), im.value());
        self.prefactor * amp.norm_sqr()
    }
}

fn check_sites(spec: &ChainSpec, source: usize, target: usize) -> Result<()> {
    let n = spec.n_spins;
    for (name, i) in [("source", source), ("target", target)] {
        if !(1..=n).contains(&i) {
            return Err(Error::Domain(format!("{name} index {i} outside 1..={n}")));
        }
    }
    Ok(())
}

/// Transfer ratio `4/(N+1)² |Σ_k e^{−iε_k t} sin(kl) sin(km)|²` on an open
/// nearest-neighbor chain.
///
/// The formula is derived for odd `l` and odd `N`; it is evaluated for every
/// index here. With an MQ (two-quantum) Hamiltonian the measured polarization
/// agrees with it only when `l` and `m` have equal parity, otherwise it is
/// the negative of this value.
pub fn transfer_ratio(spec: &ChainSpec, source: usize, target: usize, t: f64) -> Result<TransferResult> {
    transfer_ratio_with_offset(spec, source, target, t, 0.0)
}

/// [`transfer_ratio`] with a Larmor offset in the spectrum. The offset is a
/// global phase and leaves the ratio unchanged.
pub fn transfer_ratio_with_offset(
    spec: &ChainSpec,
    source: usize,
    target: usize,
    t: f64,
    omega0: f64,
) -> Result<TransferResult> {
    let spectrum = spectrum(spec, omega0)?;
    require_open(spec)?;
    check_sites(spec, source, target)?;
    check_time("t", t)?;
    let ratio = TransferKernel::new(&spectrum, source, target).ratio(t);
    Ok(TransferResult { source, target, time: t, ratio })
}

/// [`transfer_ratio`] over a time grid, in grid order.
pub fn transfer_profile(spec: &ChainSpec, source: usize, target: usize, times: &[f64]) -> Result<Vec<TransferResult>> {
    let spectrum = spectrum(spec, 0.0)?;
    require_open(spec)?;
    check_sites(spec, source, target)?;
    times.iter().try_for_each(|&t| check_time("t", t))?;
    let kernel = TransferKernel::new(&spectrum, source, target);
    Ok(times.par_iter().map(|&t| TransferResult { source, target, time: t, ratio: kernel.ratio(t) }).collect())
}

/// Grid point with the largest ratio; the earliest wins ties.
pub fn best_transfer(profile: &[TransferResult]) -> Option<TransferResult> {
    profile.iter().copied().fold(None, |best, r| match best {
        Some(b) if b.ratio >= r.ratio => Some(b),
        _ => Some(r),
    })
}
