//! Relaxation of MQ coherences on the evolution period in the ZZ model.
//!
//! After the preparation period the state `σ(τ) = σ_0 + σ_2 + σ_−2` evolves
//! under `H_ZZ = Σ_{i≠j} D_ij I_iz I_jz`. The `±2` coherences are sums of
//! two-site lowering/raising operators, each of which picks up the phase
//! `Π_n cos[(D_nm + D_nm′)t]` once the remaining spins are traced out.
//!
//! Pair amplitudes come from the preparation dynamics, which is always the
//! nearest-neighbor free-fermion solution with argument `2Dτ`:
//!
//! * open chains use the infinite-chain amplitudes `J_{m−m′}(2Dτ)` over the
//!   index set `1..N` with no wraparound;
//! * even rings use the exact finite-ring amplitudes of both fermion parity
//!   sectors, plus the parity cross term they generate. Both reduce to the
//!   open-chain form as `N` grows.
//!
//! The cosine products use the couplings actually passed in, so a
//! full-dipolar matrix gives the long-range relaxation while the preparation
//! stays nearest-neighbor.

use rayon::prelude::*;

use crate::bessel::{bessel_j, bessel_j_orders, MAX_ORDER};
use crate::error::{Error, Result};
use crate::fermion::{mq_intensities_finite, ring_wavevectors, RingSector};
use crate::model::{Boundary, ChainSpec, CouplingMatrix};
use crate::numeric::CompensatedSum;

const SINGULAR_BELOW: f64 = 1e-13;
const DEGENERATE_G2_BELOW: f64 = 1e-12;

fn check_non_negative(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::Domain(format!("{name} must be finite and non-negative, got {value}")));
    }
    Ok(())
}

/// Intensity of one coherence order sampled along the evolution period.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationCurve {
    pub tau: f64,
    pub order: i32,
    pub times: Vec<f64>,
    pub f_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondMomentResult {
    pub tau: f64,
    /// Second moment of the `±2` line, rad²/s².
    pub m2: f64,
    /// Gaussian relaxation time `sqrt(2/M₂)`, s.
    pub t_e: f64,
}

/// Stationary zeroth-order intensity of the infinite chain, relative to its
/// value at the start of the evolution period:
/// `2 J_0²(2Dτ) / (1 + J_0(4Dτ))`.
pub fn stationary_f0(tau: f64, d_nn: f64) -> Result<f64> {
    check_non_negative("tau", tau)?;
    let j0_half = bessel_j(0, 2.0 * d_nn * tau)?;
    let denom = 1.0 + bessel_j(0, 4.0 * d_nn * tau)?;
    if denom < SINGULAR_BELOW {
        return Err(Error::Singularity(format!("1 + J_0(4Dτ) = {denom:e}")));
    }
    Ok(2.0 * j0_half * j0_half / denom)
}

/// Finite-ring counterpart of [`stationary_f0`]: `c_N²/G_0^N`, where `c_N` is
/// the weight of `I_z` in `σ_0` and `G_0^N` the exact ring intensity.
pub fn stationary_f0_finite(tau: f64, spec: &ChainSpec) -> Result<f64> {
    let g0 = mq_intensities_finite(tau, spec)?.get(0);
    let c = iz_weight(tau, spec);
    if g0 < SINGULAR_BELOW {
        return Err(Error::Singularity(format!("G_0 = {g0:e}")));
    }
    Ok(c * c / g0)
}

/// `c_N(τ) = Tr(σ_0 I_z)/Tr(I_z²)` on an even ring.
pub fn iz_weight(tau: f64, spec: &ChainSpec) -> f64 {
    let n = spec.n_spins;
    let x = 2.0 * spec.d_nn() * tau;
    let sum: CompensatedSum = ring_wavevectors(n).map(|k| (x * k.sin()).cos()).collect();
    sum.value() / (2 * n) as f64
}

#[derive(Debug, Clone, Copy)]
struct PairWeight {
    m: usize,
    mp: usize,
    cos_weight: f64,
    sin_weight: f64,
}

/// Precomputed pair weights of the `±2` coherence decay for one `τ`.
#[derive(Debug, Clone)]
pub struct F2Kernel<'a> {
    couplings: &'a CouplingMatrix,
    tau: f64,
    pairs: Vec<PairWeight>,
}

/// Ring amplitude `b_s(d) = (1/N) Σ_{k∈s} sin(x sin k) sin(kd)`.
fn ring_amplitude(n: usize, x: f64, d: usize, sector: RingSector) -> f64 {
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let shift = match sector {
        RingSector::Periodic => 0.0,
        RingSector::Antiperiodic => 0.5,
    };
    let sum: CompensatedSum = (0..n)
        .map(|j| {
            let k = step * (j as f64 + shift);
            (x * k.sin()).sin() * (k * d as f64).sin()
        })
        .collect();
    sum.value() / n as f64
}

fn open_amplitudes(n: usize, x: f64) -> Result<Vec<f64>> {
    let top = (n - 1).min(MAX_ORDER as usize);
    let mut j = bessel_j_orders(top as u32, x)?;
    if n - 1 > top {
        let tail = j[top].abs();
        if tail > 1e-30 {
            return Err(Error::Domain(format!(
                "J_{top}(2Dτ) = {tail:e} is not negligible; the chain needs Bessel orders beyond {MAX_ORDER}"
            )));
        }
        j.resize(n, 0.0);
    }
    Ok(j)
}

impl<'a> F2Kernel<'a> {
    pub fn new(tau: f64, couplings: &'a CouplingMatrix) -> Result<Self> {
        check_non_negative("tau", tau)?;
        let n = couplings.n_spins();
        let x = 2.0 * couplings.d_nn() * tau;
        let nf = n as f64;
        let mut pairs = Vec::new();
        match couplings.boundary() {
            Boundary::Open => {
                let j = open_amplitudes(n, x)?;
                for m in 0..n {
                    for mp in (m + 1..n).step_by(2) {
                        let a = j[mp - m];
                        pairs.push(PairWeight { m, mp, cos_weight: a * a / nf, sin_weight: 0.0 });
                    }
                }
            }
            Boundary::Cyclic => {
                if n % 2 == 1 || n < 4 {
                    return Err(Error::InvalidSpec(format!("ring decay needs an even number of spins >= 4, got {n}")));
                }
                let parity = if (n / 2 - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
                let per_distance: Vec<(f64, f64)> = (0..n)
                    .map(|d| {
                        if d % 2 == 0 {
                            return (0.0, 0.0);
                        }
                        let a = ring_amplitude(n, x, d, RingSector::Antiperiodic);
                        let p = ring_amplitude(n, x, d, RingSector::Periodic);
                        let (a2, p2) = (a * a, p * p);
                        ((a2 + p2) / (2.0 * nf), parity * (a2 - p2) / (2.0 * nf))
                    })
                    .collect();
                for m in 0..n {
                    for mp in (m + 1..n).step_by(2) {
                        let (cos_weight, sin_weight) = per_distance[mp - m];
                        pairs.push(PairWeight { m, mp, cos_weight, sin_weight });
                    }
                }
            }
        }
        Ok(Self { couplings, tau, pairs })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `F_±2(τ, 0)`.
    pub fn initial(&self) -> f64 {
        // every product of sines has at least two factors and vanishes at t = 0
        self.pairs.iter().map(|p| p.cos_weight).collect::<CompensatedSum>().value()
    }

    fn pair_value(&self, p: &PairWeight, t: f64) -> f64 {
        let rm = self.couplings.row(p.m);
        let rp = self.couplings.row(p.mp);
        let mut cos_prod = 1.0;
        let mut sin_prod = if p.sin_weight != 0.0 { 1.0 } else { 0.0 };
        for n in 0..rm.len() {
            if n == p.m || n == p.mp {
                continue;
            }
            let (s, c) = ((rm[n] + rp[n]) * t).sin_cos();
            cos_prod *= c;
            sin_prod *= s;
        }
        p.cos_weight * cos_prod + p.sin_weight * sin_prod
    }

    /// `F_±2(τ, t)`.
    pub fn value(&self, t: f64) -> f64 {
        let partials: Vec<CompensatedSum> =
            self.pairs.par_chunks(256).map(|chunk| chunk.iter().map(|p| self.pair_value(p, t)).collect()).collect();
        let mut total = CompensatedSum::new();
        partials.iter().for_each(|p| total.merge(p));
        total.value()
    }

    /// `−d²F_±2/dt²` at `t = 0`, from differentiating the cosine (and sine)
    /// products term by term.
    pub fn curvature(&self) -> f64 {
        let n = self.couplings.n_spins();
        let partials: Vec<CompensatedSum> = self
            .pairs
            .par_chunks(256)
            .map(|chunk| {
                chunk
                    .iter()
                    .map(|p| {
                        let rm = self.couplings.row(p.m);
                        let rp = self.couplings.row(p.mp);
                        let rates = (0..n).filter(|&k| k != p.m && k != p.mp).map(|k| rm[k] + rp[k]);
                        let sq: CompensatedSum = rates.clone().map(|a| a * a).collect();
                        let mut v = p.cos_weight * sq.value();
                        if p.sin_weight != 0.0 && n == 4 {
                            let prod: f64 = rates.product();
                            v -= 2.0 * p.sin_weight * prod;
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut total = CompensatedSum::new();
        partials.iter().for_each(|p| total.merge(p));
        total.value()
    }
}

/// Intensity of the `±2` coherences after evolving for `t` under `H_ZZ`.
pub fn f2_decay(tau: f64, t: f64, couplings: &CouplingMatrix) -> Result<f64> {
    check_non_negative("t", t)?;
    Ok(F2Kernel::new(tau, couplings)?.value(t))
}

/// [`f2_decay`] on a time grid.
pub fn f2_decay_curve(tau: f64, times: &[f64], couplings: &CouplingMatrix) -> Result<RelaxationCurve> {
    times.iter().try_for_each(|&t| check_non_negative("t", t))?;
    let kernel = F2Kernel::new(tau, couplings)?;
    Ok(RelaxationCurve {
        tau,
        order: 2,
        times: times.to_vec(),
        f_values: times.iter().map(|&t| kernel.value(t)).collect(),
    })
}

/// Second moment `M₂(τ) = −F''_±2(τ,0)/G_2(τ)` and `t_e = sqrt(2/M₂)`.
pub fn second_moment(tau: f64, couplings: &CouplingMatrix) -> Result<SecondMomentResult> {
    let kernel = F2Kernel::new(tau, couplings)?;
    let g2 = kernel.initial();
    if g2 < DEGENERATE_G2_BELOW {
        return Err(Error::Degenerate(format!("G_2(τ) = {g2:e} at τ = {tau:e}")));
    }
    let m2 = kernel.curvature() / g2;
    let t_e = if m2 > 0.0 { (2.0 / m2).sqrt() } else { f64::INFINITY };
    Ok(SecondMomentResult { tau, m2, t_e })
}

/// `exp(−M₂t²/2)`.
pub fn gaussian_envelope(m2: f64, t: f64) -> f64 {
    (-0.5 * m2 * t * t).exp()
}
