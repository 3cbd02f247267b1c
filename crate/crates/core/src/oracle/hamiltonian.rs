use num_complex::Complex64;

use super::check_capacity;
use super::operators::{exact_unit_phase, site_bit, spin_z, SpinOperator};
use crate::error::{Error, Result};
use crate::model::CouplingMatrix;

/// Constant `c` in `U H⁽⁰⁾ U† = c·H_ff`, with `H⁽⁰⁾` summed over unordered
/// pairs and `H_ff = Σ_i D_{i,i+1}(I_i⁺I_{i+1}⁻ + I_i⁻I_{i+1}⁺)`.
pub const FLIP_FLOP_SCALE: f64 = -0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HamiltonianKind {
    /// `H⁽⁰⁾ = −½ Σ_{i<j} D_ij (I_i⁺I_j⁺ + I_i⁻I_j⁻)`.
    TwoQuantum,
    /// `e^{−2iΦ} H⁽⁺²⁾ + e^{2iΦ} H⁽⁻²⁾`.
    TwoQuantumPhase(f64),
    /// `Σ D_ij (I_i⁺I_j⁻ + I_i⁻I_j⁺)` over lattice neighbors only.
    FlipFlop,
    /// `2 Σ_{i<j} D_ij I_iz I_jz`.
    Zz,
    /// `Σ_{i<j} D_ij (2 I_iz I_jz − I_ix I_jx − I_iy I_jy)`.
    SecularDipolar,
}

/// Dense Hamiltonian assembled over unordered pairs `i < j`.
pub fn build_hamiltonian(kind: HamiltonianKind, couplings: &CouplingMatrix) -> Result<SpinOperator> {
    let n = couplings.n_spins();
    check_capacity(n)?;
    let mut h = SpinOperator::zeros(n)?;
    let dim = h.dim();
    let (raise_phase, lower_phase) = match kind {
        HamiltonianKind::TwoQuantumPhase(phi) => (exact_unit_phase(-2.0 * phi), exact_unit_phase(2.0 * phi)),
        _ => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
    };
    for (i, j, d) in couplings.pairs() {
        if kind == HamiltonianKind::FlipFlop && couplings.distance(i, j) != 1 {
            continue;
        }
        let bi = site_bit(n, i);
        let bj = site_bit(n, j);
        let both = bi | bj;
        for b in 0..dim {
            match kind {
                HamiltonianKind::TwoQuantum | HamiltonianKind::TwoQuantumPhase(_) => {
                    // I_i⁺I_j⁺ takes |↓↓⟩ to |↑↑⟩ on the pair
                    if b & both == both {
                        let up = b ^ both;
                        h.matrix[(up, b)] += raise_phase * (-0.5 * d);
                        h.matrix[(b, up)] += lower_phase * (-0.5 * d);
                    }
                }
                HamiltonianKind::FlipFlop | HamiltonianKind::SecularDipolar => {
                    let scale = if kind == HamiltonianKind::FlipFlop { d } else { -0.5 * d };
                    if (b & bi == 0) != (b & bj == 0) {
                        h.matrix[(b ^ both, b)] += Complex64::new(scale, 0.0);
                    }
                    if kind == HamiltonianKind::SecularDipolar {
                        let zz = 2.0 * d * spin_z(n, b, i) * spin_z(n, b, j);
                        h.matrix[(b, b)] += Complex64::new(zz, 0.0);
                    }
                }
                HamiltonianKind::Zz => {
                    let zz = 2.0 * d * spin_z(n, b, i) * spin_z(n, b, j);
                    h.matrix[(b, b)] += Complex64::new(zz, 0.0);
                }
            }
        }
    }
    Ok(h)
}

/// `U = Π_{even i} exp(−iπ I_ix)`: π rotations about x on even sites.
pub fn unitary_even_flip(n_spins: usize) -> Result<SpinOperator> {
    if n_spins == 0 {
        return Err(Error::InvalidSpec("at least one spin is required".into()));
    }
    check_capacity(n_spins)?;
    // exp(−iθ I_x) = cos(θ/2) − i sin(θ/2) σ_x, here θ = π.
    let half = exact_unit_phase(-std::f64::consts::FRAC_PI_2);
    let (diag, off) = (half.re, Complex64::new(0.0, half.im));
    let mut mask = 0usize;
    let mut flips = 0u32;
    for site in (1..n_spins).step_by(2) {
        mask |= site_bit(n_spins, site);
        flips += 1;
    }
    let mut u = SpinOperator::zeros(n_spins)?;
    let dim = u.dim();
    for b in 0..dim {
        // product over even sites: diag on unflipped components, off on flipped
        for sub in subsets(mask) {
            let kept = flips - sub.count_ones();
            let amp = Complex64::new(diag, 0.0).powu(kept) * off.powu(sub.count_ones());
            if amp != Complex64::new(0.0, 0.0) {
                u.matrix[(b ^ sub, b)] += amp;
            }
        }
    }
    Ok(u)
}

fn subsets(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Least-squares `c` in `U H⁽⁰⁾ U† ≈ c·H_ff`, with the max-norm residual.
pub fn flip_flop_constant(couplings: &CouplingMatrix) -> Result<(f64, f64)> {
    let u = unitary_even_flip(couplings.n_spins())?;
    let rotated = build_hamiltonian(HamiltonianKind::TwoQuantum, couplings)?.conjugated_by(&u);
    let ff = build_hamiltonian(HamiltonianKind::FlipFlop, couplings)?;
    let num: f64 = rotated.matrix.iter().zip(ff.matrix.iter()).map(|(a, b)| (a * b.conj()).re).sum();
    let den: f64 = ff.matrix.iter().map(|b| b.norm_sqr()).sum();
    let c = num / den;
    Ok((c, rotated.max_abs_diff(&ff.scaled(c))))
}
