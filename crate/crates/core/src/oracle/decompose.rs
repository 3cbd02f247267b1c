use std::collections::BTreeMap;

use num_complex::Complex64;

use super::operators::{magnetization, CMat, DensityMatrix};
use crate::numeric::CompensatedSum;

/// Split of an operator into coherence orders, `[I_z, ρ_n] = n ρ_n`.
#[derive(Debug, Clone)]
pub struct CoherenceDecomposition {
    pub n_spins: usize,
    pub components: BTreeMap<i32, DensityMatrix>,
}

impl CoherenceDecomposition {
    pub fn component(&self, order: i32) -> Option<&DensityMatrix> {
        self.components.get(&order)
    }

    pub fn reconstruct(&self) -> CMat {
        let dim = 1usize << self.n_spins;
        self.components.values().fold(CMat::zeros(dim, dim), |acc, c| acc + &c.matrix)
    }

    /// `max_n max |[I_z, ρ_n] − n ρ_n|`.
    pub fn commutator_residual(&self) -> f64 {
        let n = self.n_spins;
        let mut worst = 0.0f64;
        for (&order, comp) in &self.components {
            let m = &comp.matrix;
            for c in 0..m.ncols() {
                for r in 0..m.nrows() {
                    let comm = m[(r, c)] * (magnetization(n, r) - magnetization(n, c));
                    worst = worst.max((comm - m[(r, c)] * order as f64).norm());
                }
            }
        }
        worst
    }
}

/// Coherence order `m_r − m_c` of matrix element `(r, c)`.
fn order_of(r: usize, c: usize) -> i32 {
    c.count_ones() as i32 - r.count_ones() as i32
}

/// Partition by total-magnetization difference. Orders whose block is
/// identically zero are omitted.
pub fn coherence_decompose(rho: &DensityMatrix) -> CoherenceDecomposition {
    let dim = rho.matrix.nrows();
    let mut components: BTreeMap<i32, DensityMatrix> = BTreeMap::new();
    for c in 0..dim {
        for r in 0..dim {
            let v = rho.matrix[(r, c)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let entry = components.entry(order_of(r, c)).or_insert_with(|| DensityMatrix {
                n_spins: rho.n_spins,
                matrix: CMat::zeros(dim, dim),
                convention: rho.convention,
            });
            entry.matrix[(r, c)] = v;
        }
    }
    CoherenceDecomposition { n_spins: rho.n_spins, components }
}

/// `Tr(ρ_n ρ_−n) / Tr(I_z²)` for every order `−N..=N`, computed straight from
/// the matrix elements.
pub fn coherence_intensities(rho: &DensityMatrix) -> BTreeMap<i32, f64> {
    let n = rho.n_spins;
    let dim = rho.matrix.nrows();
    let mut sums: BTreeMap<i32, CompensatedSum> =
        (-(n as i32)..=n as i32).map(|k| (k, CompensatedSum::new())).collect();
    for c in 0..dim {
        for r in 0..dim {
            let v = (rho.matrix[(r, c)] * rho.matrix[(c, r)]).re;
            if v != 0.0 {
                sums.get_mut(&order_of(r, c)).expect("order within ±N").add(v);
            }
        }
    }
    let norm = n as f64 * (1u64 << n) as f64 / 4.0;
    sums.into_iter().map(|(k, s)| (k, s.value() / norm)).collect()
}
