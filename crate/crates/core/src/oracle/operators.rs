use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::check_capacity;
use crate::error::{Error, Result};

pub(crate) type CMat = DMatrix<Complex64>;

/// Dense operator on `N` spins.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    pub n_spins: usize,
    pub matrix: CMat,
}

impl SpinOperator {
    pub fn new(n_spins: usize, matrix: CMat) -> Result<Self> {
        let dim = 1usize << n_spins;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows() });
        }
        Ok(Self { n_spins, matrix })
    }

    pub fn zeros(n_spins: usize) -> Result<Self> {
        check_capacity(n_spins)?;
        let dim = 1usize << n_spins;
        Ok(Self { n_spins, matrix: CMat::zeros(dim, dim) })
    }

    pub fn identity(n_spins: usize) -> Result<Self> {
        check_capacity(n_spins)?;
        let dim = 1usize << n_spins;
        Ok(Self { n_spins, matrix: CMat::identity(dim, dim) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |H − H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for c in 0..n {
            for r in 0..=c {
                worst = worst.max((self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|c| (0..n).all(|r| r == c || self.matrix[(r, c)] == Complex64::new(0.0, 0.0)))
    }

    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    /// `U·self·U†`.
    pub fn conjugated_by(&self, u: &SpinOperator) -> SpinOperator {
        let m = &u.matrix * &self.matrix * u.matrix.adjoint();
        SpinOperator { n_spins: self.n_spins, matrix: m }
    }

    pub fn scaled(&self, s: f64) -> SpinOperator {
        SpinOperator { n_spins: self.n_spins, matrix: self.matrix.map(|z| z * s) }
    }

    /// `max |A − B|` over matrix elements.
    pub fn max_abs_diff(&self, other: &SpinOperator) -> f64 {
        self.matrix.iter().zip(other.matrix.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `I_iz` for spin `i` (1-based).
    pub fn iz(n_spins: usize, i: usize) -> Result<Self> {
        let mut op = Self::zeros(n_spins)?;
        for b in 0..op.dim() {
            op.matrix[(b, b)] = Complex64::new(spin_z(n_spins, b, i - 1), 0.0);
        }
        Ok(op)
    }

    /// Total `I_z = Σ_i I_iz`.
    pub fn total_iz(n_spins: usize) -> Result<Self> {
        let mut op = Self::zeros(n_spins)?;
        for b in 0..op.dim() {
            op.matrix[(b, b)] = Complex64::new(magnetization(n_spins, b), 0.0);
        }
        Ok(op)
    }

    /// `I_i^+` (raising) for spin `i` (1-based).
    pub fn raising(n_spins: usize, i: usize) -> Result<Self> {
        let mut op = Self::zeros(n_spins)?;
        let bit = site_bit(n_spins, i - 1);
        for b in 0..op.dim() {
            if b & bit != 0 {
                op.matrix[(b ^ bit, b)] = Complex64::new(1.0, 0.0);
            }
        }
        Ok(op)
    }

    /// `I_i^−` (lowering) for spin `i` (1-based).
    pub fn lowering(n_spins: usize, i: usize) -> Result<Self> {
        Ok(Self::raising(n_spins, i)?.adjoint())
    }

    pub fn adjoint(&self) -> Self {
        Self { n_spins: self.n_spins, matrix: self.matrix.adjoint() }
    }
}

pub(crate) fn site_bit(n_spins: usize, site: usize) -> usize {
    1usize << (n_spins - 1 - site)
}

/// `m` of spin `site` (0-based) in basis state `b`.
pub(crate) fn spin_z(n_spins: usize, b: usize, site: usize) -> f64 {
    if b & site_bit(n_spins, site) == 0 {
        0.5
    } else {
        -0.5
    }
}

/// Total magnetization quantum number of basis state `b`.
pub(crate) fn magnetization(n_spins: usize, b: usize) -> f64 {
    0.5 * n_spins as f64 - b.count_ones() as f64
}

/// `e^{iθ}`, exact when `θ` is within 1e-12 of a multiple of `π/2`, so that
/// quarter-turn phases come out as exactly `±1`, `±i`.
pub fn exact_unit_phase(theta: f64) -> Complex64 {
    let quarters = theta / FRAC_PI_2;
    let nearest = quarters.round();
    if (theta - nearest * FRAC_PI_2).abs() < 1e-12 {
        match (nearest as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, theta)
    }
}

/// How a density matrix is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Trace one.
    Normalized,
    /// Traceless high-temperature deviation operator, e.g. `ρ ∝ I_z`.
    Deviation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub n_spins: usize,
    pub matrix: CMat,
    pub convention: Convention,
}

impl DensityMatrix {
    pub fn from_operator(op: SpinOperator, convention: Convention) -> Self {
        Self { n_spins: op.n_spins, matrix: op.matrix, convention }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix.iter().zip(other.matrix.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// `Tr(AB)` without forming the product.
pub(crate) fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for c in 0..n {
        let ac = a.column(c);
        for r in 0..n {
            acc += ac[r] * b[(c, r)];
        }
    }
    acc
}
