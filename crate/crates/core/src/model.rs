//! Chain geometry and dipolar couplings.

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
const HBAR: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingMode {
    NearestNeighbor,
    FullDipolar,
}

/// Microscopic parameters of the dipolar coupling between nearest neighbors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    /// Gyromagnetic ratio, rad/(s·T).
    pub gamma: f64,
    /// Lattice spacing, m.
    pub a: f64,
    /// Angle between the chain and the static field, rad.
    pub theta: f64,
}

impl RawParams {
    /// Signed nearest-neighbor coupling `γ²ħ(1 − 3cos²θ) / (2a³)` in rad/s.
    pub fn signed_coupling(&self) -> f64 {
        let c = self.theta.cos();
        self.gamma * self.gamma * HBAR * (1.0 - 3.0 * c * c) / (2.0 * self.a.powi(3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingModel {
    pub mode: CouplingMode,
    /// Nearest-neighbor coupling magnitude, rad/s.
    pub d_nn: f64,
    pub raw_params: Option<RawParams>,
}

impl CouplingModel {
    pub fn nearest_neighbor(d_nn: f64) -> Self {
        Self { mode: CouplingMode::NearestNeighbor, d_nn, raw_params: None }
    }

    pub fn full_dipolar(d_nn: f64) -> Self {
        Self { mode: CouplingMode::FullDipolar, d_nn, raw_params: None }
    }

    /// Derives `d_nn` from microscopic parameters. Only the magnitude is kept;
    /// the overall sign is a phase convention that no intensity or transfer
    /// probability depends on.
    pub fn from_raw(mode: CouplingMode, raw: RawParams) -> Result<Self> {
        let d = raw.signed_coupling().abs();
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidSpec(format!("raw parameters give a vanishing or non-finite coupling ({d})")));
        }
        Ok(Self { mode, d_nn: d, raw_params: Some(raw) })
    }
}

/// Chain length, boundary condition and coupling model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub n_spins: usize,
    pub boundary: Boundary,
    pub coupling: CouplingModel,
}

impl ChainSpec {
    pub fn new(n_spins: usize, boundary: Boundary, coupling: CouplingModel) -> Self {
        Self { n_spins, boundary, coupling }
    }

    pub fn open_nn(n_spins: usize, d_nn: f64) -> Self {
        Self::new(n_spins, Boundary::Open, CouplingModel::nearest_neighbor(d_nn))
    }

    pub fn cyclic_nn(n_spins: usize, d_nn: f64) -> Self {
        Self::new(n_spins, Boundary::Cyclic, CouplingModel::nearest_neighbor(d_nn))
    }

    pub fn open_full(n_spins: usize, d_nn: f64) -> Self {
        Self::new(n_spins, Boundary::Open, CouplingModel::full_dipolar(d_nn))
    }

    pub fn cyclic_full(n_spins: usize, d_nn: f64) -> Self {
        Self::new(n_spins, Boundary::Cyclic, CouplingModel::full_dipolar(d_nn))
    }

    pub fn d_nn(&self) -> f64 {
        self.coupling.d_nn
    }

    /// Checks the invariants every dynamics operation relies on.
    pub fn validate(&self) -> Result<()> {
        if self.n_spins < 2 {
            return Err(Error::InvalidSpec(format!("at least 2 spins are required, got {}", self.n_spins)));
        }
        let d = self.coupling.d_nn;
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidSpec(format!("d_nn must be positive and finite, got {d}")));
        }
        Ok(())
    }

    /// Separation of spins `i` and `j` (1-based) in lattice units, using the
    /// minimum image on a ring.
    pub fn distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        match self.boundary {
            Boundary::Open => d,
            Boundary::Cyclic => d.min(self.n_spins - d),
        }
    }
}

/// Symmetric matrix of couplings `D_ij` (rad/s) with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    n_spins: usize,
    boundary: Boundary,
    mode: CouplingMode,
    d_nn: f64,
    values: Vec<f64>,
}

impl CouplingMatrix {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn mode(&self) -> CouplingMode {
        self.mode
    }

    /// The nearest-neighbor constant the matrix was realized from. It keeps
    /// the sign applied by [`CouplingMatrix::scaled`].
    pub fn d_nn(&self) -> f64 {
        self.d_nn
    }

    /// Lattice separation of spins `i` and `j` (0-based), minimum image on a
    /// ring.
    pub fn distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        match self.boundary {
            Boundary::Open => d,
            Boundary::Cyclic => d.min(self.n_spins - d),
        }
    }

    /// Coupling between spins `i` and `j`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!((1..=self.n_spins).contains(&i) && (1..=self.n_spins).contains(&j), "spin index out of range");
        self.values[(i - 1) * self.n_spins + (j - 1)]
    }

    /// Row `i` (0-based) of the matrix.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_spins..(i + 1) * self.n_spins]
    }

    /// Unordered pairs `(i, j, D_ij)` with `i < j`, 0-based, skipping zeros.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n_spins;
        (0..n).flat_map(move |i| {
            (i + 1..n).filter_map(move |j| {
                let d = self.values[i * n + j];
                (d != 0.0).then_some((i, j, d))
            })
        })
    }

    /// Every coupling multiplied by `s` (negative `s` flips the sign
    /// convention).
    pub fn scaled(&self, s: f64) -> Self {
        Self { d_nn: self.d_nn * s, values: self.values.iter().map(|v| v * s).collect(), ..self.clone() }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }
}

/// Realizes the coupling matrix of a chain.
pub fn build_couplings(spec: &ChainSpec) -> Result<CouplingMatrix> {
    spec.validate()?;
    let n = spec.n_spins;
    let d_nn = spec.coupling.d_nn;
    let mut values = vec![0.0; n * n];
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let r = spec.distance(i, j);
            let d = match spec.coupling.mode {
                CouplingMode::NearestNeighbor if r == 1 => d_nn,
                CouplingMode::NearestNeighbor => 0.0,
                CouplingMode::FullDipolar => d_nn / (r * r * r) as f64,
            };
            values[(i - 1) * n + (j - 1)] = d;
        }
    }
    Ok(CouplingMatrix { n_spins: n, boundary: spec.boundary, mode: spec.coupling.mode, d_nn, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_neighbor_entries() {
        let c = build_couplings(&ChainSpec::open_nn(5, 16.4e3)).unwrap();
        assert_eq!(c.get(1, 2), 16.4e3);
        assert_eq!(c.get(1, 3), 0.0);
        assert_eq!(c.get(4, 5), 16.4e3);
        assert_eq!(c.get(1, 5), 0.0);
    }

    #[test]
    fn next_nearest_is_eight_times_weaker() {
        let c = build_couplings(&ChainSpec::open_full(3, 16.4e3)).unwrap();
        assert_eq!(c.get(1, 3), 2.05e3);
        assert_eq!(c.get(1, 2), 16.4e3);
    }

    #[test]
    fn two_spins_single_pair() {
        for spec in [ChainSpec::open_nn(2, 3.0), ChainSpec::open_full(2, 3.0)] {
            let c = build_couplings(&spec).unwrap();
            assert_eq!(c.row(0), &[0.0, 3.0]);
            assert_eq!(c.row(1), &[3.0, 0.0]);
        }
    }

    #[test]
    fn too_short_chain_is_rejected() {
        assert!(matches!(build_couplings(&ChainSpec::open_nn(1, 1.0)), Err(Error::InvalidSpec(_))));
        assert!(matches!(build_couplings(&ChainSpec::open_nn(4, 0.0)), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn ring_wraps_around() {
        let c = build_couplings(&ChainSpec::cyclic_nn(6, 1.0)).unwrap();
        assert_eq!(c.get(1, 6), 1.0);
        assert_eq!(c.get(1, 4), 0.0);
        let f = build_couplings(&ChainSpec::cyclic_full(6, 1.0)).unwrap();
        assert_eq!(f.get(1, 5), 1.0 / 8.0);
        assert_eq!(f.get(1, 4), 1.0 / 27.0);
    }

    #[test]
    fn full_dipolar_inverse_cube_law() {
        let c = build_couplings(&ChainSpec::open_full(12, 7.5)).unwrap();
        for i in 1..=12 {
            assert_eq!(c.get(i, i), 0.0);
            for j in 1..=12 {
                assert_eq!(c.get(i, j), c.get(j, i));
                if i != j {
                    let r = i.abs_diff(j) as f64;
                    assert!((c.get(i, j) * r.powi(3) - 7.5).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let spec = ChainSpec::open_full(40, 16.4e3);
        let a = build_couplings(&spec).unwrap();
        let b = build_couplings(&spec).unwrap();
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn raw_parameters_give_magnitude() {
        // 19F: gamma = 2.5181e8 rad/(s T), a = 3.442 Å along the c-axis.
        let raw = RawParams { gamma: 2.5181e8, a: 3.442e-10, theta: 0.0 };
        assert!(raw.signed_coupling() < 0.0);
        let m = CouplingModel::from_raw(CouplingMode::NearestNeighbor, raw).unwrap();
        assert!(m.d_nn > 0.0);
        assert_eq!(m.d_nn, raw.signed_coupling().abs());
        let zero = RawParams { gamma: 0.0, ..raw };
        assert!(CouplingModel::from_raw(CouplingMode::NearestNeighbor, zero).is_err());
    }
}
