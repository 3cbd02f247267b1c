//! Time evolution by eigendecomposition.
//!
//! The Hamiltonian is first split into the connected components of its
//! nonzero pattern (magnetization or sublattice sectors, depending on the
//! Hamiltonian), each block is diagonalized on its own and the eigenvectors
//! are assembled into one dense unitary for the basis changes.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::operators::{CMat, DensityMatrix, SpinOperator};
use crate::error::{Error, Result};

const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
enum Eigenvectors {
    /// The Hamiltonian is diagonal in the product basis.
    Identity,
    Real(DMatrix<f64>),
    Complex(CMat),
}

/// Eigendecomposition of a Hermitian Hamiltonian, reusable across times.
#[derive(Debug, Clone)]
pub struct Propagator {
    n_spins: usize,
    energies: Vec<f64>,
    vectors: Eigenvectors,
}

fn split(a: &CMat) -> (DMatrix<f64>, DMatrix<f64>) {
    (a.map(|z| z.re), a.map(|z| z.im))
}

fn join(re: DMatrix<f64>, im: DMatrix<f64>) -> CMat {
    re.zip_map(&im, Complex64::new)
}

/// Connected components of the off-diagonal nonzero pattern.
fn blocks(h: &CMat) -> Vec<Vec<usize>> {
    let n = h.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for c in 0..n {
        for r in 0..c {
            if h[(r, c)] != Complex64::new(0.0, 0.0) || h[(c, r)] != Complex64::new(0.0, 0.0) {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

impl Propagator {
    pub fn new(h: &SpinOperator) -> Result<Self> {
        let scale = h.matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let defect = h.hermiticity_defect();
        if defect > HERMITIAN_TOLERANCE * scale {
            return Err(Error::Domain(format!("Hamiltonian is not Hermitian (defect {defect:e})")));
        }
        let dim = h.dim();
        if h.is_diagonal() {
            let energies = (0..dim).map(|i| h.matrix[(i, i)].re).collect();
            return Ok(Self { n_spins: h.n_spins, energies, vectors: Eigenvectors::Identity });
        }
        let real = h.is_real();
        let mut energies = vec![0.0; dim];
        let mut vr = DMatrix::<f64>::zeros(if real { dim } else { 0 }, if real { dim } else { 0 });
        let mut vc = CMat::zeros(if real { 0 } else { dim }, if real { 0 } else { dim });
        for states in blocks(&h.matrix) {
            let m = states.len();
            if real {
                let sub = DMatrix::<f64>::from_fn(m, m, |r, c| h.matrix[(states[r], states[c])].re);
                let eig = SymmetricEigen::new(sub);
                for (local, &col) in states.iter().enumerate() {
                    energies[col] = eig.eigenvalues[local];
                    for (r, &row) in states.iter().enumerate() {
                        vr[(row, col)] = eig.eigenvectors[(r, local)];
                    }
                }
            } else {
                let sub = CMat::from_fn(m, m, |r, c| h.matrix[(states[r], states[c])]);
                let eig = SymmetricEigen::new(sub);
                for (local, &col) in states.iter().enumerate() {
                    energies[col] = eig.eigenvalues[local];
                    for (r, &row) in states.iter().enumerate() {
                        vc[(row, col)] = eig.eigenvectors[(r, local)];
                    }
                }
            }
        }
        let vectors = if real { Eigenvectors::Real(vr) } else { Eigenvectors::Complex(vc) };
        Ok(Self { n_spins: h.n_spins, energies, vectors })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `V† A V`.
    pub fn to_eigenbasis(&self, a: &CMat) -> CMat {
        match &self.vectors {
            Eigenvectors::Identity => a.clone(),
            Eigenvectors::Real(v) => {
                let (re, im) = split(a);
                let vt = v.transpose();
                join(&vt * (&re * v), &vt * (&im * v))
            }
            Eigenvectors::Complex(v) => v.adjoint() * a * v,
        }
    }

    /// `V A V†`.
    pub fn from_eigenbasis(&self, a: &CMat) -> CMat {
        match &self.vectors {
            Eigenvectors::Identity => a.clone(),
            Eigenvectors::Real(v) => {
                let (re, im) = split(a);
                let vt = v.transpose();
                join(v * (&re * &vt), v * (&im * &vt))
            }
            Eigenvectors::Complex(v) => v * a * v.adjoint(),
        }
    }

    /// `e^{−iHt} A e^{iHt}` for `A` already in the eigenbasis.
    pub fn rotate_in_eigenbasis(&self, a: &CMat, t: f64) -> CMat {
        let e = &self.energies;
        CMat::from_fn(a.nrows(), a.ncols(), |r, c| a[(r, c)] * Complex64::from_polar(1.0, -(e[r] - e[c]) * t))
    }

    /// `Tr(e^{−iHt} A e^{iHt} B)` with `A`, `B` in the eigenbasis.
    pub fn correlation(&self, a: &CMat, b: &CMat, t: f64) -> Complex64 {
        let e = &self.energies;
        let n = a.nrows();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..n {
            for r in 0..n {
                let x = a[(r, c)] * b[(c, r)];
                if x != Complex64::new(0.0, 0.0) {
                    acc += x * Complex64::from_polar(1.0, -(e[r] - e[c]) * t);
                }
            }
        }
        acc
    }

    pub fn evolve(&self, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        let dim = self.energies.len();
        if rho.matrix.nrows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: rho.matrix.nrows() });
        }
        if t == 0.0 {
            return Ok(rho.clone());
        }
        let rotated = self.rotate_in_eigenbasis(&self.to_eigenbasis(&rho.matrix), t);
        Ok(DensityMatrix { matrix: self.from_eigenbasis(&rotated), ..rho.clone() })
    }
}

/// `e^{−iHt} ρ e^{iHt}`.
pub fn evolve(rho: &DensityMatrix, h: &SpinOperator, t: f64) -> Result<DensityMatrix> {
    if rho.n_spins != h.n_spins {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: rho.matrix.nrows() });
    }
    Propagator::new(h)?.evolve(rho, t)
}
