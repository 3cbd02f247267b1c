// The exact-diagonalization oracle on its own: the even-site flip maps the
// MQ Hamiltonian onto a flip-flop chain, and thermal states transfer like
// the high-temperature deviation.

use std::error::Error;
use std::f64::consts::FRAC_PI_2;

use mqchain::oracle::{
    build_hamiltonian, flip_flop_constant, thermal_transfer_ratio, HamiltonianKind, TransferOracle, TransferRoute,
};
use mqchain::{build_couplings, ChainSpec, FLUORAPATITE_D_NN as D};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for n in 2..=6 {
        let (c, residual) = flip_flop_constant(&build_couplings(&ChainSpec::open_nn(n, D))?)?;
        println!("N={n}: U H0 U† = {c} · H_ff, residual {residual:e}");
    }
    let c = build_couplings(&ChainSpec::open_nn(4, D))?;
    let h = build_hamiltonian(HamiltonianKind::TwoQuantum, &c)?;
    let shifted = build_hamiltonian(HamiltonianKind::TwoQuantumPhase(FRAC_PI_2), &c)?;
    println!("phase shift π/2: max |H_Φ + H| = {:e}", shifted.max_abs_diff(&h.scaled(-1.0)));

    let spec = ChainSpec::open_nn(5, D);
    let t = 6.764 / D;
    let high = TransferOracle::new(&spec, TransferRoute::FlipFlop)?.ratio(1, 5, t)?.ratio;
    for beta in [0.1, 1.0, 5.0] {
        let r = thermal_transfer_ratio(&spec, 1, 5, t, beta, TransferRoute::FlipFlop)?;
        println!("β = {beta}: thermal {r:.12}, high temperature {high:.12}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
