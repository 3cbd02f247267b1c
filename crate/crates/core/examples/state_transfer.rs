// Polarization transfer along an open chain driven by the MQ Hamiltonian.

use std::error::Error;
use std::f64::consts::{PI, SQRT_2};

use mqchain::fermion::{best_transfer, transfer_profile, transfer_ratio};
use mqchain::oracle::{TransferOracle, TransferRoute};
use mqchain::{ChainSpec, FLUORAPATITE_D_NN as D};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let three = ChainSpec::open_nn(3, D);
    let t = SQRT_2 * PI / D;
    println!("N=3, 1 -> 3 at t = sqrt(2)π/D: {:.12}", transfer_ratio(&three, 1, 3, t)?.ratio);

    let times: Vec<f64> = (0..=4000).map(|i| i as f64 * 0.01 / D).collect();
    for n in [5, 9, 21] {
        let best = best_transfer(&transfer_profile(&ChainSpec::open_nn(n, D), 1, n, &times)?).expect("non-empty grid");
        println!("N={n:>2}, 1 -> {n}: max {:.6} at Dt = {:.2}", best.ratio, best.time * D);
    }

    // The MQ Hamiltonian itself, evolved exactly: the end-to-end signal is
    // the same, an odd-to-even transfer comes out with the opposite sign.
    let five = ChainSpec::open_nn(5, D);
    let ed = TransferOracle::new(&five, TransferRoute::TwoQuantum)?;
    for m in 1..=5 {
        let r = ed.ratio(1, m, 6.764 / D)?;
        println!(
            "N=5, 1 -> {m}: formula {:+.6}, MQ evolution {:+.6}",
            transfer_ratio(&five, 1, m, 6.764 / D)?.ratio,
            r.ratio
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
