// MQ coherence intensities: infinite chain, exact finite ring, and the
// exact-diagonalization oracle on the same ring.

use std::error::Error;

use mqchain::fermion::{mq_intensities_finite, mq_intensities_infinite};
use mqchain::oracle::MqExperiment;
use mqchain::{ChainSpec, FLUORAPATITE_D_NN as D};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let ring = ChainSpec::cyclic_nn(8, D);
    let oracle = MqExperiment::new(&ring)?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "Dτ", "G0 (inf)", "G0 (N=8)", "G0 (ED)", "G2 (ED)");
    for i in 0..=10 {
        let tau = 0.3 * i as f64 / D;
        let inf = mq_intensities_infinite(tau, D)?;
        let fin = mq_intensities_finite(tau, &ring)?;
        let ed = oracle.intensities(tau)?;
        println!("{:>6.2} {:>12.8} {:>12.8} {:>12.8} {:>12.8}", tau * D, inf.get(0), fin.get(0), ed.get(0), ed.get(2));
    }

    // Long-range couplings feed higher orders, slowly.
    let full = MqExperiment::new(&ChainSpec::open_full(8, D))?.intensities(2.0 / D)?;
    for (n, g) in full.intensities.iter().filter(|(n, _)| **n >= 0 && **n % 2 == 0) {
        println!("full dipolar N=8, Dτ=2: G{n} = {g:.3e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
