// Second-order coherence decay in the ZZ model against exact evolution, and
// the stationary zeroth-order intensity.

use std::error::Error;

use mqchain::oracle::{relaxation_profile, RelaxKind};
use mqchain::relaxation::{gaussian_envelope, second_moment, stationary_f0, F2Kernel};
use mqchain::{build_couplings, ChainSpec, FLUORAPATITE_D_NN as D};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = ChainSpec::cyclic_nn(8, D);
    let c = build_couplings(&spec)?;
    let tau = 1.0 / D;
    let kernel = F2Kernel::new(tau, &c)?;
    let m2 = second_moment(tau, &c)?;
    let times: Vec<f64> = (0..=8).map(|i| 0.25 * i as f64 / D).collect();
    let ed = relaxation_profile(&spec, tau, RelaxKind::Zz, &times)?;
    let ed2 = &ed.iter().find(|c| c.order == 2).expect("order 2").f_values;
    println!("N=8 ring, Dτ=1, t_e = {:.3e} s", m2.t_e);
    println!("{:>6} {:>12} {:>12} {:>12}", "Dt", "F2", "ED", "gaussian");
    for (t, e) in times.iter().zip(ed2) {
        let g = kernel.initial() * gaussian_envelope(m2.m2, *t);
        println!("{:>6.2} {:>12.9} {:>12.9} {:>12.9}", t * D, kernel.value(*t), e, g);
    }

    println!("stationary F0 of the infinite chain:");
    for i in 0..=6 {
        let tau = 0.25 * i as f64 / D;
        println!("  Dτ = {:.2}: {:.6}", tau * D, stationary_f0(tau, D)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
