// Gaussian relaxation time of the second-order coherence versus preparation
// time on a 150-spin chain with full dipolar relaxation.

use std::error::Error;

use mqchain::relaxation::second_moment;
use mqchain::table::CurveTable;
use mqchain::{build_couplings, ChainSpec, FLUORAPATITE_D_NN as D};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let c = build_couplings(&ChainSpec::open_full(150, D))?;
    let mut table = CurveTable::new(["tau_us", "t_e_us"]);
    for i in 1..=20 {
        let tau = 0.15 * i as f64 / D;
        let r = second_moment(tau, &c)?;
        table.push_row(vec![tau * 1e6, r.t_e * 1e6]);
    }
    table.validate()?;
    print!("{}", table.body());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
