//! Oracle-equivalence suite behind `mqchain verify`.
//!
//! Every check compares an analytic result against exact diagonalization (or
//! an exact identity) on chains of at most ten spins and reports the largest
//! deviation seen.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rayon::prelude::*;

use crate::bessel::bessel_j_orders;
use crate::error::Result;
use crate::fermion::{mq_intensities_finite, mq_intensities_infinite, transfer_ratio};
use crate::model::{build_couplings, ChainSpec};
use crate::oracle::{
    build_hamiltonian, flip_flop_constant, relaxation_profile, thermal_transfer_ratio, HamiltonianKind, MqExperiment,
    RelaxKind, TransferOracle, TransferRoute,
};
use crate::relaxation::{f2_decay, second_moment, stationary_f0, stationary_f0_finite, F2Kernel};

const D: f64 = crate::FLUORAPATITE_D_NN;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub tolerance: f64,
    pub observed: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.observed.is_finite() && self.observed <= self.tolerance
    }
}

type Group = fn() -> Result<Vec<CheckOutcome>>;

/// Check groups in report order.
pub const GROUPS: &[(&str, Group)] = &[
    ("intensities", intensities),
    ("transfer", transfer),
    ("unitary", unitary),
    ("relaxation", relaxation),
    ("stationary", stationary),
    ("bessel", bessel),
    ("thermal", thermal),
];

fn check(name: &'static str, tolerance: f64, observed: f64) -> CheckOutcome {
    CheckOutcome { name, tolerance, observed }
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

/// Runs every group whose name, or any of whose check names, starts with one
/// of `subset` (all groups when `subset` is empty). A `tolerance` override
/// replaces every documented tolerance.
pub fn run_suite(subset: &[String], tolerance: Option<f64>) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (group, run) in GROUPS {
        let wanted = |name: &str| subset.is_empty() || subset.iter().any(|s| name.starts_with(s.as_str()));
        let group_hit =
            subset.is_empty() || subset.iter().any(|s| group.starts_with(s.as_str()) || s.starts_with(group));
        if !group_hit {
            continue;
        }
        for mut c in run()? {
            if wanted(c.name) || wanted(group) {
                if let Some(t) = tolerance {
                    c.tolerance = t;
                }
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// CSV report: `check,tolerance,observed,status`.
pub fn report(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::from("check,tolerance,observed,status\n");
    for c in outcomes {
        let status = if c.passed() { "pass" } else { "FAIL" };
        s += &format!("{},{:?},{:?},{}\n", c.name, c.tolerance, c.observed, status);
    }
    s
}

fn tau_points(count: usize, d_tau_max: f64) -> Vec<f64> {
    (0..count).map(|i| d_tau_max * i as f64 / (count - 1) as f64 / D).collect()
}

fn intensities() -> Result<Vec<CheckOutcome>> {
    let sum_rule = tau_points(200, 5.0)
        .into_iter()
        .map(|tau| Ok(mq_intensities_infinite(tau, D)?.total() - 1.0))
        .collect::<Result<Vec<_>>>()?;
    let mut dev = 0.0f64;
    let mut outside = 0.0f64;
    for n in [4, 6, 8, 10] {
        let spec = ChainSpec::cyclic_nn(n, D);
        let exp = MqExperiment::new(&spec)?;
        for tau in tau_points(6, 3.0) {
            let ed = exp.intensities(tau)?;
            let formula = mq_intensities_finite(tau, &spec)?;
            for (order, g) in &ed.intensities {
                dev = dev.max((g - formula.get(*order)).abs());
            }
            outside = outside.max(ed.max_outside_zero_and_two());
        }
    }
    Ok(vec![
        check("intensities.sum_rule", 1e-12, max_abs(sum_rule)),
        check("intensities.ring_oracle", 1e-10, dev),
        check("intensities.higher_orders", 1e-12, outside),
    ])
}

/// Ten deterministic `(l, m, t)` triples on an `n`-spin chain.
pub fn transfer_triples(n: usize) -> Vec<(usize, usize, f64)> {
    (0..10).map(|k| (1 + (2 * k) % n, 1 + (3 * k + 1) % n, (0.37 + 1.91 * k as f64) / D)).collect()
}

fn transfer() -> Result<Vec<CheckOutcome>> {
    let results = (2..=9usize)
        .into_par_iter()
        .map(|n| {
            let spec = ChainSpec::open_nn(n, D);
            let oracle = TransferOracle::new(&spec, TransferRoute::FlipFlop)?;
            let mut dev = 0.0f64;
            let mut conservation = 0.0f64;
            for (l, m, t) in transfer_triples(n) {
                let formula = transfer_ratio(&spec, l, m, t)?.ratio;
                dev = dev.max((formula - oracle.ratio(l, m, t)?.ratio).abs());
                let total: f64 = (1..=n).map(|j| oracle.ratio(l, j, t).map(|r| r.ratio)).sum::<Result<f64>>()?;
                conservation = conservation.max((total - 1.0).abs());
            }
            Ok((dev, conservation))
        })
        .collect::<Result<Vec<_>>>()?;
    let spec = ChainSpec::open_nn(3, D);
    let t = SQRT_2 * PI / D;
    let perfect = transfer_ratio(&spec, 1, 3, t)?.ratio;
    let perfect_ed = TransferOracle::new(&spec, TransferRoute::FlipFlop)?.ratio(1, 3, t)?.ratio;
    Ok(vec![
        check("transfer.oracle", 1e-10, results.iter().map(|r| r.0).fold(0.0, f64::max)),
        check("transfer.conservation", 1e-10, results.iter().map(|r| r.1).fold(0.0, f64::max)),
        check("transfer.perfect_n3", 1e-9, (1.0 - perfect).max(1.0 - perfect_ed)),
    ])
}

fn unitary() -> Result<Vec<CheckOutcome>> {
    let mut map = 0.0f64;
    let mut phase = 0.0f64;
    for n in 2..=8 {
        let c = build_couplings(&ChainSpec::open_nn(n, D))?;
        let (scale, residual) = flip_flop_constant(&c)?;
        map = map.max(residual).max((scale - crate::oracle::FLIP_FLOP_SCALE).abs());
        let h0 = build_hamiltonian(HamiltonianKind::TwoQuantum, &c)?;
        let shifted = build_hamiltonian(HamiltonianKind::TwoQuantumPhase(FRAC_PI_2), &c)?;
        phase = phase.max(shifted.max_abs_diff(&h0.scaled(-1.0)));
    }
    Ok(vec![check("unitary.flip_flop_map", 1e-12, map), check("unitary.phase_shift", 0.0, phase)])
}

fn relaxation() -> Result<Vec<CheckOutcome>> {
    let mut initial = 0.0f64;
    for n in [4, 6, 8, 10] {
        let spec = ChainSpec::cyclic_nn(n, D);
        let c = build_couplings(&spec)?;
        for tau in tau_points(10, 3.0) {
            initial = initial.max((f2_decay(tau, 0.0, &c)? - mq_intensities_finite(tau, &spec)?.get(2)).abs());
        }
    }
    let spec = ChainSpec::cyclic_nn(8, D);
    let c = build_couplings(&spec)?;
    let times: Vec<f64> = (0..5).map(|i| 0.9 * i as f64 / D).collect();
    let mut oracle = 0.0f64;
    for tau in tau_points(5, 2.0) {
        let curves = relaxation_profile(&spec, tau, RelaxKind::Zz, &times)?;
        let ed = curves.iter().find(|c| c.order == 2).expect("order 2 is always returned");
        for (t, f) in times.iter().zip(&ed.f_values) {
            oracle = oracle.max((f2_decay(tau, *t, &c)? - f).abs());
        }
    }
    let mut m2 = 0.0f64;
    for spec in [ChainSpec::cyclic_nn(8, D), ChainSpec::open_full(150, D)] {
        let c = build_couplings(&spec)?;
        for tau in tau_points(6, 2.5).into_iter().skip(1) {
            m2 = m2.max(m2_finite_difference_error(tau, &c)?);
        }
    }
    Ok(vec![
        check("relaxation.f2_initial", 1e-10, initial),
        check("relaxation.f2_oracle_zz", 1e-10, oracle),
        check("relaxation.m2_finite_difference", 1e-6, m2),
    ])
}

/// Relative error of `M₂` against `−F″(0)/F(0)` from a centered difference
/// with step `Dt = 1e−4`.
pub fn m2_finite_difference_error(tau: f64, c: &crate::model::CouplingMatrix) -> Result<f64> {
    let kernel = F2Kernel::new(tau, c)?;
    let h = 1e-4 / c.d_nn();
    let f0 = kernel.value(0.0);
    // F is even in t, so F(h) − 2F(0) + F(−h) = 2(F(h) − F(0)).
    let fd = -2.0 * (kernel.value(h) - f0) / (h * h) / f0;
    let m2 = second_moment(tau, c)?.m2;
    Ok(((fd - m2) / m2).abs())
}

fn stationary() -> Result<Vec<CheckOutcome>> {
    let spec = ChainSpec::cyclic_nn(2048, D);
    let mut gap = 0.0f64;
    for tau in tau_points(20, 3.0) {
        gap = gap.max((stationary_f0_finite(tau, &spec)? - stationary_f0(tau, D)?).abs());
    }
    Ok(vec![
        check("stationary.origin", 0.0, (stationary_f0(0.0, D)? - 1.0).abs()),
        check("stationary.large_ring", 1e-3, gap),
    ])
}

fn bessel() -> Result<Vec<CheckOutcome>> {
    let mut recurrence = 0.0f64;
    let mut norm = 0.0f64;
    for i in 0..=100 {
        let x = -50.0 + i as f64;
        let j = bessel_j_orders(120, x)?;
        if x != 0.0 {
            for n in 1..20 {
                recurrence = recurrence.max((j[n - 1] + j[n + 1] - 2.0 * n as f64 / x * j[n]).abs());
            }
        }
        let partial = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
        norm = norm.max((1.0 - partial).abs());
    }
    Ok(vec![check("bessel.recurrence", 1e-12, recurrence), check("bessel.normalization", 1e-10, norm)])
}

fn thermal() -> Result<Vec<CheckOutcome>> {
    let spec = ChainSpec::open_nn(5, D);
    let mut dev = 0.0f64;
    for beta in [0.1, 1.0, 5.0] {
        for (l, m) in [(1, 5), (1, 3), (3, 5)] {
            for t in [0.8 / D, 3.1 / D, 6.764 / D] {
                let high_t = transfer_ratio(&spec, l, m, t)?.ratio;
                dev = dev.max((thermal_transfer_ratio(&spec, l, m, t, beta, TransferRoute::FlipFlop)? - high_t).abs());
            }
        }
    }
    Ok(vec![check("thermal.temperature_independence", 1e-9, dev)])
}
