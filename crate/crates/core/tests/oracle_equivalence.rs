mod common;

use std::f64::consts::{PI, SQRT_2};

use common::D;
use mqchain::fermion::{best_transfer, mq_intensities_finite, transfer_profile, transfer_ratio};
use mqchain::oracle::{
    relaxation_profile, relaxation_profile_mixed, thermal_transfer_ratio, MqExperiment, RelaxKind, TransferOracle,
    TransferRoute,
};
use mqchain::relaxation::f2_decay;
use mqchain::{build_couplings, ChainSpec};

#[test]
fn ring_intensities_all_orders() {
    for n in [4, 6, 8] {
        let spec = ChainSpec::cyclic_nn(n, D);
        let exp = MqExperiment::new(&spec).unwrap();
        for i in 0..8 {
            let tau = (0.05 + 0.61 * i as f64) / D;
            let ed = exp.intensities(tau).unwrap();
            let formula = mq_intensities_finite(tau, &spec).unwrap();
            for (order, g) in &ed.intensities {
                assert!((g - formula.get(*order)).abs() < 1e-10, "N={n} n={order}");
            }
            assert!(ed.max_outside_zero_and_two() < 1e-12);
        }
    }
}

#[test]
fn full_dipolar_preparation_leaks_into_higher_orders() {
    // Long-range couplings break the two-quantum selection rule, but only
    // weakly at short preparation times.
    let g = MqExperiment::new(&ChainSpec::open_full(8, D)).unwrap().intensities(1.0 / D).unwrap();
    let leak: f64 = g.intensities.iter().filter(|(n, _)| !matches!(n, 0 | 2 | -2)).map(|(_, v)| v).sum();
    assert!(leak > 1e-6 && leak < 0.03, "leak {leak}");
    assert!((g.total() - 1.0).abs() < 1e-12);
}

#[test]
fn transfer_matches_flip_flop_evolution_for_all_sites() {
    for n in 2..=7 {
        let spec = ChainSpec::open_nn(n, D);
        let oracle = TransferOracle::new(&spec, TransferRoute::FlipFlop).unwrap();
        for l in 1..=n {
            for m in 1..=n {
                for t in [0.3 / D, 2.2 / D, 7.9 / D] {
                    let f = transfer_ratio(&spec, l, m, t).unwrap().ratio;
                    assert!((f - oracle.ratio(l, m, t).unwrap().ratio).abs() < 1e-10, "N={n} {l}->{m}");
                }
            }
        }
    }
}

#[test]
fn two_quantum_route_flips_sign_for_mixed_parity() {
    let spec = ChainSpec::open_nn(5, D);
    let oracle = TransferOracle::new(&spec, TransferRoute::TwoQuantum).unwrap();
    for (l, m) in [(1, 2), (1, 3), (2, 4), (3, 4), (1, 5)] {
        for t in [1.1 / D, 4.0 / D] {
            let ed = oracle.ratio(l, m, t).unwrap();
            let f = transfer_ratio(&spec, l, m, t).unwrap().ratio;
            let sign = if (l + m) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((ed.ratio - sign * f).abs() < 1e-10, "{l}->{m}");
            assert_eq!(ed.parity_flagged, l % 2 == 0 || m % 2 == 0);
        }
    }
}

#[test]
fn perfect_transfer_on_three_spins() {
    let t = SQRT_2 * PI / D;
    let spec = ChainSpec::open_nn(3, D);
    assert!(transfer_ratio(&spec, 1, 3, t).unwrap().ratio >= 1.0 - 1e-9);
    for route in [TransferRoute::FlipFlop, TransferRoute::TwoQuantum] {
        assert!(TransferOracle::new(&spec, route).unwrap().ratio(1, 3, t).unwrap().ratio >= 1.0 - 1e-9);
    }
}

#[test]
fn end_to_end_transfer_maxima() {
    let times: Vec<f64> = (0..=40_000).map(|i| i as f64 * 1e-3 / D).collect();
    let best5 = best_transfer(&transfer_profile(&ChainSpec::open_nn(5, D), 1, 5, &times).unwrap()).unwrap();
    assert!((best5.ratio - 0.9424).abs() < 1e-4 && (best5.time * D - 6.764).abs() < 2e-3, "{best5:?}");
    // The 21-spin chain never gets above 0.62 in this window.
    let best21 = best_transfer(&transfer_profile(&ChainSpec::open_nn(21, D), 1, 21, &times).unwrap()).unwrap();
    assert!((best21.ratio - 0.619_672_0).abs() < 1e-6 && (best21.time * D - 23.834).abs() < 2e-3, "{best21:?}");
}

#[test]
fn thermal_states_transfer_like_high_temperature() {
    let spec = ChainSpec::open_nn(5, D);
    for route in [TransferRoute::FlipFlop, TransferRoute::TwoQuantum] {
        for beta in [0.1, 1.0, 5.0] {
            for t in [0.5 / D, 6.764 / D] {
                let hi = TransferOracle::new(&spec, route).unwrap().ratio(1, 5, t).unwrap().ratio;
                let th = thermal_transfer_ratio(&spec, 1, 5, t, beta, route).unwrap();
                assert!((th - hi).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn f2_decay_matches_zz_evolution_on_rings() {
    for n in [4, 6, 8] {
        let spec = ChainSpec::cyclic_nn(n, D);
        let c = build_couplings(&spec).unwrap();
        let times: Vec<f64> = (0..6).map(|i| 0.7 * i as f64 / D).collect();
        for tau in [0.2 / D, 0.9 / D, 2.3 / D] {
            let curves = relaxation_profile(&spec, tau, RelaxKind::Zz, &times).unwrap();
            for curve in curves.iter().filter(|c| c.order.abs() == 2) {
                for (t, f) in times.iter().zip(&curve.f_values) {
                    assert!((f2_decay(tau, *t, &c).unwrap() - f).abs() < 1e-10, "N={n}");
                }
            }
        }
    }
}

#[test]
fn f2_decay_with_long_range_relaxation() {
    // Nearest-neighbor preparation, full dipolar ZZ relaxation.
    let prep = build_couplings(&ChainSpec::cyclic_nn(8, D)).unwrap();
    let relax = build_couplings(&ChainSpec::cyclic_full(8, D)).unwrap();
    let times: Vec<f64> = (0..8).map(|i| 0.45 * i as f64 / D).collect();
    for tau in [0.4 / D, 1.5 / D] {
        let curves = relaxation_profile_mixed(&prep, &relax, tau, RelaxKind::Zz, &times).unwrap();
        let ed = curves.iter().find(|c| c.order == 2).unwrap();
        for (t, f) in times.iter().zip(&ed.f_values) {
            assert!((f2_decay(tau, *t, &relax).unwrap() - f).abs() < 1e-10);
        }
    }
}

#[test]
fn zz_zero_order_is_not_frozen_on_small_rings() {
    // The ZZ model leaves I_z invariant, but σ_0 also holds zero-quantum
    // two-spin terms that dephase. F_0 therefore drifts by a few 1e-3.
    let spec = ChainSpec::cyclic_nn(8, D);
    let curves = relaxation_profile(&spec, 0.3 / D, RelaxKind::Zz, &[0.0, 1.0 / D]).unwrap();
    let f0 = curves.iter().find(|c| c.order == 0).unwrap();
    assert!((f0.f_values[0] - 0.835_566).abs() < 1e-6);
    assert!((f0.f_values[1] - 0.832_866).abs() < 1e-6, "{}", f0.f_values[1]);
    assert!((f0.f_values[0] - f0.f_values[1]).abs() > 1e-3);
}
