mod common;

use dep_repeater::chain::{run_repeater, ChainConfig};
use dep_repeater::purification::{
    bennett_round, ideal_round, ideal_step1, iterate_to_target, noisy_round, IdealDep,
};
use dep_repeater::state::make_werner;
use dep_repeater::NoiseParams;
use proptest::prelude::*;

#[test]
fn ensembles_are_normalized() {
    common::normalization(1000, 1).unwrap();
}

#[test]
fn embed_round_trip() {
    common::embed_round_trip(1000, 2).unwrap();
}

#[test]
fn basis_is_orthonormal() {
    common::basis_orthonormal().unwrap();
}

#[test]
fn povm_complete() {
    common::povm_completeness(1000, 3).unwrap();
}

#[test]
fn noisy_map_trace_and_positivity() {
    common::noisy_map_properties(300, 4).unwrap();
}

#[test]
fn optics_preserve_density_matrices() {
    common::optics_trace_and_positivity(30, 5).unwrap();
}

#[test]
fn step1_output_is_diagonal() {
    common::step1_bell_diagonal(100, 6).unwrap();
}

#[test]
fn distillation_patterns_sum_to_one() {
    common::distillation_patterns(20, 7).unwrap();
}

#[test]
fn swap_symmetric_and_non_increasing() {
    common::swap_symmetry_and_non_increase(50, NoiseParams::ideal()).unwrap();
    common::swap_symmetry_and_non_increase(20, NoiseParams::new(0.95, 0.9).unwrap()).unwrap();
}

#[test]
fn decay_is_monotone() {
    common::decay_monotone(8, 200).unwrap();
}

#[test]
fn repeater_benefit_is_bounded_in_n() {
    for (protocol, noise) in [
        ("ideal-dep", NoiseParams::ideal()),
        ("noisy-dep", NoiseParams::default()),
    ] {
        for n in [2, 4, 8, 16] {
            let cfg = ChainConfig::new(n, 0.9, 2, noise).with_protocol(protocol);
            let report = run_repeater(&cfg).unwrap();
            assert!(
                report.final_fidelity > 0.9,
                "{protocol} N = {n}: {report:?}"
            );
            assert_eq!(report.per_level_fidelity.len(), report.levels);
            assert!(report.expected_cost >= n as f64);
        }
    }
}

proptest! {
    #[test]
    fn werner_fidelity_is_f(f in 0.0..=1.0f64) {
        let w = make_werner(f).unwrap();
        prop_assert_eq!(w.fidelity(), f);
        prop_assert!((w.valid_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_outputs_in_range(f in 0.0..=1.0f64, p1 in 0.5..=1.0f64, eta in 0.5..=1.0f64) {
        let noise = NoiseParams::new(p1, eta).unwrap();
        for r in [ideal_round(f).unwrap(), noisy_round(f, noise).unwrap(), bennett_round(f).unwrap()] {
            prop_assert!(r.p_succ > 0.0 && r.p_succ <= 1.0);
            prop_assert!((0.0..=1.0).contains(&r.f_out));
            prop_assert_eq!(r.pairs_consumed, 2);
        }
    }

    #[test]
    fn step1_improves(f in 0.0..1.0f64) {
        prop_assert!(ideal_step1(f).unwrap() > f);
    }

    #[test]
    fn distillation_beats_step1_above_half(f in 0.125..1.0f64) {
        let p = ideal_step1(f).unwrap();
        prop_assume!(p > 0.5 + 1e-12);
        prop_assert!(ideal_round(f).unwrap().f_out > p);
    }

    #[test]
    fn dep_dominates_bennett(i in 0usize..49) {
        let f = 0.51 + 0.01 * i as f64;
        let dep = noisy_round(f, NoiseParams::default()).unwrap().f_out;
        prop_assert!(dep >= bennett_round(f).unwrap().f_out);
        prop_assert!(ideal_round(f).unwrap().f_out >= bennett_round(f).unwrap().f_out);
    }

    #[test]
    fn schedule_cost_is_product(f0 in 0.2..0.9f64, target in 0.9..0.999f64) {
        let s = iterate_to_target(f0, target, &IdealDep).unwrap();
        prop_assert_eq!(s.fidelity_trace.len(), s.rounds);
        prop_assert!(s.expected_pairs >= 2f64.powi(s.rounds as i32));
        prop_assert!(s.expected_pairs.is_finite());
        prop_assert!(*s.fidelity_trace.last().unwrap() >= target);
    }
}
