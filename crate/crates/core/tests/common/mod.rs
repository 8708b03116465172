#![allow(dead_code)]

use dep_repeater::chain::{decay_fixed_point, decay_scan, swap};
use dep_repeater::noise::{
    noisy_measure, noisy_one_qubit_op, povm_elements, DegreeOfFreedom, Photon, Selector,
};
use dep_repeater::oracle::{
    simulate_distillation, simulate_step1_noisy, ElementKind, OpticalCircuit, OpticalElement,
};
use dep_repeater::register::{gates, DensityMatrix, Gate1};
use dep_repeater::state::{embed, make_werner, project_diagonal, DepBasisState, FullPairState};
use dep_repeater::{NoiseParams, PairEnsemble};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Junk-free ensemble with independent uniform weights, normalized.
pub fn random_ensemble(rng: &mut StdRng) -> PairEnsemble {
    let raw: [f64; 8] = std::array::from_fn(|_| rng.random::<f64>());
    let total: f64 = raw.iter().sum();
    let mut weights = raw.map(|w| w / total);
    weights[7] = 1.0 - weights[..7].iter().sum::<f64>();
    PairEnsemble::from_weights(weights).unwrap()
}

/// A·A†/tr over a random complex A of the given rank.
pub fn random_density(rng: &mut StdRng, qubits: usize, rank: usize) -> DensityMatrix {
    let dim = 1 << qubits;
    let mut entry = || Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    let a = DMatrix::from_fn(dim, rank, |_, _| entry());
    let m = &a * a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_matrix(m.map(|z| z / tr))
}

pub fn random_pair_state(rng: &mut StdRng) -> FullPairState {
    let rank = rng.random_range(1..=16);
    FullPairState::new(random_density(rng, 4, rank)).unwrap()
}

pub fn random_selector(rng: &mut StdRng) -> Selector {
    let photon = if rng.random() { Photon::A } else { Photon::B };
    let dof = if rng.random() {
        DegreeOfFreedom::Polarization
    } else {
        DegreeOfFreedom::Frequency
    };
    Selector::new(photon, dof)
}

pub fn random_gate(rng: &mut StdRng) -> Gate1 {
    let candidates = [gates::IDENTITY, gates::X, gates::Z, gates::hadamard()];
    let a = candidates[rng.random_range(0..4)];
    let b = candidates[rng.random_range(0..4)];
    gates::mul(&a, &b)
}

pub fn check_density(m: &DensityMatrix) -> Result<(), String> {
    let herm = m.hermiticity_error();
    let tr = m.trace();
    let min = m.min_eigenvalue();
    if herm > 1e-12 || (tr - 1.0).abs() > 1e-12 || min < -1e-10 {
        return Err(format!(
            "hermiticity {herm:e}, trace {tr}, min eigenvalue {min:e}"
        ));
    }
    Ok(())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Weights non-negative and summing to one with junk; fidelity is Φ+.
pub fn normalization(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..cases {
        let f: f64 = rng.random();
        let w = make_werner(f).unwrap();
        ensure(w.fidelity() == f, || format!("werner fidelity at {f}"))?;
        let e = random_ensemble(&mut rng);
        let total = e.valid_mass() + e.junk();
        ensure((total - 1.0).abs() <= 1e-12, || format!("mass {total}"))?;
        ensure(e.weights().iter().all(|&w| w >= 0.0), || {
            "negative weight".into()
        })?;
        ensure(e.fidelity() == e.weight(DepBasisState::PhiPlus), || {
            "fidelity".into()
        })?;
    }
    Ok(())
}

/// embed → project_diagonal returns the weights; embed yields a density matrix.
pub fn embed_round_trip(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..cases {
        let e = random_ensemble(&mut rng);
        let m = embed(&e).map_err(|err| err.to_string())?;
        check_density(m.matrix())?;
        let back = project_diagonal(&m);
        let diff = back.max_abs_diff(&e);
        ensure(diff < 1e-12, || format!("round trip error {diff:e}"))?;
    }
    Ok(())
}

pub fn basis_orthonormal() -> Result<(), String> {
    for s in DepBasisState::ALL {
        let m = FullPairState::basis(s);
        for t in DepBasisState::ALL {
            let overlap = m.weight(t);
            let expected = if s == t { 1.0 } else { 0.0 };
            ensure((overlap - expected).abs() < 1e-12, || {
                format!("<{s}|{t}> = {overlap}")
            })?;
        }
    }
    Ok(())
}

/// P0 + P1 = I and outcome probabilities sum to one with valid post-states.
pub fn povm_completeness(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..cases {
        let eta: f64 = rng.random();
        let (p0, p1) = povm_elements(eta).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let sum = p0[i][j] + p1[i][j];
                let id = if i == j { 1.0 } else { 0.0 };
                ensure((sum.re - id).abs() < 1e-15 && sum.im == 0.0, || {
                    format!("P0 + P1 not identity at eta {eta}")
                })?;
            }
        }
        let state = random_pair_state(&mut rng);
        let (o0, o1) = noisy_measure(&state, random_selector(&mut rng), eta).unwrap();
        let total = o0.probability + o1.probability;
        ensure((total - 1.0).abs() <= 1e-12, || {
            format!("outcomes sum to {total}")
        })?;
        for o in [o0, o1] {
            if let Some(post) = o.post_state {
                check_density(post.matrix())?;
            }
        }
    }
    Ok(())
}

/// The imperfect one-qubit map preserves trace and positivity, and at
/// p1 = 1 it is plain conjugation.
pub fn noisy_map_properties(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..cases {
        let state = random_pair_state(&mut rng);
        let u = random_gate(&mut rng);
        let target = random_selector(&mut rng);
        let p1: f64 = rng.random();
        let out = noisy_one_qubit_op(&state, &u, target, p1).map_err(|e| e.to_string())?;
        check_density(out.matrix())?;

        let exact = noisy_one_qubit_op(&state, &u, target, 1.0).unwrap();
        let mut conj = state.matrix().clone();
        conj.apply_1q(target.qubit(), &u);
        let d = exact.matrix().distance(&conj);
        ensure(d < 1e-12, || {
            format!("p1 = 1 differs from conjugation by {d:e}")
        })?;
    }
    Ok(())
}

/// Each optical element alone, and the full correction circuit, map density
/// matrices to density matrices with port weights summing to one.
pub fn optics_trace_and_positivity(cases: usize, seed: u64) -> Result<(), String> {
    use ElementKind::*;
    let mut rng = rng(seed);
    for _ in 0..cases {
        let state = random_pair_state(&mut rng);
        let p1: f64 = rng.random();
        let mut circuits: Vec<OpticalCircuit> = [Wdm, Pbs, Hwp, WavelengthConverter]
            .into_iter()
            .flat_map(|kind| {
                [Photon::A, Photon::B].map(|photon| OpticalCircuit {
                    elements: vec![OpticalElement::new(kind, photon)],
                })
            })
            .collect();
        circuits.push(OpticalCircuit::bit_flip_correction());
        for circuit in &circuits {
            let out = circuit.run(&state, p1).map_err(|e| e.to_string())?;
            check_density(out.state.matrix())?;
            let total: f64 = out.port_weights.iter().sum();
            ensure((total - 1.0).abs() < 1e-12, || {
                format!("port weights sum {total}")
            })?;
        }
    }
    Ok(())
}

/// Step 1 on Werner input leaves a state diagonal in the pair basis,
/// supported on Φ±.
pub fn step1_bell_diagonal(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..cases {
        let f: f64 = rng.random();
        let p1: f64 = if rng.random() { 1.0 } else { rng.random() };
        let out = simulate_step1_noisy(&embed(&make_werner(f).unwrap()).unwrap(), p1)
            .unwrap()
            .state;
        let diag = embed(&project_diagonal(&out)).map_err(|e| e.to_string())?;
        let leak = out.matrix().distance(diag.matrix());
        ensure(leak < 1e-12, || {
            format!("off-diagonal leakage {leak:e} at F = {f}")
        })?;
        if p1 == 1.0 {
            let phi = out.weight(DepBasisState::PhiPlus) + out.weight(DepBasisState::PhiMinus);
            ensure((phi - 1.0).abs() < 1e-12, || format!("Φ± mass {phi}"))?;
        }
    }
    Ok(())
}

/// Coincidence pattern probabilities sum to one before post-selection and
/// the kept state is a density matrix.
pub fn distillation_patterns(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..cases {
        let a = random_pair_state(&mut rng);
        let b = random_pair_state(&mut rng);
        let noise =
            NoiseParams::new(rng.random_range(0.8..=1.0), rng.random_range(0.8..=1.0)).unwrap();
        let out = simulate_distillation(&a, &b, noise).map_err(|e| e.to_string())?;
        let total: f64 = out.pattern_probabilities.iter().sum();
        ensure((total - 1.0).abs() < 1e-12, || {
            format!("patterns sum to {total}")
        })?;
        ensure(out.p_succ > 0.0 && out.p_succ <= 1.0, || {
            format!("p_succ {}", out.p_succ)
        })?;
        check_density(out.state.matrix())?;
    }
    Ok(())
}

/// swap(a, b) = swap(b, a) and, with ideal operations, F_out ≤ min(F_a, F_b)
/// on an n×n grid of Werner fidelities in [1/8, 1].
pub fn swap_symmetry_and_non_increase(n: usize, noise: NoiseParams) -> Result<(), String> {
    let grid: Vec<f64> = (0..n)
        .map(|i| 0.125 + 0.875 * i as f64 / (n - 1) as f64)
        .collect();
    for &fa in &grid {
        for &fb in &grid {
            let a = make_werner(fa).unwrap();
            let b = make_werner(fb).unwrap();
            let ab = swap(&a, &b, noise).unwrap();
            let ba = swap(&b, &a, noise).unwrap();
            let diff = ab.max_abs_diff(&ba);
            ensure(diff < 1e-12, || {
                format!("asymmetry {diff:e} at ({fa}, {fb})")
            })?;
            let total = ab.valid_mass() + ab.junk();
            ensure((total - 1.0).abs() < 1e-12, || format!("swap mass {total}"))?;
            if noise.is_ideal() {
                let f = ab.fidelity();
                ensure(f <= fa.min(fb) + 1e-15, || {
                    format!("swap raised fidelity to {f} from ({fa}, {fb})")
                })?;
            }
        }
    }
    Ok(())
}

/// decay_scan strictly decreases until it reaches its fixed point.
pub fn decay_monotone(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..cases {
        let f0 = rng.random_range(0.13..1.0);
        let noise =
            NoiseParams::new(rng.random_range(0.9..=1.0), rng.random_range(0.9..=1.0)).unwrap();
        let series = decay_scan(16, f0, noise).unwrap();
        let fixed = decay_fixed_point(f0, noise).unwrap();
        for w in series.windows(2) {
            let (prev, next) = (w[0].1, w[1].1);
            ensure(next < prev || (prev - fixed).abs() < 1e-12, || {
                format!("decay not decreasing at N = {}: {prev} → {next}", w[1].0)
            })?;
        }
    }
    Ok(())
}
