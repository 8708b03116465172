//! Imperfect apparatus: noisy single-qubit projections and the
//! depolarizing single-qubit operation map.

use num_complex::Complex64;

use crate::error::{check_probability, Result};
use crate::register::{DensityMatrix, Gate1};
use crate::state::{make_werner, FullPairState, PairEnsemble, FREQ_A, FREQ_B, POL_A, POL_B};

/// Reliability `p1` of one-qubit operations and projection quality `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    p1: f64,
    eta: f64,
}

impl NoiseParams {
    pub fn new(p1: f64, eta: f64) -> Result<Self> {
        Ok(Self {
            p1: check_probability("p1", p1)?,
            eta: check_probability("eta", eta)?,
        })
    }

    pub const fn ideal() -> Self {
        Self { p1: 1.0, eta: 1.0 }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn is_ideal(&self) -> bool {
        self.p1 == 1.0 && self.eta == 1.0
    }
}

impl Default for NoiseParams {
    /// p1 = 0.99, eta = 1.
    fn default() -> Self {
        Self { p1: 0.99, eta: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Photon {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeOfFreedom {
    Polarization,
    Frequency,
}

/// One two-level degree of freedom of one photon of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selector {
    pub photon: Photon,
    pub dof: DegreeOfFreedom,
}

impl Selector {
    pub const fn new(photon: Photon, dof: DegreeOfFreedom) -> Self {
        Self { photon, dof }
    }

    pub fn qubit(self) -> usize {
        match (self.photon, self.dof) {
            (Photon::A, DegreeOfFreedom::Polarization) => POL_A,
            (Photon::A, DegreeOfFreedom::Frequency) => FREQ_A,
            (Photon::B, DegreeOfFreedom::Polarization) => POL_B,
            (Photon::B, DegreeOfFreedom::Frequency) => FREQ_B,
        }
    }
}

/// `(P0, P1)` with P0 = η|0⟩⟨0| + (1−η)|1⟩⟨1| and P1 = 1 − P0.
pub fn povm_elements(eta: f64) -> Result<(Gate1, Gate1)> {
    let eta = check_probability("eta", eta)?;
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    Ok((
        [[r(eta), z], [z, r(1.0 - eta)]],
        [[r(1.0 - eta), z], [z, r(eta)]],
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub bit: u8,
    pub probability: f64,
    /// `None` when the branch has zero probability.
    pub post_state: Option<FullPairState>,
}

/// Unnormalized branches √P_i ρ √P_i of an η-imperfect measurement of
/// `qubit`, indexed by outcome bit.
pub(crate) fn measure_branches(rho: &DensityMatrix, qubit: usize, eta: f64) -> [DensityMatrix; 2] {
    let mut zero = rho.clone();
    zero.scale_diagonal(qubit, eta, 1.0 - eta);
    let mut one = rho.clone();
    one.scale_diagonal(qubit, 1.0 - eta, eta);
    [zero, one]
}

pub fn noisy_measure(
    state: &FullPairState,
    target: Selector,
    eta: f64,
) -> Result<(MeasurementOutcome, MeasurementOutcome)> {
    check_probability("eta", eta)?;
    let [b0, b1] = measure_branches(state.matrix(), target.qubit(), eta);
    let outcome = |bit: u8, branch: DensityMatrix| -> Result<MeasurementOutcome> {
        let probability = branch.trace().max(0.0);
        let post_state = if probability > 0.0 {
            Some(FullPairState::new(branch.scaled(1.0 / probability))?)
        } else {
            None
        };
        Ok(MeasurementOutcome {
            bit,
            probability,
            post_state,
        })
    };
    Ok((outcome(0, b0)?, outcome(1, b1)?))
}

/// ρ → p1·UρU† + (1−p1)·tr_q(ρ) ⊗ I/2 on an arbitrary register.
pub(crate) fn apply_noisy_gate(rho: &mut DensityMatrix, qubit: usize, u: &Gate1, p1: f64) {
    rho.apply_1q(qubit, u);
    if p1 < 1.0 {
        let mut mixed = rho.clone();
        mixed.replace_with_mixed(qubit);
        *rho = rho.scaled(p1);
        rho.add_assign(&mixed.scaled(1.0 - p1));
    }
}

pub fn noisy_one_qubit_op(
    state: &FullPairState,
    ideal_op: &Gate1,
    target: Selector,
    p1: f64,
) -> Result<FullPairState> {
    check_probability("p1", p1)?;
    let mut rho = state.matrix().clone();
    apply_noisy_gate(&mut rho, target.qubit(), ideal_op, p1);
    FullPairState::new(rho)
}

/// One segment's DEP pair after the channel: a Werner mixture at the target
/// fidelity.
pub fn transmit(f_target: f64) -> Result<PairEnsemble> {
    make_werner(f_target)
}

/// Distance extrapolation F(L) = (1 + 7·exp(−L/L0))/8. Not a measured law;
/// only a convenience for chain scans.
pub fn fidelity_at_distance(length: f64, attenuation_length: f64) -> f64 {
    (1.0 + 7.0 * (-length / attenuation_length).exp()) / 8.0
}
