//! Entanglement swapping at a node holding photon b of pair 1 and photon a
//! of pair 2.
//!
//! The node relabels the bands of its two photons so they carry the flip
//! flags, reads those flags, and performs a polarization Bell measurement
//! (an ideal rotation followed by two η-imperfect detections). The announced
//! correction on the far photon b₂ is one p1-imperfect polarization Pauli;
//! band relabelings on the far photons are taken as ideal.

use crate::error::Result;
use crate::noise::{apply_noisy_gate, measure_branches, NoiseParams};
use crate::register::{gates, DensityMatrix};
use crate::state::{FullPairState, FREQ_A, FREQ_B, POL_A, POL_B};

use super::distill::TwoPairState;

const NODE_POL_1: usize = POL_B;
const NODE_FREQ_1: usize = FREQ_B;
const NODE_POL_2: usize = 4 + POL_A;
const NODE_FREQ_2: usize = 4 + FREQ_A;
const FAR_POL_B: usize = 4 + POL_B;
const FAR_FREQ_B: usize = 4 + FREQ_B;

/// Classical record announced by the node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapOutcome {
    /// Phase bit of the Bell measurement.
    pub phase: u8,
    /// Parity bit of the Bell measurement.
    pub parity: u8,
    /// Flip flag read on the node's photon from pair 1.
    pub flag_1: u8,
    /// Flip flag read on the node's photon from pair 2.
    pub flag_2: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapBranch {
    pub outcome: SwapOutcome,
    pub probability: f64,
    /// Corrected outer pair; `None` for zero-probability branches.
    pub state: Option<FullPairState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutput {
    pub branches: Vec<SwapBranch>,
    /// Outcome-averaged outer pair (photon a₁, photon b₂).
    pub state: FullPairState,
}

pub fn simulate_swap(
    pair1: &FullPairState,
    pair2: &FullPairState,
    noise: NoiseParams,
) -> Result<SwapOutput> {
    let mut rho = TwoPairState::from_pairs(pair1, pair2).matrix().clone();

    rho.apply_cnot(NODE_POL_1, NODE_FREQ_1);
    rho.apply_cnot(NODE_POL_2, NODE_FREQ_2);
    rho.apply_cnot(NODE_POL_1, NODE_POL_2);
    rho.apply_1q(NODE_POL_1, &gates::hadamard());

    let mut branches = Vec::with_capacity(16);
    let mut total = DensityMatrix::zeros(4);
    for (phase, after_phase) in measure_branches(&rho, NODE_POL_1, noise.eta())
        .into_iter()
        .enumerate()
    {
        for (parity, after_parity) in measure_branches(&after_phase, NODE_POL_2, noise.eta())
            .into_iter()
            .enumerate()
        {
            for flag_1 in 0..2 {
                for flag_2 in 0..2 {
                    let mut branch = after_parity.clone();
                    branch.project(NODE_FREQ_1, flag_1);
                    branch.project(NODE_FREQ_2, flag_2);

                    let mut pauli = gates::IDENTITY;
                    if parity == 1 {
                        pauli = gates::mul(&gates::X, &pauli);
                    }
                    if phase == 1 {
                        pauli = gates::mul(&gates::Z, &pauli);
                    }
                    apply_noisy_gate(&mut branch, FAR_POL_B, &pauli, noise.p1());
                    if parity == 1 {
                        branch.apply_1q(FAR_FREQ_B, &gates::X);
                    }
                    if flag_1 == 1 {
                        branch.apply_1q(FAR_FREQ_B, &gates::X);
                    }
                    if flag_2 == 1 {
                        branch.apply_1q(FREQ_A, &gates::X);
                    }

                    let outer = branch.partial_trace(&[POL_A, FREQ_A, FAR_POL_B, FAR_FREQ_B]);
                    let probability = outer.trace().max(0.0);
                    total.add_assign(&outer);
                    let state = if probability > 1e-15 {
                        Some(FullPairState::new(outer.scaled(1.0 / probability))?)
                    } else {
                        None
                    };
                    branches.push(SwapBranch {
                        outcome: SwapOutcome {
                            phase: phase as u8,
                            parity: parity as u8,
                            flag_1: flag_1 as u8,
                            flag_2: flag_2 as u8,
                        },
                        probability,
                        state,
                    });
                }
            }
        }
    }
    Ok(SwapOutput {
        branches,
        state: FullPairState::new(total)?,
    })
}
