//! Phase-flip distillation on two bit-flip-corrected pairs.
//!
//! Circuit (pair 1 on qubits 0..4, pair 2 on 4..8):
//! 1. band relabeling on every photon, so each pair becomes a polarization
//!    Bell state times its flip flags;
//! 2. a p1-imperfect Hadamard wave plate on each of the four photons, which
//!    turns phase errors into polarization flips;
//! 3. an ideal polarization parity comparison between the pairs on each
//!    side, read out with η-imperfect detectors on pair 2;
//! 4. acceptance when both sides read the same bit;
//! 5. an ideal frame change back (Hadamards and band relabeling) on pair 1.

use crate::error::{check_probability, Error, Result};
use crate::noise::{apply_noisy_gate, measure_branches, NoiseParams};
use crate::register::{gates, DensityMatrix};
use crate::state::{validate_density, FullPairState, FREQ_A, FREQ_B, POL_A, POL_B};

use super::optics::convert_bands;

/// Success probabilities below this are treated as a degenerate selection.
pub const MIN_SUCCESS: f64 = 1e-15;

const PAIR2: usize = 4;

/// Exact 256×256 density matrix of two pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPairState(DensityMatrix);

impl TwoPairState {
    pub fn new(matrix: DensityMatrix) -> Result<Self> {
        if matrix.qubits() != 8 {
            return Err(Error::InvalidState(format!(
                "two-pair state needs 8 qubits, got {}",
                matrix.qubits()
            )));
        }
        validate_density(&matrix)?;
        Ok(Self(matrix))
    }

    pub fn from_pairs(first: &FullPairState, second: &FullPairState) -> Self {
        Self(first.matrix().kron(second.matrix()))
    }

    pub fn matrix(&self) -> &DensityMatrix {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistillationOutput {
    pub p_succ: f64,
    /// Probabilities of the detector patterns (side a bit, side b bit),
    /// index `a·2 + b`, before post-selection.
    pub pattern_probabilities: [f64; 4],
    pub state: FullPairState,
}

pub fn simulate_distillation(
    pair1: &FullPairState,
    pair2: &FullPairState,
    noise: NoiseParams,
) -> Result<DistillationOutput> {
    check_probability("p1", noise.p1())?;
    let mut rho = TwoPairState::from_pairs(pair1, pair2).0;

    convert_bands(&mut rho, 0);
    convert_bands(&mut rho, PAIR2);
    let h = gates::hadamard();
    for pol in [POL_A, POL_B, PAIR2 + POL_A, PAIR2 + POL_B] {
        apply_noisy_gate(&mut rho, pol, &h, noise.p1());
    }
    rho.apply_cnot(POL_A, PAIR2 + POL_A);
    rho.apply_cnot(POL_B, PAIR2 + POL_B);

    let mut pattern_probabilities = [0.0; 4];
    let mut accepted = DensityMatrix::zeros(8);
    for (bit_a, side_a) in measure_branches(&rho, PAIR2 + POL_A, noise.eta())
        .into_iter()
        .enumerate()
    {
        for (bit_b, branch) in measure_branches(&side_a, PAIR2 + POL_B, noise.eta())
            .into_iter()
            .enumerate()
        {
            pattern_probabilities[bit_a * 2 + bit_b] = branch.trace();
            if bit_a == bit_b {
                accepted.add_assign(&branch);
            }
        }
    }

    let p_succ = accepted.trace();
    if p_succ < MIN_SUCCESS {
        return Err(Error::DegenerateSelection(p_succ));
    }
    let mut out = accepted
        .partial_trace(&[POL_A, FREQ_A, POL_B, FREQ_B])
        .scaled(1.0 / p_succ);
    out.apply_1q(POL_A, &h);
    out.apply_1q(POL_B, &h);
    convert_bands(&mut out, 0);

    Ok(DistillationOutput {
        p_succ,
        pattern_probabilities,
        state: FullPairState::new(out)?,
    })
}
