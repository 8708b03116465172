//! Bit-flip correction optics for one DEP pair.
//!
//! Each photon gets a port qubit (0 = upper port, 1 = lower port). A PBS
//! followed by a WDM sends a photon to the lower port exactly when its
//! polarization disagrees with its frequency band; a half-wave plate on the
//! lower port then flips the polarization back. Recombination traces the
//! port qubits out and reports the port-pattern weights.

use crate::error::Result;
use crate::noise::{apply_noisy_gate, Photon};
use crate::register::{gates, DensityMatrix};
use crate::state::{FullPairState, FREQ_A, FREQ_B, PAIR_QUBITS, POL_A, POL_B};

const PORT_A: usize = 4;
const PORT_B: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    /// Routes by frequency band: port ^= band.
    Wdm,
    /// Routes by polarization: port ^= V.
    Pbs,
    /// Flips H↔V on the lower output port.
    Hwp,
    /// Shifts the frequency band of V photons: band ^= V.
    WavelengthConverter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpticalElement {
    pub kind: ElementKind,
    pub photon: Photon,
}

impl OpticalElement {
    pub const fn new(kind: ElementKind, photon: Photon) -> Self {
        Self { kind, photon }
    }

    fn qubits(self) -> (usize, usize, usize) {
        match self.photon {
            Photon::A => (POL_A, FREQ_A, PORT_A),
            Photon::B => (POL_B, FREQ_B, PORT_B),
        }
    }

    /// Acts on the pair ⊗ ports register. Only the wave plate is subject to
    /// operation noise.
    fn apply(self, rho: &mut DensityMatrix, p1: f64) {
        let (pol, freq, port) = self.qubits();
        match self.kind {
            ElementKind::Wdm => rho.apply_cnot(freq, port),
            ElementKind::Pbs => rho.apply_cnot(pol, port),
            ElementKind::WavelengthConverter => rho.apply_cnot(pol, freq),
            ElementKind::Hwp => {
                // The two arms are distinguishable and later traced, so the
                // plate acts on the lower-arm block alone.
                let mut upper = rho.clone();
                upper.project(port, 0);
                let mut lower = rho.clone();
                lower.project(port, 1);
                apply_noisy_gate(&mut lower, pol, &gates::X, p1);
                upper.add_assign(&lower);
                *rho = upper;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalCircuit {
    pub elements: Vec<OpticalElement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOutput {
    pub state: FullPairState,
    /// Probabilities of the port patterns (a upper/lower, b upper/lower):
    /// index `port_a·2 + port_b`, i.e. ports (1,3), (1,4), (2,3), (2,4).
    pub port_weights: [f64; 4],
}

impl OpticalCircuit {
    /// PBS + WDM routing and a lower-port wave plate on each photon.
    pub fn bit_flip_correction() -> Self {
        use ElementKind::*;
        let mut elements = Vec::new();
        for photon in [Photon::A, Photon::B] {
            elements.push(OpticalElement::new(Pbs, photon));
            elements.push(OpticalElement::new(Wdm, photon));
            elements.push(OpticalElement::new(Hwp, photon));
        }
        Self { elements }
    }

    pub fn run(&self, input: &FullPairState, p1: f64) -> Result<CircuitOutput> {
        let ports = DensityMatrix::from_pure(&[
            num_complex::Complex64::new(1.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
        ]);
        let mut rho = input.matrix().kron(&ports);
        for element in &self.elements {
            element.apply(&mut rho, p1);
        }
        let port_state = rho.partial_trace(&[PORT_A, PORT_B]);
        let mut port_weights = [0.0; 4];
        for (i, w) in port_weights.iter_mut().enumerate() {
            *w = port_state.get(i, i).re;
        }
        let keep: Vec<usize> = (0..PAIR_QUBITS).collect();
        let state = FullPairState::new(rho.partial_trace(&keep))?;
        Ok(CircuitOutput {
            state,
            port_weights,
        })
    }
}

/// Ideal bit-flip correction stage.
pub fn simulate_step1_optics(s: &FullPairState) -> Result<FullPairState> {
    Ok(OpticalCircuit::bit_flip_correction().run(s, 1.0)?.state)
}

/// Bit-flip correction with p1-imperfect wave plates.
pub fn simulate_step1_noisy(s: &FullPairState, p1: f64) -> Result<CircuitOutput> {
    crate::error::check_probability("p1", p1)?;
    OpticalCircuit::bit_flip_correction().run(s, p1)
}

/// Applies the band ^= V relabeling on both photons of a pair register
/// starting at `offset`. Maps each DEP state to a polarization Bell state
/// times a band pattern that records the flip errors; self-inverse.
pub(crate) fn convert_bands(rho: &mut DensityMatrix, offset: usize) {
    rho.apply_cnot(offset + POL_A, offset + FREQ_A);
    rho.apply_cnot(offset + POL_B, offset + FREQ_B);
}
