//! Four-qubit reference for the CNOT-based two-pair recurrence on qubit
//! Werner pairs: bilateral CNOT from pair 1 onto pair 2, computational-basis
//! readout of pair 2, acceptance on coincident bits.

use num_complex::Complex64;

use crate::error::{check_probability, Error, Result};
use crate::register::DensityMatrix;

use super::distill::MIN_SUCCESS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BennettOracleOutput {
    pub f_out: f64,
    pub p_succ: f64,
}

fn bell_vectors() -> [[Complex64; 4]; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x, 0.0);
    let z = c(0.0);
    [
        [c(s), z, z, c(s)],  // Φ+
        [c(s), z, z, c(-s)], // Φ−
        [z, c(s), c(s), z],  // Ψ+
        [z, c(s), c(-s), z], // Ψ−
    ]
}

/// F|Φ+⟩⟨Φ+| + (1−F)/3 over the other three Bell states.
pub fn qubit_werner(f: f64) -> Result<DensityMatrix> {
    check_probability("F", f)?;
    let mut rho = DensityMatrix::zeros(2);
    for (k, v) in bell_vectors().iter().enumerate() {
        let w = if k == 0 { f } else { (1.0 - f) / 3.0 };
        rho.add_assign(&DensityMatrix::from_pure(v).scaled(w));
    }
    Ok(rho)
}

pub fn simulate_bennett_round(f: f64) -> Result<BennettOracleOutput> {
    let pair = qubit_werner(f)?;
    // qubits: pair 1 = (0, 1), pair 2 = (2, 3)
    let mut rho = pair.kron(&pair);
    rho.apply_cnot(0, 2);
    rho.apply_cnot(1, 3);
    let mut accepted = DensityMatrix::zeros(4);
    for bit in 0..2 {
        let mut branch = rho.clone();
        branch.project(2, bit);
        branch.project(3, bit);
        accepted.add_assign(&branch);
    }
    let p_succ = accepted.trace();
    if p_succ < MIN_SUCCESS {
        return Err(Error::DegenerateSelection(p_succ));
    }
    let out = accepted.partial_trace(&[0, 1]).scaled(1.0 / p_succ);
    Ok(BennettOracleOutput {
        f_out: out.expectation(&bell_vectors()[0]),
        p_succ,
    })
}
