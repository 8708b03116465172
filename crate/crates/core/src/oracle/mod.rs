//! Exact dense-matrix ground truth for every closed-form recursion.

mod bennett;
mod distill;
mod optics;
mod swap;

pub use bennett::{qubit_werner, simulate_bennett_round, BennettOracleOutput};
pub use distill::{simulate_distillation, DistillationOutput, TwoPairState, MIN_SUCCESS};
pub use optics::{
    simulate_step1_noisy, simulate_step1_optics, CircuitOutput, ElementKind, OpticalCircuit,
    OpticalElement,
};
pub use swap::{simulate_swap, SwapBranch, SwapOutcome, SwapOutput};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub analytic: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Absolute difference between a closed-form value and its oracle
/// counterpart, judged against `tolerance`.
pub fn compare(analytic: f64, oracle: f64, tolerance: f64) -> Comparison {
    let abs_diff = (analytic - oracle).abs();
    Comparison {
        analytic,
        oracle,
        abs_diff,
        tolerance,
        pass: abs_diff <= tolerance,
    }
}
