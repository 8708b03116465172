//! Closed-form fidelity maps for one purification round.

use crate::error::{check_probability, Error, Result};
use crate::noise::NoiseParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundResult {
    pub f_out: f64,
    /// Post-selection success probability of the distillation step.
    pub p_succ: f64,
    pub pairs_consumed: u32,
}

impl RoundResult {
    fn new(f_out: f64, p_succ: f64) -> Result<Self> {
        if !(0.0..=1.0 + 1e-12).contains(&f_out) || !(p_succ > 0.0 && p_succ <= 1.0 + 1e-12) {
            return Err(Error::Computation(format!(
                "round produced f_out = {f_out}, p_succ = {p_succ}"
            )));
        }
        Ok(Self {
            f_out: f_out.min(1.0),
            p_succ: p_succ.min(1.0),
            pairs_consumed: 2,
        })
    }
}

/// Φ+ weight after the deterministic bit-flip correction: (4F + 3)/7.
pub fn ideal_step1(f: f64) -> Result<f64> {
    check_probability("F", f)?;
    Ok((4.0 * f + 3.0) / 7.0)
}

/// One ideal round: with p = (4F+3)/7, F′ = p²/(p² + (1−p)²)
/// = (4F+3)²/(32F² − 8F + 25).
pub fn ideal_round(f: f64) -> Result<RoundResult> {
    let p = ideal_step1(f)?;
    let q = 1.0 - p;
    let p_succ = p * p + q * q;
    RoundResult::new(p * p / p_succ, p_succ)
}

/// Weights `(a, b)` on Φ+ and Φ− after bit-flip correction with
/// p1-imperfect wave plates; the rest `1 − a − b` is unaccounted error mass.
pub fn noisy_step1(f: f64, p1: f64) -> Result<(f64, f64)> {
    check_probability("F", f)?;
    check_probability("p1", p1)?;
    let e = (1.0 - f) / 7.0;
    let spread = 2.0 * p1 * e + p1 * p1 * e;
    Ok((f + spread, e + spread))
}

/// F′ = a²/(a² + b²) from the noisy step-1 weights.
pub fn noisy_distilled_fidelity(f: f64, p1: f64) -> Result<f64> {
    let (a, b) = noisy_step1(f, p1)?;
    Ok(a * a / (a * a + b * b))
}

/// Noisy round: F′ from the noisy step-1 weights, then
///
/// F″ = (p1⁴F′[η² + (1−η)²] + (1−p1⁴)/64)
///    / (p1⁴F′[η² + (1−η)²] + p1⁴(1−F′)·2η(1−η) + (1−p1⁴)/8)
///
/// with the denominator taken as the success probability.
pub fn noisy_round(f: f64, noise: NoiseParams) -> Result<RoundResult> {
    let f_prime = noisy_distilled_fidelity(f, noise.p1())?;
    let eta = noise.eta();
    let p4 = noise.p1().powi(4);
    let agree = eta * eta + (1.0 - eta) * (1.0 - eta);
    let disagree = 2.0 * eta * (1.0 - eta);
    let kept = p4 * f_prime * agree;
    let numerator = kept + (1.0 - p4) / 64.0;
    let denominator = kept + p4 * (1.0 - f_prime) * disagree + (1.0 - p4) / 8.0;
    if denominator <= 0.0 {
        return Err(Error::Computation(format!(
            "noisy round denominator {denominator} at F = {f}"
        )));
    }
    RoundResult::new(numerator / denominator, denominator)
}

/// CNOT-based two-pair recurrence on qubit Werner pairs, q = (1−F)/3:
/// F′ = (F² + q²)/(F² + 2Fq + 5q²), success = F² + 2Fq + 5q².
/// Coefficients were read off the four-qubit oracle.
pub fn bennett_round(f: f64) -> Result<RoundResult> {
    check_probability("F", f)?;
    let q = (1.0 - f) / 3.0;
    let p_succ = f * f + 2.0 * f * q + 5.0 * q * q;
    RoundResult::new((f * f + q * q) / p_succ, p_succ)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step1_examples() {
        assert_eq!(ideal_step1(1.0).unwrap(), 1.0);
        assert_eq!(ideal_step1(0.125).unwrap(), 0.5);
        assert!((ideal_step1(0.5).unwrap() - 5.0 / 7.0).abs() < 1e-15);
        assert!(ideal_step1(2.0).is_err());
    }

    #[test]
    fn ideal_round_examples() {
        assert_eq!(ideal_round(1.0).unwrap().f_out, 1.0);
        assert_eq!(ideal_round(0.125).unwrap().f_out, 0.5);
        let r = ideal_round(0.6).unwrap();
        assert!((r.f_out - 0.919293).abs() < 1e-6);
        assert!((r.p_succ - 0.647347).abs() < 1e-6);
        assert_eq!(r.pairs_consumed, 2);
    }

    #[test]
    fn noisy_step1_examples() {
        let (a, b) = noisy_step1(0.3, 1.0).unwrap();
        assert!((a - (4.0 * 0.3 + 3.0) / 7.0).abs() < 1e-15);
        assert!((b - 4.0 * 0.7 / 7.0).abs() < 1e-15);
        assert_eq!(noisy_step1(1.0, 0.42).unwrap(), (1.0, 0.0));
        let (a, b) = noisy_step1(0.75, 0.99).unwrap();
        assert!((a - 0.855718).abs() < 1e-6);
        assert!((b - 0.141432).abs() < 1e-6);
    }

    #[test]
    fn noisy_round_examples() {
        // a = 0.8557178571, b = 0.1414321429 → a²/(a²+b²)
        assert!((noisy_distilled_fidelity(0.75, 0.99).unwrap() - 0.973409254).abs() < 1e-9);
        // F″ evaluated by hand.
        let fp = noisy_distilled_fidelity(0.75, 0.99).unwrap();
        let p4 = 0.99f64.powi(4);
        let expected = (p4 * fp + (1.0 - p4) / 64.0) / (p4 * fp + (1.0 - p4) / 8.0);
        let r = noisy_round(0.75, NoiseParams::new(0.99, 1.0).unwrap()).unwrap();
        assert!((r.f_out - expected).abs() < 1e-15);
        // collapses to 1 in the ideal limit
        assert_eq!(noisy_round(0.3, NoiseParams::ideal()).unwrap().f_out, 1.0);
    }

    #[test]
    fn bennett_fixed_points() {
        assert_eq!(bennett_round(1.0).unwrap().f_out, 1.0);
        assert!((bennett_round(0.5).unwrap().f_out - 0.5).abs() < 1e-15);
    }
}
