use crate::error::{check_probability, Error, Result};

use super::protocol::PurificationProtocol;

const BRACKET: (f64, f64) = (1e-6, 1.0 - 1e-6);
const SCAN_POINTS: usize = 100;
const BISECTION_TOL: f64 = 1e-10;
const BISECTION_MAX_ITER: usize = 200;
const FIXED_POINT_TOL: f64 = 1e-12;
const MAX_ROUNDS: usize = 10_000;

/// Lower edge of the fidelity region in which one round beats its baseline.
///
/// The bracket is scanned on a uniform grid; the last upward crossing of
/// `round(F) − baseline(F)` is refined by bisection. A protocol that
/// improves from the bottom of the bracket with no upward crossing has
/// threshold 0.
pub fn threshold(protocol: &dyn PurificationProtocol) -> Result<f64> {
    let gain = |f: f64| -> Result<f64> { Ok(protocol.round(f)?.f_out - protocol.baseline(f)?) };
    let (lo, hi) = BRACKET;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let gains = grid.iter().map(|&f| gain(f)).collect::<Result<Vec<_>>>()?;

    let crossing = (0..SCAN_POINTS - 1)
        .rev()
        .find(|&i| gains[i] <= 0.0 && gains[i + 1] > 0.0);
    let Some(i) = crossing else {
        return if gains.iter().any(|&g| g > 0.0) {
            Ok(0.0)
        } else {
            Err(Error::UnpurifiableEverywhere {
                protocol: protocol.name().to_string(),
            })
        };
    };

    let (mut below, mut above) = (grid[i], grid[i + 1]);
    for _ in 0..BISECTION_MAX_ITER {
        if above - below < BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (below + above);
        if gain(mid)? > 0.0 {
            above = mid;
        } else {
            below = mid;
        }
    }
    Ok(0.5 * (below + above))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurificationSchedule {
    pub rounds: usize,
    /// Fidelity after each round.
    pub fidelity_trace: Vec<f64>,
    /// Π over rounds of 2/p_succ.
    pub expected_pairs: f64,
}

/// Repeats the round map from `f0` until `f_target` is reached.
pub fn iterate_to_target(
    f0: f64,
    f_target: f64,
    protocol: &dyn PurificationProtocol,
) -> Result<PurificationSchedule> {
    check_probability("F0", f0)?;
    check_probability("F_target", f_target)?;
    let mut schedule = PurificationSchedule {
        rounds: 0,
        fidelity_trace: Vec::new(),
        expected_pairs: 1.0,
    };
    if f0 >= f_target {
        return Ok(schedule);
    }
    let threshold = threshold(protocol)?;
    if f0 <= threshold {
        return Err(Error::Unpurifiable { f0, threshold });
    }

    let mut f = f0;
    while schedule.rounds < MAX_ROUNDS {
        let r = protocol.round(f)?;
        schedule.rounds += 1;
        schedule.expected_pairs *= f64::from(r.pairs_consumed) / r.p_succ;
        schedule.fidelity_trace.push(r.f_out);
        if r.f_out >= f_target {
            return Ok(schedule);
        }
        if (r.f_out - f).abs() < FIXED_POINT_TOL {
            break;
        }
        f = r.f_out;
    }
    Err(Error::TargetUnreachable {
        target: f_target,
        attractor: *schedule.fidelity_trace.last().unwrap_or(&f0),
    })
}
