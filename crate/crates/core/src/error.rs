use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is outside [0, 1]")]
    Domain { name: &'static str, value: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("ensemble carries junk mass {0:.3e}; junk has no matrix form")]
    UnsupportedJunk(f64),

    #[error("post-selection succeeded with probability {0:.3e}")]
    DegenerateSelection(f64),

    #[error("computation error: {0}")]
    Computation(String),

    #[error("no improving region for protocol `{protocol}` (unpurifiable-everywhere)")]
    UnpurifiableEverywhere { protocol: String },

    #[error(
        "initial fidelity {f0} is below the purification threshold {threshold} (unpurifiable)"
    )]
    Unpurifiable { f0: f64, threshold: f64 },

    #[error("target {target} is above the recursion attractor {attractor} (target-unreachable)")]
    TargetUnreachable { target: f64, attractor: f64 },

    #[error("chain collapse at level {level}: fidelity {fidelity} below threshold {threshold}")]
    ChainCollapse {
        level: usize,
        fidelity: f64,
        threshold: f64,
    },

    #[error("invalid chain configuration: {0}")]
    InvalidChain(String),

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks that `value` is a probability.
pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain { name, value })
    }
}
