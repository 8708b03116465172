//! Fidelity recursions for one purification round, threshold search and
//! iterate-to-target scheduling, with every protocol variant reachable by
//! name through [`ProtocolRegistry`].

mod protocol;
mod recursions;
mod schedule;

pub use protocol::{
    protocol, Bennett, IdealDep, NoisyDep, OracleDep, ProtocolFactory, ProtocolRegistry,
    PurificationProtocol,
};
pub use recursions::{
    bennett_round, ideal_round, ideal_step1, noisy_distilled_fidelity, noisy_round, noisy_step1,
    RoundResult,
};
pub use schedule::{iterate_to_target, threshold, PurificationSchedule};
