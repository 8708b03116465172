use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::noise::NoiseParams;
use crate::oracle::{simulate_distillation, simulate_step1_noisy};
use crate::state::{embed, make_werner, DepBasisState};

use super::recursions::{
    bennett_round, ideal_round, ideal_step1, noisy_round, noisy_step1, RoundResult,
};

/// One purification round on equal-fidelity Werner pairs.
pub trait PurificationProtocol: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    fn round(&self, f: f64) -> Result<RoundResult>;

    /// The fidelity a round has to beat to count as an improvement: the
    /// input itself, or the Φ+ share entering the distillation step for
    /// protocols with a deterministic correction stage in front.
    fn baseline(&self, f: f64) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdealDep;

impl PurificationProtocol for IdealDep {
    fn name(&self) -> &'static str {
        "ideal-dep"
    }

    fn round(&self, f: f64) -> Result<RoundResult> {
        ideal_round(f)
    }

    fn baseline(&self, f: f64) -> Result<f64> {
        ideal_step1(f)
    }
}

/// The noisy closed-form round.
#[derive(Debug, Clone, Copy)]
pub struct NoisyDep {
    pub noise: NoiseParams,
}

impl PurificationProtocol for NoisyDep {
    fn name(&self) -> &'static str {
        "noisy-dep"
    }

    fn round(&self, f: f64) -> Result<RoundResult> {
        noisy_round(f, self.noise)
    }

    fn baseline(&self, f: f64) -> Result<f64> {
        let (a, b) = noisy_step1(f, self.noise.p1())?;
        Ok(a / (a + b))
    }
}

/// Full density-matrix simulation of both stages with imperfect wave plates
/// and detectors.
#[derive(Debug, Clone, Copy)]
pub struct OracleDep {
    pub noise: NoiseParams,
}

impl PurificationProtocol for OracleDep {
    fn name(&self) -> &'static str {
        "oracle-dep"
    }

    fn round(&self, f: f64) -> Result<RoundResult> {
        let corrected = simulate_step1_noisy(&embed(&make_werner(f)?)?, self.noise.p1())?.state;
        let out = simulate_distillation(&corrected, &corrected, self.noise)?;
        Ok(RoundResult {
            f_out: out.state.fidelity().clamp(0.0, 1.0),
            p_succ: out.p_succ.min(1.0),
            pairs_consumed: 2,
        })
    }

    fn baseline(&self, f: f64) -> Result<f64> {
        let corrected = simulate_step1_noisy(&embed(&make_werner(f)?)?, self.noise.p1())?.state;
        let a = corrected.weight(DepBasisState::PhiPlus);
        let b = corrected.weight(DepBasisState::PhiMinus);
        Ok(a / (a + b))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Bennett;

impl PurificationProtocol for Bennett {
    fn name(&self) -> &'static str {
        "bennett"
    }

    fn round(&self, f: f64) -> Result<RoundResult> {
        bennett_round(f)
    }

    fn baseline(&self, f: f64) -> Result<f64> {
        Ok(f)
    }
}

pub type ProtocolFactory = fn(NoiseParams) -> Box<dyn PurificationProtocol>;

/// Purification protocols by name.
#[derive(Clone)]
pub struct ProtocolRegistry {
    factories: BTreeMap<&'static str, ProtocolFactory>,
}

impl ProtocolRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: ProtocolFactory) {
        self.factories.insert(name, factory);
    }

    pub fn create(&self, name: &str, noise: NoiseParams) -> Result<Box<dyn PurificationProtocol>> {
        self.factories
            .get(name)
            .map(|factory| factory(noise))
            .ok_or_else(|| Error::UnknownName {
                kind: "protocol",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }
}

impl Default for ProtocolRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        registry.register("ideal-dep", |_| Box::new(IdealDep));
        registry.register("noisy-dep", |noise| Box::new(NoisyDep { noise }));
        registry.register("oracle-dep", |noise| Box::new(OracleDep { noise }));
        registry.register("bennett", |_| Box::new(Bennett));
        registry
    }
}

impl fmt::Debug for ProtocolRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}

/// Looks a protocol up in the built-in registry.
pub fn protocol(name: &str, noise: NoiseParams) -> Result<Box<dyn PurificationProtocol>> {
    ProtocolRegistry::default().create(name, noise)
}
