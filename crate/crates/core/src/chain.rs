//! Nested repeater chain: swapping at intermediate nodes interleaved with
//! purification, level by level.
//!
//! Every link of a level is prepared identically, so a level is carried by
//! one representative link. Two backends exist: `closed-form` works on
//! diagonal ensembles with the closed-form swap law and a registered
//! purification protocol, `oracle` carries exact 16×16 matrices through the
//! swap and purification simulators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{check_probability, Error, Result};
use crate::noise::NoiseParams;
use crate::oracle::{simulate_distillation, simulate_step1_noisy, simulate_swap};
use crate::purification::{protocol, threshold, OracleDep, PurificationProtocol, RoundResult};
use crate::state::{embed, make_werner, DepBasisState, FullPairState, PairEnsemble};

/// Largest chain the oracle backend accepts.
pub const ORACLE_MAX_SEGMENTS: usize = 8;

/// Closed-form swap of two diagonal ensembles.
///
/// With ideal operations the error patterns compose: the outer pair carries
/// `e₁ ⊕ e₂` with probability Σ w₁(e₁)·w₂(e₂), so for Werner inputs
/// F = F₁F₂ + (1 − F₁)(1 − F₂)/7. A misread parity bit (1 − η) leaves the
/// bands of the outer photons mismatched, which is junk; a misread phase bit
/// (1 − η) flips the phase; the imperfect correction (1 − p1) randomizes the
/// flip and phase labels on the far photon.
pub fn swap(a: &PairEnsemble, b: &PairEnsemble, noise: NoiseParams) -> Result<PairEnsemble> {
    let eta = noise.eta();
    let p1 = noise.p1();

    let mut composed = [0.0; 8];
    for s in DepBasisState::ALL {
        for t in DepBasisState::ALL {
            let out = DepBasisState::from_errors(s.errors().compose(t.errors()));
            composed[out.index()] += a.weight(s) * b.weight(t);
        }
    }

    let mut read = [0.0; 8];
    for s in DepBasisState::ALL {
        let mut flipped = s.errors();
        flipped.phase = !flipped.phase;
        let partner = DepBasisState::from_errors(flipped);
        read[s.index()] =
            eta * (eta * composed[s.index()] + (1.0 - eta) * composed[partner.index()]);
    }

    let mut out = [0.0; 8];
    for s in DepBasisState::ALL {
        let flip_a = s.errors().flip_a;
        let same_a: f64 = DepBasisState::ALL
            .iter()
            .filter(|t| t.errors().flip_a == flip_a)
            .map(|t| read[t.index()])
            .sum();
        out[s.index()] = p1 * read[s.index()] + (1.0 - p1) * same_a / 4.0;
    }
    PairEnsemble::from_weights(out)
}

/// A link of the chain in the representation its backend works with.
#[derive(Debug, Clone, PartialEq)]
pub enum Link {
    Ensemble(PairEnsemble),
    Exact(FullPairState),
}

impl Link {
    pub fn fidelity(&self) -> f64 {
        match self {
            Link::Ensemble(e) => e.fidelity(),
            Link::Exact(m) => m.fidelity(),
        }
    }

    fn ensemble(&self) -> Result<&PairEnsemble> {
        match self {
            Link::Ensemble(e) => Ok(e),
            Link::Exact(_) => Err(Error::InvalidChain("expected an ensemble link".into())),
        }
    }

    fn exact(&self) -> Result<&FullPairState> {
        match self {
            Link::Exact(m) => Ok(m),
            Link::Ensemble(_) => Err(Error::InvalidChain("expected an exact link".into())),
        }
    }
}

/// How a chain evaluates its elementary operations.
pub trait ChainBackend: fmt::Debug {
    fn name(&self) -> &'static str;

    fn distribute(&self, f0: f64) -> Result<Link>;

    /// Outer pair after swapping at the node between `a` and `b`,
    /// twirled back to Werner form.
    fn swap(&self, a: &Link, b: &Link) -> Result<Link>;

    /// One purification round on two copies of `link`.
    fn purify(&self, link: &Link) -> Result<(Link, RoundResult)>;

    fn threshold(&self) -> Result<f64>;

    fn max_segments(&self) -> Option<usize> {
        None
    }
}

#[derive(Debug)]
pub struct ClosedForm {
    pub noise: NoiseParams,
    pub protocol: Box<dyn PurificationProtocol>,
}

impl ChainBackend for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn distribute(&self, f0: f64) -> Result<Link> {
        Ok(Link::Ensemble(make_werner(f0)?))
    }

    fn swap(&self, a: &Link, b: &Link) -> Result<Link> {
        Ok(Link::Ensemble(
            swap(a.ensemble()?, b.ensemble()?, self.noise)?.twirled(),
        ))
    }

    fn purify(&self, link: &Link) -> Result<(Link, RoundResult)> {
        let r = self.protocol.round(link.ensemble()?.fidelity())?;
        Ok((Link::Ensemble(make_werner(r.f_out)?), r))
    }

    fn threshold(&self) -> Result<f64> {
        cached_threshold(self.protocol.as_ref(), self.noise)
    }
}

/// Thresholds memoized by protocol name and noise; the dense-simulation
/// protocol needs a few hundred distillations per evaluation.
fn cached_threshold(protocol: &dyn PurificationProtocol, noise: NoiseParams) -> Result<f64> {
    type Key = (&'static str, u64, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, f64>>> = OnceLock::new();
    let key = (protocol.name(), noise.p1().to_bits(), noise.eta().to_bits());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&t) = cache.lock().expect("threshold cache").get(&key) {
        return Ok(t);
    }
    let t = threshold(protocol)?;
    cache.lock().expect("threshold cache").insert(key, t);
    Ok(t)
}

#[derive(Debug)]
pub struct Oracle {
    pub noise: NoiseParams,
}

impl ChainBackend for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn distribute(&self, f0: f64) -> Result<Link> {
        Ok(Link::Exact(embed(&make_werner(f0)?)?))
    }

    fn swap(&self, a: &Link, b: &Link) -> Result<Link> {
        let out = simulate_swap(a.exact()?, b.exact()?, self.noise)?;
        Ok(Link::Exact(out.state.twirled()?))
    }

    fn purify(&self, link: &Link) -> Result<(Link, RoundResult)> {
        let corrected = simulate_step1_noisy(link.exact()?, self.noise.p1())?.state;
        let out = simulate_distillation(&corrected, &corrected, self.noise)?;
        let result = RoundResult {
            f_out: out.state.fidelity().clamp(0.0, 1.0),
            p_succ: out.p_succ.min(1.0),
            pairs_consumed: 2,
        };
        Ok((Link::Exact(out.state.twirled()?), result))
    }

    /// Memoized per noise setting; each evaluation runs a few hundred
    /// dense distillations.
    fn threshold(&self) -> Result<f64> {
        cached_threshold(&OracleDep { noise: self.noise }, self.noise)
    }

    fn max_segments(&self) -> Option<usize> {
        Some(ORACLE_MAX_SEGMENTS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    ClosedForm,
    Oracle,
}

impl ChainMode {
    pub fn name(self) -> &'static str {
        match self {
            ChainMode::ClosedForm => "closed-form",
            ChainMode::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for ChainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" => Ok(ChainMode::ClosedForm),
            "oracle" => Ok(ChainMode::Oracle),
            other => Err(Error::UnknownName {
                kind: "chain mode",
                name: other.to_string(),
            }),
        }
    }
}

pub type BackendFactory = fn(&ChainConfig) -> Result<Box<dyn ChainBackend>>;

/// Chain backends by mode name.
pub struct BackendRegistry {
    factories: BTreeMap<&'static str, BackendFactory>,
}

impl BackendRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: BackendFactory) {
        self.factories.insert(name, factory);
    }

    pub fn create(&self, name: &str, cfg: &ChainConfig) -> Result<Box<dyn ChainBackend>> {
        let factory = self.factories.get(name).ok_or_else(|| Error::UnknownName {
            kind: "chain backend",
            name: name.to_string(),
        })?;
        factory(cfg)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }
}

impl Default for BackendRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        registry.register("closed-form", |cfg| {
            Ok(Box::new(ClosedForm {
                noise: cfg.noise,
                protocol: protocol(&cfg.protocol, cfg.noise)?,
            }))
        });
        registry.register("oracle", |cfg| Ok(Box::new(Oracle { noise: cfg.noise })));
        registry
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub segments: usize,
    pub f0: f64,
    pub rounds_per_level: usize,
    pub noise: NoiseParams,
    pub mode: ChainMode,
    /// Purification protocol used by the closed-form backend.
    pub protocol: String,
}

impl ChainConfig {
    pub fn new(segments: usize, f0: f64, rounds_per_level: usize, noise: NoiseParams) -> Self {
        Self {
            segments,
            f0,
            rounds_per_level,
            noise,
            mode: ChainMode::ClosedForm,
            protocol: "noisy-dep".to_string(),
        }
    }

    pub fn with_mode(mut self, mode: ChainMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_protocol(mut self, protocol: &str) -> Self {
        self.protocol = protocol.to_string();
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("f0", self.f0)?;
        if self.segments == 0 || !self.segments.is_power_of_two() {
            return Err(Error::InvalidChain(format!(
                "segment count {} is not a power of two",
                self.segments
            )));
        }
        if self.mode == ChainMode::Oracle && self.segments > ORACLE_MAX_SEGMENTS {
            return Err(Error::InvalidChain(format!(
                "oracle mode supports at most {ORACLE_MAX_SEGMENTS} segments, got {}",
                self.segments
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub final_fidelity: f64,
    pub per_level_fidelity: Vec<f64>,
    /// Expected elementary pairs per end-to-end pair.
    pub expected_cost: f64,
    pub levels: usize,
}

pub fn run_repeater(cfg: &ChainConfig) -> Result<ChainReport> {
    cfg.validate()?;
    let backend = BackendRegistry::default().create(cfg.mode.name(), cfg)?;
    run_with_backend(cfg, backend.as_ref())
}

pub fn run_with_backend(cfg: &ChainConfig, backend: &dyn ChainBackend) -> Result<ChainReport> {
    cfg.validate()?;
    if let Some(max) = backend.max_segments() {
        if cfg.segments > max {
            return Err(Error::InvalidChain(format!(
                "backend `{}` supports at most {max} segments",
                backend.name()
            )));
        }
    }
    let levels = cfg.segments.trailing_zeros() as usize;
    let threshold = if cfg.rounds_per_level > 0 && levels > 0 {
        Some(backend.threshold()?)
    } else {
        None
    };

    let mut link = backend.distribute(cfg.f0)?;
    let mut cost = 1.0;
    let mut per_level_fidelity = Vec::with_capacity(levels);
    for level in 1..=levels {
        link = backend.swap(&link, &link)?;
        cost *= 2.0;
        if let Some(threshold) = threshold {
            let fidelity = link.fidelity();
            if fidelity <= threshold {
                return Err(Error::ChainCollapse {
                    level,
                    fidelity,
                    threshold,
                });
            }
        }
        for _ in 0..cfg.rounds_per_level {
            let (next, round) = backend.purify(&link)?;
            cost *= f64::from(round.pairs_consumed) / round.p_succ;
            link = next;
        }
        per_level_fidelity.push(link.fidelity());
    }

    Ok(ChainReport {
        final_fidelity: link.fidelity(),
        per_level_fidelity,
        expected_cost: cost,
        levels,
    })
}

/// Fidelity after N − 1 successive swaps of Werner(f0) links, N = 1..=n_max,
/// with no purification.
pub fn decay_scan(n_max: usize, f0: f64, noise: NoiseParams) -> Result<Vec<(usize, f64)>> {
    if n_max < 2 {
        return Err(Error::InvalidChain(format!(
            "n_max = {n_max} must be at least 2"
        )));
    }
    let link = make_werner(f0)?;
    let mut chain = link;
    let mut series = vec![(1, chain.fidelity())];
    for n in 2..=n_max {
        chain = swap(&chain, &link, noise)?;
        series.push((n, chain.fidelity()));
    }
    Ok(series)
}

/// Limit of the decay series.
pub fn decay_fixed_point(f0: f64, noise: NoiseParams) -> Result<f64> {
    let link = make_werner(f0)?;
    let mut chain = link;
    for _ in 0..1_000_000 {
        let next = swap(&chain, &link, noise)?;
        if (next.fidelity() - chain.fidelity()).abs() < 1e-16 {
            return Ok(next.fidelity());
        }
        chain = next;
    }
    Ok(chain.fidelity())
}
