//! Seeded Monte Carlo estimation of system and user outage.
//!
//! Each transmission block `t` draws its two channel gains from a ChaCha8
//! stream keyed by `(seed, t)`: user 1 takes the first 64-bit word and user
//! 2 the second. A block's realization therefore does not depend on which
//! thread simulates it or in what order, and aggregation is an integer sum,
//! so estimates are bit-identical for any worker count.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Decision, Geometry, SystemParams, ThresholdPair, User};
use crate::phi::PhiTable;
use crate::region::{classify_region_s, RegionS};
use crate::strategy::{
    decide_baseline, decide_huf, decide_luf, decode_success, es_system_outage, es_user_outage,
    ChannelDraw, FeedbackBit, StrategyId,
};

const CHUNK: u64 = 1 << 14;

/// Uniform on `[0, 1)` with 53 bits of precision.
fn unit_interval<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Exponential variate with mean `eta` by inversion, `-eta ln(1 - u)`.
pub fn sample_gain<R: RngCore>(eta: f64, rng: &mut R) -> f64 {
    -eta * (-unit_interval(rng)).ln_1p()
}

/// Counter-keyed source of per-block channel realizations.
#[derive(Debug, Clone)]
pub struct GainStream {
    base: ChaCha8Rng,
}

impl GainStream {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Generator positioned at the start of block `trial`'s stream.
    pub fn block_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(trial);
        rng
    }

    pub fn draw(&self, trial: u64, eta1: f64, eta2: f64) -> ChannelDraw {
        let mut rng = self.block_rng(trial);
        let h1sq = sample_gain(eta1, &mut rng);
        let h2sq = sample_gain(eta2, &mut rng);
        ChannelDraw { h1sq, h2sq }
    }
}

/// Outage indicators of one block; `true` means outage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlockOutcome {
    pub system: bool,
    pub user1: bool,
    pub user2: bool,
}

impl BlockOutcome {
    pub const ALL_OUT: BlockOutcome = BlockOutcome {
        system: true,
        user1: true,
        user2: true,
    };

    pub fn user(&self, user: User) -> bool {
        match user {
            User::One => self.user1,
            User::Two => self.user2,
        }
    }
}

/// Everything per-block evaluation needs, precomputed once per operating point.
#[derive(Debug, Clone)]
pub struct Scenario {
    params: SystemParams,
    thresholds: ThresholdPair,
    geometry: Option<Geometry>,
    region: RegionS,
    phis: PhiTable,
}

impl Scenario {
    pub fn new(
        params: SystemParams,
        thresholds: ThresholdPair,
        geometry: Option<Geometry>,
    ) -> Self {
        let region = classify_region_s(&thresholds, params.alpha());
        let phis = PhiTable::new(&thresholds, params.alpha());
        Self {
            params,
            thresholds,
            geometry,
            region,
            phis,
        }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn thresholds(&self) -> &ThresholdPair {
        &self.thresholds
    }

    pub fn region(&self) -> RegionS {
        self.region
    }

    pub fn phis(&self) -> &PhiTable {
        &self.phis
    }

    pub fn is_inevitable_outage(&self) -> bool {
        self.region == RegionS::R0
    }

    /// Checks that `strategy` can run here (DD needs distances).
    pub fn validate(&self, strategy: StrategyId) -> Result<()> {
        if strategy == StrategyId::Dd && self.geometry.is_none() {
            return Err(Error::MissingGeometry(strategy.to_string()));
        }
        Ok(())
    }

    /// Decision taken by `strategy` on this block. ES has no single decision
    /// and yields `None`, as does HUF/LUF in R0.
    pub fn decide(&self, strategy: StrategyId, ch: &ChannelDraw) -> Result<Option<Decision>> {
        let rho = self.params.rho();
        let decision = match strategy {
            StrategyId::Es => return Ok(None),
            StrategyId::Huf | StrategyId::Luf if self.is_inevitable_outage() => return Ok(None),
            StrategyId::Huf => decide_huf(self.region, FeedbackBit::huf(ch, rho, &self.phis))?,
            StrategyId::Luf => decide_luf(
                self.region,
                FeedbackBit::luf(self.region, ch, rho, &self.phis),
            )?,
            baseline => decide_baseline(baseline, ch, &self.params, self.geometry.as_ref())?,
        };
        Ok(Some(decision))
    }

    pub fn outcome(&self, strategy: StrategyId, ch: &ChannelDraw) -> Result<BlockOutcome> {
        let rho = self.params.rho();
        if strategy == StrategyId::Es {
            return Ok(BlockOutcome {
                system: es_system_outage(ch, rho, &self.phis),
                user1: es_user_outage(User::One, ch, rho, &self.phis),
                user2: es_user_outage(User::Two, ch, rho, &self.phis),
            });
        }
        let Some(decision) = self.decide(strategy, ch)? else {
            return Ok(BlockOutcome::ALL_OUT);
        };
        let ok1 = decode_success(User::One, &decision, ch, rho, &self.phis);
        let ok2 = decode_success(User::Two, &decision, ch, rho, &self.phis);
        Ok(BlockOutcome {
            system: !(ok1 && ok2),
            user1: !ok1,
            user2: !ok2,
        })
    }

    pub fn draw(&self, stream: &GainStream, trial: u64) -> ChannelDraw {
        stream.draw(trial, self.params.eta1(), self.params.eta2())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub strategy: StrategyId,
    pub params: SystemParams,
    pub thresholds: ThresholdPair,
    /// Needed only by the distance-determined baseline.
    pub geometry: Option<Geometry>,
}

/// Empirical outage frequencies with normal-approximation standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub p_sys_hat: f64,
    pub p_user1_hat: f64,
    pub p_user2_hat: f64,
    pub stderr_sys: f64,
    pub stderr_u1: f64,
    pub stderr_u2: f64,
    pub trials: u64,
}

impl OutageEstimate {
    fn from_counts(c: Counts, trials: u64) -> Self {
        let n = trials as f64;
        let p = |k: u64| k as f64 / n;
        let se = |k: u64| {
            let q = p(k);
            (q * (1.0 - q) / n).sqrt()
        };
        Self {
            p_sys_hat: p(c.system),
            p_user1_hat: p(c.user1),
            p_user2_hat: p(c.user2),
            stderr_sys: se(c.system),
            stderr_u1: se(c.user1),
            stderr_u2: se(c.user2),
            trials,
        }
    }

    /// Estimate for a deterministic all-outage case.
    pub fn certain_outage(trials: u64) -> Self {
        Self {
            p_sys_hat: 1.0,
            p_user1_hat: 1.0,
            p_user2_hat: 1.0,
            stderr_sys: 0.0,
            stderr_u1: 0.0,
            stderr_u2: 0.0,
            trials,
        }
    }

    pub fn user(&self, user: User) -> (f64, f64) {
        match user {
            User::One => (self.p_user1_hat, self.stderr_u1),
            User::Two => (self.p_user2_hat, self.stderr_u2),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    system: u64,
    user1: u64,
    user2: u64,
}

impl Counts {
    fn add(&mut self, o: BlockOutcome) {
        self.system += o.system as u64;
        self.user1 += o.user1 as u64;
        self.user2 += o.user2 as u64;
    }

    fn merge(mut self, other: Counts) -> Counts {
        self.system += other.system;
        self.user1 += other.user1;
        self.user2 += other.user2;
        self
    }
}

fn merge_all(a: Vec<Counts>, b: Vec<Counts>) -> Vec<Counts> {
    a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()
}

fn count_range(
    scenario: &Scenario,
    strategies: &[StrategyId],
    stream: &GainStream,
    range: std::ops::Range<u64>,
) -> Vec<Counts> {
    let mut counts = vec![Counts::default(); strategies.len()];
    for trial in range {
        let ch = scenario.draw(stream, trial);
        for (c, &s) in counts.iter_mut().zip(strategies) {
            // strategies were validated up front
            c.add(scenario.outcome(s, &ch).expect("validated strategy"));
        }
    }
    counts
}

#[cfg(feature = "parallel")]
fn count_all(
    scenario: &Scenario,
    strategies: &[StrategyId],
    stream: &GainStream,
    trials: u64,
) -> Vec<Counts> {
    use rayon::prelude::*;
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            count_range(
                scenario,
                strategies,
                stream,
                c * CHUNK..((c + 1) * CHUNK).min(trials),
            )
        })
        .reduce(|| vec![Counts::default(); strategies.len()], merge_all)
}

#[cfg(not(feature = "parallel"))]
fn count_all(
    scenario: &Scenario,
    strategies: &[StrategyId],
    stream: &GainStream,
    trials: u64,
) -> Vec<Counts> {
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .map(|c| {
            count_range(
                scenario,
                strategies,
                stream,
                c * CHUNK..((c + 1) * CHUNK).min(trials),
            )
        })
        .fold(vec![Counts::default(); strategies.len()], merge_all)
}

/// Runs several strategies on one shared realization stream.
///
/// Block `t` presents the same channel draw to every strategy, so the
/// estimates are paired. In R0 no sampling happens and every estimate is
/// exactly one.
pub fn estimate_paired(
    scenario: &Scenario,
    strategies: &[StrategyId],
    trials: u64,
    seed: u64,
) -> Result<Vec<OutageEstimate>> {
    if trials == 0 {
        return Err(Error::invalid("trial count must be at least 1"));
    }
    for &s in strategies {
        scenario.validate(s)?;
    }
    if scenario.is_inevitable_outage() {
        return Ok(vec![
            OutageEstimate::certain_outage(trials);
            strategies.len()
        ]);
    }
    let stream = GainStream::new(seed);
    let counts = count_all(scenario, strategies, &stream, trials);
    Ok(counts
        .into_iter()
        .map(|c| OutageEstimate::from_counts(c, trials))
        .collect())
}

pub fn estimate_outage(cfg: &SimConfig) -> Result<OutageEstimate> {
    let scenario = Scenario::new(cfg.params, cfg.thresholds, cfg.geometry);
    let mut est = estimate_paired(&scenario, &[cfg.strategy], cfg.trials, cfg.seed)?;
    Ok(est.remove(0))
}
