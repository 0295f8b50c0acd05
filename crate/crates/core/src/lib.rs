//! Outage-optimal joint power allocation and decoding order selection
//! (PA-DOS) for a two-user downlink NOMA link with fixed power coefficients.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`] holds the validated inputs: power coefficient, SNR, channel
//!   means, distances and the SINR thresholds derived from target rates.
//! * [`region`] classifies a threshold pair into the `R`, `S` and `G`
//!   partitions and computes the available power/decoding-order sets.
//! * [`phi`] builds the table of per-user channel-gain thresholds.
//! * [`strategy`] implements the HUF/LUF rules, the CSD/CMD/DD/SPD
//!   baselines and the exhaustive-search oracles.
//! * [`analytics`] evaluates closed-form and high-SNR outage expressions and
//!   the coding gain over CSD.
//! * [`montecarlo`] draws Rayleigh block-fading realizations from a
//!   counter-keyed generator and estimates outage probabilities.
//!
//! Everything is a pure function of its arguments; the Monte Carlo engine
//! produces bit-identical results regardless of thread count.

pub mod analytics;
pub mod error;
pub mod montecarlo;
pub mod params;
pub mod phi;
pub mod region;
pub mod strategy;

pub use error::{Error, Result};
pub use params::{Decision, Geometry, SystemParams, ThresholdPair, User};
pub use phi::{Phi, PhiTable};
pub use region::{RegionG, RegionR, RegionS};
pub use strategy::{ChannelDraw, StrategyId};
