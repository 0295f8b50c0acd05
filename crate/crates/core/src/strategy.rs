//! PA-DOS decision rules and the per-block success tests they are judged by.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Decision, Geometry, SystemParams, ThresholdPair, User};
use crate::phi::PhiTable;
use crate::region::{classify_region_s, RegionS};

/// Instantaneous channel gains `|h1|^2`, `|h2|^2` of one fading block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub h1sq: f64,
    pub h2sq: f64,
}

impl ChannelDraw {
    pub fn new(h1sq: f64, h2sq: f64) -> Result<Self> {
        if !(h1sq >= 0.0 && h2sq >= 0.0) {
            return Err(Error::invalid(format!(
                "channel gains must be >= 0, got ({h1sq}, {h2sq})"
            )));
        }
        Ok(Self { h1sq, h2sq })
    }

    pub fn gain(&self, user: User) -> f64 {
        match user {
            User::One => self.h1sq,
            User::Two => self.h2sq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StrategyId {
    /// High-rate user first.
    Huf,
    /// Low-rate user first.
    Luf,
    /// Channel state determined: `[2,2,2]` iff `|h2|^2 <= |h1|^2`.
    Csd,
    /// Channel mean determined: `[2,2,2]` iff `eta2 <= eta1`.
    Cmd,
    /// Distance determined: `[2,2,2]` iff `d2 >= d1`.
    Dd,
    /// Service priority determined: always `[2,2,2]`.
    Spd,
    /// Exhaustive search over all eight decisions (an oracle, not a rule).
    Es,
}

impl StrategyId {
    pub const ALL: [StrategyId; 7] = [
        StrategyId::Huf,
        StrategyId::Luf,
        StrategyId::Csd,
        StrategyId::Cmd,
        StrategyId::Dd,
        StrategyId::Spd,
        StrategyId::Es,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyId::Huf => "HUF",
            StrategyId::Luf => "LUF",
            StrategyId::Csd => "CSD",
            StrategyId::Cmd => "CMD",
            StrategyId::Dd => "DD",
            StrategyId::Spd => "SPD",
            StrategyId::Es => "ES",
        }
    }

    pub fn is_baseline(self) -> bool {
        matches!(
            self,
            StrategyId::Csd | StrategyId::Cmd | StrategyId::Dd | StrategyId::Spd
        )
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown strategy '{s}'")))
    }
}

/// The single comparison bit HUF or LUF is allowed to observe per block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeedbackBit(pub bool);

impl FeedbackBit {
    /// HUF: user 1 reports whether `rho |h1|^2 >= phi_1^{2,2}`.
    pub fn huf(ch: &ChannelDraw, rho: f64, phis: &PhiTable) -> Self {
        let bit = phis
            .get(User::One, User::Two, User::Two)
            .is_met_by(rho * ch.h1sq);
        FeedbackBit(bit)
    }

    /// LUF: user 2 reports whether `rho |h2|^2` is below `phi_2^{1,1}` (S2)
    /// or `phi_2^{1,2}` (S3). The bit is unused elsewhere and reported false.
    pub fn luf(region: RegionS, ch: &ChannelDraw, rho: f64, phis: &PhiTable) -> Self {
        let first = match region {
            RegionS::S2 => User::One,
            RegionS::S3 => User::Two,
            RegionS::S1 | RegionS::R0 => return FeedbackBit(false),
        };
        let bit = match phis.value(User::Two, User::One, first) {
            Some(phi) => rho * ch.h2sq < phi,
            None => false,
        };
        FeedbackBit(bit)
    }
}

fn region_rule(region: RegionS, prefer_two: bool) -> Result<Decision> {
    match region {
        RegionS::R0 => Err(Error::InevitableOutage),
        RegionS::S1 => Ok(Decision::FAVOR_TWO),
        RegionS::S2 if prefer_two => Ok(Decision::FAVOR_TWO),
        RegionS::S2 => Ok(Decision::FAVOR_ONE),
        RegionS::S3 if prefer_two => Ok(Decision::FAVOR_TWO),
        RegionS::S3 => Ok(Decision::FAVOR_ONE_DECODE_TWO),
    }
}

/// High-rate-user-first rule. The only channel information used is `bit`.
pub fn decide_huf(region: RegionS, bit: FeedbackBit) -> Result<Decision> {
    region_rule(region, bit.0)
}

/// Low-rate-user-first rule. The only channel information used is `bit`.
pub fn decide_luf(region: RegionS, bit: FeedbackBit) -> Result<Decision> {
    region_rule(region, bit.0)
}

/// CSD, CMD, DD and SPD: each picks `[2,2,2]` when its criterion holds and
/// `[1,1,1]` otherwise, without regard to availability.
pub fn decide_baseline(
    id: StrategyId,
    ch: &ChannelDraw,
    params: &SystemParams,
    geom: Option<&Geometry>,
) -> Result<Decision> {
    let favor_two = match id {
        StrategyId::Csd => ch.h2sq <= ch.h1sq,
        StrategyId::Cmd => params.eta2() <= params.eta1(),
        StrategyId::Dd => {
            let g = geom.ok_or_else(|| Error::MissingGeometry(id.to_string()))?;
            g.d2 >= g.d1
        }
        StrategyId::Spd => true,
        other => return Err(Error::NotABaseline(other.to_string())),
    };
    Ok(if favor_two {
        Decision::FAVOR_TWO
    } else {
        Decision::FAVOR_ONE
    })
}

/// `Phi^{pi,omega1,omega2}`: the smaller of the two users' margins
/// `rho |h_i|^2 / phi_i`, or zero when either threshold is unavailable.
/// The system is in outage under `decision` exactly when this is below one.
pub fn phi_ratio(decision: &Decision, ch: &ChannelDraw, rho: f64, phis: &PhiTable) -> f64 {
    let margin = |u: User| {
        phis.for_decision(u, decision)
            .finite()
            .map(|phi| rho * ch.gain(u) / phi)
    };
    match (margin(User::One), margin(User::Two)) {
        (Some(m1), Some(m2)) => m1.min(m2),
        _ => 0.0,
    }
}

/// `h1/h2 < threshold`, with `h1/h2` read as `+inf` when `h2 == 0`.
fn gain_ratio_below(ch: &ChannelDraw, threshold: f64) -> bool {
    if ch.h2sq == 0.0 {
        false
    } else {
        ch.h1sq / ch.h2sq < threshold
    }
}

/// Closed-form maximiser of `Phi` over all eight decisions.
///
/// Returns `[1,1,1]` in S2 and `[1,2,2]` in S3 when user 1's channel is weak
/// relative to user 2's, and `[2,2,2]` otherwise. In R0 every decision scores
/// zero and `[2,2,2]` is returned.
pub fn max_phi_decision(
    ch: &ChannelDraw,
    t: &ThresholdPair,
    alpha: f64,
    rho: f64,
    phis: &PhiTable,
) -> (Decision, f64) {
    use User::{One, Two};
    let decision = match classify_region_s(t, alpha) {
        RegionS::R0 => return (Decision::FAVOR_TWO, 0.0),
        RegionS::S2 => {
            let ratio = phis.value(One, Two, Two).zip(phis.value(Two, One, One));
            match ratio {
                Some((p1, p2)) if gain_ratio_below(ch, p1 / p2) => Decision::FAVOR_ONE,
                _ => Decision::FAVOR_TWO,
            }
        }
        RegionS::S3 => {
            let ratio = phis.value(One, Two, Two).zip(phis.value(Two, One, Two));
            match ratio {
                Some((p1, p2)) if gain_ratio_below(ch, p1 / p2) => Decision::FAVOR_ONE_DECODE_TWO,
                _ => Decision::FAVOR_TWO,
            }
        }
        RegionS::S1 => Decision::FAVOR_TWO,
    };
    (decision, phi_ratio(&decision, ch, rho, phis))
}

/// Whether `user` decodes its own message under `decision`.
pub fn decode_success(
    user: User,
    decision: &Decision,
    ch: &ChannelDraw,
    rho: f64,
    phis: &PhiTable,
) -> bool {
    phis.for_decision(user, decision)
        .is_met_by(rho * ch.gain(user))
}

/// Whether both users decode under `decision`.
pub fn system_success(decision: &Decision, ch: &ChannelDraw, rho: f64, phis: &PhiTable) -> bool {
    User::BOTH
        .into_iter()
        .all(|u| decode_success(u, decision, ch, rho, phis))
}

/// Exhaustive search: system outage iff no decision lets both users decode.
pub fn es_system_outage(ch: &ChannelDraw, rho: f64, phis: &PhiTable) -> bool {
    if !phis.any_available() {
        return true;
    }
    !Decision::ALL
        .iter()
        .any(|d| system_success(d, ch, rho, phis))
}

/// Exhaustive search for a single user: outage iff its gain misses every
/// available threshold.
pub fn es_user_outage(user: User, ch: &ChannelDraw, rho: f64, phis: &PhiTable) -> bool {
    match phis.min_for(user) {
        Some(phi) => rho * ch.gain(user) < phi,
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn draw(h1: f64, h2: f64) -> ChannelDraw {
        ChannelDraw::new(h1, h2).unwrap()
    }

    fn table(g1: f64, g2: f64) -> (ThresholdPair, PhiTable) {
        let t = ThresholdPair::new(g1, g2).unwrap();
        (t, PhiTable::new(&t, 0.7))
    }

    #[test]
    fn huf_rules() {
        for bit in [true, false] {
            assert_eq!(
                decide_huf(RegionS::S1, FeedbackBit(bit)).unwrap(),
                Decision::FAVOR_TWO
            );
        }
        assert_eq!(
            decide_huf(RegionS::S2, FeedbackBit(false)).unwrap(),
            Decision::FAVOR_ONE
        );
        assert_eq!(
            decide_huf(RegionS::S2, FeedbackBit(true)).unwrap(),
            Decision::FAVOR_TWO
        );
        assert_eq!(
            decide_huf(RegionS::S3, FeedbackBit(false)).unwrap(),
            Decision::FAVOR_ONE_DECODE_TWO
        );
        assert!(matches!(
            decide_huf(RegionS::R0, FeedbackBit(true)),
            Err(Error::InevitableOutage)
        ));
    }

    #[test]
    fn luf_rules() {
        assert_eq!(
            decide_luf(RegionS::S1, FeedbackBit(false)).unwrap(),
            Decision::FAVOR_TWO
        );
        assert_eq!(
            decide_luf(RegionS::S2, FeedbackBit(true)).unwrap(),
            Decision::FAVOR_TWO
        );
        assert_eq!(
            decide_luf(RegionS::S3, FeedbackBit(false)).unwrap(),
            Decision::FAVOR_ONE_DECODE_TWO
        );
        assert!(decide_luf(RegionS::R0, FeedbackBit(false)).is_err());
    }

    #[test]
    fn baselines() {
        let p = SystemParams::new(0.7, 10.0, 0.2, 0.5).unwrap();
        let g = Geometry::new(40.0, 30.0, 10.0, 2.7).unwrap();
        let ch = draw(0.4, 0.1);
        assert_eq!(
            decide_baseline(StrategyId::Csd, &ch, &p, None).unwrap(),
            Decision::FAVOR_TWO
        );
        assert_eq!(
            decide_baseline(StrategyId::Csd, &draw(0.1, 0.4), &p, None).unwrap(),
            Decision::FAVOR_ONE
        );
        // ties go to [2,2,2]
        assert_eq!(
            decide_baseline(StrategyId::Csd, &draw(0.3, 0.3), &p, None).unwrap(),
            Decision::FAVOR_TWO
        );
        assert_eq!(
            decide_baseline(StrategyId::Dd, &ch, &p, Some(&g)).unwrap(),
            Decision::FAVOR_ONE
        );
        assert_eq!(
            decide_baseline(StrategyId::Cmd, &ch, &p, None).unwrap(),
            Decision::FAVOR_ONE
        );
        assert_eq!(
            decide_baseline(StrategyId::Spd, &ch, &p, None).unwrap(),
            Decision::FAVOR_TWO
        );
        assert!(matches!(
            decide_baseline(StrategyId::Dd, &ch, &p, None),
            Err(Error::MissingGeometry(_))
        ));
        assert!(matches!(
            decide_baseline(StrategyId::Huf, &ch, &p, None),
            Err(Error::NotABaseline(_))
        ));
    }

    #[test]
    fn phi_ratio_examples() {
        let (_, phis) = table(1.0, 0.5);
        let v = phi_ratio(&Decision::FAVOR_TWO, &draw(0.5, 0.2), 10.0, &phis);
        assert_relative_eq!(v, 1.5, max_relative = 1e-14);
        assert_eq!(
            phi_ratio(&Decision::FAVOR_TWO, &draw(0.0, 0.0), 10.0, &phis),
            0.0
        );
        // [2,1,*] is unavailable in R4
        let d = Decision::new(User::Two, User::One, User::Two);
        assert_eq!(phi_ratio(&d, &draw(100.0, 100.0), 10.0, &phis), 0.0);
    }

    #[test]
    fn max_phi_examples() {
        let (t, phis) = table(1.0, 0.5);
        let (d, _) = max_phi_decision(&draw(0.01, 10.0), &t, 0.7, 10.0, &phis);
        assert_eq!(d, Decision::FAVOR_ONE);
        let (d, _) = max_phi_decision(&draw(10.0, 0.01), &t, 0.7, 10.0, &phis);
        assert_eq!(d, Decision::FAVOR_TWO);
        // zero gain for user 2 selects the "otherwise" branch
        let (d, v) = max_phi_decision(&draw(1.0, 0.0), &t, 0.7, 10.0, &phis);
        assert_eq!((d, v), (Decision::FAVOR_TWO, 0.0));

        let (t0, phis0) = table(3.0, 2.4822);
        assert_eq!(
            max_phi_decision(&draw(5.0, 5.0), &t0, 0.7, 1e6, &phis0).1,
            0.0
        );
    }

    #[test]
    fn decode_success_examples() {
        let (_, phis) = table(1.0, 0.5);
        // 0.7 is not representable, so the stored threshold sits one ulp above 2.5;
        // the boundary itself must count as success
        let phi = phis.value(User::One, User::One, User::One).unwrap();
        assert_relative_eq!(phi, 2.5, max_relative = 1e-15);
        assert!(decode_success(
            User::One,
            &Decision::FAVOR_ONE,
            &draw(phi / 10.0, 0.0),
            10.0,
            &phis
        ));
        assert!(!decode_success(
            User::One,
            &Decision::FAVOR_ONE,
            &draw(0.2499, 0.0),
            10.0,
            &phis
        ));
        assert!(!decode_success(
            User::Two,
            &Decision::FAVOR_TWO,
            &draw(1.0, 0.0),
            10.0,
            &phis
        ));

        let (_, phis) = table(2.5, 0.1);
        for h in [0.0, 1.0, 1e12] {
            assert!(!decode_success(
                User::One,
                &Decision::FAVOR_ONE,
                &draw(h, h),
                10.0,
                &phis
            ));
        }
    }

    #[test]
    fn es_examples() {
        let (_, phis) = table(1.0, 0.5);
        assert!(es_system_outage(&draw(0.0, 0.0), 10.0, &phis));
        assert!(!es_system_outage(&draw(0.5, 0.2), 10.0, &phis));

        let (_, phis0) = table(3.0, 2.4822);
        assert!(es_system_outage(&draw(1e9, 1e9), 1e9, &phis0));
        assert!(es_user_outage(User::One, &draw(1e9, 1e9), 1e9, &phis0));
        assert!(es_user_outage(User::Two, &draw(1e9, 1e9), 1e9, &phis0));
    }

    #[test]
    fn es_user_outage_uses_the_region_minimum() {
        use User::{One, Two};
        // (1.6, 1.2) bits/s/Hz is in S1: user 1's best threshold is phi_1^{2,2}
        let t = ThresholdPair::from_rates(1.6, 1.2).unwrap();
        let phis = PhiTable::new(&t, 0.7);
        let phi = phis.value(One, Two, Two).unwrap();
        assert_eq!(phis.min_for(One), Some(phi));
        let rho = 10.0;
        assert!(es_user_outage(
            One,
            &draw(0.999 * phi / rho, 0.0),
            rho,
            &phis
        ));
        assert!(!es_user_outage(
            One,
            &draw(phi / rho * 1.001, 0.0),
            rho,
            &phis
        ));
        assert_eq!(phis.min_for(Two), phis.value(Two, Two, Two));
    }

    #[test]
    fn strategy_names_parse() {
        for id in StrategyId::ALL {
            assert_eq!(id.name().parse::<StrategyId>().unwrap(), id);
        }
        assert_eq!("spd".parse::<StrategyId>().unwrap(), StrategyId::Spd);
        assert!("XYZ".parse::<StrategyId>().is_err());
    }
}
