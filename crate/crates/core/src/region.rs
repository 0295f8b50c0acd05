//! Partitions of the threshold plane `gamma1 >= gamma2 > 0`.
//!
//! Two constants drive everything here: `hi = alpha / (1 - alpha)`, the
//! limiting SINR of the message carried on the high power share, and
//! `lo = (1 - alpha) / alpha`, the limit for the low share. Since
//! `alpha > 1/2` we always have `hi > 1 > lo`.
//!
//! All boundaries use the exact strict/non-strict comparisons of the region
//! definitions; there is no epsilon slack.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::params::{ThresholdPair, User};

/// Availability partition, determined by which decoding orders can succeed
/// at all for each power allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionR {
    R0,
    R1,
    R2,
    R3,
    R4,
    R5,
}

/// Partition used by the optimal strategies; `R0` is carried over unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionS {
    R0,
    S1,
    S2,
    S3,
}

/// Coding-gain partition: zero, finite and infinite gain over CSD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionG {
    G1,
    G2,
    G3,
}

macro_rules! impl_display_debug {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    )*};
}
impl_display_debug!(RegionR, RegionS, RegionG);

pub(crate) fn high_limit(alpha: f64) -> f64 {
    alpha / (1.0 - alpha)
}

pub(crate) fn low_limit(alpha: f64) -> f64 {
    (1.0 - alpha) / alpha
}

/// `(1-a) g1 / (a + (2a-1) g1)`: below this curve, decoding `x2` first beats
/// decoding `x1` first when user 1 holds the high power share.
pub fn order_switch_curve(gamma1: f64, alpha: f64) -> f64 {
    (1.0 - alpha) * gamma1 / (alpha + (2.0 * alpha - 1.0) * gamma1)
}

/// `(1-a) g1 / (1 - a + a g1)`: below this curve user 1 needs less gain under
/// `[1,2,*]` than under `[2,2,*]`.
pub fn power_switch_curve(gamma1: f64, alpha: f64) -> f64 {
    (1.0 - alpha) * gamma1 / (1.0 - alpha + alpha * gamma1)
}

pub fn classify_region_r(t: &ThresholdPair, alpha: f64) -> RegionR {
    debug_assert!(alpha > 0.5 && alpha < 1.0);
    let (g1, g2) = (t.gamma1(), t.gamma2());
    let hi = high_limit(alpha);
    let lo = low_limit(alpha);
    if g2 >= hi {
        RegionR::R0
    } else if g1 >= hi {
        if g2 < lo {
            RegionR::R3
        } else {
            RegionR::R5
        }
    } else if g1 < lo {
        RegionR::R1
    } else if g2 < lo {
        RegionR::R2
    } else {
        RegionR::R4
    }
}

pub fn classify_region_s(t: &ThresholdPair, alpha: f64) -> RegionS {
    if classify_region_r(t, alpha) == RegionR::R0 {
        return RegionS::R0;
    }
    let (g1, g2) = (t.gamma1(), t.gamma2());
    if g1 >= high_limit(alpha) - 1.0 {
        if g2 >= power_switch_curve(g1, alpha) {
            RegionS::S1
        } else {
            RegionS::S3
        }
    } else if g2 >= order_switch_curve(g1, alpha) {
        RegionS::S2
    } else {
        RegionS::S3
    }
}

pub fn classify_region_g(t: &ThresholdPair, alpha: f64) -> RegionG {
    match classify_region_r(t, alpha) {
        RegionR::R0 => RegionG::G1,
        RegionR::R3 | RegionR::R5 => RegionG::G3,
        RegionR::R1 | RegionR::R2 | RegionR::R4 => match classify_region_s(t, alpha) {
            RegionS::S2 => RegionG::G1,
            _ => RegionG::G2,
        },
    }
}

/// A subset of `{1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UserSet {
    one: bool,
    two: bool,
}

impl UserSet {
    pub const EMPTY: UserSet = UserSet {
        one: false,
        two: false,
    };

    pub fn from_flags(one: bool, two: bool) -> Self {
        Self { one, two }
    }

    pub fn contains(&self, user: User) -> bool {
        match user {
            User::One => self.one,
            User::Two => self.two,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.one && !self.two
    }

    pub fn iter(&self) -> impl Iterator<Item = User> + '_ {
        User::BOTH.into_iter().filter(move |u| self.contains(*u))
    }
}

impl fmt::Display for UserSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|u| u.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Limit of the first-stage SINR for decoding message `message` when
/// `high_power` holds the alpha share, as the received SNR grows without bound.
pub fn first_stage_limit(high_power: User, message: User, alpha: f64) -> f64 {
    if high_power == message {
        high_limit(alpha)
    } else {
        low_limit(alpha)
    }
}

/// `O(pi)`: decoding orders that can succeed for a high-power assignment.
///
/// Order `j` is available when the limiting first-stage SINR for `x_j`
/// strictly exceeds `gamma_j`. The result is the same for both users.
pub fn available_orders(high_power: User, t: &ThresholdPair, alpha: f64) -> UserSet {
    let ok = |m: User| first_stage_limit(high_power, m, alpha) > t.gamma(m);
    UserSet::from_flags(ok(User::One), ok(User::Two))
}

/// `P`: power assignments with at least one available decoding order.
pub fn available_powers(t: &ThresholdPair, alpha: f64) -> UserSet {
    UserSet::from_flags(
        !available_orders(User::One, t, alpha).is_empty(),
        !available_orders(User::Two, t, alpha).is_empty(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: f64 = 0.7;

    fn tp(g1: f64, g2: f64) -> ThresholdPair {
        ThresholdPair::new(g1, g2).unwrap()
    }

    #[test]
    fn region_r_examples() {
        assert_eq!(classify_region_r(&tp(3.0, 2.4822), A), RegionR::R0);
        assert_eq!(classify_region_r(&tp(0.2, 0.1), A), RegionR::R1);
        assert_eq!(classify_region_r(&tp(2.0314, 0.3195), A), RegionR::R2);
        assert_eq!(classify_region_r(&tp(3.0, 0.3), A), RegionR::R3);
        assert_eq!(classify_region_r(&tp(1.0, 0.5), A), RegionR::R4);
        assert_eq!(classify_region_r(&tp(3.0, 0.5), A), RegionR::R5);
    }

    #[test]
    fn region_s_examples() {
        assert_eq!(classify_region_s(&tp(0.7411, 0.3195), A), RegionS::S2);
        assert_eq!(classify_region_s(&tp(2.0314, 0.3195), A), RegionS::S3);
        assert_eq!(classify_region_s(&tp(2.0314, 1.2968), A), RegionS::S1);
        assert_eq!(classify_region_s(&tp(3.0, 2.4822), A), RegionS::R0);
    }

    #[test]
    fn region_g_examples() {
        assert_eq!(classify_region_g(&tp(0.7411, 0.3195), A), RegionG::G1);
        assert_eq!(classify_region_g(&tp(2.0314, 1.2968), A), RegionG::G2);
        assert_eq!(classify_region_g(&tp(3.0, 2.2490), A), RegionG::G3);
        assert_eq!(classify_region_g(&tp(3.0, 2.4822), A), RegionG::G1);
    }

    #[test]
    fn boundaries_follow_the_inequality_direction() {
        let hi = high_limit(A);
        let lo = low_limit(A);
        // gamma2 == hi belongs to R0 (non-strict)
        assert_eq!(classify_region_r(&tp(hi, hi), A), RegionR::R0);
        // gamma1 == hi with a small gamma2 is R3
        assert_eq!(classify_region_r(&tp(hi, 0.1), A), RegionR::R3);
        // gamma1 == lo is not R1
        assert_eq!(classify_region_r(&tp(lo, 0.1), A), RegionR::R2);
        assert_eq!(classify_region_r(&tp(lo, lo), A), RegionR::R4);
    }

    #[test]
    fn available_sets_examples() {
        let both = UserSet::from_flags(true, true);
        let two = UserSet::from_flags(false, true);
        assert_eq!(available_orders(User::One, &tp(0.2, 0.1), A), both);
        assert_eq!(available_orders(User::Two, &tp(3.0, 0.3), A), two);
        assert!(available_orders(User::One, &tp(3.0, 2.4822), A).is_empty());

        assert!(available_powers(&tp(3.0, 2.4822), A).is_empty());
        assert_eq!(available_powers(&tp(0.2, 0.1), A), both);
        assert_eq!(available_powers(&tp(3.0, 0.5), A), two);
        assert_eq!(two.to_string(), "{2}");
    }

    /// Rows of the O(pi) table keyed by R region.
    #[test]
    fn available_orders_match_table() {
        let one = UserSet::from_flags(true, false);
        let two = UserSet::from_flags(false, true);
        let both = UserSet::from_flags(true, true);
        let cases = [
            (tp(3.0, 2.4822), UserSet::EMPTY, UserSet::EMPTY),
            (tp(0.2, 0.1), both, both),
            (tp(2.0314, 0.3195), both, two),
            (tp(3.0, 0.3), two, two),
            (tp(1.0, 0.5), one, two),
            (tp(3.0, 0.5), UserSet::EMPTY, two),
        ];
        for (t, o1, o2) in cases {
            assert_eq!(available_orders(User::One, &t, A), o1, "{t:?}");
            assert_eq!(available_orders(User::Two, &t, A), o2, "{t:?}");
        }
    }
}
