//! Validated system inputs and the PA-DOS decision triple.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// SINR threshold `2^rate - 1` for a target rate in bits/s/Hz.
pub fn sinr_threshold(rate: f64) -> Result<f64> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::invalid(format!(
            "rate must be finite and >= 0, got {rate}"
        )));
    }
    Ok(rate.exp2() - 1.0)
}

/// Mean channel gain `(1 + d/d0)^-nu` under the bounded path-loss model.
pub fn pathloss_mean(d: f64, d0: f64, nu: f64) -> Result<f64> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::invalid(format!("distance must be >= 0, got {d}")));
    }
    if !(d0.is_finite() && d0 > 0.0) {
        return Err(Error::invalid(format!(
            "reference distance must be > 0, got {d0}"
        )));
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::invalid(format!(
            "path-loss exponent must be > 0, got {nu}"
        )));
    }
    Ok((1.0 + d / d0).powf(-nu))
}

/// Converts a power ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Power coefficient, transmit SNR and channel-gain means.
///
/// Noise power is normalised to one, so `rho` is the transmit SNR in linear
/// scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    alpha: f64,
    rho: f64,
    eta1: f64,
    eta2: f64,
}

impl SystemParams {
    pub fn new(alpha: f64, rho: f64, eta1: f64, eta2: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::invalid(format!("SNR must be > 0, got {rho}")));
        }
        for (name, eta) in [("eta1", eta1), ("eta2", eta2)] {
            if !(eta.is_finite() && eta > 0.0) {
                return Err(Error::invalid(format!("{name} must be > 0, got {eta}")));
            }
        }
        Ok(Self {
            alpha,
            rho,
            eta1,
            eta2,
        })
    }

    /// Builds parameters from user distances and an SNR given in dB.
    pub fn from_geometry(alpha: f64, snr_db: f64, geom: &Geometry) -> Result<Self> {
        Self::new(alpha, db_to_linear(snr_db), geom.eta1()?, geom.eta2()?)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    pub fn eta(&self, user: User) -> f64 {
        match user {
            User::One => self.eta1,
            User::Two => self.eta2,
        }
    }

    /// Same system at a different linear SNR.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.alpha, rho, self.eta1, self.eta2)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "power coefficient must be in (1/2, 1), got {alpha}"
        )))
    }
}

/// User distances and the path-loss model constants, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub d1: f64,
    pub d2: f64,
    pub d0: f64,
    pub nu: f64,
}

impl Geometry {
    pub fn new(d1: f64, d2: f64, d0: f64, nu: f64) -> Result<Self> {
        let geom = Self { d1, d2, d0, nu };
        geom.eta1()?;
        geom.eta2()?;
        Ok(geom)
    }

    pub fn eta1(&self) -> Result<f64> {
        pathloss_mean(self.d1, self.d0, self.nu)
    }

    pub fn eta2(&self) -> Result<f64> {
        pathloss_mean(self.d2, self.d0, self.nu)
    }

    pub fn swapped(&self) -> Self {
        Self {
            d1: self.d2,
            d2: self.d1,
            ..*self
        }
    }
}

/// SINR thresholds `(gamma1, gamma2)` with `gamma1 >= gamma2 > 0`.
///
/// User 1 is always the high-rate user. Use [`ThresholdPair::from_rates_relabeled`]
/// when the caller's labelling may be the other way round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    gamma1: f64,
    gamma2: f64,
}

impl ThresholdPair {
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(gamma1.is_finite() && gamma2 > 0.0) {
            return Err(Error::invalid(format!(
                "thresholds must be finite and positive, got ({gamma1}, {gamma2})"
            )));
        }
        if gamma1 < gamma2 {
            return Err(Error::invalid(format!(
                "gamma1 must be >= gamma2 (relabel users first), got ({gamma1}, {gamma2})"
            )));
        }
        Ok(Self { gamma1, gamma2 })
    }

    /// Thresholds for target rates `r1 >= r2` in bits/s/Hz.
    pub fn from_rates(r1: f64, r2: f64) -> Result<Self> {
        Self::new(sinr_threshold(r1)?, sinr_threshold(r2)?)
    }

    /// Orders the two rates so the high-rate user comes first. The flag is
    /// true when the caller's users were swapped.
    pub fn from_rates_relabeled(r1: f64, r2: f64) -> Result<(Self, bool)> {
        if r1 >= r2 {
            Ok((Self::from_rates(r1, r2)?, false))
        } else {
            Ok((Self::from_rates(r2, r1)?, true))
        }
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma(&self, user: User) -> f64 {
        match user {
            User::One => self.gamma1,
            User::Two => self.gamma2,
        }
    }
}

/// Index of a user, or equivalently of the message intended for that user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

impl User {
    pub const BOTH: [User; 2] = [User::One, User::Two];

    pub fn index(self) -> usize {
        match self {
            User::One => 0,
            User::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(User::One),
            2 => Ok(User::Two),
            _ => Err(Error::invalid(format!(
                "user index must be 1 or 2, got {n}"
            ))),
        }
    }

    pub fn other(self) -> Self {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A joint PA-DOS decision `[pi, omega1, omega2]`.
///
/// `high_power` receives the `alpha` share of the transmit power; `first[i]`
/// is the message user `i+1` decodes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decision {
    pub high_power: User,
    pub first: [User; 2],
}

impl Decision {
    /// Every decision in `{1,2}^3`.
    pub const ALL: [Decision; 8] = {
        use User::{One, Two};
        [
            Decision::new(One, One, One),
            Decision::new(One, One, Two),
            Decision::new(One, Two, One),
            Decision::new(One, Two, Two),
            Decision::new(Two, One, One),
            Decision::new(Two, One, Two),
            Decision::new(Two, Two, One),
            Decision::new(Two, Two, Two),
        ]
    };

    /// `[1,1,1]`: high power to user 1, both users decode `x1` first.
    pub const FAVOR_ONE: Decision = Decision::new(User::One, User::One, User::One);
    /// `[1,2,2]`: high power to user 1, both users decode `x2` first.
    pub const FAVOR_ONE_DECODE_TWO: Decision = Decision::new(User::One, User::Two, User::Two);
    /// `[2,2,2]`: high power to user 2, both users decode `x2` first.
    pub const FAVOR_TWO: Decision = Decision::new(User::Two, User::Two, User::Two);

    pub const fn new(high_power: User, first1: User, first2: User) -> Self {
        Self {
            high_power,
            first: [first1, first2],
        }
    }

    pub fn from_triple(pi: u8, omega1: u8, omega2: u8) -> Result<Self> {
        Ok(Self::new(
            User::from_number(pi)?,
            User::from_number(omega1)?,
            User::from_number(omega2)?,
        ))
    }

    pub fn triple(&self) -> [u8; 3] {
        [
            self.high_power.number(),
            self.first[0].number(),
            self.first[1].number(),
        ]
    }

    pub fn first_at(&self, user: User) -> User {
        self.first[user.index()]
    }

    /// Power share of `user` as a fraction of the total transmit power.
    pub fn power_share(&self, user: User, alpha: f64) -> f64 {
        if self.high_power == user {
            alpha
        } else {
            1.0 - alpha
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, a, b] = self.triple();
        write!(f, "[{p},{a},{b}]")
    }
}
