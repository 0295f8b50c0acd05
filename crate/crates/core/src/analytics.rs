//! Closed-form and high-SNR outage probabilities under Rayleigh fading.
//!
//! Channel gains are exponential with means `eta1`, `eta2`, so
//! `P(rho |h_i|^2 >= phi) = exp(-phi / (rho eta_i))`. Every expression below
//! is a combination of such tail probabilities; they are evaluated through
//! `expm1` so that values of order `1/rho` keep full relative precision at
//! high SNR.

use serde::{Deserialize, Serialize};

use crate::params::{SystemParams, ThresholdPair, User};
use crate::phi::PhiTable;
use crate::region::{
    classify_region_g, classify_region_r, classify_region_s, RegionG, RegionR, RegionS,
};

use User::{One, Two};

/// One point of an outage-vs-SNR curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageCurvePoint {
    pub rho: f64,
    pub p_sys: f64,
    pub p_user1: f64,
    pub p_user2: f64,
}

/// Coding gain of the optimal strategies over CSD at high SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gain {
    Zero,
    /// Finite gain in dB.
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainResult {
    pub region: RegionG,
    pub value: Gain,
}

/// User outage probabilities `[user1, user2]` for both optimal strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserOutage {
    pub huf: [f64; 2],
    pub luf: [f64; 2],
}

/// `1 - e^-a - e^-b + e^-c`, rearranged as `-expm1(-a) + e^-b expm1(b - c)`.
fn four_term(a: f64, b: f64, c: f64) -> f64 {
    -(-a).exp_m1() + (-b).exp() * (b - c).exp_m1()
}

/// `1 - e^-x`.
fn one_minus_exp(x: f64) -> f64 {
    -(-x).exp_m1()
}

fn clamp01(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `chi(x, y, z) = 1 - e^{-x/rho} - e^{-(y+z)/rho} + e^{-(x+y)/rho}`.
pub fn chi(x: f64, y: f64, z: f64, rho: f64) -> f64 {
    four_term(x / rho, (y + z) / rho, (x + y) / rho)
}

/// Path-loss-weighted thresholds `phi_i^{pi,omega} / eta_i`.
struct Weighted<'a> {
    phis: &'a PhiTable,
    params: &'a SystemParams,
}

impl Weighted<'_> {
    /// Panics if the entry is unavailable; callers only ask for entries the
    /// region guarantees.
    fn get(&self, user: User, pi: User, omega: User) -> f64 {
        let phi = self
            .phis
            .value(user, pi, omega)
            .expect("threshold must be available in this region");
        phi / self.params.eta(user)
    }
}

fn setup<'a>(
    t: &ThresholdPair,
    params: &'a SystemParams,
    phis: &'a PhiTable,
) -> (RegionS, Weighted<'a>) {
    (
        classify_region_s(t, params.alpha()),
        Weighted { phis, params },
    )
}

/// Exact system outage of HUF (and LUF, which coincides).
pub fn psys_exact(t: &ThresholdPair, params: &SystemParams) -> f64 {
    let phis = PhiTable::new(t, params.alpha());
    let (region, w) = setup(t, params, &phis);
    let rho = params.rho();
    let p = match region {
        RegionS::R0 => 1.0,
        RegionS::S1 => one_minus_exp((w.get(One, Two, Two) + w.get(Two, Two, Two)) / rho),
        RegionS::S2 | RegionS::S3 => {
            // alternative decision: [1,1,1] in S2, [1,2,2] in S3
            let alt = if region == RegionS::S2 { One } else { Two };
            let both22 = (w.get(One, Two, Two) + w.get(Two, Two, Two)) / rho;
            let both_alt = (w.get(One, One, alt) + w.get(Two, One, alt)) / rho;
            let mixed = (w.get(One, Two, Two) + w.get(Two, One, alt)) / rho;
            four_term(both22, both_alt, mixed)
        }
    };
    clamp01(p)
}

/// First-order high-SNR approximation of [`psys_exact`], capped at one.
pub fn psys_asymptotic(t: &ThresholdPair, params: &SystemParams) -> f64 {
    let phis = PhiTable::new(t, params.alpha());
    let (region, w) = setup(t, params, &phis);
    let user1 = match region {
        RegionS::R0 => return 1.0,
        RegionS::S1 => w.get(One, Two, Two),
        RegionS::S2 => w.get(One, One, One),
        RegionS::S3 => w.get(One, One, Two),
    };
    ((user1 + w.get(Two, Two, Two)) / params.rho()).min(1.0)
}

/// Exact system outage of the channel-state-determined baseline.
pub fn psys_csd_exact(t: &ThresholdPair, params: &SystemParams) -> f64 {
    let phis = PhiTable::new(t, params.alpha());
    let (_, w) = setup(t, params, &phis);
    let rho = params.rho();
    let inv1 = 1.0 / params.eta1();
    let inv2 = 1.0 / params.eta2();
    let share1 = inv1 / (inv1 + inv2);
    let share2 = inv2 / (inv1 + inv2);
    let spread = (inv1 + inv2) / rho;
    let p = match classify_region_r(t, params.alpha()) {
        RegionR::R0 => 1.0,
        RegionR::R3 | RegionR::R5 => {
            let both22 = (w.get(One, Two, Two) + w.get(Two, Two, Two)) / rho;
            let phi1 = phis.value(One, Two, Two).expect("[2,2,2] available");
            one_minus_exp(both22) + share1 * (-phi1 * spread).exp()
        }
        RegionR::R1 | RegionR::R2 | RegionR::R4 => {
            let both22 = (w.get(One, Two, Two) + w.get(Two, Two, Two)) / rho;
            let both11 = (w.get(One, One, One) + w.get(Two, One, One)) / rho;
            let phi1 = phis.value(One, Two, Two).expect("[2,2,2] available");
            let phi2 = phis.value(Two, One, One).expect("[1,1,1] available");
            // 1 - e^-a - e^-b + s1 e^-u + s2 e^-v with s1 + s2 = 1
            one_minus_exp(both22)
                + one_minus_exp(both11)
                + share1 * (-phi1 * spread).exp_m1()
                + share2 * (-phi2 * spread).exp_m1()
        }
    };
    clamp01(p)
}

/// High-SNR approximation of [`psys_csd_exact`]; constant in R3 and R5.
pub fn psys_csd_asymptotic(t: &ThresholdPair, params: &SystemParams) -> f64 {
    let phis = PhiTable::new(t, params.alpha());
    let (_, w) = setup(t, params, &phis);
    match classify_region_r(t, params.alpha()) {
        RegionR::R0 => 1.0,
        RegionR::R3 | RegionR::R5 => {
            let inv1 = 1.0 / params.eta1();
            inv1 / (inv1 + 1.0 / params.eta2())
        }
        RegionR::R1 | RegionR::R2 | RegionR::R4 => {
            ((w.get(One, One, One) + w.get(Two, Two, Two)) / params.rho()).min(1.0)
        }
    }
}

/// Exact per-user outage of HUF and LUF.
pub fn user_outage_exact(t: &ThresholdPair, params: &SystemParams) -> UserOutage {
    let phis = PhiTable::new(t, params.alpha());
    let (region, w) = setup(t, params, &phis);
    let rho = params.rho();
    let single = |x: f64| clamp01(one_minus_exp(x / rho));
    let c = |a: [f64; 3]| clamp01(chi(a[0], a[1], a[2], rho));
    match region {
        RegionS::R0 => UserOutage {
            huf: [1.0; 2],
            luf: [1.0; 2],
        },
        RegionS::S1 => {
            let p = [single(w.get(One, Two, Two)), single(w.get(Two, Two, Two))];
            UserOutage { huf: p, luf: p }
        }
        RegionS::S2 | RegionS::S3 => {
            let alt = if region == RegionS::S2 { One } else { Two };
            // a1/a3 for HUF's user 2, a2/a4 for LUF's user 1
            let a_huf = [
                w.get(Two, One, alt),
                w.get(One, Two, Two),
                w.get(Two, Two, Two),
            ];
            let a_luf = [
                w.get(One, Two, Two),
                w.get(Two, One, alt),
                w.get(One, One, alt),
            ];
            UserOutage {
                huf: [single(w.get(One, One, alt)), c(a_huf)],
                luf: [c(a_luf), single(w.get(Two, Two, Two))],
            }
        }
    }
}

/// High-SNR user outage `[user1, user2]`; identical for HUF and LUF.
pub fn user_outage_asymptotic(t: &ThresholdPair, params: &SystemParams) -> [f64; 2] {
    let phis = PhiTable::new(t, params.alpha());
    let (region, w) = setup(t, params, &phis);
    let rho = params.rho();
    let user1 = match region {
        RegionS::R0 => return [1.0, 1.0],
        RegionS::S1 => w.get(One, Two, Two),
        RegionS::S2 => w.get(One, One, One),
        RegionS::S3 => w.get(One, One, Two),
    };
    [
        (user1 / rho).min(1.0),
        (w.get(Two, Two, Two) / rho).min(1.0),
    ]
}

/// High-SNR gain of HUF/LUF over CSD, `lim 10 log10(P_csd / P_huf)`.
///
/// Independent of the SNR stored in `params`.
pub fn coding_gain(t: &ThresholdPair, params: &SystemParams) -> GainResult {
    let region = classify_region_g(t, params.alpha());
    let value = match region {
        RegionG::G1 => Gain::Zero,
        RegionG::G3 => Gain::Infinite,
        RegionG::G2 => {
            let phis = PhiTable::new(t, params.alpha());
            let (s, w) = setup(t, params, &phis);
            let csd = w.get(One, One, One) + w.get(Two, Two, Two);
            let optimal_user1 = match s {
                RegionS::S3 => w.get(One, One, Two),
                _ => w.get(One, Two, Two),
            };
            let optimal = optimal_user1 + w.get(Two, Two, Two);
            Gain::Finite(10.0 * (csd / optimal).log10())
        }
    };
    GainResult { region, value }
}

/// Exact outage of HUF at one SNR, bundled for curve output.
pub fn huf_curve_point(t: &ThresholdPair, params: &SystemParams) -> OutageCurvePoint {
    let users = user_outage_exact(t, params);
    OutageCurvePoint {
        rho: params.rho(),
        p_sys: psys_exact(t, params),
        p_user1: users.huf[0],
        p_user2: users.huf[1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(rho: f64, eta1: f64, eta2: f64) -> SystemParams {
        SystemParams::new(0.7, rho, eta1, eta2).unwrap()
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(0.0, 0.0, 0.0, 3.0), 0.0);
        let x: f64 = 1.7;
        assert_relative_eq!(
            chi(x, 0.0, x, 4.0),
            1.0 - (-x / 4.0).exp(),
            max_relative = 1e-14
        );
        // mpmath, 30 digits
        assert_relative_eq!(
            chi(1.0, 2.0, 3.0, 10.0),
            0.229_450_142_933_124_87,
            max_relative = 1e-13
        );
    }

    #[test]
    fn four_term_matches_naive_form() {
        for (a, b, c) in [(0.1, 0.2, 0.25), (1.5, 0.3, 1.0), (3.0, 2.0, 4.0)] {
            let naive = 1.0 - f64::exp(-a) - f64::exp(-b) + f64::exp(-c);
            assert_relative_eq!(four_term(a, b, c), naive, max_relative = 1e-12);
        }
    }

    #[test]
    fn psys_examples() {
        let r0 = ThresholdPair::from_rates(2.0, 1.8).unwrap();
        assert_eq!(psys_exact(&r0, &params(1e3, 1.0, 1.0)), 1.0);
        assert_eq!(psys_asymptotic(&r0, &params(1e3, 1.0, 1.0)), 1.0);

        // S1, mpmath reference
        let s1 = ThresholdPair::from_rates(1.6, 1.2).unwrap();
        assert_relative_eq!(
            psys_exact(&s1, &params(10.0, 1.0, 1.0)),
            0.665_329_135_655_323_2,
            max_relative = 1e-12
        );
        assert!(psys_exact(&s1, &params(1e15, 1.0, 1.0)) < 1e-13);
    }

    #[test]
    fn asymptotic_scales_with_inverse_snr() {
        for rates in [(0.8, 0.4), (1.6, 0.4), (1.6, 1.2)] {
            let t = ThresholdPair::from_rates(rates.0, rates.1).unwrap();
            let a = psys_asymptotic(&t, &params(1e3, 0.02, 0.03));
            let b = psys_asymptotic(&t, &params(2e3, 0.02, 0.03));
            assert_relative_eq!(a, 2.0 * b, max_relative = 1e-14);
        }
    }

    #[test]
    fn asymptotic_s_rows() {
        let t = ThresholdPair::from_rates(0.8, 0.4).unwrap();
        let phis = PhiTable::new(&t, 0.7);
        let p = params(100.0, 0.5, 0.25);
        let expect = (phis.value(One, One, One).unwrap() / 0.5
            + phis.value(Two, Two, Two).unwrap() / 0.25)
            / 100.0;
        assert_relative_eq!(psys_asymptotic(&t, &p), expect, max_relative = 1e-14);
    }

    #[test]
    fn csd_branches() {
        let r0 = ThresholdPair::from_rates(2.0, 1.8).unwrap();
        assert_eq!(psys_csd_exact(&r0, &params(10.0, 1.0, 1.0)), 1.0);
        assert_eq!(psys_csd_asymptotic(&r0, &params(10.0, 1.0, 1.0)), 1.0);

        let eta1 = 5f64.powf(-2.7);
        let eta2 = 4f64.powf(-2.7);
        let r5 = ThresholdPair::from_rates(2.0, 1.7).unwrap();
        // mpmath: 5^2.7 / (5^2.7 + 4^2.7)
        let floor = 0.646_225_220_852_506_9;
        assert_relative_eq!(
            psys_csd_asymptotic(&r5, &params(1e3, eta1, eta2)),
            floor,
            max_relative = 1e-13
        );
        assert_eq!(
            psys_csd_asymptotic(&r5, &params(1e3, eta1, eta2)),
            psys_csd_asymptotic(&r5, &params(1e9, eta1, eta2))
        );
        assert_relative_eq!(
            psys_csd_exact(&r5, &params(1e12, eta1, eta2)),
            floor,
            max_relative = 1e-6
        );

        let s2 = ThresholdPair::from_rates(0.8, 0.4).unwrap();
        let phis = PhiTable::new(&s2, 0.7);
        let p = params(1e4, eta1, eta2);
        let expect = (phis.value(One, One, One).unwrap() / eta1
            + phis.value(Two, Two, Two).unwrap() / eta2)
            / 1e4;
        assert_relative_eq!(psys_csd_asymptotic(&s2, &p), expect, max_relative = 1e-14);
    }

    #[test]
    fn user_outage_examples() {
        let r0 = ThresholdPair::from_rates(2.0, 1.8).unwrap();
        let u = user_outage_exact(&r0, &params(10.0, 1.0, 1.0));
        assert_eq!(
            u,
            UserOutage {
                huf: [1.0; 2],
                luf: [1.0; 2]
            }
        );
        assert_eq!(
            user_outage_asymptotic(&r0, &params(10.0, 1.0, 1.0)),
            [1.0, 1.0]
        );

        let s2 = ThresholdPair::from_rates(0.8, 0.4).unwrap();
        let phis = PhiTable::new(&s2, 0.7);
        let p = params(50.0, 0.3, 0.6);
        let u = user_outage_exact(&s2, &p);
        let phi111 = phis.value(One, One, One).unwrap();
        assert_relative_eq!(
            u.huf[0],
            1.0 - (-phi111 / (50.0 * 0.3)).exp(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            user_outage_asymptotic(&s2, &p)[0],
            phi111 / (50.0 * 0.3),
            max_relative = 1e-14
        );

        let s3 = ThresholdPair::from_rates(1.6, 0.4).unwrap();
        let phis = PhiTable::new(&s3, 0.7);
        let u = user_outage_exact(&s3, &p);
        let phi222 = phis.value(Two, Two, Two).unwrap();
        assert_relative_eq!(
            u.luf[1],
            1.0 - (-phi222 / (50.0 * 0.6)).exp(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            user_outage_asymptotic(&s3, &p)[1],
            phi222 / (50.0 * 0.6),
            max_relative = 1e-14
        );
    }

    #[test]
    fn coding_gain_examples() {
        let p = params(1.0, 5f64.powf(-2.7), 4f64.powf(-2.7));
        let s2 = ThresholdPair::from_rates(0.8, 0.4).unwrap();
        assert_eq!(coding_gain(&s2, &p).value, Gain::Zero);
        let g3 = ThresholdPair::from_rates(2.0, 1.7).unwrap();
        assert_eq!(coding_gain(&g3, &p).value, Gain::Infinite);
        // mpmath reference for (1.6, 1.2) bits/s/Hz, d1 = 40 m, d2 = 30 m
        let s1 = ThresholdPair::from_rates(1.6, 1.2).unwrap();
        match coding_gain(&s1, &p).value {
            Gain::Finite(theta) => {
                assert_relative_eq!(theta, 4.359_805_681_518_543, max_relative = 1e-12)
            }
            other => panic!("expected finite gain, got {other:?}"),
        }
        // on the diagonal part of the left boundary the gain vanishes
        let g = 1.5;
        let t = ThresholdPair::new(g, g).unwrap();
        assert_eq!(coding_gain(&t, &p).value, Gain::Finite(0.0));
    }
}
