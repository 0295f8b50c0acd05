//! Channel-gain thresholds `phi_i^{pi, omega_i}`.
//!
//! User `i` decodes its own message under `(pi, omega_i)` exactly when
//! `rho * |h_i|^2 >= phi_i^{pi, omega_i}`, provided the pair is available.
//! Unavailable pairs can never succeed and are kept as a separate variant
//! so they never leak into arithmetic.

use crate::params::{Decision, ThresholdPair, User};
use crate::region::{available_orders, available_powers};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phi {
    Finite(f64),
    Unavailable,
}

impl Phi {
    pub fn finite(self) -> Option<f64> {
        match self {
            Phi::Finite(v) => Some(v),
            Phi::Unavailable => None,
        }
    }

    pub fn is_available(self) -> bool {
        matches!(self, Phi::Finite(_))
    }

    /// Whether a received SNR `rho * |h|^2` clears this threshold.
    pub fn is_met_by(self, snr: f64) -> bool {
        match self {
            Phi::Finite(v) => snr >= v,
            Phi::Unavailable => false,
        }
    }
}

/// The eight thresholds, indexed by (user, high-power user, first-decoded message).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiTable {
    entries: [[[Phi; 2]; 2]; 2],
}

/// Raw threshold expression, meaningful only when the pair is available.
fn raw_phi(user: User, high_power: User, first: User, t: &ThresholdPair, alpha: f64) -> f64 {
    let (g1, g2) = (t.gamma1(), t.gamma2());
    let a = alpha;
    let b = 1.0 - alpha;
    // Share of the transmit power on x1 / x2 under this allocation.
    let (s1, s2) = match high_power {
        User::One => (a, b),
        User::Two => (b, a),
    };
    // First stage decodes message `first` against the other as interference;
    // the second stage (if any) decodes the user's own message interference-free.
    match (user, first) {
        (User::One, User::One) => g1 / (s1 - s2 * g1),
        (User::One, User::Two) => f64::max(g2 / (s2 - s1 * g2), g1 / s1),
        (User::Two, User::Two) => g2 / (s2 - s1 * g2),
        (User::Two, User::One) => f64::max(g1 / (s1 - s2 * g1), g2 / s2),
    }
}

impl PhiTable {
    pub fn new(t: &ThresholdPair, alpha: f64) -> Self {
        let powers = available_powers(t, alpha);
        let mut entries = [[[Phi::Unavailable; 2]; 2]; 2];
        for pi in User::BOTH {
            if !powers.contains(pi) {
                continue;
            }
            let orders = available_orders(pi, t, alpha);
            for omega in orders.iter() {
                for user in User::BOTH {
                    entries[user.index()][pi.index()][omega.index()] =
                        Phi::Finite(raw_phi(user, pi, omega, t, alpha));
                }
            }
        }
        Self { entries }
    }

    pub fn get(&self, user: User, high_power: User, first: User) -> Phi {
        self.entries[user.index()][high_power.index()][first.index()]
    }

    /// Threshold user `user` faces under a full decision.
    pub fn for_decision(&self, user: User, d: &Decision) -> Phi {
        self.get(user, d.high_power, d.first_at(user))
    }

    /// Convenience accessor for a finite entry; `None` if unavailable.
    pub fn value(&self, user: User, high_power: User, first: User) -> Option<f64> {
        self.get(user, high_power, first).finite()
    }

    /// True when at least one entry is available (i.e. not in R0).
    pub fn any_available(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .flatten()
            .any(|p| p.is_available())
    }

    /// Smallest available threshold of `user` over all `(pi, omega)`.
    pub fn min_for(&self, user: User) -> Option<f64> {
        self.entries[user.index()]
            .iter()
            .flatten()
            .filter_map(|p| p.finite())
            .min_by(f64::total_cmp)
    }
}
