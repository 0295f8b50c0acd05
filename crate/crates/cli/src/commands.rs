use anyhow::Result;
use noma_core::analytics::{
    coding_gain, psys_asymptotic, psys_csd_asymptotic, psys_csd_exact, psys_exact,
    user_outage_exact, Gain,
};
use noma_core::montecarlo::{estimate_paired, Scenario};
use noma_core::region::{classify_region_g, classify_region_r, classify_region_s};
use noma_core::{StrategyId, SystemParams, ThresholdPair, User};

use crate::spec::{GainAxis, RunSpec};

/// Twelve significant digits in scientific notation.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

struct Csv {
    text: String,
}

impl Csv {
    fn new(spec: &RunSpec, header: &[&str]) -> Self {
        let mut text = format!("# spec={}\n", spec.canonical_json());
        text.push_str(&header.join(","));
        text.push('\n');
        Self { text }
    }

    fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for cell in cells {
            if !first {
                self.text.push(',');
            }
            self.text.push_str(cell.as_ref());
            first = false;
        }
        self.text.push('\n');
    }
}

/// Triangular grid `gamma1 >= gamma2` over the configured axis.
fn threshold_grid(spec: &RunSpec) -> Vec<ThresholdPair> {
    let axis = spec.gamma_axis();
    let mut out = Vec::with_capacity(axis.len() * (axis.len() + 1) / 2);
    for &g1 in &axis {
        for &g2 in axis.iter().take_while(|&&g2| g2 <= g1) {
            out.push(ThresholdPair::new(g1, g2).expect("grid values are positive and ordered"));
        }
    }
    out
}

pub fn run_regions(spec: &RunSpec) -> Result<String> {
    let mut csv = Csv::new(
        spec,
        &["gamma1", "gamma2", "region_R", "region_S", "region_G"],
    );
    for t in threshold_grid(spec) {
        let a = spec.alpha;
        csv.row([
            num(t.gamma1()),
            num(t.gamma2()),
            classify_region_r(&t, a).to_string(),
            classify_region_s(&t, a).to_string(),
            classify_region_g(&t, a).to_string(),
        ]);
    }
    Ok(csv.text)
}

fn exact_system(id: StrategyId, t: &ThresholdPair, p: &SystemParams) -> (Option<f64>, Option<f64>) {
    match id {
        StrategyId::Huf | StrategyId::Luf => (Some(psys_exact(t, p)), Some(psys_asymptotic(t, p))),
        StrategyId::Csd => (Some(psys_csd_exact(t, p)), Some(psys_csd_asymptotic(t, p))),
        _ => (None, None),
    }
}

fn sorted(strategies: &[StrategyId]) -> Vec<StrategyId> {
    let mut s = strategies.to_vec();
    s.sort();
    s
}

pub fn run_sweep(spec: &RunSpec, relabeled: bool) -> Result<String> {
    let header = [
        "snr_db",
        "strategy",
        "p_sys_mc",
        "stderr",
        "p_sys_exact",
        "p_sys_asym",
        "relabeled",
    ];
    let mut csv = Csv::new(spec, &header);
    let strategies = sorted(&spec.strategies);
    if strategies.is_empty() {
        return Ok(csv.text);
    }
    let t = spec.thresholds()?;
    let geom = spec.geometry()?;
    for snr in spec.snr_grid_db() {
        let p = SystemParams::from_geometry(spec.alpha, snr, &geom)?;
        let scenario = Scenario::new(p, t, Some(geom));
        let estimates = estimate_paired(&scenario, &strategies, spec.trials, spec.seed)?;
        for (&id, e) in strategies.iter().zip(&estimates) {
            let (exact, asym) = exact_system(id, &t, &p);
            csv.row([
                num(snr),
                id.to_string(),
                num(e.p_sys_hat),
                num(e.stderr_sys),
                opt(exact),
                opt(asym),
                (relabeled as u8).to_string(),
            ]);
        }
    }
    Ok(csv.text)
}

pub fn run_user_outage(spec: &RunSpec, relabeled: bool) -> Result<String> {
    let header = [
        "snr_db",
        "strategy",
        "user",
        "input_user",
        "p_mc",
        "stderr",
        "p_exact",
        "p_es",
    ];
    let mut csv = Csv::new(spec, &header);
    let strategies = sorted(&spec.strategies);
    if strategies.is_empty() {
        return Ok(csv.text);
    }
    // the oracle always runs on the same stream, whether or not it is listed
    let mut simulated = strategies.clone();
    if !simulated.contains(&StrategyId::Es) {
        simulated.push(StrategyId::Es);
    }
    let t = spec.thresholds()?;
    let geom = spec.geometry()?;
    for snr in spec.snr_grid_db() {
        let p = SystemParams::from_geometry(spec.alpha, snr, &geom)?;
        let scenario = Scenario::new(p, t, Some(geom));
        let estimates = estimate_paired(&scenario, &simulated, spec.trials, spec.seed)?;
        let es = estimates[simulated.iter().position(|&s| s == StrategyId::Es).unwrap()];
        let exact = user_outage_exact(&t, &p);
        for (&id, e) in strategies.iter().zip(&estimates) {
            for user in User::BOTH {
                let i = user.index();
                let p_exact = match id {
                    StrategyId::Huf => Some(exact.huf[i]),
                    StrategyId::Luf => Some(exact.luf[i]),
                    _ => None,
                };
                let input_user = if relabeled { user.other() } else { user };
                let (p_mc, se) = e.user(user);
                csv.row([
                    num(snr),
                    id.to_string(),
                    user.to_string(),
                    input_user.to_string(),
                    num(p_mc),
                    num(se),
                    opt(p_exact),
                    num(es.user(user).0),
                ]);
            }
        }
    }
    Ok(csv.text)
}

fn gain_cells(t: &ThresholdPair, p: &SystemParams) -> [String; 3] {
    let g = coding_gain(t, p);
    let (tag, theta) = match g.value {
        Gain::Zero => ("Zero", None),
        Gain::Finite(v) => ("Finite", Some(v)),
        Gain::Infinite => ("Infinite", None),
    };
    [g.region.to_string(), tag.to_string(), opt(theta)]
}

pub fn run_gain(spec: &RunSpec, relabeled: bool) -> Result<String> {
    match spec.gain_axis {
        GainAxis::Gamma => {
            let mut csv = Csv::new(spec, &["gamma1", "gamma2", "region_G", "tag", "theta_db"]);
            let geom = spec.geometry()?;
            // the gain is a high-SNR limit, so the SNR used here is immaterial
            let p = SystemParams::from_geometry(spec.alpha, 0.0, &geom)?;
            for t in threshold_grid(spec) {
                let [region, tag, theta] = gain_cells(&t, &p);
                csv.row([num(t.gamma1()), num(t.gamma2()), region, tag, theta]);
            }
            Ok(csv.text)
        }
        GainAxis::Distance => {
            let header = ["d1", "d2", "region_G", "tag", "theta_db", "relabeled"];
            let mut csv = Csv::new(spec, &header);
            let t = spec.thresholds()?;
            let axis = spec.distance_axis();
            for &d1 in &axis {
                for &d2 in &axis {
                    let mut s = spec.clone();
                    s.d1 = d1;
                    s.d2 = d2;
                    let p = SystemParams::from_geometry(spec.alpha, 0.0, &s.geometry()?)?;
                    let [region, tag, theta] = gain_cells(&t, &p);
                    csv.row([
                        num(d1),
                        num(d2),
                        region,
                        tag,
                        theta,
                        (relabeled as u8).to_string(),
                    ]);
                }
            }
            Ok(csv.text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Command;

    #[test]
    fn number_format_has_twelve_significant_digits() {
        assert_eq!(num(0.1), "1.00000000000e-1");
        assert_eq!(num(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(num(0.0), "0.00000000000e0");
        assert_eq!(opt(None), "");
    }

    #[test]
    fn grid_is_triangular() {
        let mut spec = RunSpec::defaults(Command::Regions);
        spec.grid_points = 7;
        assert_eq!(threshold_grid(&spec).len(), 28);
    }
}
