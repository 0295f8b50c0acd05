//! Run specification: defaults, config file and command-line overrides.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use noma_core::{Geometry, StrategyId, ThresholdPair};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Regions,
    Sweep,
    UserOutage,
    Gain,
}

/// Axes of the coding-gain surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GainAxis {
    /// Thresholds `(gamma1, gamma2)` on the same triangular grid as `regions`.
    Gamma,
    /// Distances `(d1, d2)` with the rates held fixed.
    Distance,
}

/// Everything one invocation depends on. Serialized into the output header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub command: Command,
    pub alpha: f64,
    pub r1: f64,
    pub r2: f64,
    pub d1: f64,
    pub d2: f64,
    pub d0: f64,
    pub nu: f64,
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub trials: u64,
    pub seed: u64,
    pub strategies: Vec<StrategyId>,
    pub grid_points: usize,
    pub gamma_max: f64,
    pub gain_axis: GainAxis,
    pub d_min: f64,
    pub d_max: f64,
}

impl RunSpec {
    pub fn defaults(command: Command) -> Self {
        Self {
            command,
            alpha: 0.7,
            r1: 1.6,
            r2: 1.2,
            d1: 40.0,
            d2: 40.0,
            d0: 10.0,
            nu: 2.7,
            snr_start_db: 0.0,
            snr_stop_db: 40.0,
            snr_step_db: 5.0,
            trials: 100_000,
            seed: 1,
            strategies: StrategyId::ALL.to_vec(),
            grid_points: 60,
            gamma_max: 4.0,
            gain_axis: GainAxis::Gamma,
            d_min: 10.0,
            d_max: 100.0,
        }
    }

    /// Single-line JSON with keys in sorted order.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("run spec serializes");
        serde_json::to_string(&value).expect("json value serializes")
    }

    pub fn snr_grid_db(&self) -> Vec<f64> {
        let span = self.snr_stop_db - self.snr_start_db;
        let n = (span / self.snr_step_db + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|k| self.snr_start_db + k as f64 * self.snr_step_db)
            .collect()
    }

    /// `k * gamma_max / n` for `k = 1..=n`.
    pub fn gamma_axis(&self) -> Vec<f64> {
        let n = self.grid_points;
        (1..=n)
            .map(|k| k as f64 * self.gamma_max / n as f64)
            .collect()
    }

    /// `n` evenly spaced distances from `d_min` to `d_max` inclusive.
    pub fn distance_axis(&self) -> Vec<f64> {
        let n = self.grid_points;
        if n == 1 {
            return vec![self.d_min];
        }
        let step = (self.d_max - self.d_min) / (n - 1) as f64;
        (0..n).map(|k| self.d_min + k as f64 * step).collect()
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.alpha > 0.5 && self.alpha < 1.0,
            "--alpha must lie in (0.5, 1), got {}",
            self.alpha
        );
        ensure!(
            self.r1 > 0.0 && self.r2 > 0.0,
            "rates must be positive, got ({}, {})",
            self.r1,
            self.r2
        );
        ensure!(
            self.snr_step_db > 0.0,
            "--snr-step-db must be positive, got {}",
            self.snr_step_db
        );
        ensure!(
            self.snr_stop_db >= self.snr_start_db,
            "--snr-stop-db ({}) is below --snr-start-db ({})",
            self.snr_stop_db,
            self.snr_start_db
        );
        ensure!(self.trials >= 1, "--trials must be at least 1");
        ensure!(self.grid_points >= 1, "--grid-points must be at least 1");
        ensure!(self.gamma_max > 0.0, "--gamma-max must be positive");
        ensure!(
            self.d_min >= 0.0 && self.d_max >= self.d_min,
            "distance range [{}, {}] is empty",
            self.d_min,
            self.d_max
        );
        Geometry::new(self.d1, self.d2, self.d0, self.nu)?;
        Ok(())
    }

    /// Orders users so the first has the higher rate, swapping distances along
    /// with rates. Returns whether a swap happened.
    pub fn normalize(mut self) -> Result<(Self, bool)> {
        let (_, swapped) = ThresholdPair::from_rates_relabeled(self.r1, self.r2)?;
        if swapped {
            std::mem::swap(&mut self.r1, &mut self.r2);
            std::mem::swap(&mut self.d1, &mut self.d2);
        }
        Ok((self, swapped))
    }

    pub fn thresholds(&self) -> Result<ThresholdPair> {
        Ok(ThresholdPair::from_rates(self.r1, self.r2)?)
    }

    pub fn geometry(&self) -> Result<Geometry> {
        Ok(Geometry::new(self.d1, self.d2, self.d0, self.nu)?)
    }
}

/// Settings accepted both as flags and as config-file keys.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Overrides {
    /// Power coefficient of the stronger share, in (0.5, 1)
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Target rate of user 1 in bits/s/Hz
    #[arg(long, global = true)]
    pub r1: Option<f64>,
    /// Target rate of user 2 in bits/s/Hz
    #[arg(long, global = true)]
    pub r2: Option<f64>,
    /// Distance of user 1 in meters
    #[arg(long, global = true)]
    pub d1: Option<f64>,
    /// Distance of user 2 in meters
    #[arg(long, global = true)]
    pub d2: Option<f64>,
    /// Reference distance of the path-loss model in meters
    #[arg(long, global = true)]
    pub d0: Option<f64>,
    /// Path-loss exponent
    #[arg(long, global = true)]
    pub nu: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub snr_start_db: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub snr_stop_db: Option<f64>,
    #[arg(long, global = true)]
    pub snr_step_db: Option<f64>,
    /// Monte Carlo blocks per SNR point
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated strategy names, e.g. HUF,LUF,CSD; empty for none
    #[arg(long, global = true)]
    #[serde(deserialize_with = "strategy_names")]
    pub strategies: Option<String>,
    /// Points per axis of the region and gain grids
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Largest SINR threshold on the grid axes
    #[arg(long, global = true)]
    pub gamma_max: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub gain_axis: Option<GainAxis>,
    /// Smallest distance of the gain grid
    #[arg(long, global = true)]
    pub d_min: Option<f64>,
    /// Largest distance of the gain grid
    #[arg(long, global = true)]
    pub d_max: Option<f64>,
}

/// Config files may list strategies as an array or as a comma-separated string.
fn strategy_names<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Names {
        Text(String),
        List(Vec<String>),
    }
    Ok(Some(match Names::deserialize(d)? {
        Names::Text(s) => s,
        Names::List(v) => v.join(","),
    }))
}

pub fn parse_strategies<S: AsRef<str>>(names: &[S]) -> Result<Vec<StrategyId>> {
    let mut out = Vec::new();
    for name in names
        .iter()
        .map(AsRef::as_ref)
        .filter(|s| !s.trim().is_empty())
    {
        let id: StrategyId = name.parse()?;
        if out.contains(&id) {
            bail!("strategy {id} listed twice");
        }
        out.push(id);
    }
    Ok(out)
}

impl Overrides {
    fn apply(&self, spec: &mut RunSpec) -> Result<()> {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { spec.$field = v; })*
            };
        }
        take!(
            alpha,
            r1,
            r2,
            d1,
            d2,
            d0,
            nu,
            snr_start_db,
            snr_stop_db,
            snr_step_db,
            trials,
            seed,
            grid_points,
            gamma_max,
            gain_axis,
            d_min,
            d_max
        );
        if let Some(list) = &self.strategies {
            let names: Vec<&str> = list.split(',').collect();
            spec.strategies = parse_strategies(&names)?;
        }
        Ok(())
    }
}

/// Builds the spec from defaults, then the config file, then flags.
pub fn resolve(command: Command, config: Option<&Path>, flags: &Overrides) -> Result<RunSpec> {
    let mut spec = RunSpec::defaults(command);
    if let Some(path) = config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file: Overrides =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        file.apply(&mut spec)?;
    }
    flags.apply(&mut spec)?;
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_grid_is_inclusive_and_drift_free() {
        let mut spec = RunSpec::defaults(Command::Sweep);
        spec.snr_start_db = 0.0;
        spec.snr_stop_db = 1.0;
        spec.snr_step_db = 0.1;
        let grid = spec.snr_grid_db();
        assert_eq!(grid.len(), 11);
        assert_eq!(grid[10], 1.0);
        assert_eq!(grid[3], 0.30000000000000004);
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(
            &path,
            "alpha = 0.8\ntrials = 5\nstrategies = [\"huf\", \"CSD\"]\nsnr-step-db = 2.5\n",
        )
        .unwrap();
        let flags = Overrides {
            trials: Some(9),
            ..Default::default()
        };
        let spec = resolve(Command::Sweep, Some(&path), &flags).unwrap();
        assert_eq!(spec.alpha, 0.8);
        assert_eq!(spec.trials, 9);
        assert_eq!(spec.snr_step_db, 2.5);
        assert_eq!(spec.strategies, vec![StrategyId::Huf, StrategyId::Csd]);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "alhpa = 0.8\n").unwrap();
        assert!(resolve(Command::Sweep, Some(&path), &Overrides::default()).is_err());
    }

    #[test]
    fn empty_strategy_list() {
        let flags = Overrides {
            strategies: Some(String::new()),
            ..Default::default()
        };
        let spec = resolve(Command::Sweep, None, &flags).unwrap();
        assert!(spec.strategies.is_empty());
        assert!(parse_strategies(&["HUF", "huf"]).is_err());
        assert!(parse_strategies(&["XYZ"]).is_err());
    }

    #[test]
    fn invalid_values() {
        for flags in [
            Overrides {
                snr_step_db: Some(0.0),
                ..Default::default()
            },
            Overrides {
                alpha: Some(0.5),
                ..Default::default()
            },
            Overrides {
                trials: Some(0),
                ..Default::default()
            },
            Overrides {
                d0: Some(0.0),
                ..Default::default()
            },
        ] {
            assert!(resolve(Command::Sweep, None, &flags).is_err(), "{flags:?}");
        }
    }

    #[test]
    fn normalize_swaps_rates_with_distances() {
        let mut spec = RunSpec::defaults(Command::Sweep);
        spec.r1 = 0.4;
        spec.r2 = 1.6;
        spec.d1 = 30.0;
        spec.d2 = 40.0;
        let (n, swapped) = spec.normalize().unwrap();
        assert!(swapped);
        assert_eq!((n.r1, n.r2, n.d1, n.d2), (1.6, 0.4, 40.0, 30.0));
    }

    #[test]
    fn canonical_json_sorts_keys() {
        let json = RunSpec::defaults(Command::UserOutage).canonical_json();
        assert!(json.starts_with("{\"alpha\":0.7,\"command\":\"user-outage\","));
        assert!(!json.contains('\n'));
    }
}
