//! JSON-producing entry points shared by the wasm bindings and native tests.

use noma_core::analytics::{
    coding_gain, psys_asymptotic, psys_csd_asymptotic, psys_csd_exact, psys_exact, Gain,
};
use noma_core::montecarlo::{estimate_paired, Scenario};
use noma_core::region::{
    classify_region_g, classify_region_r, classify_region_s, order_switch_curve, power_switch_curve,
};
use noma_core::{Geometry, StrategyId, SystemParams, ThresholdPair};
use serde_json::{json, Value};

pub type ApiResult = Result<String, String>;

const MAX_GRID: usize = 400;
const MAX_TRIALS: u64 = 2_000_000;

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn axis(gamma_max: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(gamma_max.is_finite() && gamma_max > 0.0) {
        return Err(format!("gamma_max must be positive, got {gamma_max}"));
    }
    if n == 0 || n > MAX_GRID {
        return Err(format!("grid size must be in 1..={MAX_GRID}, got {n}"));
    }
    Ok((1..=n).map(|k| k as f64 * gamma_max / n as f64).collect())
}

/// Cells indexed `[j][i]` with `gamma2 = axis[j]` and `gamma1 = axis[i]`;
/// cells with `gamma2 > gamma1` are null.
fn triangle<F: FnMut(ThresholdPair) -> Value>(axis: &[f64], mut cell: F) -> Vec<Vec<Value>> {
    axis.iter()
        .map(|&g2| {
            axis.iter()
                .map(|&g1| {
                    if g2 <= g1 {
                        cell(ThresholdPair::new(g1, g2).unwrap())
                    } else {
                        Value::Null
                    }
                })
                .collect()
        })
        .collect()
}

fn check_alpha(alpha: f64) -> Result<(), String> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(format!("alpha must lie in (0.5, 1), got {alpha}"))
    }
}

pub fn region_map(alpha: f64, gamma_max: f64, n: usize) -> ApiResult {
    check_alpha(alpha)?;
    let axis = axis(gamma_max, n)?;
    let s = triangle(&axis, |t| json!(classify_region_s(&t, alpha).to_string()));
    let g = triangle(&axis, |t| json!(classify_region_g(&t, alpha).to_string()));
    let r = triangle(&axis, |t| json!(classify_region_r(&t, alpha).to_string()));
    let order: Vec<f64> = axis
        .iter()
        .map(|&g1| order_switch_curve(g1, alpha))
        .collect();
    let power: Vec<f64> = axis
        .iter()
        .map(|&g1| power_switch_curve(g1, alpha))
        .collect();
    Ok(json!({
        "alpha": alpha,
        "axis": axis,
        "knee": alpha / (1.0 - alpha) - 1.0,
        "region_R": r,
        "region_S": s,
        "region_G": g,
        "order_switch": order,
        "power_switch": power,
    })
    .to_string())
}

#[derive(Debug, Clone, Copy)]
pub struct CurveRequest {
    pub alpha: f64,
    pub r1: f64,
    pub r2: f64,
    pub d1: f64,
    pub d2: f64,
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub trials: u64,
    pub seed: u64,
}

fn snr_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step.is_finite() && step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(format!("bad SNR grid {start}..{stop} step {step}"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > 1000 {
        return Err(format!("SNR grid has {n} points, at most 1000 allowed"));
    }
    Ok((0..n).map(|k| start + k as f64 * step).collect())
}

/// System outage of HUF and CSD against SNR, in closed form, asymptotically
/// and (when `trials > 0`) by simulation.
pub fn outage_curves(req: &CurveRequest) -> ApiResult {
    check_alpha(req.alpha)?;
    if req.trials > MAX_TRIALS {
        return Err(format!("at most {MAX_TRIALS} trials per point"));
    }
    let (t, relabeled) = ThresholdPair::from_rates_relabeled(req.r1, req.r2).map_err(fail)?;
    let mut geom = Geometry::new(req.d1, req.d2, 10.0, 2.7).map_err(fail)?;
    if relabeled {
        geom = geom.swapped();
    }
    let snr = snr_grid(req.snr_start_db, req.snr_stop_db, req.snr_step_db)?;
    let mut out = json!({
        "snr_db": snr,
        "relabeled": relabeled,
        "gamma": [t.gamma1(), t.gamma2()],
        "region_R": classify_region_r(&t, req.alpha).to_string(),
        "region_S": classify_region_s(&t, req.alpha).to_string(),
    });
    let mut cols: [Vec<Value>; 6] = Default::default();
    for &s in &snr {
        let p = SystemParams::from_geometry(req.alpha, s, &geom).map_err(fail)?;
        cols[0].push(json!(psys_exact(&t, &p)));
        cols[1].push(json!(psys_asymptotic(&t, &p)));
        cols[2].push(json!(psys_csd_exact(&t, &p)));
        cols[3].push(json!(psys_csd_asymptotic(&t, &p)));
        if req.trials > 0 {
            let scenario = Scenario::new(p, t, Some(geom));
            let est = estimate_paired(
                &scenario,
                &[StrategyId::Huf, StrategyId::Csd],
                req.trials,
                req.seed,
            )
            .map_err(fail)?;
            cols[4].push(json!(est[0].p_sys_hat));
            cols[5].push(json!(est[1].p_sys_hat));
        } else {
            cols[4].push(Value::Null);
            cols[5].push(Value::Null);
        }
    }
    let names = [
        "huf_exact",
        "huf_asym",
        "csd_exact",
        "csd_asym",
        "huf_mc",
        "csd_mc",
    ];
    for (name, col) in names.into_iter().zip(cols) {
        out[name] = Value::Array(col);
    }
    Ok(out.to_string())
}

/// Coding gain of HUF over CSD on a threshold grid for fixed user distances.
pub fn gain_map(alpha: f64, d1: f64, d2: f64, gamma_max: f64, n: usize) -> ApiResult {
    check_alpha(alpha)?;
    let axis = axis(gamma_max, n)?;
    let geom = Geometry::new(d1, d2, 10.0, 2.7).map_err(fail)?;
    // the gain is a high-SNR limit, so the SNR used here is immaterial
    let p = SystemParams::from_geometry(alpha, 0.0, &geom).map_err(fail)?;
    let mut max_theta: f64 = 0.0;
    let cells = triangle(&axis, |t| {
        let g = coding_gain(&t, &p);
        match g.value {
            Gain::Zero => json!({"region": g.region.to_string(), "tag": "Zero"}),
            Gain::Infinite => json!({"region": g.region.to_string(), "tag": "Infinite"}),
            Gain::Finite(v) => {
                max_theta = max_theta.max(v);
                json!({"region": g.region.to_string(), "tag": "Finite", "theta_db": v})
            }
        }
    });
    Ok(
        json!({"alpha": alpha, "axis": axis, "cells": cells, "max_theta_db": max_theta})
            .to_string(),
    )
}
