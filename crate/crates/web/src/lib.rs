//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every function returns a JSON string; errors surface as JavaScript
//! exceptions.

pub mod api;

use wasm_bindgen::prelude::*;

fn js(r: api::ApiResult) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = regionMap)]
pub fn region_map(alpha: f64, gamma_max: f64, n: usize) -> Result<String, JsError> {
    js(api::region_map(alpha, gamma_max, n))
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = outageCurves)]
pub fn outage_curves(
    alpha: f64,
    r1: f64,
    r2: f64,
    d1: f64,
    d2: f64,
    snr_start_db: f64,
    snr_stop_db: f64,
    snr_step_db: f64,
    trials: u32,
    seed: u32,
) -> Result<String, JsError> {
    js(api::outage_curves(&api::CurveRequest {
        alpha,
        r1,
        r2,
        d1,
        d2,
        snr_start_db,
        snr_stop_db,
        snr_step_db,
        trials: trials.into(),
        seed: seed.into(),
    }))
}

#[wasm_bindgen(js_name = gainMap)]
pub fn gain_map(alpha: f64, d1: f64, d2: f64, gamma_max: f64, n: usize) -> Result<String, JsError> {
    js(api::gain_map(alpha, d1, d2, gamma_max, n))
}
