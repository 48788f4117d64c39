//! Browser bindings for the compound-code explorer page: error-exponent
//! curves, rate-region curves, and a desk-scale Wyner-Ziv Monte Carlo,
//! each returned as a JSON string for the canvas plots in `www/`.
//!
//! The functions are plain computations over the core crate, so this
//! crate also compiles and tests natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ldgm_ldpc::analysis;
use ldgm_ldpc::codec::CosetCodec;
use ldgm_ldpc::ensembles::{CompoundCode, DegreeParams};
use ldgm_ldpc::protocols::{run_wz_batch, ChannelSpec, DecoderKind};

fn err_json(msg: impl std::fmt::Display) -> String {
    format!("{{\"error\":{}}}", serde_json::json!(msg.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap_or_else(err_json)
}

#[derive(Serialize)]
struct ExponentCurves {
    v: Vec<f64>,
    enumerator_term: Vec<f64>,
    kl_term: Vec<f64>,
    exponent: Vec<f64>,
    satisfied: bool,
    worst_v: f64,
    worst_value: f64,
}

/// Error-exponent decomposition over the weight-fraction grid.
/// `gamma_v = 0` selects the LDGM-only case (enumerator h(v)).
#[wasm_bindgen]
pub fn exponent_curves_json(
    p: f64,
    r_g: f64,
    gamma_t: u32,
    gamma_v: u32,
    gamma_c: u32,
    grid_step: f64,
) -> String {
    let curves = match analysis::exponent_curves(r_g, gamma_t, gamma_v, gamma_c, p, grid_step) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let report =
        match analysis::check_channel_condition(r_g, gamma_t, gamma_v, gamma_c, p, grid_step) {
            Ok(r) => r,
            Err(e) => return err_json(e),
        };
    to_json(&ExponentCurves {
        v: curves[0].grid().to_vec(),
        enumerator_term: curves[0].values().to_vec(),
        kl_term: curves[1].values().to_vec(),
        exponent: curves[2].values().to_vec(),
        satisfied: report.satisfied,
        worst_v: report.worst_v,
        worst_value: report.worst_value,
    })
}

#[derive(Serialize)]
struct Curve {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Serialize)]
struct RateCurves {
    wz_raw: Curve,
    wz_envelope: Curve,
    ie_raw: Curve,
    ie_envelope: Curve,
}

fn split(points: &[analysis::RatePoint]) -> Curve {
    Curve {
        x: points.iter().map(|p| p.x).collect(),
        y: points.iter().map(|p| p.rate).collect(),
    }
}

/// Wyner-Ziv rate curve and information-embedding capacity curve (raw and
/// envelope) for side-information / channel noise `p`.
#[wasm_bindgen]
pub fn rate_curves_json(p: f64, grid_step: f64) -> String {
    let grid = analysis::v_grid(grid_step);
    let run = || -> Result<RateCurves, analysis::AnalysisError> {
        let wz_raw: Vec<analysis::RatePoint> = grid
            .iter()
            .map(|&d| {
                Ok(analysis::RatePoint {
                    x: d,
                    rate: analysis::wz_rate_raw(p, d)?,
                })
            })
            .collect::<Result<_, analysis::AnalysisError>>()?;
        let mut ie_grid = vec![0.0];
        ie_grid.extend_from_slice(&grid);
        let ie_raw: Vec<analysis::RatePoint> = ie_grid
            .iter()
            .map(|&w| {
                Ok(analysis::RatePoint {
                    x: w,
                    rate: analysis::ie_capacity_raw(p, w)?,
                })
            })
            .collect::<Result<_, analysis::AnalysisError>>()?;
        Ok(RateCurves {
            wz_raw: split(&wz_raw),
            wz_envelope: split(&analysis::wz_rate_curve(p, &grid)?),
            ie_raw: split(&ie_raw),
            ie_envelope: split(&analysis::ie_capacity_curve(p, &ie_grid)?),
        })
    };
    match run() {
        Ok(curves) => to_json(&curves),
        Err(e) => err_json(e),
    }
}

#[derive(Serialize)]
struct WzDemo {
    n: usize,
    m: usize,
    k1: usize,
    k2: usize,
    rate: f64,
    design_distortion: f64,
    mean_distortion: f64,
    decoded_fraction: f64,
    distortions: Vec<f64>,
    statuses: Vec<String>,
}

/// Desk-scale Wyner-Ziv Monte Carlo on the fixed (n=16, m=16) family
/// with a (3, 4) lower code: k1 + k2 = 12, so `k2` trades syndrome rate
/// against the quantizer. Returns per-trial distortions.
#[wasm_bindgen]
pub fn wz_demo_json(k2: usize, delta: f64, trials: usize, seed: u64) -> String {
    if k2 > 12 {
        return err_json("k2 must be at most 12 (k1 + k2 = 12)");
    }
    if trials == 0 || trials > 500 {
        return err_json("trials must be in 1..=500");
    }
    let degrees = match DegreeParams::new(4, 3, 4) {
        Ok(d) => d,
        Err(e) => return err_json(e),
    };
    let code = match CompoundCode::build(16, 16, 12 - k2, k2, degrees, seed, 16) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let rates = code.rates();
    let design_distortion = match analysis::inverse_binary_entropy((1.0 - rates.r1).clamp(0.0, 1.0))
    {
        Ok(d) => d,
        Err(e) => return err_json(e),
    };
    let spec = match ChannelSpec::with_delta(delta, delta, design_distortion, 0.25) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let codec = CosetCodec::new(&code);
    let records = match run_wz_batch(&codec, &spec, DecoderKind::Ml, seed, trials) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let mean = records.iter().map(|r| r.distortion).sum::<f64>() / trials as f64;
    let decoded = records
        .iter()
        .filter(|r| r.status == ldgm_ldpc::codec::DecodeStatus::Decoded)
        .count() as f64
        / trials as f64;
    to_json(&WzDemo {
        n: code.n(),
        m: code.m(),
        k1: code.k1(),
        k2: code.k2(),
        rate: rates.r_trans,
        design_distortion,
        mean_distortion: mean,
        decoded_fraction: decoded,
        distortions: records.iter().map(|r| r.distortion).collect(),
        statuses: records
            .iter()
            .map(|r| r.status.as_str().to_string())
            .collect(),
    })
}
