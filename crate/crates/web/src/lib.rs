//! Browser bindings: curvature heat maps, direction profiles and the
//! sum-of-metrics bound. Every entry point takes plain strings and numbers
//! and returns a JSON string.

use hermcurv::sampling::sample_points;
use hermcurv::{
    hsc_extrema_at_jet, parse_metric_spec, wu_verify, ChartPoint, ExtremaOptions, HscEvaluator, MetricField,
    WuOptions, C64,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_RESOLUTION: usize = 200;
const MAX_STEPS: usize = 2000;

#[derive(Serialize)]
pub struct HscMap {
    pub n: usize,
    pub resolution: usize,
    pub extent: f64,
    /// Row-major, `y` from `-extent` up; `None` outside the domain.
    pub h_min: Vec<Option<f64>>,
    pub h_max: Vec<Option<f64>>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

#[derive(Serialize)]
pub struct DirectionProfile {
    pub theta: Vec<f64>,
    pub hsc: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

fn field(spec: &str) -> Result<MetricField, String> {
    parse_metric_spec(spec).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Curvature over the square `[-extent, extent]²` of the first coordinate
/// line (other coordinates zero). For `n = 1` `h_min = h_max = H`.
pub fn hsc_map(spec: &str, resolution: usize, extent: f64) -> Result<HscMap, String> {
    let f = field(spec)?;
    if !(2..=MAX_RESOLUTION).contains(&resolution) {
        return Err(format!("resolution must be between 2 and {MAX_RESOLUTION}"));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err("extent must be positive".into());
    }
    let n = f.n();
    let opts = ExtremaOptions { restarts: 4, ..Default::default() };
    let step = 2.0 * extent / (resolution - 1) as f64;
    let mut h_min = Vec::with_capacity(resolution * resolution);
    let mut h_max = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        for i in 0..resolution {
            let mut z = vec![C64::new(0.0, 0.0); n];
            z[0] = C64::new(-extent + i as f64 * step, -extent + j as f64 * step);
            let cell = ChartPoint::new(z).and_then(|p| f.evaluate_jet(&p)).and_then(|jet| {
                if n == 1 {
                    let h = HscEvaluator::new(&jet)?.eval(&[C64::new(1.0, 0.0)])?;
                    Ok((h, h))
                } else {
                    let r = hsc_extrema_at_jet(&jet, &opts)?;
                    Ok((r.min, r.max))
                }
            });
            let (lo, hi) = cell.map_or((None, None), |(a, b)| (Some(a), Some(b)));
            h_min.push(lo);
            h_max.push(hi);
        }
    }
    let lo = h_min.iter().flatten().copied().reduce(f64::min);
    let hi = h_max.iter().flatten().copied().reduce(f64::max);
    Ok(HscMap { n, resolution, extent, h_min, h_max, lo, hi })
}

/// `H(cos θ e_1 + sin θ e_2)` for `θ ∈ [0, π]` at `point`; needs `n ≥ 2`.
pub fn direction_profile(spec: &str, point: &str, steps: usize) -> Result<DirectionProfile, String> {
    let f = field(spec)?;
    if f.n() < 2 {
        return Err("direction profiles need at least two complex dimensions".into());
    }
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("steps must be between 2 and {MAX_STEPS}"));
    }
    let coords = hermcurv::point::parse_complex_list(point)?;
    let p = ChartPoint::new(coords).map_err(|e| e.to_string())?;
    let jet = f.evaluate_jet(&p).map_err(|e| e.to_string())?;
    let eval = HscEvaluator::new(&jet).map_err(|e| e.to_string())?;
    let mut theta = Vec::with_capacity(steps);
    let mut hsc = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = std::f64::consts::PI * k as f64 / (steps - 1) as f64;
        let mut xi = vec![C64::new(0.0, 0.0); f.n()];
        xi[0] = C64::new(t.cos(), 0.0);
        xi[1] = C64::new(t.sin(), 0.0);
        theta.push(t);
        hsc.push(eval.eval(&xi).map_err(|e| e.to_string())?);
    }
    let ext = hsc_extrema_at_jet(&jet, &ExtremaOptions::default()).map_err(|e| e.to_string())?;
    Ok(DirectionProfile { theta, hsc, min: ext.min, max: ext.max })
}

/// Runs the bound check for `g + h` at seeded random points and returns the
/// report without per-sample rows.
pub fn wu_check(spec_g: &str, spec_h: &str, points: usize, samples: usize, seed: u64) -> Result<String, String> {
    let (g, h) = (field(spec_g)?, field(spec_h)?);
    if !(1..=50).contains(&points) || !(1..=2000).contains(&samples) {
        return Err("points must be in 1..=50 and samples in 1..=2000".into());
    }
    let sum = MetricField::sum(g.clone(), h.clone()).map_err(|e| e.to_string())?;
    let pts = sample_points(&sum, points, seed).map_err(|e| e.to_string())?;
    let opts = WuOptions { samples, seed, extrema: ExtremaOptions { restarts: 8, seed, ..Default::default() } };
    let mut rep = wu_verify(&g, &h, &pts, &opts).map_err(|e| e.to_string())?;
    rep.samples.clear();
    Ok(to_json(&rep))
}

#[wasm_bindgen(js_name = hscMap)]
pub fn hsc_map_js(spec: &str, resolution: usize, extent: f64) -> Result<String, JsValue> {
    hsc_map(spec, resolution, extent).map(|m| to_json(&m)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = directionProfile)]
pub fn direction_profile_js(spec: &str, point: &str, steps: usize) -> Result<String, JsValue> {
    direction_profile(spec, point, steps).map(|p| to_json(&p)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = wuCheck)]
pub fn wu_check_js(spec_g: &str, spec_h: &str, points: usize, samples: usize, seed: u32) -> Result<String, JsValue> {
    wu_check(spec_g, spec_h, points, samples, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poincare_map_is_constant_inside_disk() {
        let m = hsc_map("builtin: poincare_disk", 5, 0.9).unwrap();
        assert_eq!(m.h_max.len(), 25);
        assert!(m.h_max.iter().flatten().all(|h| (h + 2.0).abs() < 1e-9));
        // corners lie outside the unit disk
        assert_eq!(m.h_max[0], None);
        assert_eq!(m.h_max[12], Some(-2.0));
    }

    #[test]
    fn product_profile_spans_range() {
        let spec = "[d]\nbuiltin: poincare_disk\n[main]\nproduct: d, d\n";
        let p = direction_profile(spec, "0,0", 181).unwrap();
        assert!((p.hsc[0] + 2.0).abs() < 1e-12);
        assert!((p.hsc[45] + 1.0).abs() < 1e-12);
        assert!((p.min + 2.0).abs() < 1e-6 && (p.max + 1.0).abs() < 1e-6);
    }

    #[test]
    fn wu_check_passes_for_disks() {
        let json = wu_check("builtin: poincare_disk", "builtin: poincare_disk; c: 3", 2, 20, 1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(hsc_map("builtin: poincare_disk", 1, 0.9).is_err());
        assert!(direction_profile("builtin: poincare_disk", "0", 10).is_err());
        assert!(wu_check("builtin: nope", "builtin: euclidean", 1, 1, 0).is_err());
    }
}
