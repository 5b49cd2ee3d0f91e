//! Browser bindings. Each export returns a JSON string; failures come back
//! as `{"error": "..."}` rather than exceptions so the page can show them.

use bubble_resonance::cli::SweepRow;
use bubble_resonance::dispersion::PhysicalParams;
use bubble_resonance::gamma::{gamma, resonance};
use bubble_resonance::scaled::solve_fg;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn reply(v: Result<Value, bubble_resonance::Error>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Resonance of mode `l` at `(eps, we)`, solver picked automatically.
#[wasm_bindgen]
pub fn resonance_root(l: u32, eps: f64, we: f64) -> String {
    reply(
        PhysicalParams::new(l, eps, we)
            .and_then(|p| resonance(&p, None))
            .map(|r| serde_json::to_value(r).expect("plain data")),
    )
}

/// `Gamma(eps)` on `steps` evenly spaced points, with the asymptotic law.
#[wasm_bindgen]
pub fn gamma_curve(eps_min: f64, eps_max: f64, steps: u32, we: f64) -> String {
    let grid = bubble_resonance::cli::sweep_grid(eps_min, eps_max, steps.min(200) as usize);
    reply(grid.and_then(|g| {
        let rows = g
            .iter()
            .map(|&e| gamma(e, we).map(|r| SweepRow::from_gamma(&r)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(serde_json::to_value(rows).expect("plain data"))
    }))
}

/// `eta(l_*)` across the solver window at fixed `eps`, `n` samples.
#[wasm_bindgen]
pub fn eta_profile(eps: f64, n: u32) -> String {
    let w = bubble_resonance::scaled::SolveWindow::default();
    let (lo, hi) = w.l_star_range;
    let (lo, hi) = (lo * 1.01, hi.min(1.0));
    let n = n.clamp(2, 400);
    let pts: Vec<Value> = (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .filter_map(|ls| {
            solve_fg(ls, eps)
                .ok()
                .map(|s| json!({ "l_star": ls, "zeta": s.state.zeta, "eta": s.state.eta }))
        })
        .collect();
    if pts.is_empty() {
        return json!({ "error": format!("no solvable l_* at eps = {eps}") }).to_string();
    }
    json!({ "eps": eps, "points": pts }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_json() {
        let v: Value = serde_json::from_str(&resonance_root(2, 0.1, 1.0)).unwrap();
        assert!((v["x"].as_f64().unwrap() - 0.344_041_2).abs() < 1e-6);
        let v: Value = serde_json::from_str(&resonance_root(1, 0.1, 1.0)).unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn curve_json() {
        let v: Value = serde_json::from_str(&gamma_curve(0.1, 0.2, 3, 1.0)).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0]["l_opt"], 38);
        let v: Value = serde_json::from_str(&gamma_curve(0.1, 0.5, 3, 1.0)).unwrap();
        assert!(v["error"].as_str().unwrap().contains("0.35"));
    }

    #[test]
    fn profile_json() {
        let v: Value = serde_json::from_str(&eta_profile(0.05, 40)).unwrap();
        let pts = v["points"].as_array().unwrap();
        let best = pts.iter().map(|p| p["eta"].as_f64().unwrap()).fold(0.0, f64::max);
        assert!((best - 0.2747).abs() < 2e-3);
    }
}
