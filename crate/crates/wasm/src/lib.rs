//! Browser bindings for lrc-lab.
//!
//! Three entry points: asymptotic curves as CSV, a single named bound as a
//! JSON report, and a closure run on a random recovery graph. Each binding is
//! a thin wrapper over a plain Rust function so the logic stays testable off
//! the browser.

use lrc_lab::bounds::{emit_curves, BoundName};
use lrc_lab::locality::{best_closure_search, closure, RecoveryGraph};
use lrc_lab::report::{bound_report, curve_csv, ratio_string, BoundArgs};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// CSV rows for a comma-separated list of curve names.
pub fn curves(bounds: &str, q: u32, r: usize, t: usize, step: f64) -> Result<String, String> {
    let names = bounds
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<BoundName>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    if names.is_empty() {
        return Err("no curves selected".into());
    }
    let points = emit_curves(&names, q, r, t, step).map_err(|e| e.to_string())?;
    Ok(curve_csv(&points))
}

/// JSON report for one bound.
pub fn bound(name: &str, args: &BoundArgs) -> Result<String, String> {
    bound_report(name, args).map(|r| r.to_json()).map_err(|e| e.to_string())
}

/// Draws a recovery graph with t disjoint sets of size r per vertex and
/// colors the closure of `seeds`. An empty seed list asks for the best seed
/// set of size `budget` instead.
pub fn closure_run(
    n: usize,
    r: usize,
    t: usize,
    graph_seed: u64,
    seeds: &[usize],
    budget: usize,
) -> Result<String, String> {
    let g = RecoveryGraph::random_uniform(n, r, t, graph_seed).map_err(|e| e.to_string())?;
    let (seed_set, res, exact) = if seeds.is_empty() {
        let s = best_closure_search(&g, budget).map_err(|e| e.to_string())?;
        (s.seed_set, s.result, Some(s.exact))
    } else {
        let res = closure(&g, seeds).map_err(|e| e.to_string())?;
        (seeds.to_vec(), res, None)
    };
    let sets: Vec<&[Vec<usize>]> = (0..n).map(|v| g.sets(v)).collect();
    let out = json!({
        "n": n,
        "r": r,
        "t": t,
        "graph_seed": graph_seed,
        "sets": sets,
        "seed_set": seed_set,
        "order": res.order,
        "closure_size": res.size(),
        "ratio": ratio_string(&res.ratio),
        "exact_search": exact,
    });
    Ok(serde_json::to_string(&out).expect("json"))
}

fn js_err(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen(js_name = curveCsv)]
pub fn curve_csv_js(bounds: &str, q: u32, r: usize, t: usize, step: f64) -> Result<String, JsError> {
    curves(bounds, q, r, t, step).map_err(js_err)
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = boundReport)]
pub fn bound_report_js(
    name: &str,
    n: Option<usize>,
    k: Option<usize>,
    r: Option<usize>,
    t: Option<usize>,
    q: Option<u32>,
    d: Option<usize>,
    delta: Option<f64>,
    rate: Option<f64>,
) -> Result<String, JsError> {
    let args = BoundArgs {
        n,
        k,
        r,
        t,
        q,
        d,
        delta,
        rate,
        oracle: None,
    };
    bound(name, &args).map_err(js_err)
}

#[wasm_bindgen(js_name = closureRun)]
pub fn closure_run_js(
    n: usize,
    r: usize,
    t: usize,
    graph_seed: u64,
    seeds: Vec<usize>,
    budget: usize,
) -> Result<String, JsError> {
    closure_run(n, r, t, graph_seed, &seeds, budget).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_have_header_and_rows() {
        let csv = curves("singleton, gv", 2, 2, 1, 0.1).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("bound,q,r,t,delta,value,aux1,aux2"));
        assert!(lines.count() >= 20);
        assert!(curves("nope", 2, 2, 1, 0.1).is_err());
        assert!(curves("", 2, 2, 1, 0.1).is_err());
    }

    #[test]
    fn bound_is_json() {
        let args = BoundArgs {
            n: Some(6),
            k: Some(3),
            r: Some(2),
            t: Some(2),
            ..Default::default()
        };
        let v: serde_json::Value = serde_json::from_str(&bound("d2", &args).unwrap()).unwrap();
        assert_eq!(v["command"], "bounds");
        assert!(bound("d2", &BoundArgs::default()).is_err());
    }

    #[test]
    fn closure_explicit_and_searched() {
        let v: serde_json::Value =
            serde_json::from_str(&closure_run(12, 2, 2, 3, &[0, 1, 2], 0).unwrap()).unwrap();
        assert!(v["closure_size"].as_u64().unwrap() >= 3);
        assert!(v["exact_search"].is_null());
        let v: serde_json::Value =
            serde_json::from_str(&closure_run(12, 2, 2, 3, &[], 3).unwrap()).unwrap();
        assert_eq!(v["exact_search"], true);
        assert_eq!(v["seed_set"].as_array().unwrap().len(), 3);
        assert!(closure_run(3, 2, 2, 0, &[], 1).is_err());
    }
}
