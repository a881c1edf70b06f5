//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes and returns plain strings (JSON or SVG) so the page
//! needs no generated TypeScript types.

use nkconf::{
    canonical_code, euler_counts, feasibility_gate, generalize, orientability, poincare_polynomial, Configuration,
    Outcome, SolverOptions, WiringDiagram,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Node budget for interactive orientability checks.
const WEB_BUDGET: u64 = 200_000;

const SAMPLES: &[(&str, &str)] = &[
    ("pappus", include_str!("../../core/data/pappus.json")),
    ("desargues", include_str!("../../core/data/desargues.json")),
    ("fano", include_str!("../../core/data/fano.json")),
    ("mobius_kantor", include_str!("../../core/data/mobius_kantor.json")),
    ("pappus_polar.wiring", include_str!("../../core/data/pappus_polar.wiring")),
    ("desargues_polar.wiring", include_str!("../../core/data/desargues_polar.wiring")),
];

fn err(e: impl ToString) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Gate verdict, cell counts and the boundary for one `(n, k)`.
pub fn gate_report(n: i64, k: i64) -> Result<Value, String> {
    let gate = feasibility_gate(n, k).map_err(|e| e.to_string())?;
    let counts = euler_counts(n, k).map_err(|e| e.to_string())?;
    Ok(json!({ "n": n, "k": k, "gate": gate, "counts": counts }))
}

/// Validation, canonical code, Poincaré polynomial and (budget permitting)
/// the orientability verdict of a configuration file.
pub fn configuration_report(text: &str) -> Value {
    let c = match Configuration::parse(text) {
        Ok(c) => c,
        Err(e) => return json!({ "valid": false, "error": e.to_string() }),
    };
    let r = orientability(&generalize(&c), SolverOptions { budget: WEB_BUDGET, ..Default::default() });
    let gate = feasibility_gate(c.n() as i64, c.k() as i64).ok().map(|g| g.verdict);
    json!({
        "valid": true,
        "n": c.n(),
        "k": c.k(),
        "code": canonical_code(&c).to_hex(),
        "poincare": poincare_polynomial(&c).ok(),
        "gate": gate,
        "orientability": r.outcome.label(),
        "nodes": r.stats.nodes,
        "witness": match &r.outcome {
            Outcome::Orientable(chi) => Some(chi.to_file_string()),
            _ => None,
        },
    })
}

#[wasm_bindgen]
pub fn euler_gate(n: i32, k: i32) -> Result<String, JsValue> {
    gate_report(n.into(), k.into()).map(|v| v.to_string()).map_err(err)
}

#[wasm_bindgen]
pub fn check_configuration(text: &str) -> String {
    configuration_report(text).to_string()
}

/// SVG drawing of a wiring file; `highlight < 0` highlights nothing.
#[wasm_bindgen]
pub fn render_wiring(text: &str, highlight: i32) -> Result<String, JsValue> {
    let w = WiringDiagram::parse(text).map_err(err)?;
    let report = w.validate();
    if !report.valid {
        return Err(err(report));
    }
    let highlight = usize::try_from(highlight).ok().filter(|&h| h < w.events.len());
    w.render_svg(highlight).map_err(err)
}

#[wasm_bindgen]
pub fn sample(name: &str) -> Option<String> {
    SAMPLES.iter().find(|(n, _)| *n == name).map(|(_, text)| text.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_report_matches_15_4() {
        let v = gate_report(15, 4).unwrap();
        assert_eq!(v["gate"]["verdict"], "Impossible");
        assert_eq!(v["counts"]["digon_slack"], -6);
        assert!(gate_report(15, 2).is_err());
    }

    #[test]
    fn samples_check_out() {
        let p = configuration_report(&sample("pappus").unwrap());
        assert_eq!(p["orientability"], "Orientable");
        let f = configuration_report(&sample("fano").unwrap());
        assert_eq!(f["orientability"], "NonOrientable");
        assert_eq!(configuration_report("3 3\n0 1 2\n")["valid"], false);
    }

    #[test]
    fn sample_wirings_render() {
        for name in ["pappus_polar.wiring", "desargues_polar.wiring"] {
            let svg = render_wiring(&sample(name).unwrap(), 0).unwrap();
            assert!(svg.contains("<polyline"));
        }
    }
}
