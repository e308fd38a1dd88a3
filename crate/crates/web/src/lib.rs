//! Three operations for the static page in `www/`: dimensions of a
//! presentation, its Koszul dual, and the coefficients of a series.
//!
//! The `*_json` functions are plain Rust so they can be tested natively;
//! the exported wrappers only turn errors into `JsError`.

use operadica::freeoperad::{quotient_dims_with, Budget};
use operadica::koszul::quadratic_dual;
use operadica::presentation::{parse, render};
use operadica::registry::Registry;
use operadica::series::{SeriesId, SeriesKind};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Keeps a single page responsive.
const WEB_MAX_BASIS: usize = 20_000;

pub fn dims_json(source: &str, max_arity: usize) -> Result<String, String> {
    let p = parse(source).map_err(|e| e.to_string())?;
    let budget = Budget { max_arity: max_arity.min(Budget::default_for(&p).max_arity), max_basis: WEB_MAX_BASIS };
    let t = quotient_dims_with(&p, budget).map_err(|e| e.to_string())?;
    let rows: Vec<_> = t.rows.iter().map(|r| json!({ "arity": r.arity, "free": r.free_dim.to_string(), "quotient": r.quotient_dim })).collect();
    let truncated = t.truncated.as_ref().map(|x| format!("stopped at arity {}: {} monomials", x.arity, x.basis_size));
    Ok(json!({ "name": t.name, "rows": rows, "truncated": truncated }).to_string())
}

pub fn dual_text(source: &str) -> Result<String, String> {
    let p = parse(source).map_err(|e| e.to_string())?;
    quadratic_dual(&p).map(|d| render(&d)).map_err(|e| e.to_string())
}

pub fn series_json(expr: &str, exponential: bool, order: usize) -> Result<String, String> {
    let kind = if exponential { SeriesKind::Exponential } else { SeriesKind::Ordinary };
    let s = SeriesId::parse(expr, kind).and_then(|id| id.expand(order.min(30))).map_err(|e| e.to_string())?;
    let coeffs: Vec<String> = s.coefficients().iter().map(|c| c.to_string()).collect();
    let dims: Vec<String> = s.dims().iter().map(|c| c.to_string()).collect();
    Ok(json!({ "coefficients": coeffs, "dims": dims }).to_string())
}

/// `[name, source]` pairs for the example picker.
pub fn examples_json() -> String {
    let r = Registry::embedded();
    let v: Vec<_> = r.entries().iter().map(|e| json!([e.name, e.source])).collect();
    serde_json::Value::from(v).to_string()
}

#[wasm_bindgen]
pub fn dims(source: &str, max_arity: usize) -> Result<String, JsError> {
    dims_json(source, max_arity).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn dual(source: &str) -> Result<String, JsError> {
    dual_text(source).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn series(expr: &str, exponential: bool, order: usize) -> Result<String, JsError> {
    series_json(expr, exponential, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn examples() -> String {
    examples_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEND: &str = "name Dend\nmode ns\nop l arity 2\nop r arity 2\n\
        rel l(l(x1,x2),x3) = l(x1,l(x2,x3)) + l(x1,r(x2,x3))\n\
        rel l(r(x1,x2),x3) = r(x1,l(x2,x3))\n\
        rel r(l(x1,x2),x3) + r(r(x1,x2),x3) = r(x1,r(x2,x3))\n";

    #[test]
    fn dims_of_dend() {
        let v: serde_json::Value = serde_json::from_str(&dims_json(DEND, 5).unwrap()).unwrap();
        let q: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["quotient"].as_u64().unwrap()).collect();
        assert_eq!(q, [1, 2, 5, 14, 42]);
        assert!(v["truncated"].is_null());
    }

    #[test]
    fn dual_of_dend_has_five_relations() {
        let d = parse(&dual_text(DEND).unwrap()).unwrap();
        assert_eq!(d.relations.len(), 5);
        assert!(dual_text("name X\nop m arity 2\nrel m(x1,x2) = 0\n").is_err());
    }

    #[test]
    fn series_and_errors() {
        let v: serde_json::Value = serde_json::from_str(&series_json("-log(1-t)", true, 5).unwrap()).unwrap();
        assert_eq!(v["dims"], json!(["1", "1", "2", "6", "24"]));
        assert!(series_json("sqrt(", false, 4).is_err());
        assert!(dims_json("op m arity", 3).is_err());
    }

    #[test]
    fn examples_parse() {
        let v: serde_json::Value = serde_json::from_str(&examples_json()).unwrap();
        let all = v.as_array().unwrap();
        assert!(all.len() >= 40);
        for e in all {
            assert!(parse(e[1].as_str().unwrap()).is_ok());
        }
    }
}
