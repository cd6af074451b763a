//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Every export returns a JSON string. The plain functions in [`ops`] do the
//! work so they can be tested without a browser.

use wasm_bindgen::prelude::*;

pub mod ops;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Morin Thom polynomial of the A_k singularity with relative dimension `r`.
#[wasm_bindgen(js_name = thomPolynomial)]
pub fn thom_polynomial(r: u32, k: u32, integral: bool) -> Result<String, JsValue> {
    js(ops::thom_polynomial(r, k, integral))
}

/// Evaluates the cokernel section at a point given as comma-separated fractions.
#[wasm_bindgen(js_name = sigmaAt)]
pub fn sigma_at(point: &str, k: usize) -> Result<String, JsValue> {
    js(ops::sigma_at(point, k))
}

/// Corank profile of the normal form over a product grid.
#[wasm_bindgen]
pub fn stratify(n: usize, k: usize, grid: &str) -> Result<String, JsValue> {
    js(ops::stratify(n, k, grid))
}
