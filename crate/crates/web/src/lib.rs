//! WebAssembly bindings for the static demo in `www/`. Every export takes
//! plain strings and numbers and returns a JSON document.

use serde::Serialize;
use sumprod_core::distance::{distance_set, parse_points};
use sumprod_core::kakeya::{kakeya_min_search, write_lines};
use sumprod_core::setops::{prodset, sumset};
use sumprod_core::{make_field, FSet};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SumProduct {
    q: u32,
    set: Vec<u32>,
    sumset: Vec<u32>,
    product_set: Vec<u32>,
    /// max(|A+A|, |A·A|)
    max: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Distances {
    q: u32,
    points: usize,
    distances: Vec<u32>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Kakeya {
    q: u32,
    min_size: usize,
    cs_lower_bound: u64,
    cube: u64,
    lines: String,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Parses integers separated by commas or whitespace.
fn parse_elems(text: &str) -> Result<Vec<i64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("bad number '{t}'")))
        .collect()
}

pub fn sum_product_json(q: u64, elems: &str) -> Result<String, String> {
    let f = make_field(q).map_err(|e| e.to_string())?;
    let a = FSet::from_integers(f, parse_elems(elems)?);
    if a.is_empty() {
        return Err("the set is empty".into());
    }
    let s = sumset(&a, &a).map_err(|e| e.to_string())?;
    let p = prodset(&a, &a).map_err(|e| e.to_string())?;
    Ok(to_json(&SumProduct {
        q: f.order(),
        set: a.to_vec(),
        max: s.len().max(p.len()),
        sumset: s.to_vec(),
        product_set: p.to_vec(),
    }))
}

pub fn distances_json(q: u64, points: &str) -> Result<String, String> {
    let f = make_field(q).map_err(|e| e.to_string())?;
    let pts = parse_points(f, points).map_err(|e| e.to_string())?;
    let d = distance_set(f, &pts).map_err(|e| e.to_string())?;
    Ok(to_json(&Distances { q: f.order(), points: pts.len(), distances: d.to_vec() }))
}

pub fn kakeya_json(q: u64, trials: u64, seed: u64) -> Result<String, String> {
    let r = kakeya_min_search(q, trials, seed).map_err(|e| e.to_string())?;
    Ok(to_json(&Kakeya {
        q: r.q,
        min_size: r.min_size,
        cs_lower_bound: r.cs_lower_bound,
        cube: (r.q as u64).pow(3),
        lines: write_lines(&r.best_assignment),
    }))
}

/// `A+A` and `A·A` for a set given as a list of integers.
#[wasm_bindgen(js_name = sumProduct)]
pub fn sum_product(q: u32, elems: &str) -> Result<String, JsError> {
    sum_product_json(q as u64, elems).map_err(|e| JsError::new(&e))
}

/// Distance set of points given as `x y` lines.
#[wasm_bindgen]
pub fn distances(q: u32, points: &str) -> Result<String, JsError> {
    distances_json(q as u64, points).map_err(|e| JsError::new(&e))
}

/// Seeded search for a small Besicovitch set, `q <= 13`.
#[wasm_bindgen(js_name = kakeyaSearch)]
pub fn kakeya_search(q: u32, trials: u32, seed: u32) -> Result<String, JsError> {
    kakeya_json(q as u64, trials as u64, seed as u64).map_err(|e| JsError::new(&e))
}
