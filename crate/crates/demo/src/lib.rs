//! Browser bindings. Every export takes plain strings and numbers and
//! returns a JSON document, so the page needs no glue beyond `JSON.parse`.

use limitcoh_core::degeneration::{builtin_example, clemens_schmid, limit_cohomology, SemistableFiber};
use limitcoh_core::io::{self, matrix_value, scalar_value};
use limitcoh_core::phimod::{wm_check, WmReport};
use limitcoh_core::{Field, Matrix};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn example(name: &str, prime: u32) -> Result<SemistableFiber, String> {
    builtin_example(name.trim(), prime as u64).map_err(|e| e.to_string())
}

fn weights_value(w: &std::collections::BTreeMap<i64, usize>) -> Value {
    w.iter().map(|(k, m)| (k.to_string(), json!(m))).collect::<serde_json::Map<_, _>>().into()
}

fn wm_value(rep: &WmReport) -> Value {
    let blocks: Vec<Value> = rep
        .blocks
        .iter()
        .map(|b| json!({"k": b.k, "source_dim": b.source_dim, "target_dim": b.target_dim, "rank": b.rank}))
        .collect();
    json!({"center": rep.center, "weights": weights_value(&rep.weights), "blocks": blocks, "pass": rep.pass})
}

fn show(m: &Matrix) -> String {
    m.to_string()
}

/// Limit cohomology of a built-in degeneration, degree by degree.
pub fn limit_json(name: &str, prime: u32) -> Result<String, String> {
    let fib = example(name, prime)?;
    let f = fib.field();
    let lc = limit_cohomology(&fib, None).map_err(|e| e.to_string())?;
    let degrees: Vec<Value> = lc
        .degrees
        .values()
        .map(|d| {
            json!({
                "degree": d.degree,
                "dim": d.dim(),
                "weights": weights_value(&d.weights),
                "n_rank": d.n_rank,
                "phi": show(&d.phi_weight_basis),
                "n": show(&d.normalized_n(f)),
                "n_matrix": matrix_value(&d.normalized_n(f)),
            })
        })
        .collect();
    let doc = json!({
        "example": name.trim(),
        "prime": f.p(),
        "degrees": degrees,
        "e2_degenerates": lc.weight_ss.degenerates_at_e2,
        "filtration_matches_frobenius": lc.filtration_matches_frobenius,
        "only_lowers_by_two": lc.only_lowers_by_two,
        "conjectural": lc.conjectural,
    });
    Ok(doc.to_string())
}

/// The Clemens-Schmid sequence of a built-in degeneration, split into threads.
pub fn clemens_schmid_json(name: &str, prime: u32) -> Result<String, String> {
    let fib = example(name, prime)?;
    let cs = clemens_schmid(&fib).map_err(|e| e.to_string())?;
    let threads: Vec<Value> = cs
        .threads
        .iter()
        .map(|t| {
            let nodes: Vec<Value> = t
                .nodes
                .iter()
                .map(|n| json!({"label": n.label, "degree": n.degree, "dim": n.dim, "image": n.image, "kernel": n.kernel, "exact": n.exact()}))
                .collect();
            json!({"parity": t.parity, "nodes": nodes, "exact": t.exact()})
        })
        .collect();
    let wm: Vec<Value> = cs.wm.iter().map(|(n, w)| json!({"degree": n, "report": wm_value(w)})).collect();
    let doc = json!({
        "example": name.trim(),
        "prime": fib.field().p(),
        "threads": threads,
        "weight_monodromy": wm,
        "all_exact": cs.all_exact(),
        "monodromy_zero": cs.monodromy_zero,
        "conjectural": cs.conjectural,
    });
    Ok(doc.to_string())
}

/// Weight split and weight-monodromy check for a module given as
/// `{"dim", "phi", "n"?}` JSON.
pub fn module_json(text: &str, prime: u32, center: i32) -> Result<String, String> {
    let f = Field::new(prime as u64).map_err(|e| e.to_string())?;
    let d = io::parse_module(text, &f).map_err(|e| e.to_string())?;
    let split = limitcoh_core::algebra::weil_split(d.phi(), &f).map_err(|e| e.to_string())?;
    let pieces: Vec<Value> = split
        .pieces()
        .iter()
        .map(|(m, p)| {
            let eig: Vec<Value> = p.eigenvalues.iter().map(|(l, k)| json!({"value": scalar_value(l), "text": l.to_string(), "mult": k})).collect();
            json!({"weight": m, "dim": p.dim, "eigenvalues": eig, "basis": show(&p.basis)})
        })
        .collect();
    let rep = wm_check(&d, center as i64, &f).map_err(|e| e.to_string())?;
    Ok(json!({"prime": f.p(), "dim": d.dim(), "pieces": pieces, "weight_monodromy": wm_value(&rep)}).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = limitCohomology)]
pub fn limit_cohomology_js(name: &str, prime: u32) -> Result<String, JsError> {
    js(limit_json(name, prime))
}

#[wasm_bindgen(js_name = clemensSchmid)]
pub fn clemens_schmid_js(name: &str, prime: u32) -> Result<String, JsError> {
    js(clemens_schmid_json(name, prime))
}

#[wasm_bindgen(js_name = analyzeModule)]
pub fn analyze_module_js(text: &str, prime: u32, center: i32) -> Result<String, JsError> {
    js(module_json(text, prime, center))
}

#[wasm_bindgen(js_name = exampleNames)]
pub fn example_names() -> String {
    Value::from(limitcoh_core::degeneration::BUILTIN_NAMES.to_vec()).to_string()
}
