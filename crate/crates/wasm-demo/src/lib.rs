//! Browser bindings. Each exported function takes parameters as `num/den`
//! or decimal strings and returns JSON; errors come back as JS exceptions.
//! The same functions without the `wasm_bindgen` layer live in [`api`].

use wasm_bindgen::prelude::*;

pub mod api;

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Derives J_M by solving the commutator equation. ε is put on the condition
/// for M. Returns `{epsilon, nullity, terms, text}`.
#[wasm_bindgen]
pub fn derive(
    model: &str,
    m: i32,
    g: &str,
    delta: &str,
    mu: &str,
    sin_t: &str,
    cos_t: &str,
) -> Result<String, JsError> {
    let p = api::Params::new(model, g, delta, mu, sin_t, cos_t);
    js(api::derive(&p, m as i64))
}

/// Fits `J² = Σ c_k H^k` for J_M. Returns `{epsilon, coefficients, text}`.
#[wasm_bindgen]
pub fn relation(
    model: &str,
    m: i32,
    g: &str,
    delta: &str,
    mu: &str,
    sin_t: &str,
    cos_t: &str,
) -> Result<String, JsError> {
    let p = api::Params::new(model, g, delta, mu, sin_t, cos_t);
    js(api::relation(&p, m as i64))
}

/// Labelled levels along `g ∈ [g_min, g_max]` at fixed ε, plus classified crossings.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    model: &str,
    epsilon: &str,
    delta: &str,
    mu: &str,
    sin_t: &str,
    cos_t: &str,
    g_min: &str,
    g_max: &str,
    steps: u32,
    fock_dim: u32,
    levels: u32,
) -> Result<String, JsError> {
    let p = api::Params::new(model, "", delta, mu, sin_t, cos_t);
    let grid = api::Grid {
        epsilon: epsilon.into(),
        g_min: g_min.into(),
        g_max: g_max.into(),
        steps: steps as usize,
        fock_dim: fock_dim as usize,
        levels: levels as usize,
    };
    js(api::sweep(&p, &grid))
}
