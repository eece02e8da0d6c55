use wasm_bindgen::prelude::*;

use logspec::bounds::{eig_lower_bound_value, LogForm};
use logspec::coeffs::{alpha_coefficients, symbol};
use logspec::galerkin::{eigensolve, LatticeDomain, Method, DEFAULT_TOL};
use logspec::OperatorParams;

const MAX_CELLS: usize = 2048;

fn js(e: logspec::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn params(dim: usize, m: u32) -> Result<OperatorParams, JsError> {
    OperatorParams::new(dim, m).map_err(js)
}

/// First `k` Dirichlet eigenvalues of `L_m` on `(0, length)` with `cells` lattice cells.
#[wasm_bindgen]
pub fn interval_spectrum(m: u32, length: f64, cells: usize, k: usize) -> Result<Vec<f64>, JsError> {
    if cells == 0 || cells > MAX_CELLS {
        return Err(JsError::new(&format!("cells must lie in 1..={MAX_CELLS}")));
    }
    let d = LatticeDomain::interval(0.0, length, length / cells as f64).map_err(js)?;
    let method = if cells > 512 { Method::Krylov } else { Method::Dense };
    Ok(eigensolve(&d, params(1, m)?, k, method, DEFAULT_TOL).map_err(js)?.eigenvalues)
}

/// `(2 ln r)^m` on `samples` points of `[r_min, r_max]`.
#[wasm_bindgen]
pub fn symbol_curve(m: u32, r_min: f64, r_max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    let p = params(1, m)?;
    let n = samples.max(2);
    (0..n)
        .map(|i| symbol(p, r_min + (r_max - r_min) * i as f64 / (n - 1) as f64).map_err(js))
        .collect()
}

/// Kernel coefficients `α_0..α_m`.
#[wasm_bindgen]
pub fn alpha(dim: usize, m: u32) -> Result<Vec<f64>, JsError> {
    Ok(alpha_coefficients(params(dim, m)?).map_err(js)?.values)
}

/// Lower bound for `λ_{m,k}` at `k = 1..=k_max`; `lambda1` selects the case for odd `m`.
#[wasm_bindgen]
pub fn lower_bound_curve(dim: usize, m: u32, volume: f64, lambda1: Option<f64>, k_max: usize) -> Result<Vec<f64>, JsError> {
    let p = params(dim, m)?;
    (1..=k_max)
        .map(|k| Ok(eig_lower_bound_value(k, p, volume, lambda1, LogForm::Statement).map_err(js)?.value))
        .collect()
}
