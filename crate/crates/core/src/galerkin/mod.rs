//! Dirichlet eigenvalues of `L_m` by conforming Galerkin approximation.
//!
//! The trial space is spanned by normalised indicators of the lattice cells
//! inside Ω. Its mass matrix is the identity and its stiffness matrix is
//! Toeplitz, `M[i][j] = t_h(cell_i - cell_j)`, with `t_h` a binomial
//! combination of the h-independent [`base_integrals`]. By min-max, every
//! computed eigenvalue is an upper bound for the exact one.

pub mod apply;
pub mod base_integrals;
pub mod domain;
pub mod eigen;
pub mod extrapolate;
pub mod stencil;
pub mod torus;

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use apply::{apply_operator, ToeplitzOperator};
pub use base_integrals::{base_integrals, BaseIntegralTable, BaseQuadrature};
pub use domain::{DomainDescriptor, LatticeDomain};
pub use eigen::LanczosOptions;
pub use extrapolate::{refine_extrapolate, Extrapolated};
pub use stencil::{assemble_dense, toeplitz_entries, Stencil, DENSE_LIMIT};

use crate::coeffs::OperatorParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Krylov,
    Torus,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Method::Dense),
            "krylov" => Ok(Method::Krylov),
            "torus" => Ok(Method::Torus),
            other => Err(Error::Input(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSummary {
    pub descriptor: DomainDescriptor,
    pub h: f64,
    pub cells: usize,
    pub volume: f64,
}

impl From<&LatticeDomain> for DomainSummary {
    fn from(d: &LatticeDomain) -> Self {
        Self { descriptor: d.descriptor.clone(), h: d.h, cells: d.len(), volume: d.volume }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub params: OperatorParams,
    pub domain: DomainSummary,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<usize>,
    /// Absolute residual threshold the pairs were checked against.
    pub tolerance: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

/// Process-wide cache of base tables, keyed by `(N, m)`; a request for a
/// larger offset range replaces the cached table.
pub fn base_table(params: OperatorParams, max_offset: usize) -> Result<Arc<BaseIntegralTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<BaseIntegralTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("table cache poisoned").get(&(params.dim, params.m)) {
        if t.covers(params, max_offset) {
            return Ok(t.clone());
        }
    }
    let table = Arc::new(base_integrals(params, max_offset, BaseQuadrature::default())?);
    cache.lock().expect("table cache poisoned").insert((params.dim, params.m), table.clone());
    Ok(table)
}

/// Galerkin stencil `t_h` for `domain`.
pub fn galerkin_stencil(domain: &LatticeDomain, params: OperatorParams) -> Result<Stencil> {
    if domain.dim != params.dim {
        return Err(Error::Input(format!("domain is {}-dimensional but N = {}", domain.dim, params.dim)));
    }
    let table = base_table(params, domain.max_offset())?;
    let mut s = toeplitz_entries(&table, domain.h);
    if s.max_offset > domain.max_offset() {
        s = Stencil::from_fn(s.dim, domain.max_offset(), |d| s.get([d[0] as i64, d[1] as i64]));
    }
    Ok(s)
}

struct Solved {
    values: Vec<f64>,
    residuals: Vec<f64>,
    converged: Vec<bool>,
    threshold: f64,
}

fn solve_stencil(domain: &LatticeDomain, stencil: &Stencil, k: usize, method: Method, tol: f64) -> Result<Solved> {
    if k == 0 || k > domain.len() {
        return Err(Error::Input(format!("k = {k} must lie in 1..={}", domain.len())));
    }
    match method {
        Method::Krylov => {
            let opts = LanczosOptions { tol, ..Default::default() };
            let r = eigen::krylov_smallest(domain, stencil, k, opts)?;
            Ok(Solved { values: r.pairs.values, residuals: r.residuals, converged: r.converged, threshold: r.threshold })
        }
        Method::Dense | Method::Torus => {
            let pairs = eigen::dense_smallest(domain, stencil, k)?;
            let op = ToeplitzOperator::new(domain, stencil)?;
            let residuals: Vec<f64> = pairs
                .values
                .iter()
                .zip(&pairs.vectors)
                .map(|(lam, v)| op.apply(v).iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt())
                .collect();
            // ‖M‖ ≥ the 2-norm of a full stencil row
            let mut row = 0.0;
            let m = stencil.max_offset as i64;
            let m1 = if stencil.dim == 2 { m } else { 0 };
            for a in -m..=m {
                for b in -m1..=m1 {
                    row += stencil.get([a, b]).powi(2);
                }
            }
            let threshold = tol * row.sqrt();
            let converged = residuals.iter().map(|&r| r <= threshold).collect();
            Ok(Solved { values: pairs.values, residuals, converged, threshold })
        }
    }
}

/// The `k` smallest Galerkin eigenvalues on `domain`.
pub fn eigensolve(domain: &LatticeDomain, params: OperatorParams, k: usize, method: Method, tol: f64) -> Result<Spectrum> {
    if method == Method::Torus {
        return Err(Error::Input("use torus_spectrum for the torus method".into()));
    }
    let stencil = galerkin_stencil(domain, params)?;
    let s = solve_stencil(domain, &stencil, k, method, tol)?;
    Ok(Spectrum {
        params,
        domain: domain.into(),
        eigenvalues: s.values,
        residuals: s.residuals,
        converged: s.converged,
        method,
        padding: None,
        tolerance: s.threshold,
    })
}

/// Eigenvalues of the torus multiplier compressed to Ω.
pub fn torus_spectrum(domain: &LatticeDomain, params: OperatorParams, padding: usize, k: usize, tol: f64) -> Result<Spectrum> {
    let stencil = torus::torus_stencil(domain, params, padding)?;
    let s = solve_stencil(domain, &stencil, k, Method::Torus, tol)?;
    Ok(Spectrum {
        params,
        domain: domain.into(),
        eigenvalues: s.values,
        residuals: s.residuals,
        converged: s.converged,
        method: Method::Torus,
        padding: Some(padding),
        tolerance: s.threshold,
    })
}

pub const DEFAULT_TOL: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_and_pair_cells() {
        let p = OperatorParams::new(1, 1).unwrap();
        let one = LatticeDomain::interval(0.0, 0.25, 0.25).unwrap();
        let s = eigensolve(&one, p, 1, Method::Dense, DEFAULT_TOL).unwrap();
        let t = base_table(p, 1).unwrap();
        let want = t.get(1, [0, 0]) - 2.0 * 0.25f64.ln();
        assert!((s.eigenvalues[0] - want).abs() < 1e-12);

        let two = LatticeDomain::interval(0.0, 0.5, 0.25).unwrap();
        let s = eigensolve(&two, p, 2, Method::Dense, DEFAULT_TOL).unwrap();
        let off = t.get(1, [1, 0]);
        assert!((s.eigenvalues[0] - (want - off.abs())).abs() < 1e-12);
        assert!((s.eigenvalues[1] - (want + off.abs())).abs() < 1e-12);
    }

    #[test]
    fn trace_identity() {
        let p = OperatorParams::new(1, 2).unwrap();
        let d = LatticeDomain::interval(0.0, 1.0, 1.0 / 40.0).unwrap();
        let s = eigensolve(&d, p, d.len(), Method::Dense, DEFAULT_TOL).unwrap();
        let st = galerkin_stencil(&d, p).unwrap();
        let trace = st.get([0, 0]) * d.len() as f64;
        assert!((s.eigenvalues.iter().sum::<f64>() - trace).abs() < 1e-8 * trace.abs());
        assert!(s.all_converged());
        assert!(s.eigenvalues[0] >= -1e-8);
    }

    #[test]
    fn torus_rejects_via_eigensolve() {
        let p = OperatorParams::new(1, 1).unwrap();
        let d = LatticeDomain::interval(0.0, 1.0, 0.25).unwrap();
        assert!(eigensolve(&d, p, 1, Method::Torus, DEFAULT_TOL).is_err());
        assert!(eigensolve(&d, p, 5, Method::Dense, DEFAULT_TOL).is_err());
    }
}
