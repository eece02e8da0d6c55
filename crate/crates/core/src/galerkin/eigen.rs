//! Symmetric eigensolvers for Toeplitz stiffness matrices.
//!
//! The dense path splits centrosymmetric masks into even and odd blocks
//! before calling the LAPACK-style solver, which roughly quarters the cost.
//! The Krylov path is a thick-restart Lanczos iteration with full
//! reorthogonalisation on top of the FFT product.

use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use std::f64::consts::FRAC_1_SQRT_2;

use super::apply::ToeplitzOperator;
use super::domain::LatticeDomain;
use super::stencil::{Stencil, DENSE_LIMIT};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// Column vectors over the domain cells, in the order of `values`.
    pub vectors: Vec<Vec<f64>>,
}

/// The `k` smallest eigenpairs of the dense Toeplitz matrix on `domain`.
pub fn dense_smallest(domain: &LatticeDomain, stencil: &Stencil, k: usize) -> Result<EigenPairs> {
    let n = domain.len();
    if n > DENSE_LIMIT {
        return Err(Error::Capacity { cells: n, limit: DENSE_LIMIT });
    }
    let k = k.min(n);
    let c = &domain.cells;
    let entry = |i: usize, j: usize| stencil.get([c[i][0] - c[j][0], c[i][1] - c[j][1]]);

    let blocks: Vec<(Mat<f64>, Box<dyn Fn(&[f64]) -> Vec<f64>>)> = match domain.reflection() {
        Some(r) if n >= 64 => {
            let pairs: Vec<(usize, usize)> = (0..n).filter(|&i| i < r[i]).map(|i| (i, r[i])).collect();
            let fixed: Vec<usize> = (0..n).filter(|&i| r[i] == i).collect();
            let np = pairs.len();
            let even = Mat::from_fn(np + fixed.len(), np + fixed.len(), |a, b| match (a < np, b < np) {
                (true, true) => entry(pairs[a].0, pairs[b].0) + entry(pairs[a].0, pairs[b].1),
                (true, false) => std::f64::consts::SQRT_2 * entry(pairs[a].0, fixed[b - np]),
                (false, true) => std::f64::consts::SQRT_2 * entry(fixed[a - np], pairs[b].0),
                (false, false) => entry(fixed[a - np], fixed[b - np]),
            });
            let odd = Mat::from_fn(np, np, |a, b| entry(pairs[a].0, pairs[b].0) - entry(pairs[a].0, pairs[b].1));
            let (pe, fe) = (pairs.clone(), fixed);
            let lift_even = move |y: &[f64]| {
                let mut x = vec![0.0; n];
                for (p, &(i, j)) in pe.iter().enumerate() {
                    x[i] = y[p] * FRAC_1_SQRT_2;
                    x[j] = y[p] * FRAC_1_SQRT_2;
                }
                for (f, &i) in fe.iter().enumerate() {
                    x[i] = y[np + f];
                }
                x
            };
            let lift_odd = move |y: &[f64]| {
                let mut x = vec![0.0; n];
                for (p, &(i, j)) in pairs.iter().enumerate() {
                    x[i] = y[p] * FRAC_1_SQRT_2;
                    x[j] = -y[p] * FRAC_1_SQRT_2;
                }
                x
            };
            vec![(even, Box::new(lift_even)), (odd, Box::new(lift_odd))]
        }
        _ => vec![(Mat::from_fn(n, n, entry), Box::new(|y: &[f64]| y.to_vec()))],
    };

    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(2 * k);
    for (block, lift) in &blocks {
        if block.nrows() == 0 {
            continue;
        }
        let eig = block
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("dense eigensolver: {e:?}")))?;
        let u = eig.U();
        let s = eig.S().column_vector();
        for i in 0..k.min(block.nrows()) {
            let y: Vec<f64> = (0..block.nrows()).map(|r| u[(r, i)]).collect();
            pairs.push((s[i], lift(&y)));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(k);
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(EigenPairs { values, vectors })
}

/// All eigenvalues, without vectors.
pub fn dense_eigenvalues(domain: &LatticeDomain, stencil: &Stencil) -> Result<Vec<f64>> {
    let n = domain.len();
    if n > DENSE_LIMIT {
        return Err(Error::Capacity { cells: n, limit: DENSE_LIMIT });
    }
    let c = &domain.cells;
    let m = Mat::from_fn(n, n, |i, j| stencil.get([c[i][0] - c[j][0], c[i][1] - c[j][1]]));
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("dense eigensolver: {e:?}")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Residual threshold relative to the spectral radius of the shifted operator.
    pub tol: f64,
    pub max_basis: usize,
    pub max_matvecs: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_basis: 160, max_matvecs: 50_000, seed: 0x5eed }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosResult {
    pub pairs: EigenPairs,
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    pub matvecs: usize,
    /// Absolute residual threshold that was applied.
    pub threshold: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Thick-restart Lanczos for the `k` smallest eigenpairs of the symmetric
/// operator `op` on R^n. Returns whatever has been reached when the matvec
/// budget runs out, with per-pair convergence flags.
pub fn lanczos_smallest(op: impl Fn(&[f64]) -> Vec<f64>, n: usize, k: usize, opts: LanczosOptions) -> Result<LanczosResult> {
    if k == 0 || k > n {
        return Err(Error::Input(format!("requested {k} eigenpairs of a {n}-dimensional operator")));
    }
    let max_basis = opts.max_basis.max(2 * k + 10).min(n);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let mut random_unit = |basis: &[Vec<f64>]| -> Vec<f64> {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &v);
                axpy(-c, b, &mut v);
            }
        }
        let nrm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
        v
    };

    let mut basis: Vec<Vec<f64>> = vec![random_unit(&[])];
    let mut t = vec![vec![0.0; max_basis]; max_basis];
    let mut matvecs = 0;
    let mut scale: f64 = 0.0;

    loop {
        // Expand to a full basis.
        let mut residual = vec![0.0; n];
        let mut beta = 0.0;
        while basis.len() <= max_basis {
            let j = basis.len() - 1;
            let mut w = op(&basis[j]);
            matvecs += 1;
            let mut coef = vec![0.0; basis.len()];
            for _ in 0..2 {
                for (i, b) in basis.iter().enumerate() {
                    let c = dot(b, &w);
                    coef[i] += c;
                    axpy(-c, b, &mut w);
                }
            }
            for (i, c) in coef.iter().enumerate() {
                t[i][j] = *c;
                t[j][i] = *c;
            }
            scale = scale.max(coef[j].abs());
            beta = dot(&w, &w).sqrt();
            if basis.len() == max_basis {
                residual = w;
                break;
            }
            if beta <= 1e-12 * scale.max(1.0) {
                // invariant subspace: continue with a fresh direction
                let v = random_unit(&basis);
                basis.push(v);
                beta = 0.0;
            } else {
                basis.push(w.iter().map(|x| x / beta).collect());
            }
        }

        let p = basis.len();
        let tm = Mat::from_fn(p, p, |i, j| t[i][j]);
        let eig = tm.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("projected problem: {e:?}")))?;
        let (y, theta) = (eig.U(), eig.S().column_vector());
        scale = (0..p).fold(scale, |s, i| s.max(theta[i].abs()));
        let threshold = opts.tol * scale;
        let estimates: Vec<f64> = (0..k).map(|i| (beta * y[(p - 1, i)]).abs()).collect();
        let done = estimates.iter().all(|&r| r <= threshold) || p == n;

        if done || matvecs >= opts.max_matvecs {
            let mut values = Vec::with_capacity(k);
            let mut vectors = Vec::with_capacity(k);
            let mut residuals = Vec::with_capacity(k);
            for i in 0..k {
                let mut x = vec![0.0; n];
                for (r, b) in basis.iter().enumerate() {
                    axpy(y[(r, i)], b, &mut x);
                }
                let ax = op(&x);
                let res = ax.iter().zip(&x).map(|(a, b)| (a - theta[i] * b).powi(2)).sum::<f64>().sqrt();
                values.push(theta[i]);
                vectors.push(x);
                residuals.push(res);
            }
            let converged = residuals.iter().map(|&r| r <= threshold).collect();
            return Ok(LanczosResult { pairs: EigenPairs { values, vectors }, residuals, converged, matvecs, threshold });
        }

        // Thick restart: keep the lowest Ritz vectors plus a buffer.
        let keep = (k + (p - k) / 3).min(p - 1);
        let mut kept = Vec::with_capacity(keep + 1);
        for i in 0..keep {
            let mut x = vec![0.0; n];
            for (r, b) in basis.iter().enumerate() {
                axpy(y[(r, i)], b, &mut x);
            }
            kept.push(x);
        }
        for row in t.iter_mut() {
            row.iter_mut().for_each(|v| *v = 0.0);
        }
        for i in 0..keep {
            t[i][i] = theta[i];
        }
        basis = kept;
        if beta > 0.0 {
            basis.push(residual.iter().map(|x| x / beta).collect());
        } else {
            let v = random_unit(&basis);
            basis.push(v);
        }
        // re-orthogonalise the continuation vector against the rotated basis
        let last = basis.len() - 1;
        let (head, tail) = basis.split_at_mut(last);
        for _ in 0..2 {
            for b in head.iter() {
                let c = dot(b, &tail[0]);
                axpy(-c, b, &mut tail[0]);
            }
        }
        let nrm = dot(&tail[0], &tail[0]).sqrt();
        tail[0].iter_mut().for_each(|x| *x /= nrm);
    }
}

/// The `k` smallest eigenpairs of the Toeplitz operator by shifted Lanczos.
///
/// The operator is shifted by `c = 1 + max|t| · (stencil size)`, a
/// Gershgorin bound that makes it positive definite; the shift is removed
/// from the reported values.
pub fn krylov_smallest(domain: &LatticeDomain, stencil: &Stencil, k: usize, opts: LanczosOptions) -> Result<LanczosResult> {
    let op = ToeplitzOperator::new(domain, stencil)?;
    let shift = 1.0 + stencil.max_abs() * stencil.support_size() as f64;
    let shifted = |v: &[f64]| {
        let mut y = op.apply(v);
        axpy(shift, v, &mut y);
        y
    };
    let mut out = lanczos_smallest(shifted, domain.len(), k, opts)?;
    out.pairs.values.iter_mut().for_each(|v| *v -= shift);
    Ok(out)
}
