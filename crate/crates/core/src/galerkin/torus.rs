//! An independent discretisation for cross-validation: the multiplier
//! `(2 ln|ξ|)^m` on a periodic grid of `padding ×` the bounding box,
//! compressed to the cells of Ω.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::domain::LatticeDomain;
use super::stencil::Stencil;
use crate::coeffs::{symbol, OperatorParams};
use crate::error::{Error, Result};
use crate::specfun::factorial;

/// Mean of `(2 ln ρ)^m` over the ball of radius `rho` in R^N, from
/// `∫_0^r (ln ρ)^m ρ^{N-1} dρ = r^N Σ_j (-1)^j m!/((m-j)! N^{j+1}) (ln r)^{m-j}`.
pub fn symbol_ball_average(params: OperatorParams, rho: f64) -> f64 {
    let (m, n) = (params.m, params.n());
    let l = rho.ln();
    let sum: f64 = (0..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial(m) / factorial(m - j) / n.powi(j as i32 + 1) * l.powi((m - j) as i32)
        })
        .sum();
    n * 2f64.powi(m as i32) * sum
}

/// Kernel `c(d)` of the compressed torus multiplier.
pub fn torus_stencil(domain: &LatticeDomain, params: OperatorParams, padding: usize) -> Result<Stencil> {
    if padding < 4 {
        return Err(Error::Input(format!("torus padding {padding} must be at least 4")));
    }
    let h = domain.h;
    let extent = domain.extent();
    let grid = [padding * extent[0], if domain.dim == 2 { padding * extent[1] } else { 1 }];
    let cell_measure: f64 = (0..domain.dim).map(|k| 2.0 * PI / (grid[k] as f64 * h)).product();
    let rho0 = if domain.dim == 1 { 0.5 * cell_measure } else { (cell_measure / PI).sqrt() };

    let freq = |q: usize, p: usize| {
        let signed = if q <= p / 2 { q as f64 } else { q as f64 - p as f64 };
        2.0 * PI * signed / (p as f64 * h)
    };
    let mut data = vec![Complex64::new(0.0, 0.0); grid[0] * grid[1]];
    for q0 in 0..grid[0] {
        for q1 in 0..grid[1] {
            let xi = freq(q0, grid[0]).hypot(if grid[1] > 1 { freq(q1, grid[1]) } else { 0.0 });
            let value = if q0 == 0 && q1 == 0 { symbol_ball_average(params, rho0) } else { symbol(params, xi)? };
            data[q0 * grid[1] + q1] = Complex64::new(value, 0.0);
        }
    }
    let mut planner = FftPlanner::new();
    let rows = planner.plan_fft_inverse(grid[1]);
    let cols = planner.plan_fft_inverse(grid[0]);
    for row in data.chunks_exact_mut(grid[1]) {
        rows.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); grid[0]];
    for c in 0..grid[1] {
        for r in 0..grid[0] {
            column[r] = data[r * grid[1] + c];
        }
        cols.process(&mut column);
        for r in 0..grid[0] {
            data[r * grid[1] + c] = column[r];
        }
    }
    let norm = 1.0 / (grid[0] * grid[1]) as f64;
    Ok(Stencil::from_fn(domain.dim, domain.max_offset(), |d| data[d[0] * grid[1] + d[1]].re * norm))
}
