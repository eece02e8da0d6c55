//! Matrix-free Toeplitz products by circular convolution on a padded grid.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use super::domain::LatticeDomain;
use super::stencil::Stencil;
use crate::error::{Error, Result};

pub struct ToeplitzOperator {
    n: usize,
    grid: [usize; 2],
    positions: Vec<usize>,
    kernel_hat: Vec<Complex64>,
    fwd: [Arc<dyn Fft<f64>>; 2],
    inv: [Arc<dyn Fft<f64>>; 2],
}

impl std::fmt::Debug for ToeplitzOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToeplitzOperator").field("n", &self.n).field("grid", &self.grid).finish()
    }
}

impl ToeplitzOperator {
    pub fn new(domain: &LatticeDomain, stencil: &Stencil) -> Result<Self> {
        if stencil.max_offset < domain.max_offset() {
            return Err(Error::Input("stencil does not cover the domain diameter".into()));
        }
        let extent = domain.extent();
        // at least twice the extent, so wrap-around never aliases two cells
        let grid = [
            (2 * extent[0]).next_power_of_two(),
            if domain.dim == 2 { (2 * extent[1]).next_power_of_two() } else { 1 },
        ];
        let (lo, _) = domain.bounding_box();
        let positions = domain
            .cells
            .iter()
            .map(|c| (c[0] - lo[0]) as usize * grid[1] + (c[1] - lo[1]) as usize)
            .collect();

        let mut planner = FftPlanner::new();
        let fwd = [planner.plan_fft_forward(grid[0]), planner.plan_fft_forward(grid[1])];
        let inv = [planner.plan_fft_inverse(grid[0]), planner.plan_fft_inverse(grid[1])];

        let mut kernel = vec![Complex64::new(0.0, 0.0); grid[0] * grid[1]];
        let wrap = |d: i64, p: usize| d.rem_euclid(p as i64) as usize;
        for d0 in -(extent[0] as i64 - 1)..=(extent[0] as i64 - 1) {
            for d1 in -(extent[1] as i64 - 1)..=(extent[1] as i64 - 1) {
                kernel[wrap(d0, grid[0]) * grid[1] + wrap(d1, grid[1])] = Complex64::new(stencil.get([d0, d1]), 0.0);
            }
        }
        let mut op = Self { n: domain.len(), grid, positions, kernel_hat: Vec::new(), fwd, inv };
        op.transform(&mut kernel, false);
        op.kernel_hat = kernel;
        Ok(op)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let [p0, p1] = self.grid;
        let plans = if inverse { &self.inv } else { &self.fwd };
        if p1 > 1 {
            for row in data.chunks_exact_mut(p1) {
                plans[1].process(row);
            }
        }
        let mut column = vec![Complex64::new(0.0, 0.0); p0];
        for c in 0..p1 {
            for r in 0..p0 {
                column[r] = data[r * p1 + c];
            }
            plans[0].process(&mut column);
            for r in 0..p0 {
                data[r * p1 + c] = column[r];
            }
        }
    }

    /// `y = M v` restricted to the domain cells.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "vector length does not match the domain");
        let size = self.grid[0] * self.grid[1];
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (&p, &x) in self.positions.iter().zip(v) {
            buf[p] = Complex64::new(x, 0.0);
        }
        self.transform(&mut buf, false);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.transform(&mut buf, true);
        let scale = 1.0 / size as f64;
        self.positions.iter().map(|&p| buf[p].re * scale).collect()
    }
}

/// One-shot matrix-free product.
pub fn apply_operator(domain: &LatticeDomain, stencil: &Stencil, v: &[f64]) -> Result<Vec<f64>> {
    Ok(ToeplitzOperator::new(domain, stencil)?.apply(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galerkin::stencil::assemble_dense;
    use rand::{Rng, SeedableRng};

    fn toy_stencil(dim: usize, max_offset: usize) -> Stencil {
        Stencil::from_fn(dim, max_offset, |d| 1.0 / (1.0 + (d[0] * d[0] + 3 * d[1] * d[1]) as f64))
    }

    #[test]
    fn matches_dense_on_disk_and_interval() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for domain in [
            LatticeDomain::interval(0.0, 1.0, 1.0 / 16.0).unwrap(),
            LatticeDomain::disk([0.1, -0.2], 0.45, 0.05).unwrap(),
        ] {
            let s = toy_stencil(domain.dim, domain.max_offset());
            let dense = assemble_dense(&domain, &s).unwrap();
            let op = ToeplitzOperator::new(&domain, &s).unwrap();
            let v: Vec<f64> = (0..domain.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y = op.apply(&v);
            for i in 0..domain.len() {
                let want: f64 = (0..domain.len()).map(|j| dense[(i, j)] * v[j]).sum();
                assert!((y[i] - want).abs() < 1e-12 * (1.0 + want.abs()));
            }
        }
    }

    #[test]
    fn trivial_inputs() {
        let d = LatticeDomain::interval(0.0, 0.1, 0.1).unwrap();
        let s = toy_stencil(1, 0);
        assert!((apply_operator(&d, &s, &[2.0]).unwrap()[0] - 2.0).abs() < 1e-15);
        let d = LatticeDomain::interval(0.0, 1.0, 0.1).unwrap();
        let s = toy_stencil(1, 9);
        assert!(apply_operator(&d, &s, &[0.0; 10]).unwrap().iter().all(|&y| y == 0.0));
    }
}
