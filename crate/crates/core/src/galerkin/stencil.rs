use faer::Mat;

use super::base_integrals::BaseIntegralTable;
use super::domain::LatticeDomain;
use crate::coeffs::binomial;
use crate::error::{Error, Result};

/// Largest cell count accepted by the dense paths.
pub const DENSE_LIMIT: usize = 20_000;

/// Offset-indexed entries `t(d)` of a Toeplitz matrix that is even in each
/// coordinate of `d` separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub dim: usize,
    pub max_offset: usize,
    values: Vec<f64>,
}

impl Stencil {
    pub(crate) fn from_fn(dim: usize, max_offset: usize, f: impl Fn([usize; 2]) -> f64) -> Self {
        let stride = if dim == 2 { max_offset + 1 } else { 1 };
        let mut values = vec![0.0; (max_offset + 1) * stride];
        for a in 0..=max_offset {
            for b in 0..stride {
                values[a * stride + b] = f([a, b]);
            }
        }
        Self { dim, max_offset, values }
    }

    pub fn get(&self, d: [i64; 2]) -> f64 {
        let stride = if self.dim == 2 { self.max_offset + 1 } else { 1 };
        self.values[d[0].unsigned_abs() as usize * stride + d[1].unsigned_abs() as usize]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Number of stored offsets counted with all sign combinations.
    pub fn support_size(&self) -> usize {
        let side = 2 * self.max_offset + 1;
        if self.dim == 2 { side * side } else { side }
    }
}

/// `t_h(d) = Σ_j C(m, j) (-2 ln h)^{m-j} I_j(d)`: the symbol `(2 ln|ξ|)^m`
/// rewritten in the lattice variable `u = h ξ`.
pub fn toeplitz_entries(table: &BaseIntegralTable, h: f64) -> Stencil {
    let m = table.m as usize;
    let shift = -2.0 * h.ln();
    let weights: Vec<f64> = (0..=m).map(|j| binomial(m, j) * shift.powi((m - j) as i32)).collect();
    Stencil::from_fn(table.dim, table.max_offset, |d| {
        let d = [d[0] as i64, d[1] as i64];
        weights.iter().enumerate().map(|(j, w)| w * table.get(j, d)).sum()
    })
}

/// `M[i][j] = t(cell_i - cell_j)`; with the normalised piecewise-constant
/// basis the mass matrix is the identity.
pub fn assemble_dense(domain: &LatticeDomain, stencil: &Stencil) -> Result<Mat<f64>> {
    let n = domain.len();
    if n > DENSE_LIMIT {
        return Err(Error::Capacity { cells: n, limit: DENSE_LIMIT });
    }
    if stencil.max_offset < domain.max_offset() {
        return Err(Error::Input("stencil does not cover the domain diameter".into()));
    }
    let c = &domain.cells;
    Ok(Mat::from_fn(n, n, |i, j| stencil.get([c[i][0] - c[j][0], c[i][1] - c[j][1]])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::OperatorParams;
    use crate::galerkin::base_integrals::{base_integrals, BaseQuadrature};

    #[test]
    fn binomial_shift_examples() {
        let p1 = OperatorParams::new(1, 1).unwrap();
        let t1 = base_integrals(p1, 3, BaseQuadrature::default()).unwrap();
        let h = 0.125;
        let s = toeplitz_entries(&t1, h);
        assert!((s.get([0, 0]) - (t1.get(1, [0, 0]) - 2.0 * h.ln())).abs() < 1e-14);
        assert!((s.get([2, 0]) - t1.get(1, [2, 0])).abs() < 1e-14);

        let p2 = OperatorParams::new(1, 2).unwrap();
        let t2 = base_integrals(p2, 3, BaseQuadrature::default()).unwrap();
        let unit = toeplitz_entries(&t2, 1.0);
        assert_eq!(unit.get([1, 0]), t2.get(2, [1, 0]));
        let half = toeplitz_entries(&t2, 0.5);
        let l = 2.0 * 2f64.ln();
        let want = t2.get(2, [0, 0]) + 2.0 * l * t2.get(1, [0, 0]) + l * l;
        assert!((half.get([0, 0]) - want).abs() < 1e-12);
    }

    #[test]
    fn dense_matrix_shape_and_symmetry() {
        let p = OperatorParams::new(2, 1).unwrap();
        let t = base_integrals(p, 8, BaseQuadrature::default()).unwrap();
        let d = LatticeDomain::disk([0.0, 0.0], 0.3, 0.1).unwrap();
        let s = toeplitz_entries(&t, d.h);
        let m = assemble_dense(&d, &s).unwrap();
        assert_eq!(m.nrows(), d.len());
        for i in 0..d.len() {
            for j in 0..d.len() {
                assert_eq!(m[(i, j)], m[(j, i)]);
            }
        }
    }
}
