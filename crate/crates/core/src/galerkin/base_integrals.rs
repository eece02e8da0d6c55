//! The h-independent integrals
//!
//! ```text
//! I_j(d) = (2π)^{-N} ∫ (2 ln|u|)^j  Π_i sinc²(u_i / 2)  cos(u·d) du
//! ```
//!
//! `Π sinc²(u_i/2)` is the transform of the tensor hat `Λ(x) = Π (1 - |x_i|)_+`,
//! so `I(s, d) = ((-Δ)^s Λ)(d)` and `I_j(d) = ∂_s^j I(s, d)` at `s = 0`.
//! Instead of integrating the slowly decaying oscillatory integrand in `u`,
//! the fractional power is written through the heat semigroup,
//!
//! ```text
//! I(s, d) = [ W(d) - s ∫_0^∞ t^{-s-1} (H_t(d) - W(d) 1_{t<1}) dt ] / Γ(1 - s),
//! ```
//!
//! with `W(d) = Λ(d) = δ_{d,0}` and `H_t = e^{tΔ}Λ` a product of Gaussian-smoothed
//! hats. After `t = e^x`, the s-derivatives at 0 reduce to the log-moments
//! `Q_i(d) = ∫ x^i (H_{e^x}(d) - W(d) 1_{x<0}) dx` of a smooth, exponentially
//! decaying integrand.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::coeffs::{recip_gamma_one_minus, OperatorParams};
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::specfun::factorial;

const X_LO: f64 = -150.0;
const X_HI: f64 = 200.0;

/// Settings for the log-time quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseQuadrature {
    pub panel_width: f64,
    pub points: usize,
    /// Agreement required between this rule and a rule with half-width panels
    /// and more points, checked on sample offsets.
    pub tolerance: f64,
}

impl Default for BaseQuadrature {
    fn default() -> Self {
        Self { panel_width: 2.0, points: 24, tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseIntegralTable {
    pub dim: usize,
    pub m: u32,
    pub max_offset: usize,
    /// `values[j][|d_1| * stride + |d_2|]`, `stride = max_offset + 1` for N = 2, else 1.
    values: Vec<Vec<f64>>,
}

impl BaseIntegralTable {
    fn stride(&self) -> usize {
        if self.dim == 2 { self.max_offset + 1 } else { 1 }
    }

    /// `I_j(d)`; panics if `d` lies outside the table.
    pub fn get(&self, j: usize, d: [i64; 2]) -> f64 {
        let (a, b) = (d[0].unsigned_abs() as usize, d[1].unsigned_abs() as usize);
        assert!(a <= self.max_offset && b <= self.max_offset, "offset {d:?} outside table");
        self.values[j][a * self.stride() + b]
    }

    pub fn covers(&self, params: OperatorParams, max_offset: usize) -> bool {
        self.dim == params.dim && self.m >= params.m && self.max_offset >= max_offset
    }
}

/// Tabulates `I_j(d)` for `0 ≤ j ≤ m` and `|d_k| ≤ max_offset`.
pub fn base_integrals(params: OperatorParams, max_offset: usize, quad: BaseQuadrature) -> Result<BaseIntegralTable> {
    let m = params.m as usize;
    let coarse = LogTimeRule::new(quad.panel_width, quad.points);
    let fine = LogTimeRule::new(0.5 * quad.panel_width, quad.points + 8);
    let recip = recip_gamma_one_minus(m);

    let offsets: Vec<[usize; 2]> = if params.dim == 1 {
        (0..=max_offset).map(|a| [a, 0]).collect()
    } else {
        (0..=max_offset).flat_map(|a| (0..=a).map(move |b| [a, b])).collect()
    };

    // G_t(a) on the coarse nodes for every |a| is reused across all 2D offsets.
    let hats: Option<Vec<Vec<f64>>> = (params.dim == 2).then(|| {
        (0..=max_offset).map(|a| coarse.sigmas.iter().map(|&s| smoothed_hat(a as f64, s)).collect()).collect()
    });

    let eval = |d: &[usize; 2]| -> Vec<f64> {
        let q = match &hats {
            Some(h) => coarse.moments(m, d[0] == 0 && d[1] == 0, |k| h[d[0]][k] * h[d[1]][k]),
            None => coarse.moments(m, d[0] == 0, |k| smoothed_hat(d[0] as f64, coarse.sigmas[k])),
        };
        integrals_from_moments(&q, &recip, d[0] == 0 && d[1] == 0)
    };

    #[cfg(feature = "parallel")]
    let columns: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        offsets.par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let columns: Vec<Vec<f64>> = offsets.iter().map(eval).collect();

    // Error control: compare against the refined rule on sample offsets.
    let samples: Vec<[usize; 2]> = {
        let mut s = vec![[0, 0], [max_offset.min(1), 0], [max_offset, 0]];
        if params.dim == 2 {
            s.push([max_offset.min(1), max_offset.min(1)]);
            s.push([max_offset, max_offset / 2]);
        }
        s
    };
    let mut worst: f64 = 0.0;
    for d in &samples {
        let q = fine.moments(m, d[0] == 0 && d[1] == 0, |k| {
            let s = fine.sigmas[k];
            let g = smoothed_hat(d[0] as f64, s);
            if params.dim == 2 { g * smoothed_hat(d[1] as f64, s) } else { g }
        });
        let reference = integrals_from_moments(&q, &recip, d[0] == 0 && d[1] == 0);
        let idx = offsets.iter().position(|o| o == d).expect("sample offsets are tabulated");
        for (a, b) in columns[idx].iter().zip(&reference) {
            worst = worst.max((a - b).abs() / (1.0 + b.abs()));
        }
    }
    if worst > quad.tolerance {
        return Err(Error::Quadrature { what: "base integrals", achieved: worst, tolerance: quad.tolerance });
    }

    let stride = if params.dim == 2 { max_offset + 1 } else { 1 };
    let size = (max_offset + 1) * stride;
    let mut values = vec![vec![0.0; size]; m + 1];
    for (d, col) in offsets.iter().zip(&columns) {
        for (j, v) in col.iter().enumerate() {
            values[j][d[0] * stride + d[1]] = *v;
            if params.dim == 2 {
                values[j][d[1] * stride + d[0]] = *v;
            }
        }
    }
    Ok(BaseIntegralTable { dim: params.dim, m: params.m, max_offset, values })
}

/// `I_j = j! ( r_j W - Σ_{i<j} r_{j-1-i} (-1)^i Q_i / i! )` with `r` the
/// Taylor coefficients of `1/Γ(1 - s)`.
fn integrals_from_moments(q: &[f64], recip: &[f64], at_origin: bool) -> Vec<f64> {
    let w = if at_origin { 1.0 } else { 0.0 };
    (0..recip.len())
        .map(|j| {
            let mut acc = recip[j] * w;
            for i in 0..j {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                acc -= recip[j - 1 - i] * sign * q[i] / factorial(i as u32);
            }
            factorial(j as u32) * acc
        })
        .collect()
}

/// Composite Gauss rule in `x = ln t` with a panel boundary at `x = 0`.
struct LogTimeRule {
    xs: Vec<f64>,
    ws: Vec<f64>,
    sigmas: Vec<f64>,
}

impl LogTimeRule {
    fn new(width: f64, points: usize) -> Self {
        let rule = gauss_legendre(points);
        let panels = ((X_HI - X_LO) / width).round() as usize;
        let (mut xs, mut ws) = (Vec::new(), Vec::new());
        for p in 0..panels {
            let lo = X_LO + width * p as f64;
            let mid = lo + 0.5 * width;
            for (n, w) in rule.nodes.iter().zip(&rule.weights) {
                xs.push(mid + 0.5 * width * n);
                ws.push(0.5 * width * w);
            }
        }
        let sigmas = xs.iter().map(|x| (2.0 * x.exp()).sqrt()).collect();
        Self { xs, ws, sigmas }
    }

    /// `Q_i`, `0 ≤ i < m`, given `H` at node `k`.
    fn moments(&self, m: usize, at_origin: bool, heat: impl Fn(usize) -> f64) -> Vec<f64> {
        let mut q = vec![0.0; m];
        for (k, (&x, &w)) in self.xs.iter().zip(&self.ws).enumerate() {
            let mut g = heat(k);
            if at_origin && x < 0.0 {
                g -= 1.0;
            }
            if g == 0.0 {
                continue;
            }
            let mut xp = w * g;
            for qi in q.iter_mut() {
                *qi += xp;
                xp *= x;
            }
        }
        q
    }
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `q(z) = φ(z) - z Φ(-z)` for `z ≥ 0`.
fn q_fn(z: f64) -> f64 {
    if z > 38.0 {
        return 0.0;
    }
    if z <= 5.0 {
        return std_normal_pdf(z) - 0.5 * z * libm::erfc(z * FRAC_1_SQRT_2);
    }
    // q = φ(z) (1 - z R(z)) with the Mills-ratio continued fraction
    // R = 1/(z + 1/(z + 2/(z + 3/(…)))), rearranged to avoid cancellation.
    let mut d = z;
    for k in (2..=80).rev() {
        d = z + k as f64 / d;
    }
    std_normal_pdf(z) / (z * d + 1.0)
}

/// The hat `(1 - |a|)_+` convolved with a centred Gaussian of standard deviation `sigma`.
pub(crate) fn smoothed_hat(a: f64, sigma: f64) -> f64 {
    let a = a.abs();
    let hat = (1.0 - a).max(0.0);
    if sigma == 0.0 {
        return hat;
    }
    if sigma < 2.0 {
        if a - 1.0 > 38.0 * sigma {
            return 0.0;
        }
        return hat + sigma * (q_fn((a + 1.0) / sigma) - 2.0 * q_fn(a / sigma) + q_fn((a - 1.0).abs() / sigma));
    }
    // Moment expansion: φ_σ(a) Σ_k 2 He_{2k}(z) / (σ^{2k} (2k+2)!), z = a/σ.
    let z = a / sigma;
    if z > 40.0 {
        return 0.0;
    }
    let s = 1.0 / (sigma * sigma);
    let (mut he0, mut he1): (f64, f64) = (1.0, z); // He_{2k}, He_{2k+1}
    let mut coef: f64 = 1.0; // 2 s^k / (2k+2)!
    let mut sum: f64 = 0.0;
    let mut quiet = 0;
    for k in 0..400 {
        let term = coef * he0;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        let n = 2.0 * k as f64;
        let he2 = z * he1 - (n + 1.0) * he0;
        let he3 = z * he2 - (n + 2.0) * he1;
        he0 = he2;
        he1 = he3;
        coef *= s / ((n + 3.0) * (n + 4.0));
    }
    std_normal_pdf(z) / sigma * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_panels;

    fn p(dim: usize, m: u32) -> OperatorParams {
        OperatorParams::new(dim, m).unwrap()
    }

    #[test]
    fn smoothed_hat_matches_direct_convolution() {
        for &sigma in &[0.05, 0.7, 1.99, 2.0, 3.5, 40.0] {
            for &a in &[0.0, 0.3, 1.0, 2.5, 7.0] {
                let direct = integrate_panels(
                    |y| (1.0 - y.abs()) * std_normal_pdf((a - y) / sigma) / sigma,
                    -1.0,
                    1.0,
                    64,
                    20,
                );
                let got = smoothed_hat(a, sigma);
                assert!((got - direct).abs() < 1e-13, "a={a} σ={sigma}: {got} vs {direct}");
            }
        }
        // continuity across the switch between the two representations
        let lo = smoothed_hat(3.0, 2.0 - 1e-12);
        let hi = smoothed_hat(3.0, 2.0);
        assert!((lo - hi).abs() < 1e-12);
    }

    #[test]
    fn mills_branch_agrees_with_erfc_form() {
        for z in [5.01, 6.0, 7.5] {
            let direct = std_normal_pdf(z) - 0.5 * z * libm::erfc(z * FRAC_1_SQRT_2);
            assert!((q_fn(z) - direct).abs() < 1e-10 * direct, "z={z}");
        }
    }

    #[test]
    fn identity_symbol_is_orthonormal() {
        let t = base_integrals(p(1, 1), 4, BaseQuadrature::default()).unwrap();
        assert!((t.get(0, [0, 0]) - 1.0).abs() < 1e-12);
        for d in 1..=4 {
            assert!(t.get(0, [d, 0]).abs() < 1e-12);
        }
    }

    #[test]
    fn one_dimensional_values_match_closed_form_oracle() {
        let t = base_integrals(p(1, 3), 3, BaseQuadrature::default()).unwrap();
        let cases = [
            (1, 0, 0.845_568_670_196_934_3),
            (1, 3, -0.339_798_073_590_794_9),
            (2, 0, 8.004_854_509_715_064_7),
            (2, 1, -0.422_602_103_194_503_3),
            (3, 2, -14.528_905_165_329_593),
        ];
        for (j, d, want) in cases {
            let got = t.get(j, [d, 0]);
            assert!((got - want).abs() < 1e-10 * (1.0 + want.abs()), "I_{j}({d}) = {got}, want {want}");
            assert_eq!(got, t.get(j, [-d, 0]));
        }
    }

    #[test]
    fn two_dimensional_table_is_symmetric() {
        let t = base_integrals(p(2, 2), 3, BaseQuadrature::default()).unwrap();
        assert!((t.get(0, [0, 0]) - 1.0).abs() < 1e-12);
        assert!(t.get(0, [1, 2]).abs() < 1e-12);
        for j in 0..=2 {
            assert_eq!(t.get(j, [1, 3]), t.get(j, [3, -1]));
            assert_eq!(t.get(j, [-2, 1]), t.get(j, [2, 1]));
        }
    }
}
