//! Scalar constants attached to `L_m`: the normalising functions κ₁, κ₂ and
//! their Taylor coefficients at `s = 0`, the kernel weights α_j, the symbol,
//! and the structural constants entering the eigenvalue bounds.

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::specfun::{factorial, log_gamma, polygamma};

/// Highest Taylor order of κ that is computed; beyond it double precision
/// no longer carries useful digits.
pub const MAX_TAYLOR_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorParams {
    #[serde(rename = "N")]
    pub dim: usize,
    pub m: u32,
}

impl OperatorParams {
    pub fn new(dim: usize, m: u32) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::Unsupported(format!("dimension {dim}; only N = 1, 2 are supported")));
        }
        if m == 0 {
            return Err(Error::Input("order m must be at least 1".into()));
        }
        Ok(Self { dim, m })
    }

    pub fn n(&self) -> f64 {
        self.dim as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kappa {
    One,
    Two,
}

/// κ₁(s) = 2^{-2s} π^{-N/2} Γ((N-2s)/2) / Γ(1+s) and
/// κ₂(s) = 2^{-2s} Γ((N-2s)/2) / (Γ(N/2) Γ(1+s)).
pub fn kappa_eval(which: Kappa, s: f64, params: OperatorParams) -> Result<f64> {
    let n = params.n();
    let radius = (n / 2.0).min(1.0);
    if !(s.abs() < radius) {
        return Err(Error::domain("kappa_eval", format!("s = {s} outside (-{radius}, {radius})")));
    }
    let mut log_k = -2.0 * s * LN_2 + log_gamma((n - 2.0 * s) / 2.0)? - log_gamma(1.0 + s)?;
    log_k -= match which {
        Kappa::One => 0.5 * n * PI.ln(),
        Kappa::Two => log_gamma(n / 2.0)?,
    };
    Ok(log_k.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaTaylor {
    pub which: Kappa,
    /// Entry j is κ^{(j)}(0) / j!.
    pub coefficients: Vec<f64>,
}

impl KappaTaylor {
    /// κ^{(j)}(0).
    pub fn derivative(&self, j: usize) -> f64 {
        self.coefficients[j] * factorial(j as u32)
    }
}

/// Taylor coefficients of κ at 0 through order `order`.
///
/// `log κ` is a power series whose coefficients are polygamma values at `N/2`
/// and at 1; the series is exponentiated term by term.
pub fn kappa_taylor(which: Kappa, order: usize, params: OperatorParams) -> Result<KappaTaylor> {
    if order > MAX_TAYLOR_ORDER {
        return Err(Error::Input(format!("Taylor order {order} exceeds {MAX_TAYLOR_ORDER}")));
    }
    let half_n = params.n() / 2.0;
    let mut log_series = vec![0.0; order + 1];
    log_series[0] = match which {
        Kappa::One => -half_n * PI.ln() + log_gamma(half_n)?,
        Kappa::Two => 0.0,
    };
    for k in 1..=order {
        let kf = factorial(k as u32);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let p = (k - 1) as u32;
        log_series[k] = (sign * polygamma(p, half_n)? - polygamma(p, 1.0)?) / kf;
    }
    if order >= 1 {
        log_series[1] -= 2.0 * LN_2;
    }
    Ok(KappaTaylor {
        which,
        coefficients: exp_series(&log_series),
    })
}

/// Coefficients of `exp(c(s))` given those of the power series `c(s)`.
pub(crate) fn exp_series(c: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0; c.len()];
    if c.is_empty() {
        return b;
    }
    b[0] = c[0].exp();
    for n in 1..c.len() {
        let acc: f64 = (1..=n).map(|k| k as f64 * c[k] * b[n - k]).sum();
        b[n] = acc / n as f64;
    }
    b
}

/// Taylor coefficients of `1/Γ(1 - s)` at 0 through `order`, from
/// `ln Γ(1 - s) = γ s + Σ_{k≥2} ζ(k) s^k / k`.
pub(crate) fn recip_gamma_one_minus(order: usize) -> Vec<f64> {
    let mut log_series = vec![0.0; order + 1];
    for k in 1..=order {
        let p = (k - 1) as u32;
        // ψ^{(k-1)}(1) = (-1)^k (k-1)! ζ(k), and ψ(1) = -γ
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let zeta_like = sign * polygamma(p, 1.0).expect("positive argument") / factorial(p);
        log_series[k] = -zeta_like / k as f64;
    }
    exp_series(&log_series)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaCoefficients {
    pub m: u32,
    pub values: Vec<f64>,
}

/// α_0 = (-1)^m κ₂^{(m)}(0) and α_j = m (-1)^{m+j} C(m-1, j-1) κ₁^{(m-j)}(0).
pub fn alpha_coefficients(params: OperatorParams) -> Result<AlphaCoefficients> {
    let m = params.m as usize;
    let k1 = kappa_taylor(Kappa::One, m, params)?;
    let k2 = kappa_taylor(Kappa::Two, m, params)?;
    let parity = |e: usize| if e % 2 == 0 { 1.0 } else { -1.0 };
    let mut values = Vec::with_capacity(m + 1);
    values.push(parity(m) * k2.derivative(m));
    for j in 1..=m {
        values.push(m as f64 * parity(m + j) * binomial(m - 1, j - 1) * k1.derivative(m - j));
    }
    Ok(AlphaCoefficients { m: params.m, values })
}

/// The Fourier symbol `(2 ln|ξ|)^m`.
pub fn symbol(params: OperatorParams, xi_norm: f64) -> Result<f64> {
    if xi_norm == 0.0 {
        return Err(Error::Singularity);
    }
    if !(xi_norm > 0.0) {
        return Err(Error::domain("symbol", format!("|ξ| = {xi_norm} must be positive")));
    }
    Ok((2.0 * xi_norm.ln()).powi(params.m as i32))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralConstants {
    /// Surface measure of the unit sphere S^{N-1}.
    pub omega_n: f64,
    pub t_n: f64,
    /// `a_table[j - 1] = A_{m,j} = 2^j m!/(m-j)!`.
    pub a_table: Vec<f64>,
    /// ∫_{B_1} |ln|ξ||^m dξ.
    pub c_int: f64,
    pub a_m: f64,
    pub b_m: f64,
    pub c_m: f64,
}

impl StructuralConstants {
    pub fn a_mj(&self, j: usize) -> f64 {
        self.a_table[j - 1]
    }
}

pub fn sphere_measure(dim: usize) -> f64 {
    let half = dim as f64 / 2.0;
    2.0 * PI.powf(half) / log_gamma(half).expect("positive").exp()
}

pub fn structural_constants(params: OperatorParams) -> StructuralConstants {
    let n = params.n();
    let m = params.m;
    let mi = m as i32;
    let omega_n = sphere_measure(params.dim);
    let two_pi_n = (2.0 * PI).powi(params.dim as i32);
    let m_fact = factorial(m);
    let a_table = (1..=m)
        .map(|j| {
            let falling: u64 = ((m - j + 1)..=m).map(u64::from).product();
            (falling << j) as f64
        })
        .collect();
    let a_m = n.powi(mi + 1) / (2f64.powi(mi) * m as f64) * two_pi_n / omega_n;
    let b_m = 2f64.powi(mi) * ((m - 1) as f64).powi(mi) / n.powi(mi) + 1.0 / n.powi(mi);
    StructuralConstants {
        omega_n,
        t_n: omega_n / two_pi_n,
        a_table,
        c_int: omega_n * m_fact / n.powi(mi + 1),
        a_m,
        b_m,
        c_m: a_m * b_m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::EULER_GAMMA;

    fn p(dim: usize, m: u32) -> OperatorParams {
        OperatorParams::new(dim, m).unwrap()
    }

    #[test]
    fn kappa_at_zero() {
        assert!((kappa_eval(Kappa::One, 0.0, p(1, 1)).unwrap() - 1.0).abs() < 1e-14);
        assert!((kappa_eval(Kappa::One, 0.0, p(2, 1)).unwrap() - 1.0 / PI).abs() < 1e-14);
        for dim in [1, 2] {
            assert!((kappa_eval(Kappa::Two, 0.0, p(dim, 1)).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(kappa_eval(Kappa::One, 0.5, p(1, 1)).is_err());
        assert!(kappa_eval(Kappa::One, 0.9, p(2, 1)).is_ok());
    }

    #[test]
    fn taylor_low_orders() {
        let t = kappa_taylor(Kappa::Two, 3, p(2, 1)).unwrap();
        assert!((t.coefficients[0] - 1.0).abs() < 1e-15);
        assert!((t.coefficients[1] - (-0.231_863_031_316_824_9)).abs() < 1e-14);
        let t = kappa_taylor(Kappa::One, 2, p(1, 1)).unwrap();
        assert!((t.coefficients[2] - 2.311_289_914_463_663_8).abs() < 1e-13);
        assert!(kappa_taylor(Kappa::One, 13, p(1, 1)).is_err());
    }

    #[test]
    fn taylor_constant_matches_closed_form() {
        for dim in [1, 2] {
            for which in [Kappa::One, Kappa::Two] {
                let t = kappa_taylor(which, 4, p(dim, 1)).unwrap();
                let direct = kappa_eval(which, 0.0, p(dim, 1)).unwrap();
                assert!((t.coefficients[0] - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn alpha_examples() {
        for dim in [1usize, 2] {
            let a = alpha_coefficients(p(dim, 1)).unwrap();
            let k1 = kappa_eval(Kappa::One, 0.0, p(dim, 1)).unwrap();
            assert!((a.values[1] - k1).abs() < 1e-14);
            let expected = 2.0 * LN_2 + polygamma(0, dim as f64 / 2.0).unwrap() - EULER_GAMMA;
            assert!((a.values[0] - expected).abs() < 1e-12);
            let a2 = alpha_coefficients(p(dim, 2)).unwrap();
            assert_eq!(a2.values.len(), 3);
            assert!((a2.values[2] - 2.0 * k1).abs() < 1e-14);
        }
    }

    #[test]
    fn symbol_values() {
        assert_eq!(symbol(p(1, 2), 1.0).unwrap(), 0.0);
        assert!((symbol(p(1, 2), 0.5f64.exp()).unwrap() - 1.0).abs() < 1e-14);
        assert!((symbol(p(1, 3), (-1f64).exp()).unwrap() + 8.0).abs() < 1e-13);
        assert!(matches!(symbol(p(1, 1), 0.0), Err(Error::Singularity)));
    }

    #[test]
    fn structural_examples() {
        let s = structural_constants(p(1, 1));
        assert!((s.omega_n - 2.0).abs() < 1e-14);
        assert!((s.t_n - 1.0 / PI).abs() < 1e-15);
        assert!((s.c_int - 2.0).abs() < 1e-14);
        let s = structural_constants(p(2, 2));
        assert!((s.a_m - 2.0 * PI).abs() < 1e-12);
        assert!((s.b_m - 1.25).abs() < 1e-15);
        assert!((s.c_m - 2.5 * PI).abs() < 1e-12);
        assert_eq!(structural_constants(p(1, 4)).a_table, vec![8.0, 48.0, 192.0, 384.0]);
    }

    #[test]
    fn c_int_matches_radial_quadrature() {
        use crate::quad::integrate_graded_origin;
        for dim in [1usize, 2] {
            for m in 1..=5u32 {
                let s = structural_constants(p(dim, m));
                let radial = integrate_graded_origin(
                    |r| (-r.ln()).powi(m as i32) * r.powi(dim as i32 - 1),
                    1.0,
                    1e-14,
                );
                assert!((s.omega_n * radial - s.c_int).abs() < 1e-8, "N={dim} m={m}");
            }
        }
    }

    #[test]
    fn recip_gamma_series_matches_direct() {
        let r = recip_gamma_one_minus(10);
        assert!((r[0] - 1.0).abs() < 1e-15);
        assert!((r[1] + EULER_GAMMA).abs() < 1e-15);
        let s: f64 = 0.01;
        let series: f64 = r.iter().enumerate().map(|(k, c)| c * s.powi(k as i32)).sum();
        let direct = 1.0 / log_gamma(1.0 - s).unwrap().exp();
        assert!((series - direct).abs() < 1e-12);
    }
}
