//! Gamma-family special functions and the Bessel function of the first kind.
//!
//! Everything here is evaluated on the positive half-line only. The gamma
//! family uses an upward recurrence shift followed by the Stirling /
//! Bernoulli asymptotic series; the Bessel function is a plain power series,
//! which is accurate on the bounded argument range the bounds module uses.

use crate::error::{Error, Result};

/// Bernoulli numbers B_2, B_4, ..., B_30.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Argument above which log-gamma switches to the Stirling series.
const STIRLING_SHIFT: f64 = 15.0;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("argument {x} must be positive and finite")));
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < STIRLING_SHIFT {
        prod *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(9).enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += b / (two_k * (two_k - 1.0)) * pow;
        pow *= inv2;
    }
    let stirling = (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series;
    Ok(stirling - prod.ln())
}

/// `Γ(x)` for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)`.
pub fn digamma(x: f64) -> Result<f64> {
    polygamma(0, x)
}

/// Polygamma `ψ^(order)(x)`; order 0 is the digamma function.
pub fn polygamma(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("polygamma", format!("argument {x} must be positive and finite")));
    }
    let n = order as i32;
    let threshold = 10.0 + order as f64;

    // ψ^(n)(x) = ψ^(n)(x + 1) - (-1)^n n! / x^(n+1)
    let mut z = x;
    let mut shift = 0.0;
    while z < threshold {
        shift += z.powi(-(n + 1));
        z += 1.0;
    }
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    let n_fact = factorial(order);

    let asym = if order == 0 {
        let inv2 = 1.0 / (z * z);
        let mut sum = z.ln() - 0.5 / z;
        let mut pow = inv2;
        for (k, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
            let two_k = 2.0 * (k as f64 + 1.0);
            sum -= b / two_k * pow;
            pow *= inv2;
        }
        sum
    } else {
        // (-1)^(n+1) [ (n-1)!/z^n + n!/(2 z^(n+1)) + Σ B_2k (2k+n-1)!/((2k)! z^(2k+n)) ]
        let mut sum = factorial(order - 1) / z.powi(n) + n_fact / (2.0 * z.powi(n + 1));
        let inv2 = 1.0 / (z * z);
        let mut pow = z.powi(-n) * inv2;
        // ratio (2k+n-1)!/(2k)!, updated incrementally
        let mut ratio = factorial(order + 1) / 2.0;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            let kk = k as f64 + 1.0;
            if k > 0 {
                let two_k = 2.0 * kk;
                ratio *= (two_k + n as f64 - 2.0) * (two_k + n as f64 - 1.0) / ((two_k - 1.0) * two_k);
            }
            let term = b * ratio * pow;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
            pow *= inv2;
        }
        -sign * sum
    };
    Ok(asym - sign * n_fact * shift)
}

/// Bessel function of the first kind `J_order(t)` by its power series
/// `(t/2)^l Σ (-1)^j / (j! Γ(j+l+1)) (t/2)^(2j)`.
///
/// Summation stops once a term drops below `1e-15` times the running sum.
/// Intended for `t ≤ 2 sqrt(2 (order + 2))`; larger arguments lose digits to
/// cancellation.
pub fn bessel_j(order: f64, t: f64) -> Result<f64> {
    if !(order >= -0.5) {
        return Err(Error::domain("bessel_j", format!("order {order} must be at least -1/2")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("bessel_j", format!("argument {t} must be non-negative")));
    }
    if t == 0.0 {
        return if order == 0.0 {
            Ok(1.0)
        } else if order > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::domain("bessel_j", "negative order is singular at t = 0"))
        };
    }
    let half = 0.5 * t;
    let mut term = (order * half.ln() - log_gamma(order + 1.0)?).exp();
    let mut sum = term;
    let q = -half * half;
    for j in 1..500 {
        let jf = j as f64;
        term *= q / (jf * (jf + order));
        sum += term;
        if term.abs() < 1e-15 * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

/// A validated polygamma evaluation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygammaRequest {
    pub order: u32,
    pub argument: f64,
}

impl PolygammaRequest {
    pub fn new(order: u32, argument: f64) -> Result<Self> {
        if !(argument > 0.0) {
            return Err(Error::domain("polygamma", format!("argument {argument} must be positive")));
        }
        Ok(Self { order, argument })
    }

    pub fn eval(&self) -> f64 {
        polygamma(self.order, self.argument).expect("validated at construction")
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
