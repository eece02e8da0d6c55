//! Closed-form eigenvalue bounds and Weyl-type diagnostics, packaged as
//! pass/fail certificates against computed spectra.
//!
//! Galerkin eigenvalues are upper bounds for the exact ones (min-max), so a
//! lower bound on exact eigenvalues or an upper bound on the Riesz mean of the
//! exact spectrum transfers to the computed spectrum without any tolerance.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::{E, LN_2, PI};

use crate::coeffs::{structural_constants, OperatorParams};
use crate::error::{Error, Result};
use crate::galerkin::Spectrum;
use crate::specfun::factorial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// Inequality direction between the observed value and the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// observed ≤ bound
    AtMost,
    /// observed ≥ bound
    AtLeast,
    /// bound ≤ observed ≤ bound_upper
    Within,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub name: String,
    pub inputs: Value,
    pub bound_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_upper: Option<f64>,
    pub observed_value: Option<f64>,
    pub direction: Direction,
    pub verdict: Verdict,
    /// The bound expression is on the trivially-true side (e.g. a negative
    /// upper bound on a non-negative quantity is impossible, a negative Riesz
    /// bound makes the inequality void).
    #[serde(default)]
    pub vacuous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
}

impl BoundCertificate {
    fn new(name: &str, inputs: Value, bound: f64, observed: Option<f64>, direction: Direction) -> Self {
        let verdict = match observed {
            None => Verdict::NotApplicable,
            Some(o) => {
                let ok = match direction {
                    Direction::AtMost => o <= bound,
                    Direction::AtLeast => o >= bound,
                    Direction::Within => unreachable!("use within()"),
                };
                if ok { Verdict::Pass } else { Verdict::Fail }
            }
        };
        Self {
            name: name.into(),
            inputs,
            bound_value: bound,
            bound_upper: None,
            observed_value: observed,
            direction,
            verdict,
            vacuous: false,
            branch: None,
        }
    }

    fn within(name: &str, inputs: Value, lower: f64, upper: f64, observed: Option<f64>) -> Self {
        let verdict = match observed {
            None => Verdict::NotApplicable,
            Some(o) if lower <= o && o <= upper => Verdict::Pass,
            Some(_) => Verdict::Fail,
        };
        Self {
            name: name.into(),
            inputs,
            bound_value: lower,
            bound_upper: Some(upper),
            observed_value: observed,
            direction: Direction::Within,
            verdict,
            vacuous: false,
            branch: None,
        }
    }

    fn not_applicable(mut self) -> Self {
        self.verdict = Verdict::NotApplicable;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

pub mod names {
    pub const RIESZ: &str = "riesz_mean_upper_bound";
    pub const COUNTING: &str = "counting_upper_bound";
    pub const EIG_LOWER_NONNEGATIVE: &str = "eigenvalue_lower_bound_nonnegative_case";
    pub const EIG_LOWER_NEGATIVE: &str = "eigenvalue_lower_bound_negative_first_case";
    pub const BALL: &str = "ball_first_eigenvalue_bound";
    pub const DILATION: &str = "dilation_sandwich";
    pub const SMALL_VOLUME: &str = "small_volume_curve";
    pub const LINEAR_VOLUME: &str = "linear_volume_bound";
    pub const ALTERNATING_SUM: &str = "alternating_sum_bound";
    pub const ZERO_POINT: &str = "zero_point_lower_bound";
    pub const SANDWICH: &str = "riesz_counting_sandwich";
}

// ---------------------------------------------------------------------------
// spectral functions

/// `#{k : λ_k < λ}`.
pub fn count_below(eigenvalues: &[f64], lambda: f64) -> usize {
    eigenvalues.iter().filter(|&&e| e < lambda).count()
}

/// `Σ_k (λ − λ_k)_+`.
pub fn riesz_sum(eigenvalues: &[f64], lambda: f64) -> f64 {
    eigenvalues.iter().map(|&e| (lambda - e).max(0.0)).sum()
}

pub fn counting_function(spec: &Spectrum, lambda: f64) -> usize {
    count_below(&spec.eigenvalues, lambda)
}

pub fn riesz_mean(spec: &Spectrum, lambda: f64) -> f64 {
    riesz_sum(&spec.eigenvalues, lambda)
}

// ---------------------------------------------------------------------------
// Riesz-mean and counting upper bounds

/// `Σ_{j=1}^m (−1)^{j+1} (A_{m,j}/N^{j+1}) a^{m−j}`.
pub fn alternating_sum(params: OperatorParams, a: f64) -> f64 {
    let c = structural_constants(params);
    let n = params.n();
    (1..=params.m as usize)
        .map(|j| {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            sign * c.a_mj(j) / n.powi(j as i32 + 1) * a.powi((params.m as usize - j) as i32)
        })
        .sum()
}

/// `T_N |Ω| e^{(N/2) λ^{1/m}} Σ (−1)^{j+1} (A_{m,j}/N^{j+1}) λ^{(m−j)/m}`.
///
/// May be negative for small λ, in which case the inequality it bounds is
/// void; the value is returned unclamped.
pub fn riesz_upper_bound(lambda: f64, params: OperatorParams, volume: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain("riesz_upper_bound", format!("lambda = {lambda} must be positive")));
    }
    let c = structural_constants(params);
    let root = lambda.powf(1.0 / params.m as f64);
    Ok(c.t_n * volume * (0.5 * params.n() * root).exp() * alternating_sum(params, root))
}

/// `riesz_upper_bound(η) / (η − λ)`.
pub fn counting_upper_bound(lambda: f64, eta: f64, params: OperatorParams, volume: f64) -> Result<f64> {
    if !(eta > lambda) {
        return Err(Error::domain("counting_upper_bound", format!("eta = {eta} must exceed lambda = {lambda}")));
    }
    Ok(riesz_upper_bound(eta, params, volume)? / (eta - lambda))
}

/// Multipliers of λ searched for the free parameter η.
pub const ETA_FACTORS: [f64; 5] = [1.1, 1.25, 1.5, 2.0, 4.0];

// ---------------------------------------------------------------------------
// τ constants and the zero of f_1

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauConstants {
    pub m: u32,
    /// Root of `h_m(τ) = (τ/3)^{1/(m−1)} − ln(τ + e)` above 1.
    pub tau_tilde: f64,
    /// `max(e, τ̃_m)`.
    pub tau_m: f64,
    /// Root of `τ^{m−1} e^τ = τ_m`.
    pub tau0: f64,
}

impl TauConstants {
    /// `τ_0^{m−1} e^{τ_0}`, which equals `τ_m` up to rounding.
    pub fn tau0_power(&self) -> f64 {
        self.tau0.powi(self.m as i32 - 1) * self.tau0.exp()
    }
}

pub fn h_m(tau: f64, m: u32) -> f64 {
    (tau / 3.0).powf(1.0 / (m as f64 - 1.0)) - (tau + E).ln()
}

/// Bisection to full precision for an increasing sign change on `[lo, hi]`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn solve_tau_constants(m: u32) -> Result<TauConstants> {
    if m < 2 {
        return Err(Error::domain("solve_tau_constants", format!("m = {m} must be at least 2")));
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    while h_m(hi, m) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let tau_tilde = bisect(|t| h_m(t, m), lo, hi);
    let tau_m = tau_tilde.max(E);
    // log form: (m−1) ln τ + τ − ln τ_m, increasing; at τ = ln τ_m + 1 it is positive
    let target = tau_m.ln();
    let g = |t: f64| (m as f64 - 1.0) * t.ln() + t - target;
    let tau0 = bisect(g, f64::MIN_POSITIVE, target + 1.0);
    Ok(TauConstants { m, tau_tilde, tau_m, tau0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Zero {
    pub tau: f64,
    /// Root of `f_1(t) = (N/2)^{m−1} e^{(N/2)t} t^{m−1} = τ`.
    pub root: f64,
    /// `(2/N) min{(τ/e^{τ_0})^{1/(m−1)}, ln((τ+τ_m)/(2 ln(τ+e)^{m−1}))}`.
    pub lower_bound: f64,
}

impl F1Zero {
    pub fn certificate(&self, params: OperatorParams) -> BoundCertificate {
        BoundCertificate::new(
            names::ZERO_POINT,
            json!({ "tau": self.tau, "N": params.dim, "m": params.m }),
            self.lower_bound,
            Some(self.root),
            Direction::AtLeast,
        )
    }
}

pub fn f1(t: f64, m: u32, dim: usize) -> f64 {
    let half = dim as f64 / 2.0;
    half.powi(m as i32 - 1) * (half * t).exp() * t.powi(m as i32 - 1)
}

pub fn f1_zero(tau: f64, params: OperatorParams) -> Result<F1Zero> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain("f1_zero", format!("tau = {tau} must be positive")));
    }
    let m = params.m;
    let tc = solve_tau_constants(m)?;
    // log f_1 is increasing and avoids overflow for large τ
    let half = params.n() / 2.0;
    let ln_tau = tau.ln();
    let g = |t: f64| (m as f64 - 1.0) * (half.ln() + t.ln()) + half * t - ln_tau;
    let mut hi = 1.0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
    }
    let root = bisect(g, 0.0, hi);
    let power = (tau / tc.tau0.exp()).powf(1.0 / (m as f64 - 1.0));
    let log = ((tau + tc.tau_m) / (2.0 * (tau + E).ln().powi(m as i32 - 1))).ln();
    Ok(F1Zero { tau, root, lower_bound: power.min(log) / half })
}

// ---------------------------------------------------------------------------
// eigenvalue lower bound

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundCase {
    /// m even, or m odd with λ_{m,1} ≥ 0.
    NonNegative,
    /// m odd with λ_{m,1} < 0.
    NegativeFirst,
}

/// Which of the two expressions realises the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinBranch {
    Power,
    Log,
}

/// Placement of `log 2` in the negative-first case: the theorem statement
/// has `(m−1) log(2 log(·))`, its derivation ends with
/// `(m−1) log(log(·)) − log 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LogForm {
    #[default]
    Statement,
    ProofDisplay,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigLowerBound {
    pub value: f64,
    pub case: LowerBoundCase,
    pub branch: MinBranch,
    pub power_term: f64,
    pub log_term: f64,
    /// `b_m` in the non-negative case, `−λ_{m,1} + b_m` otherwise.
    pub shift: f64,
}

pub fn eig_lower_bound_value(
    k: usize,
    params: OperatorParams,
    volume: f64,
    lambda_m1: Option<f64>,
    form: LogForm,
) -> Result<EigLowerBound> {
    let m = params.m;
    if m < 2 {
        return Err(Error::domain("eig_lower_bound", "m must be at least 2"));
    }
    if k == 0 {
        return Err(Error::domain("eig_lower_bound", "k must be at least 1"));
    }
    let case = if m % 2 == 0 {
        LowerBoundCase::NonNegative
    } else {
        match lambda_m1 {
            None => {
                return Err(Error::MissingInput(format!(
                    "lambda_m1 is required to select the case for odd m = {m}"
                )))
            }
            Some(l) if l >= 0.0 => LowerBoundCase::NonNegative,
            Some(_) => LowerBoundCase::NegativeFirst,
        }
    };
    let c = structural_constants(params);
    let tc = solve_tau_constants(m)?;
    let mf = m as f64;
    let expo = mf / (mf - 1.0);
    let t0_term = tc.tau0_power();
    let (scale, shift) = match case {
        LowerBoundCase::NonNegative => (c.c_m, c.b_m),
        LowerBoundCase::NegativeFirst => {
            let p = -lambda_m1.expect("checked above") + c.b_m;
            (c.a_m * p, p)
        }
    };
    let x = scale * k as f64 / volume;
    let power_term = (scale / tc.tau0.exp()).powf(expo) * (k as f64 / volume).powf(expo);
    let inner = match (case, form) {
        (LowerBoundCase::NegativeFirst, LogForm::Statement) => {
            (x + t0_term).ln() - (mf - 1.0) * (2.0 * (x + E).ln()).ln()
        }
        _ => (x + t0_term).ln() - (mf - 1.0) * (x + E).ln().ln() - LN_2,
    };
    let log_term = inner.powi(m as i32);
    let (branch, min) = if power_term <= log_term { (MinBranch::Power, power_term) } else { (MinBranch::Log, log_term) };
    Ok(EigLowerBound {
        value: (2.0 / params.n()).powi(m as i32) * min - shift,
        case,
        branch,
        power_term,
        log_term,
        shift,
    })
}

/// Certificate `observed ≥ eig_lower_bound(k)`. With `strict`, `k = 1` is
/// outside the stated range and the certificate is not applicable.
pub fn eig_lower_bound(
    k: usize,
    params: OperatorParams,
    volume: f64,
    lambda_m1: Option<f64>,
    observed: Option<f64>,
    strict: bool,
) -> Result<BoundCertificate> {
    let b = eig_lower_bound_value(k, params, volume, lambda_m1, LogForm::Statement)?;
    let name = match b.case {
        LowerBoundCase::NonNegative => names::EIG_LOWER_NONNEGATIVE,
        LowerBoundCase::NegativeFirst => names::EIG_LOWER_NEGATIVE,
    };
    let inputs = json!({
        "k": k, "N": params.dim, "m": params.m, "volume": volume,
        "lambda_m1": lambda_m1, "strict": strict,
    });
    let mut cert = BoundCertificate::new(name, inputs, b.value, observed, Direction::AtLeast);
    cert.branch = Some(format!("{:?}", b.branch).to_lowercase());
    if strict && k < 2 {
        cert = cert.not_applicable();
    }
    Ok(cert)
}

// ---------------------------------------------------------------------------
// ball, dilation and volume bounds

fn odd_m_at_least_3(func: &'static str, params: OperatorParams) -> Result<()> {
    if params.m < 3 || params.m % 2 == 0 {
        return Err(Error::domain(func, format!("m = {} must be odd and at least 3", params.m)));
    }
    Ok(())
}

/// Lower bound for `λ_{m,1}(B_{r0})`.
pub fn ball_bound(r0: f64, params: OperatorParams) -> Result<f64> {
    if params.dim < 2 {
        return Err(Error::domain("ball_bound", "N must be at least 2"));
    }
    odd_m_at_least_3("ball_bound", params)?;
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::domain("ball_bound", format!("r0 = {r0} must lie in (0, 1)")));
    }
    let n = params.n();
    let m = params.m;
    let c = structural_constants(params);
    let rho = 2.0 * (n + 2.0).sqrt();
    let l = rho.ln() - r0.ln();
    let sum: f64 = (1..=m)
        .map(|j| {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            sign / n.powi(j as i32 + 2) * factorial(m) / factorial(m - j) * l.powi((m - j) as i32)
        })
        .sum();
    let two_m = 2f64.powi(m as i32);
    Ok(two_m * l.powi(m as i32) - two_m * rho.powf(n) * c.omega_n.powi(2) / (2.0 * PI).powi(2 * params.dim as i32) * sum)
}

pub fn ball_certificate(r0: f64, params: OperatorParams, observed: Option<f64>) -> Result<BoundCertificate> {
    let b = ball_bound(r0, params)?;
    Ok(BoundCertificate::new(
        names::BALL,
        json!({ "r0": r0, "N": params.dim, "m": params.m }),
        b,
        observed,
        Direction::AtLeast,
    ))
}

/// Interval containing `λ_{m,k}(Ω_R)` given `λ_{m,k}(Ω)`, for `Ω_R = RΩ`.
/// The interval can be empty; that is returned as-is.
pub fn rescaling_interval(lambda_k: f64, r: f64, params: OperatorParams, volume: f64) -> Result<(f64, f64)> {
    odd_m_at_least_3("rescaling_interval", params)?;
    if !(r > 1.0) {
        return Err(Error::domain("rescaling_interval", format!("R = {r} must exceed 1")));
    }
    let m = params.m as i32;
    let c = structural_constants(params);
    let lr = r.ln().powi(m);
    let four_m = 4f64.powi(m);
    let lower = lambda_k / 2f64.powi(m) - four_m * lr - (four_m - 1.0) / (2.0 * PI).powi(params.dim as i32) * c.c_int * volume;
    let upper = lambda_k - 2.0 * lr;
    Ok((lower, upper))
}

pub fn dilation_certificate(
    lambda_k: f64,
    lambda_k_scaled: Option<f64>,
    r: f64,
    params: OperatorParams,
    volume: f64,
) -> Result<BoundCertificate> {
    let (lo, hi) = rescaling_interval(lambda_k, r, params, volume)?;
    Ok(BoundCertificate::within(
        names::DILATION,
        json!({ "lambda_k": lambda_k, "R": r, "N": params.dim, "m": params.m, "volume": volume }),
        lo,
        hi,
        lambda_k_scaled,
    ))
}

/// `(2/N)^m [ln((c_m/|Ω| + τ_0^{m−1}e^{τ_0}) / (2 ln(c_m/|Ω| + e)^{m−1}))]^m − b_m`.
pub fn small_volume_curve(volume: f64, params: OperatorParams) -> Result<f64> {
    let m = params.m;
    let tc = solve_tau_constants(m)?;
    let c = structural_constants(params);
    let x = c.c_m / volume;
    let inner = ((x + tc.tau0_power()) / (2.0 * (x + E).ln().powi(m as i32 - 1))).ln();
    Ok((2.0 / params.n()).powi(m as i32) * inner.powi(m as i32) - c.b_m)
}

/// The smallest admissible `d_m` for the linear bound `λ_{m,1} ≥ b_m − d_m|Ω|`:
/// `max{(e^{τ_0}/a_m)((m−1)^m + 2^{−m})^{(m−1)/m}, (2e^{(m−1)^m+2^{−m}} − τ_0^{m−1}e^{τ_0})/a_m}`.
pub fn d_m_lower(params: OperatorParams) -> Result<f64> {
    let m = params.m;
    let mf = m as f64;
    let tc = solve_tau_constants(m)?;
    let c = structural_constants(params);
    let inner = (mf - 1.0).powi(m as i32) + 2f64.powi(-(m as i32));
    let first = tc.tau0.exp() / c.a_m * inner.powf((mf - 1.0) / mf);
    let second = (2.0 * inner.exp() - tc.tau0_power()) / c.a_m;
    Ok(first.max(second))
}

/// The small-volume curve and the linear volume bound for `λ_{m,1}`.
///
/// The curve is the log branch of the `k = 1` lower bound, so it applies only
/// in the non-negative case and when that branch is the active minimum; the
/// linear bound applies to odd `m` only.
pub fn first_eig_volume_bounds(
    volume: f64,
    params: OperatorParams,
    d_m: Option<f64>,
    lambda1: Option<f64>,
) -> Result<(BoundCertificate, BoundCertificate)> {
    if params.m < 2 {
        return Err(Error::domain("first_eig_volume_bounds", "m must be at least 2"));
    }
    let inputs = json!({ "N": params.dim, "m": params.m, "volume": volume, "d_m": d_m });
    let curve = small_volume_curve(volume, params)?;
    let mut small = BoundCertificate::new(names::SMALL_VOLUME, inputs.clone(), curve, lambda1, Direction::AtLeast);
    let nonneg = params.m % 2 == 0 || lambda1.is_some_and(|l| l >= 0.0);
    let log_active = eig_lower_bound_value(1, params, volume, Some(0.0), LogForm::Statement)?.branch == MinBranch::Log;
    small.branch = Some(if log_active { "log" } else { "power" }.into());
    if !(nonneg && log_active) {
        small = small.not_applicable();
    }

    let c = structural_constants(params);
    let d = match d_m {
        Some(d) => d,
        None => d_m_lower(params)?,
    };
    let mut linear = BoundCertificate::new(names::LINEAR_VOLUME, inputs, c.b_m - d * volume, lambda1, Direction::AtLeast);
    if params.m % 2 == 0 {
        linear = linear.not_applicable();
    }
    Ok((small, linear))
}

// ---------------------------------------------------------------------------
// certificates over a spectrum

/// `λ` values for grid certificates: `n` equispaced points in
/// `(0, λ_max]` where `λ_max` is the largest computed eigenvalue, starting at
/// the first positive eigenvalue (or `λ_max / n`).
pub fn lambda_grid(spec: &Spectrum, n: usize) -> Vec<f64> {
    let Some(&top) = spec.eigenvalues.last() else { return Vec::new() };
    if !(top > 0.0) || n == 0 {
        return Vec::new();
    }
    let first = spec.eigenvalues.iter().copied().find(|&e| e > 0.0).unwrap_or(top);
    let lo = if first < top { first } else { top / n as f64 };
    if n == 1 {
        return vec![top];
    }
    (0..n).map(|i| lo + (top - lo) * i as f64 / (n - 1) as f64).collect()
}

/// `λ` is resolved when the computed part of the spectrum contains every
/// eigenvalue below it and the count stays within a quarter of the cells.
pub fn is_resolved(spec: &Spectrum, lambda: f64) -> bool {
    let top = spec.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY);
    lambda > 0.0 && lambda <= top && (counting_function(spec, lambda) as f64) <= 0.25 * spec.domain.cells as f64
}

pub fn berezin_certificates(spec: &Spectrum, grid: &[f64]) -> Result<Vec<BoundCertificate>> {
    let (p, vol) = (spec.params, spec.domain.volume);
    grid.iter()
        .map(|&lambda| {
            let bound = riesz_upper_bound(lambda, p, vol)?;
            let mut c = BoundCertificate::new(
                names::RIESZ,
                json!({ "lambda": lambda, "N": p.dim, "m": p.m, "volume": vol }),
                bound,
                Some(riesz_mean(spec, lambda)),
                Direction::AtMost,
            );
            if bound <= 0.0 {
                c.vacuous = true;
                c = c.not_applicable();
            }
            Ok(c)
        })
        .collect()
}

/// Counting certificates at the resolved grid points, with η minimised over
/// [`ETA_FACTORS`] among factors giving a positive bound.
pub fn counting_certificates(spec: &Spectrum, grid: &[f64]) -> Result<Vec<BoundCertificate>> {
    let (p, vol) = (spec.params, spec.domain.volume);
    let mut out = Vec::new();
    for &lambda in grid {
        if !is_resolved(spec, lambda) {
            continue;
        }
        let mut best: Option<(f64, f64)> = None;
        for f in ETA_FACTORS {
            let eta = lambda * f;
            let b = counting_upper_bound(lambda, eta, p, vol)?;
            if b > 0.0 && best.is_none_or(|(v, _)| b < v) {
                best = Some((b, eta));
            }
        }
        let observed = Some(counting_function(spec, lambda) as f64);
        let cert = match best {
            Some((b, eta)) => BoundCertificate::new(
                names::COUNTING,
                json!({ "lambda": lambda, "eta": eta, "N": p.dim, "m": p.m, "volume": vol }),
                b,
                observed,
                Direction::AtMost,
            ),
            None => {
                let mut c = BoundCertificate::new(
                    names::COUNTING,
                    json!({ "lambda": lambda, "eta": null, "N": p.dim, "m": p.m, "volume": vol }),
                    f64::NAN,
                    observed,
                    Direction::AtMost,
                )
                .not_applicable();
                c.vacuous = true;
                c
            }
        };
        out.push(cert);
    }
    Ok(out)
}

/// One certificate per computed eigenvalue. For odd `m`, `lambda_m1`
/// selects the case and defaults to the first computed eigenvalue.
pub fn eig_lower_certificates(spec: &Spectrum, lambda_m1: Option<f64>, strict: bool) -> Result<Vec<BoundCertificate>> {
    let first = lambda_m1.or(spec.eigenvalues.first().copied());
    spec.eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &e)| eig_lower_bound(i + 1, spec.params, spec.domain.volume, first, Some(e), strict))
        .collect()
}

/// `(R(λ) − R(λ−h))/h ≤ N(λ) ≤ (R(λ+h) − R(λ))/h`.
///
/// The identity is exact in real arithmetic; the difference quotients are
/// allowed a rounding slack of a few ulps of the summed magnitudes.
pub fn sandwich_certificate(spec: &Spectrum, lambda: f64, h: f64) -> BoundCertificate {
    let e = &spec.eigenvalues;
    let r = |x: f64| riesz_sum(e, x);
    let scale: f64 = e.iter().map(|v| v.abs()).sum::<f64>() + e.len() as f64 * (lambda.abs() + h);
    let slack = 8.0 * f64::EPSILON * scale / h;
    let upper = (r(lambda + h) - r(lambda)) / h;
    let lower = (r(lambda) - r(lambda - h)) / h;
    BoundCertificate::within(
        names::SANDWICH,
        json!({ "lambda": lambda, "h": h, "rounding_slack": slack }),
        lower - slack,
        upper + slack,
        Some(counting_function(spec, lambda) as f64),
    )
}

/// `0 ≤ S(a) ≤ (A_{m,1}/N²) a^{m−1}` for `a ≥ 2(m−1)/N`, with `S` the
/// [`alternating_sum`].
pub fn alternating_sum_certificate(params: OperatorParams, a: f64) -> Result<BoundCertificate> {
    let threshold = 2.0 * (params.m as f64 - 1.0) / params.n();
    if a < threshold {
        return Err(Error::domain("alternating_sum_certificate", format!("a = {a} is below 2(m-1)/N = {threshold}")));
    }
    let c = structural_constants(params);
    let upper = c.a_mj(1) / params.n().powi(2) * a.powi(params.m as i32 - 1);
    Ok(BoundCertificate::within(
        names::ALTERNATING_SUM,
        json!({ "a": a, "N": params.dim, "m": params.m }),
        0.0,
        upper,
        Some(alternating_sum(params, a)),
    ))
}

// ---------------------------------------------------------------------------
// Weyl diagnostics

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylRow {
    pub lambda: f64,
    pub count: usize,
    /// `e^{−(N/2)λ^{1/m}} N(λ) N / (T_N|Ω|)`.
    pub ratio1: f64,
    /// `λ^{−(m−1)/m} e^{−(N/2)λ^{1/m}} R(λ) N² / (2m T_N|Ω|)`.
    pub ratio2: f64,
    pub resolved: bool,
}

pub fn weyl_diagnostics(spec: &Spectrum, lambda_grid: &[f64]) -> Vec<WeylRow> {
    let p = spec.params;
    let c = structural_constants(p);
    let n = p.n();
    let mf = p.m as f64;
    let scale = c.t_n * spec.domain.volume;
    lambda_grid
        .iter()
        .map(|&lambda| {
            let count = counting_function(spec, lambda);
            let damp = (-0.5 * n * lambda.abs().powf(1.0 / mf)).exp();
            let ratio1 = damp * count as f64 * n / scale;
            let ratio2 = lambda.abs().powf(-(mf - 1.0) / mf) * damp * riesz_mean(spec, lambda) * n * n / (2.0 * mf * scale);
            WeylRow { lambda, count, ratio1, ratio2, resolved: is_resolved(spec, lambda) }
        })
        .collect()
}
