//! Pointwise evaluation of `L_m ζ`.
//!
//! Two independent routes:
//!
//! * kernel: `L_m ζ = Σ_j α_j K_j ζ` with the singular integrals
//!   `K_j ζ(x) = ∫ [ζ(x) 1_{B_1(x)}(y) - ζ(y)] |x-y|^{-N} (-2 ln|x-y|)^{j-1} dy`,
//!   in polar coordinates around `x`;
//! * Fourier: `(2π)^{-N} ∫ (2 ln|ξ|)^m ζ̂(ξ) e^{iξ·x} dξ`, with
//!   `ζ̂(ξ) = ∫ e^{-iξ·x} ζ(x) dx`.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::coeffs::{alpha_coefficients, sphere_measure, OperatorParams};
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Smoothness {
    Holder(f64),
    C2,
}

type Spatial = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type Radial = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type Spectral = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum FourierRep {
    /// `ζ̂(ξ)` depends on `|ξ|` only and is real.
    Radial(Radial),
    General(Spectral),
}

impl FourierRep {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        match self {
            FourierRep::Radial(f) => Complex64::new(f(xi.iter().map(|v| v * v).sum::<f64>().sqrt()), 0.0),
            FourierRep::General(f) => f(xi),
        }
    }
}

/// A compactly supported function on R^N with optional known transform.
#[derive(Clone)]
pub struct TestFunction {
    pub dim: usize,
    pub center: [f64; 2],
    pub support_radius: f64,
    pub smoothness: Smoothness,
    /// `|ξ|` beyond which the transform is treated as zero.
    pub fourier_cutoff: f64,
    evaluator: Spatial,
    fourier: Option<FourierRep>,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("dim", &self.dim)
            .field("center", &self.center)
            .field("support_radius", &self.support_radius)
            .field("has_fourier", &self.fourier.is_some())
            .finish()
    }
}

impl TestFunction {
    pub fn new(
        dim: usize,
        support_radius: f64,
        smoothness: Smoothness,
        evaluator: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            center: [0.0; 2],
            support_radius,
            smoothness,
            fourier_cutoff: 0.0,
            evaluator: Arc::new(evaluator),
            fourier: None,
        }
    }

    pub fn with_fourier(mut self, cutoff: f64, f: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        self.fourier = Some(FourierRep::General(Arc::new(f)));
        self.fourier_cutoff = cutoff;
        self
    }

    /// `e^{-|x|²/2}` truncated at radius 10, with transform `(2π)^{N/2} e^{-|ξ|²/2}`.
    pub fn gaussian(dim: usize) -> Self {
        let norm = (2.0 * PI).powf(dim as f64 / 2.0);
        let mut f = Self::new(dim, 10.0, Smoothness::C2, |x: &[f64]| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            if r2 < 100.0 { (-0.5 * r2).exp() } else { 0.0 }
        });
        f.fourier = Some(FourierRep::Radial(Arc::new(move |r| norm * (-0.5 * r * r).exp())));
        f.fourier_cutoff = 12.0;
        f
    }

    /// The bump `exp(-1/(1-|x|²))` on the unit ball; its transform is
    /// computed numerically from the one-dimensional projection.
    pub fn bump(dim: usize) -> Self {
        let profile = |r2: f64| if r2 < 1.0 { (-1.0 / (1.0 - r2)).exp() } else { 0.0 };
        let mut f = Self::new(dim, 1.0, Smoothness::C2, move |x: &[f64]| profile(x.iter().map(|v| v * v).sum()));
        // projection P(s) = ∫ f(s, y) dy (N = 2) or f(s) (N = 1) on [0, 1]
        let rule = gauss_legendre(20);
        let panels = 64;
        let mut nodes = Vec::new();
        for p in 0..panels {
            let (lo, hi) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                let s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
                let proj = if dim == 1 {
                    profile(s * s)
                } else {
                    let ymax = (1.0 - s * s).max(0.0).sqrt();
                    crate::quad::integrate_panels(|y| profile(s * s + y * y), -ymax, ymax, 8, 20)
                };
                nodes.push((s, 0.5 * (hi - lo) * w * proj));
            }
        }
        let nodes = Arc::new(nodes);
        f.fourier = Some(FourierRep::Radial(Arc::new(move |rho| {
            2.0 * nodes.iter().map(|(s, wp)| wp * (rho * s).cos()).sum::<f64>()
        })));
        f.fourier_cutoff = 900.0;
        f
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, 1.0, Smoothness::C2, |_| 0.0).with_fourier(1.0, |_| Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }

    pub fn has_fourier(&self) -> bool {
        self.fourier.is_some()
    }

    pub fn fourier_eval(&self, xi: &[f64]) -> Option<Complex64> {
        self.fourier.as_ref().map(|f| f.eval(xi))
    }

    /// `y ↦ ζ(y - v)`.
    pub fn translated(&self, v: [f64; 2]) -> Self {
        let inner = self.evaluator.clone();
        let dim = self.dim;
        let mut out = self.clone();
        out.center = [self.center[0] + v[0], self.center[1] + v[1]];
        out.evaluator = Arc::new(move |y: &[f64]| {
            let shifted: Vec<f64> = y.iter().zip(&v).map(|(a, b)| a - b).collect();
            inner(&shifted[..dim])
        });
        out.fourier = self.fourier.clone().map(|f| {
            FourierRep::General(Arc::new(move |xi: &[f64]| {
                let phase: f64 = xi.iter().zip(&v).map(|(a, b)| a * b).sum();
                f.eval(xi) * Complex64::new(phase.cos(), -phase.sin())
            }) as Spectral)
        });
        out
    }

    /// `a f + b g`.
    pub fn linear_combination(a: f64, f: &TestFunction, b: f64, g: &TestFunction) -> Result<Self> {
        if f.dim != g.dim {
            return Err(Error::Input("test functions live in different dimensions".into()));
        }
        let (fe, ge) = (f.evaluator.clone(), g.evaluator.clone());
        let dist = ((f.center[0] - g.center[0]).powi(2) + (f.center[1] - g.center[1]).powi(2)).sqrt();
        let mut out = TestFunction::new(f.dim, 0.0, Smoothness::C2, move |x: &[f64]| a * fe(x) + b * ge(x));
        out.center = f.center;
        out.support_radius = f.support_radius.max(dist + g.support_radius);
        out.smoothness = match (f.smoothness, g.smoothness) {
            (Smoothness::C2, Smoothness::C2) => Smoothness::C2,
            (Smoothness::Holder(x), Smoothness::Holder(y)) => Smoothness::Holder(x.min(y)),
            (Smoothness::Holder(x), _) | (_, Smoothness::Holder(x)) => Smoothness::Holder(x),
        };
        if let (Some(ff), Some(gf)) = (f.fourier.clone(), g.fourier.clone()) {
            out.fourier = Some(FourierRep::General(Arc::new(move |xi: &[f64]| ff.eval(xi) * a + gf.eval(xi) * b)));
            out.fourier_cutoff = f.fourier_cutoff.max(g.fourier_cutoff);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSettings {
    pub gauss_points: usize,
    /// Smallest radius of the geometric grading toward the singularity.
    pub inner_floor: f64,
    pub outer_panel: f64,
    pub angular_nodes: usize,
    /// Smallest |ξ| of the grading toward the zero frequency.
    pub fourier_floor: f64,
    pub fourier_panel: f64,
    /// Allowed disagreement between a rule and its refinement, relative to `1 + |value|`.
    pub tolerance: f64,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            gauss_points: 16,
            inner_floor: 1e-8,
            outer_panel: 0.25,
            angular_nodes: 128,
            fourier_floor: 1e-20,
            fourier_panel: 0.5,
            tolerance: 1e-7,
        }
    }
}

impl QuadSettings {
    fn refined(&self) -> Self {
        Self {
            gauss_points: self.gauss_points + 8,
            inner_floor: self.inner_floor * 1e-2,
            outer_panel: 0.5 * self.outer_panel,
            angular_nodes: 2 * self.angular_nodes,
            fourier_floor: self.fourier_floor * 1e-4,
            fourier_panel: 0.5 * self.fourier_panel,
            tolerance: self.tolerance,
        }
    }
}

fn check_point(zeta: &TestFunction, x: &[f64]) -> Result<()> {
    if x.len() != zeta.dim {
        return Err(Error::Input(format!("point has {} coordinates, function lives in R^{}", x.len(), zeta.dim)));
    }
    Ok(())
}

/// Spherical sum `∫_{S^{N-1}} ζ(x + r θ) dθ`.
fn spherical_sum(zeta: &TestFunction, x: &[f64], r: f64, angular: usize) -> f64 {
    if zeta.dim == 1 {
        return zeta.eval(&[x[0] + r]) + zeta.eval(&[x[0] - r]);
    }
    let step = 2.0 * PI / angular as f64;
    (0..angular)
        .map(|i| {
            let t = step * i as f64;
            zeta.eval(&[x[0] + r * t.cos(), x[1] + r * t.sin()])
        })
        .sum::<f64>()
        * step
}

/// `K_0 ζ(x), …, K_{jmax} ζ(x)` with one quadrature pass.
fn kernel_terms_once(zeta: &TestFunction, x: &[f64], jmax: usize, q: &QuadSettings) -> Vec<f64> {
    let mut out = vec![0.0; jmax + 1];
    let zx = zeta.eval(x);
    out[0] = zx;
    if jmax == 0 {
        return out;
    }
    let omega = sphere_measure(zeta.dim);
    let rule = gauss_legendre(q.gauss_points);
    let mut accumulate = |lo: f64, hi: f64, inner: bool| {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let r = mid + half * t;
            let s = spherical_sum(zeta, x, r, q.angular_nodes);
            let f = if inner { omega * zx - s } else { -s };
            let lg = -2.0 * r.ln();
            let mut pow = half * w * f / r;
            for o in out.iter_mut().skip(1) {
                *o += pow;
                pow *= lg;
            }
        }
    };
    // inner part: geometric shells toward r = 0
    let mut hi = 1.0;
    while hi > q.inner_floor {
        accumulate(0.5 * hi, hi, true);
        hi *= 0.5;
    }
    // outer part up to the far edge of the support
    let dist = x.iter().zip(&zeta.center).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let r_max = dist + zeta.support_radius;
    if r_max > 1.0 {
        let panels = ((r_max - 1.0) / q.outer_panel).ceil() as usize;
        let w = (r_max - 1.0) / panels as f64;
        for p in 0..panels {
            accumulate(1.0 + w * p as f64, 1.0 + w * (p + 1) as f64, false);
        }
    }
    out
}

fn refined_pair<F: Fn(&QuadSettings) -> Vec<f64>>(what: &'static str, q: &QuadSettings, f: F) -> Result<Vec<f64>> {
    let coarse = f(q);
    let fine = f(&q.refined());
    let worst = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
        .fold(0.0, f64::max);
    if worst > q.tolerance {
        return Err(Error::Quadrature { what, achieved: worst, tolerance: q.tolerance });
    }
    Ok(fine)
}

/// `K_j ζ(x)`.
pub fn eval_kj(zeta: &TestFunction, x: &[f64], j: usize, quad: &QuadSettings) -> Result<f64> {
    Ok(kernel_terms(zeta, x, j, quad)?[j])
}

/// `K_0 ζ(x) … K_{jmax} ζ(x)`, checked against a refined rule.
pub fn kernel_terms(zeta: &TestFunction, x: &[f64], jmax: usize, quad: &QuadSettings) -> Result<Vec<f64>> {
    check_point(zeta, x)?;
    if jmax > 12 {
        return Err(Error::Input(format!("kernel order {jmax} exceeds 12")));
    }
    refined_pair("singular kernel", quad, |q| kernel_terms_once(zeta, x, jmax, q))
}

/// `Σ_j α_j K_j ζ(x)`.
pub fn eval_lm_kernel(zeta: &TestFunction, x: &[f64], params: OperatorParams, quad: &QuadSettings) -> Result<f64> {
    if zeta.dim != params.dim {
        return Err(Error::Input("dimension mismatch between operator and test function".into()));
    }
    let alpha = alpha_coefficients(params)?;
    let k = kernel_terms(zeta, x, params.m as usize, quad)?;
    Ok(alpha.values.iter().zip(&k).map(|(a, v)| a * v).sum())
}

/// `(2π)^{-N} ∫ w(|ξ|) Re[ζ̂(ξ) e^{iξ·x}] dξ` for a radial multiplier `w`.
fn fourier_once(zeta: &TestFunction, x: &[f64], w: &dyn Fn(f64) -> f64, q: &QuadSettings) -> Result<f64> {
    let rep = zeta.fourier.as_ref().ok_or_else(|| Error::Unsupported("test function has no Fourier transform".into()))?;
    let rule = gauss_legendre(q.gauss_points);
    let angular = |rho: f64| -> f64 {
        match (zeta.dim, rep) {
            (1, _) => {
                let plus = rep.eval(&[rho]) * Complex64::new((rho * x[0]).cos(), (rho * x[0]).sin());
                let minus = rep.eval(&[-rho]) * Complex64::new((rho * x[0]).cos(), -(rho * x[0]).sin());
                plus.re + minus.re
            }
            (_, FourierRep::Radial(f)) => {
                let step = 2.0 * PI / q.angular_nodes as f64;
                let s: f64 = (0..q.angular_nodes)
                    .map(|i| {
                        let t = step * i as f64;
                        (rho * (x[0] * t.cos() + x[1] * t.sin())).cos()
                    })
                    .sum();
                f(rho) * s * step * rho
            }
            (_, FourierRep::General(f)) => {
                let step = 2.0 * PI / q.angular_nodes as f64;
                let s: f64 = (0..q.angular_nodes)
                    .map(|i| {
                        let t = step * i as f64;
                        let xi = [rho * t.cos(), rho * t.sin()];
                        let ph = xi[0] * x[0] + xi[1] * x[1];
                        (f(&xi) * Complex64::new(ph.cos(), ph.sin())).re
                    })
                    .sum();
                s * step * rho
            }
        }
    };
    let mut total = 0.0;
    let mut panel = |lo: f64, hi: f64| {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
            let rho = mid + half * t;
            total += half * wt * w(rho) * angular(rho);
        }
    };
    let mut hi = 1.0;
    while hi > q.fourier_floor {
        panel(0.5 * hi, hi);
        hi *= 0.5;
    }
    let cutoff = zeta.fourier_cutoff.max(1.0);
    let panels = ((cutoff - 1.0) / q.fourier_panel).ceil() as usize;
    let width = (cutoff - 1.0) / panels.max(1) as f64;
    for p in 0..panels {
        panel(1.0 + width * p as f64, 1.0 + width * (p + 1) as f64);
    }
    Ok(total / (2.0 * PI).powi(zeta.dim as i32))
}

fn fourier_checked(zeta: &TestFunction, x: &[f64], w: &dyn Fn(f64) -> f64, quad: &QuadSettings) -> Result<f64> {
    check_point(zeta, x)?;
    let coarse = fourier_once(zeta, x, w, quad)?;
    let fine = fourier_once(zeta, x, w, &quad.refined())?;
    let err = (coarse - fine).abs() / (1.0 + fine.abs());
    if err > quad.tolerance {
        return Err(Error::Quadrature { what: "Fourier route", achieved: err, tolerance: quad.tolerance });
    }
    Ok(fine)
}

/// `L_m ζ(x)` through the symbol.
pub fn eval_lm_fourier(zeta: &TestFunction, x: &[f64], params: OperatorParams, quad: &QuadSettings) -> Result<f64> {
    if zeta.dim != params.dim {
        return Err(Error::Input("dimension mismatch between operator and test function".into()));
    }
    let m = params.m as i32;
    fourier_checked(zeta, x, &|rho| (2.0 * rho.ln()).powi(m), quad)
}

/// Inverse transform of `ζ̂` at `x`; used to validate supplied transforms.
pub fn inverse_fourier(zeta: &TestFunction, x: &[f64], quad: &QuadSettings) -> Result<f64> {
    fourier_checked(zeta, x, &|_| 1.0, quad)
}

/// `E_n(z) = e^z - Σ_{k≤n} z^k/k!`, by its tail series for small `|z|`.
fn exp_remainder(z: f64, n: u32) -> f64 {
    if z.abs() < 1.0 {
        let mut term = 1.0;
        for k in 1..=n {
            term *= z / k as f64;
        }
        let mut sum = 0.0;
        let mut k = n + 1;
        loop {
            term *= z / k as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) || k > n + 60 {
                return sum;
            }
            k += 1;
        }
    }
    let mut poly = 0.0;
    let mut term = 1.0;
    for k in 0..=n {
        if k > 0 {
            term *= z / k as f64;
        }
        poly += term;
    }
    z.exp() - poly
}

/// `|(-Δ)^s ζ(x) - ζ(x) - Σ_{m=1}^n s^m/m! L_m ζ(x)|`, evaluated as a single
/// Fourier integral with multiplier `E_n(2 s ln|ξ|)`.
pub fn expansion_residual(zeta: &TestFunction, x: &[f64], s: f64, n: u32, quad: &QuadSettings) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain("expansion_residual", format!("s = {s} must lie in (0, 1)")));
    }
    fourier_checked(zeta, x, &|rho| exp_remainder(2.0 * s * rho.ln(), n), quad).map(f64::abs)
}
