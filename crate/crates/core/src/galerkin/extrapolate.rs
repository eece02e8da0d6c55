use serde::{Deserialize, Serialize};

use super::Spectrum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated {
    pub value: f64,
    pub error_bar: f64,
    /// Fitted algebraic rate `p` in `λ(h) ≈ λ + C h^p`; `None` when no rate applies.
    pub rate: Option<f64>,
    /// Set when the three levels are not monotone.
    pub flagged: bool,
}

/// Aitken/Richardson extrapolation of one index from values at `h, h/2, h/4`.
pub fn extrapolate_triple(a0: f64, a1: f64, a2: f64) -> Extrapolated {
    let (d1, d2) = (a0 - a1, a1 - a2);
    if d1 == 0.0 && d2 == 0.0 {
        return Extrapolated { value: a2, error_bar: 0.0, rate: None, flagged: false };
    }
    let q = d2 / d1;
    if !(d1 * d2 > 0.0) || !(q < 1.0) {
        let spread = a0.max(a1).max(a2) - a0.min(a1).min(a2);
        return Extrapolated { value: a2, error_bar: spread, rate: None, flagged: true };
    }
    let value = a2 - d2 * q / (1.0 - q);
    Extrapolated { value, error_bar: (value - a2).abs(), rate: Some(-q.log2()), flagged: false }
}

/// Per-index extrapolation over spectra computed at `h`, `h/2`, `h/4`.
pub fn refine_extrapolate(spectra: &[Spectrum]) -> Result<Vec<Extrapolated>> {
    let [s0, s1, s2] = spectra else {
        return Err(Error::Input(format!("need exactly three spectra, got {}", spectra.len())));
    };
    if s0.domain.descriptor != s1.domain.descriptor || s1.domain.descriptor != s2.domain.descriptor {
        return Err(Error::Input("spectra belong to different domains".into()));
    }
    let nested = |a: f64, b: f64| ((a / b) - 2.0).abs() < 1e-9;
    if !nested(s0.domain.h, s1.domain.h) || !nested(s1.domain.h, s2.domain.h) {
        return Err(Error::Input("spectra must be at spacings h, h/2, h/4".into()));
    }
    let k = s0.eigenvalues.len().min(s1.eigenvalues.len()).min(s2.eigenvalues.len());
    Ok((0..k).map(|i| extrapolate_triple(s0.eigenvalues[i], s1.eigenvalues[i], s2.eigenvalues[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converged_triple() {
        let e = extrapolate_triple(1.5, 1.5, 1.5);
        assert_eq!((e.value, e.error_bar, e.flagged), (1.5, 0.0, false));
    }

    #[test]
    fn geometric_triple_gives_rate_one() {
        let (x, e) = (2.0, 0.01);
        let r = extrapolate_triple(x + 4.0 * e, x + 2.0 * e, x + e);
        assert!((r.value - x).abs() < 1e-14);
        assert!((r.rate.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.error_bar - e).abs() < 1e-14);
    }

    #[test]
    fn non_monotone_is_flagged() {
        let r = extrapolate_triple(1.0, 1.2, 1.1);
        assert!(r.flagged);
        assert!((r.error_bar - 0.2).abs() < 1e-14);
        assert_eq!(r.value, 1.1);
    }
}
