//! Experiment orchestration: TOML configuration, a content-addressed spectrum
//! cache, certificate batches and report / CSV emission.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::bounds::{self, BoundCertificate, WeylRow};
use crate::coeffs::OperatorParams;
use crate::error::{Error, Result};
use crate::galerkin::{
    eigensolve, refine_extrapolate, torus_spectrum, BaseQuadrature, DomainDescriptor, Extrapolated, LatticeDomain,
    Method, Spectrum, DEFAULT_TOL,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_PADDING: usize = 8;

/// Certificate families a run can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Berezin,
    Counting,
    EigLower,
    Sandwich,
    Volume,
    AlternatingSum,
    ZeroPoint,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Berezin,
        Suite::Counting,
        Suite::EigLower,
        Suite::Sandwich,
        Suite::Volume,
        Suite::AlternatingSum,
        Suite::ZeroPoint,
    ];
}

fn default_methods() -> Vec<Method> {
    vec![Method::Dense]
}

fn default_tolerance() -> f64 {
    DEFAULT_TOL
}

fn default_padding() -> usize {
    DEFAULT_PADDING
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// Run description, read from TOML. Unknown keys are rejected.
///
/// ```toml
/// N = 1
/// m = 2
/// ladder = [0.001953125, 0.0009765625, 0.00048828125]
/// k = 200
/// methods = ["dense"]
/// suites = ["berezin", "counting", "eig_lower"]
/// output = "out"
///
/// [domain]
/// kind = "interval"
/// a = 0.0
/// b = 1.0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "N")]
    pub dim: usize,
    pub m: u32,
    pub domain: DomainDescriptor,
    /// Lattice spacings, strictly decreasing.
    pub ladder: Vec<f64>,
    pub k: usize,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default)]
    pub suites: Vec<Suite>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Overrides `LOGSPEC_CACHE` (default `./cache`).
    #[serde(default)]
    pub cache: Option<PathBuf>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_padding")]
    pub padding: usize,
    /// Restrict the eigenvalue lower bound to `k ≥ 2`.
    #[serde(default)]
    pub strict: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn params(&self) -> Result<OperatorParams> {
        OperatorParams::new(self.dim, self.m)
    }

    pub fn validate(&self) -> Result<()> {
        self.params().map_err(|e| Error::Config(e.to_string()))?;
        if self.domain.dim() != self.dim {
            return Err(Error::Config(format!("domain is {}-dimensional but N = {}", self.domain.dim(), self.dim)));
        }
        if self.ladder.is_empty() {
            return Err(Error::Config("ladder must not be empty".into()));
        }
        if self.ladder.iter().any(|&h| !(h > 0.0)) {
            return Err(Error::Config("ladder spacings must be positive".into()));
        }
        if self.ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("ladder must be strictly decreasing".into()));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("methods must not be empty".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// cache

/// Every numerical input that determines a spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRequest {
    pub params: OperatorParams,
    pub domain: DomainDescriptor,
    pub h: f64,
    pub k: usize,
    pub method: Method,
    pub padding: Option<usize>,
    pub tolerance: f64,
}

impl SpectrumRequest {
    pub fn cache_key(&self) -> String {
        let q = BaseQuadrature::default();
        let payload = serde_json::json!({
            "tool_version": TOOL_VERSION,
            "request": self,
            "base_quadrature": [q.panel_width, q.points as f64, q.tolerance],
        });
        hex::encode(Sha256::digest(payload.to_string().as_bytes()))
    }

    pub fn compute(&self) -> Result<Spectrum> {
        let domain = LatticeDomain::new(self.domain.clone(), self.h)?;
        match self.method {
            Method::Torus => torus_spectrum(&domain, self.params, self.padding.unwrap_or(DEFAULT_PADDING), self.k, self.tolerance),
            m => eigensolve(&domain, self.params, self.k, m, self.tolerance),
        }
    }
}

/// Cache directory from `LOGSPEC_CACHE`, defaulting to `./cache`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("LOGSPEC_CACHE").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("cache"))
}

/// Returns the spectrum and whether it came from the cache. Unreadable or
/// inconsistent entries are recomputed with a warning.
pub fn cached_spectrum(req: &SpectrumRequest, cache: Option<&Path>) -> Result<(Spectrum, bool)> {
    let Some(dir) = cache else { return Ok((req.compute()?, false)) };
    let path = dir.join(format!("{}.json", req.cache_key()));
    if path.exists() {
        match fs::read_to_string(&path).map_err(Error::from).and_then(|t| Ok(serde_json::from_str::<Spectrum>(&t)?)) {
            Ok(s) if s.params == req.params && s.eigenvalues.len() == req.k && s.domain.descriptor == req.domain => {
                return Ok((s, true));
            }
            Ok(_) => log::warn!("cache entry {} does not match its key; recomputing", path.display()),
            Err(e) => log::warn!("cache entry {} is corrupt ({e}); recomputing", path.display()),
        }
    }
    let spec = req.compute()?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(&spec)?)?;
    fs::rename(&tmp, &path)?;
    Ok((spec, false))
}

// ---------------------------------------------------------------------------
// certificates

/// Points of the λ grid used by the grid-based suites.
pub const GRID_POINTS: usize = 50;

/// Runs `suites` against one spectrum. `lambda1` is the first eigenvalue used
/// for case selection (e.g. an extrapolated value); defaults to the computed one.
pub fn certify(spec: &Spectrum, suites: &[Suite], lambda1: Option<f64>, strict: bool) -> Result<Vec<BoundCertificate>> {
    let run = |suite: &Suite| -> Result<Vec<BoundCertificate>> {
        let p = spec.params;
        let grid = bounds::lambda_grid(spec, GRID_POINTS);
        let first = lambda1.or(spec.eigenvalues.first().copied());
        match suite {
            Suite::Berezin => bounds::berezin_certificates(spec, &grid),
            Suite::Counting => bounds::counting_certificates(spec, &grid),
            Suite::EigLower if p.m >= 2 => bounds::eig_lower_certificates(spec, first, strict),
            Suite::Sandwich => Ok(grid.iter().map(|&l| bounds::sandwich_certificate(spec, l, 0.1)).collect()),
            Suite::Volume if p.m >= 2 => {
                let (a, b) = bounds::first_eig_volume_bounds(spec.domain.volume, p, None, first)?;
                Ok(vec![a, b])
            }
            Suite::AlternatingSum => {
                let a0 = 2.0 * (p.m as f64 - 1.0) / p.n();
                (0..20).map(|i| bounds::alternating_sum_certificate(p, a0 + 0.5 * i as f64)).collect()
            }
            Suite::ZeroPoint if p.m >= 2 => (0..=32)
                .map(|i| {
                    let tau = 10f64.powf(-2.0 + 8.0 * i as f64 / 32.0);
                    Ok(bounds::f1_zero(tau, p)?.certificate(p))
                })
                .collect(),
            // the remaining families need m ≥ 2
            _ => Ok(Vec::new()),
        }
    };
    #[cfg(feature = "parallel")]
    let batches: Vec<_> = {
        use rayon::prelude::*;
        suites.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let batches: Vec<_> = suites.iter().map(run).collect();
    let mut out = Vec::new();
    for b in batches {
        out.extend(b?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// report

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub method: Method,
    pub h: f64,
    pub cells: usize,
    pub k: usize,
    pub lambda_first: f64,
    pub lambda_last: f64,
    pub all_converged: bool,
    pub cache_key: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub spectra: Vec<SpectrumSummary>,
    /// Per-index extrapolation over the last three ladder levels of the first method.
    pub extrapolated: Option<Vec<Extrapolated>>,
    pub certificates: Vec<BoundCertificate>,
    pub weyl: Vec<WeylRow>,
    pub started_at: u64,
    pub finished_at: u64,
    /// Ladder levels served from the cache; not part of the serialised report.
    #[serde(skip)]
    pub cache_hits: usize,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(BoundCertificate::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCertificate> {
        self.certificates.iter().filter(|c| !c.passed())
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Runs the ladder for every method, certifies every spectrum, and writes
/// `report.json`, `spectrum.csv` (finest level of the first method) and
/// `weyl_ratios.csv` into the output directory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let started_at = unix_now();
    let params = config.params()?;
    let cache = config.cache.clone().unwrap_or_else(default_cache_dir);

    let mut spectra: Vec<Vec<Spectrum>> = Vec::new();
    let mut summaries = Vec::new();
    let mut cache_hits = 0;
    for &method in &config.methods {
        let mut level = Vec::new();
        for &h in &config.ladder {
            let req = SpectrumRequest {
                params,
                domain: config.domain.clone(),
                h,
                k: config.k,
                method,
                padding: (method == Method::Torus).then_some(config.padding),
                tolerance: config.tolerance,
            };
            let (spec, hit) = cached_spectrum(&req, Some(&cache))?;
            log::info!("{method:?} h={h}: {} eigenvalues{}", spec.len(), if hit { " (cached)" } else { "" });
            cache_hits += hit as usize;
            summaries.push(SpectrumSummary {
                method,
                h,
                cells: spec.domain.cells,
                k: spec.len(),
                lambda_first: spec.eigenvalues[0],
                lambda_last: *spec.eigenvalues.last().expect("k ≥ 1"),
                all_converged: spec.all_converged(),
                cache_key: req.cache_key(),
            });
            level.push(spec);
        }
        spectra.push(level);
    }

    let primary = &spectra[0];
    let extrapolated = if primary.len() >= 3 {
        match refine_extrapolate(&primary[primary.len() - 3..]) {
            Ok(e) => Some(e),
            Err(e) => {
                log::warn!("no extrapolation: {e}");
                None
            }
        }
    } else {
        None
    };
    let lambda1 = extrapolated.as_ref().and_then(|e| e.first()).map(|e| e.value);

    let mut certificates = Vec::new();
    for spec in spectra.iter().flatten() {
        certificates.extend(certify(spec, &config.suites, lambda1, config.strict)?);
    }

    let finest = primary.last().expect("ladder is non-empty");
    let weyl = bounds::weyl_diagnostics(finest, &bounds::lambda_grid(finest, 100));

    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.into(),
        config: config.clone(),
        spectra: summaries,
        extrapolated,
        certificates,
        weyl,
        started_at,
        finished_at: unix_now(),
        cache_hits,
    };
    fs::create_dir_all(&config.output)?;
    fs::write(config.output.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    fs::write(config.output.join("spectrum.csv"), spectrum_csv(finest))?;
    fs::write(config.output.join("weyl_ratios.csv"), weyl_csv(&report.weyl))?;
    Ok(report)
}

pub fn spectrum_csv(spec: &Spectrum) -> String {
    let mut s = String::from("k,lambda_k,residual\n");
    for (i, (l, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
        let _ = writeln!(s, "{},{l:e},{r:e}", i + 1);
    }
    s
}

pub fn weyl_csv(rows: &[WeylRow]) -> String {
    let mut s = String::from("lambda,ratio1,ratio2,resolved\n");
    for r in rows {
        let _ = writeln!(s, "{:e},{:e},{:e},{}", r.lambda, r.ratio1, r.ratio2, r.resolved);
    }
    s
}

// ---------------------------------------------------------------------------
// composition gap

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositionRow {
    pub k: usize,
    pub lambda1_squared: f64,
    pub lambda2: f64,
    /// `λ̃_{1,k}² − λ̃_{2,k}`.
    pub difference: f64,
}

/// Pairs `(λ̃_{1,k}², λ̃_{2,k})`: the Dirichlet spectrum of `L_2` is not the
/// square of that of `L_1`.
pub fn demo_composition_gap(first: &Spectrum, second: &Spectrum) -> Result<Vec<CompositionRow>> {
    if first.params.m != 1 || second.params.m != 2 {
        return Err(Error::Input("expected spectra for m = 1 and m = 2".into()));
    }
    if first.domain.descriptor != second.domain.descriptor || first.domain.h != second.domain.h {
        return Err(Error::Input("spectra must share the domain and the resolution".into()));
    }
    Ok(first
        .eigenvalues
        .iter()
        .zip(&second.eigenvalues)
        .enumerate()
        .map(|(i, (&a, &b))| CompositionRow { k: i + 1, lambda1_squared: a * a, lambda2: b, difference: a * a - b })
        .collect())
}
