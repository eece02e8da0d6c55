use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

use logspec::bounds::{self, BoundCertificate};
use logspec::coeffs::{self, Kappa, OperatorParams};
use logspec::experiment::{self, ExperimentConfig, SpectrumRequest, Suite};
use logspec::galerkin::{DomainDescriptor, Method, Spectrum, DEFAULT_TOL};
use logspec::operator::{self, QuadSettings, TestFunction};
use logspec::Error;

/// Dirichlet spectra of the m-order logarithmic Laplacian and their bounds.
///
/// Exit status: 0 when every certificate passes, 1 when any fails or the
/// computation breaks down, 2 on invalid usage.
#[derive(Parser)]
#[command(name = "logspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel coefficients, κ derivatives and structural constants.
    Coeffs {
        #[command(flatten)]
        op: OpArgs,
        /// Highest κ derivative to print.
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Evaluate L_m on a test function by the kernel and the symbol routes.
    EvalOp {
        #[command(flatten)]
        op: OpArgs,
        /// Evaluation point, comma separated for N = 2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long, value_enum, default_value_t = FunctionKind::Gaussian)]
        function: FunctionKind,
    },
    /// Galerkin eigenvalues on a lattice domain (cached under LOGSPEC_CACHE).
    Spectrum {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Dense)]
        method: MethodArg,
        #[arg(long, default_value_t = experiment::DEFAULT_PADDING)]
        padding: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Certificates for a spectrum JSON, or closed forms only.
    Bounds {
        /// Spectrum JSON as written by `spectrum`.
        #[arg(long, required_unless_present = "formulas_only", conflicts_with = "formulas_only")]
        spectrum: Option<PathBuf>,
        #[arg(long)]
        formulas_only: bool,
        /// Operator parameters for --formulas-only.
        #[arg(long = "N", default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        volume: f64,
        /// λ_{m,1} for case selection (odd m); defaults to the first computed eigenvalue.
        #[arg(long, allow_hyphen_values = true)]
        lambda1: Option<f64>,
        /// Restrict the eigenvalue lower bound to k ≥ 2.
        #[arg(long)]
        strict: bool,
    },
    /// Run an experiment from a TOML configuration.
    Report {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare λ_{1,k}² with λ_{2,k} on one domain.
    DemoComposition {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long = "N", default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 20)]
        k: usize,
    },
}

#[derive(Args)]
struct OpArgs {
    #[arg(long = "N", default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    m: u32,
}

impl OpArgs {
    fn params(&self) -> logspec::Result<OperatorParams> {
        OperatorParams::new(self.dim, self.m)
    }
}

#[derive(Args)]
struct DomainArgs {
    #[arg(long, value_enum, default_value_t = DomainKind::Interval)]
    domain: DomainKind,
    /// Lower end of the interval or of the square's side.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, value_delimiter = ',', default_value = "0,0", allow_hyphen_values = true)]
    center: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
}

impl DomainArgs {
    fn descriptor(&self) -> logspec::Result<DomainDescriptor> {
        Ok(match self.domain {
            DomainKind::Interval => DomainDescriptor::Interval { a: self.a, b: self.b },
            DomainKind::Box => DomainDescriptor::Box { a: self.a, b: self.b },
            DomainKind::Disk => {
                let [x, y] = self.center[..] else {
                    return Err(Error::Input("--center takes two comma-separated values".into()));
                };
                DomainDescriptor::Disk { center: [x, y], radius: self.radius }
            }
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainKind {
    Interval,
    Box,
    Disk,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dense,
    Krylov,
    Torus,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Dense => Method::Dense,
            MethodArg::Krylov => Method::Krylov,
            MethodArg::Torus => Method::Torus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionKind {
    Gaussian,
    Bump,
}

fn print_json(v: &impl serde::Serialize) -> logspec::Result<()> {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn verdict(certs: &[BoundCertificate]) -> ExitCode {
    let failed = certs.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        log::error!("{failed} of {} certificates failed", certs.len());
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn spectrum_request(
    params: OperatorParams,
    domain: &DomainArgs,
    h: f64,
    k: usize,
    method: Method,
    padding: usize,
    tol: f64,
) -> logspec::Result<SpectrumRequest> {
    Ok(SpectrumRequest {
        params,
        domain: domain.descriptor()?,
        h,
        k,
        method,
        padding: (method == Method::Torus).then_some(padding),
        tolerance: tol,
    })
}

fn formulas(params: OperatorParams, volume: f64, lambda1: Option<f64>, strict: bool) -> logspec::Result<(Value, Vec<BoundCertificate>)> {
    let mut certs = Vec::new();
    let mut values = serde_json::Map::new();
    let lambdas = [1.0, 4.0, 16.0, 64.0, 256.0];
    values.insert(
        "riesz_upper_bound".into(),
        json!(lambdas.iter().map(|&l| Ok(json!({ "lambda": l, "value": bounds::riesz_upper_bound(l, params, volume)? }))).collect::<logspec::Result<Vec<_>>>()?),
    );
    let a0 = 2.0 * (params.m as f64 - 1.0) / params.n();
    for i in 0..10 {
        certs.push(bounds::alternating_sum_certificate(params, a0 + i as f64)?);
    }
    if params.m >= 2 {
        values.insert("tau".into(), json!(bounds::solve_tau_constants(params.m)?));
        for i in 0..=16 {
            let tau = 10f64.powf(-2.0 + 0.5 * i as f64);
            certs.push(bounds::f1_zero(tau, params)?.certificate(params))
        }
        let case_lambda = if params.m % 2 == 1 { Some(lambda1.unwrap_or(0.0)) } else { lambda1 };
        let lower: Vec<Value> = (1..=10)
            .map(|k| {
                let b = bounds::eig_lower_bound_value(k, params, volume, case_lambda, bounds::LogForm::Statement)?;
                let skip = strict && k < 2;
                Ok(json!({ "k": k, "bound": if skip { None } else { Some(b) } }))
            })
            .collect::<logspec::Result<_>>()?;
        values.insert("eig_lower_bound".into(), json!(lower));
        values.insert("small_volume_curve".into(), json!(bounds::small_volume_curve(volume, params)?));
        if params.m % 2 == 1 {
            values.insert("d_m".into(), json!(bounds::d_m_lower(params)?));
            values.insert("rescaling_interval".into(), json!(lambda1.map(|l| bounds::rescaling_interval(l, 2.0, params, volume)).transpose()?));
            if params.dim >= 2 {
                values.insert("ball_bound_r0_half".into(), json!(bounds::ball_bound(0.5, params)?));
            }
        }
    }
    Ok((Value::Object(values), certs))
}

fn run(cli: Cli) -> logspec::Result<ExitCode> {
    match cli.command {
        Command::Coeffs { op, order } => {
            let p = op.params()?;
            let taylor = |which| coeffs::kappa_taylor(which, order, p);
            print_json(&json!({
                "params": p,
                "alpha": coeffs::alpha_coefficients(p)?,
                "kappa1_derivatives": (0..=order).map(|j| taylor(Kappa::One).map(|t| t.derivative(j))).collect::<logspec::Result<Vec<_>>>()?,
                "kappa2_derivatives": (0..=order).map(|j| taylor(Kappa::Two).map(|t| t.derivative(j))).collect::<logspec::Result<Vec<_>>>()?,
                "structural_constants": coeffs::structural_constants(p),
            }))?;
        }
        Command::EvalOp { op, x, function } => {
            let p = op.params()?;
            if x.len() != p.dim {
                return Err(Error::Input(format!("--x needs {} coordinate(s)", p.dim)));
            }
            let f = match function {
                FunctionKind::Gaussian => TestFunction::gaussian(p.dim),
                FunctionKind::Bump => TestFunction::bump(p.dim),
            };
            let q = QuadSettings::default();
            let kernel = operator::eval_lm_kernel(&f, &x, p, &q)?;
            let fourier = operator::eval_lm_fourier(&f, &x, p, &q)?;
            print_json(&json!({ "params": p, "x": x, "kernel": kernel, "fourier": fourier, "difference": kernel - fourier }))?;
        }
        Command::Spectrum { op, domain, h, k, method, padding, tol } => {
            let req = spectrum_request(op.params()?, &domain, h, k, method.into(), padding, tol)?;
            let (spec, hit) = experiment::cached_spectrum(&req, Some(&experiment::default_cache_dir()))?;
            log::info!("cache key {}{}", req.cache_key(), if hit { " (hit)" } else { "" });
            print_json(&spec)?;
        }
        Command::Bounds { spectrum, formulas_only, dim, m, volume, lambda1, strict } => {
            if formulas_only {
                let (values, certs) = formulas(OperatorParams::new(dim, m)?, volume, lambda1, strict)?;
                print_json(&json!({ "formulas": values, "certificates": certs }))?;
                return Ok(verdict(&certs));
            }
            let path = spectrum.expect("clap enforces --spectrum");
            let spec: Spectrum = serde_json::from_str(&std::fs::read_to_string(&path)?)
                .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            let certs = experiment::certify(&spec, &Suite::ALL, lambda1, strict)?;
            print_json(&certs)?;
            return Ok(verdict(&certs));
        }
        Command::Report { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = experiment::run_experiment(&cfg)?;
            let failed = report.failures().count();
            eprintln!(
                "{} spectra, {} certificates, {} failed; report in {}",
                report.spectra.len(),
                report.certificates.len(),
                failed,
                cfg.output.display()
            );
            return Ok(verdict(&report.certificates));
        }
        Command::DemoComposition { domain, dim, h, k } => {
            let cache = experiment::default_cache_dir();
            let get = |m| -> logspec::Result<Spectrum> {
                let req = spectrum_request(OperatorParams::new(dim, m)?, &domain, h, k, Method::Dense, 0, DEFAULT_TOL)?;
                Ok(experiment::cached_spectrum(&req, Some(&cache))?.0)
            };
            let rows = experiment::demo_composition_gap(&get(1)?, &get(2)?)?;
            print_json(&rows)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> Result<(), String> {
    let Some(raw) = std::env::var_os("LOGSPEC_THREADS") else { return Ok(()) };
    let n: usize = raw
        .to_str()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("LOGSPEC_THREADS must be a positive integer, got {raw:?}"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(
                e,
                Error::Domain { .. }
                    | Error::Input(_)
                    | Error::Config(_)
                    | Error::MissingInput(_)
                    | Error::Unsupported(_)
                    | Error::Capacity { .. }
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
