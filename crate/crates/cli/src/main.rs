//! Command-line front end: solve Dirichlet problems with oscillating data,
//! run convergence-rate sweeps, probe oscillatory-integral decay, and run
//! the verification suites.
//!
//! Exit codes: 0 on success, 2 when a flag or config value fails
//! validation (the message names the offending field), 3 on numerical
//! failure (under-resolution, solve failure) with a remediation hint.

mod config;

use clap::{Args, Parser, Subcommand};
use config::FileConfig;
use oscihomog_core::error::Error;
use oscihomog_core::fit::SlopeFit;
use oscihomog_core::rates::{emit_report, run_rates, RateSettings};
use oscihomog_core::solver::SolverSettings;
use oscihomog_core::{fourier, geometry, lemmas, oscint, rates, solver};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "oscihomog",
    about = "Numerical laboratory for Dirichlet problems with rapidly oscillating boundary data",
    version
)]
struct Cli {
    /// JSON config file mirroring all flags; explicit flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Thread cap for parallel sweeps (env OSCIHOMOG_THREADS; 0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized diagnostics; identical seeds reproduce artifacts
    /// byte for byte [default: 7].
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default, Clone)]
struct SolverKnobs {
    /// Quadrature nodes per boundary wavelength of g(x/eps), in [8, 64]
    /// [default: 20]. Drives the resolution rule
    /// N = max(256, ppw * perimeter * max_freq / eps).
    #[arg(long)]
    points_per_wavelength: Option<f64>,

    /// Hard cap on quadrature nodes, at most 2^20 [default: 2^20].
    #[arg(long)]
    node_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one Dirichlet problem with boundary data g(x/eps) and
    /// tabulate interior values against the homogenized constant mean(g).
    Solve {
        /// Domain descriptor: circle:R, ellipse:A,B, or radial:<json file>.
        #[arg(long)]
        domain: Option<String>,
        /// Boundary data: builtin:cos1, builtin:cos-cos, builtin:decay-p.
        #[arg(long)]
        g: Option<String>,
        /// Boundary data from a JSON coefficient file
        /// [{"m": [1, 0], "re": 0.5, "im": 0.0}, ...]; overrides --g.
        #[arg(long)]
        g_file: Option<PathBuf>,
        /// Oscillation scale in (0, 1].
        #[arg(long)]
        eps: Option<f64>,
        /// JSON file with evaluation points [[x1, x2], ...]; defaults to 16
        /// points on the offset ring at 0.2 * inradius.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Solver backend: disk (circles only) or bie [default: by domain].
        #[arg(long)]
        backend: Option<String>,
        /// Output format: csv or json [default: csv].
        #[arg(long)]
        out: Option<String>,
        /// Output directory [default: out].
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        knobs: SolverKnobs,
    },
    /// Sweep eps and fit convergence exponents pointwise and in L^p.
    Rates {
        #[arg(long)]
        domain: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        g_file: Option<PathBuf>,
        /// Geometric eps grid start:ratio:count [default: 0.1:0.5:6].
        #[arg(long)]
        eps_grid: Option<String>,
        /// Distance band for the pointwise fit, as a fraction of the
        /// inradius [default: 0.2].
        #[arg(long)]
        band: Option<f64>,
        /// Comma-separated L^p exponents, each >= 1 [default: 1,2].
        #[arg(long)]
        p: Option<String>,
        /// Points per offset ring [default: 32].
        #[arg(long)]
        n_points: Option<usize>,
        /// Output directory for records.csv, report.json, and SVG plots
        /// [default: out].
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        knobs: SolverKnobs,
    },
    /// Sweep an oscillatory-integral case family over rho|xi| and fit the
    /// decay exponent.
    Oscint {
        /// Case family: stationary2d, stationary2d-circle, nonstationary,
        /// tilted, or stationary3d.
        #[arg(long)]
        case: Option<String>,
        /// Smallest rho|xi| of the dyadic grid [default: 32].
        #[arg(long)]
        lambda_min: Option<f64>,
        /// Largest rho|xi| of the dyadic grid [default: 4096, or 1024 for
        /// stationary3d].
        #[arg(long)]
        lambda_max: Option<f64>,
        /// Chart rescaling rho for the rho-parametrized families
        /// [default: 1].
        #[arg(long)]
        rho: Option<f64>,
        /// Output format: csv [default: csv].
        #[arg(long)]
        out: Option<String>,
        /// Output directory [default: out].
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the verification suites and print a PASS/FAIL table.
    Lemmas {
        /// Run every suite (the default when --suite is absent).
        #[arg(long, conflicts_with = "suite")]
        all: bool,
        /// Run one suite: kernel-bounds, multiindex, coefficient-decay, or
        /// oscillatory-decay.
        #[arg(long)]
        suite: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResolutionCap { .. } | Error::SolveFailure(_) | Error::ChartTooWide(_) => 3,
        _ => 2,
    }
}

fn init_threads(cli_threads: Option<usize>, cfg: &FileConfig) -> Result<(), Error> {
    let n = cli_threads
        .or(cfg.threads)
        .or_else(|| std::env::var("OSCIHOMOG_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = n {
        if n > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Error::InvalidInput { field: "threads", reason: e.to_string() })?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    init_threads(cli.threads, &cfg)?;
    let seed = cli.seed.or(cfg.seed).unwrap_or(7);

    match cli.command {
        Command::Solve { domain, g, g_file, eps, points, backend, out, out_dir, knobs } => {
            let solver_settings = merge_knobs(&knobs, &cfg)?;
            let domain = require("domain", domain.or_else(|| cfg.domain.clone()))?;
            let dom = geometry::parse_domain(&domain)?;
            let g = load_data(g, g_file, &cfg)?;
            let eps = require("eps", eps.or(cfg.eps))?;
            let backend = backend.or_else(|| cfg.backend.clone());
            let out = out.or_else(|| cfg.out.clone()).unwrap_or_else(|| "csv".into());
            let out_dir = out_dir
                .or_else(|| cfg.out_dir.clone().map(PathBuf::from))
                .unwrap_or_else(|| "out".into());
            let points = match points.or_else(|| cfg.points.clone().map(PathBuf::from)) {
                Some(path) => load_points(&path)?,
                None => default_ring(&dom, 16),
            };
            cmd_solve(&dom, &g, eps, &points, backend.as_deref(), &out, &out_dir, &solver_settings)
        }
        Command::Rates { domain, g, g_file, eps_grid, band, p, n_points, out, knobs } => {
            let solver_settings = merge_knobs(&knobs, &cfg)?;
            let domain = require("domain", domain.or_else(|| cfg.domain.clone()))?;
            let dom = geometry::parse_domain(&domain)?;
            let (g, g_name) = load_data_named(g, g_file, &cfg)?;
            let grid_spec =
                eps_grid.or_else(|| cfg.eps_grid.clone()).unwrap_or_else(|| "0.1:0.5:6".into());
            let eps_grid = parse_eps_grid(&grid_spec)?;
            let band = band.or(cfg.band).unwrap_or(0.2);
            if !(band > 0.0 && band < 1.0) {
                return Err(Error::InvalidInput {
                    field: "band",
                    reason: format!("must be a fraction of the inradius in (0, 1), got {band}"),
                });
            }
            let ps = parse_p_list(&p.or_else(|| cfg.p.clone()).unwrap_or_else(|| "1,2".into()))?;
            let settings = RateSettings {
                solver: solver_settings,
                n_points: n_points.or(cfg.n_points).unwrap_or(32),
                seed,
            };
            let out =
                out.or_else(|| cfg.out.clone().map(PathBuf::from)).unwrap_or_else(|| "out".into());
            let report = run_rates(&dom, &g, &g_name, &eps_grid, band, &ps, &settings)?;
            let formats: Vec<String> = ["csv", "json", "svg"].iter().map(|s| s.to_string()).collect();
            let files = emit_report(&report, &formats, &out)?;
            print_rates_summary(&report);
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
        Command::Oscint { case, lambda_min, lambda_max, rho, out, out_dir } => {
            let case = require("case", case.or_else(|| cfg.case.clone()))?;
            let rho = rho.or(cfg.rho).unwrap_or(1.0);
            let family = oscint::family_with_rho(&case, rho)?;
            let lo = lambda_min.or(cfg.lambda_min).unwrap_or(32.0);
            let hi = lambda_max
                .or(cfg.lambda_max)
                .unwrap_or(if family.dim() == 2 { 1024.0 } else { 4096.0 });
            let out = out.or_else(|| cfg.out.clone()).unwrap_or_else(|| "csv".into());
            if out != "csv" {
                return Err(Error::InvalidInput {
                    field: "out",
                    reason: format!("oscint writes csv only, got `{out}`"),
                });
            }
            let out_dir = out_dir
                .or_else(|| cfg.out_dir.clone().map(PathBuf::from))
                .unwrap_or_else(|| "out".into());
            let grid = oscint::dyadic_grid(lo, hi);
            let report = oscint::decay_exponent(family.as_ref(), &grid, oscint::DEFAULT_J_TOL)?;
            let mut csv = String::from("lambda,rho,abs_J,bound_product\n");
            for r in &report.rows {
                let _ = writeln!(csv, "{},{},{},{}", r.lambda, r.rho, r.abs_j, r.bound_product);
            }
            std::fs::create_dir_all(&out_dir)?;
            let path = out_dir.join("oscint.csv");
            std::fs::write(&path, csv)?;
            if report.floor_hit {
                println!(
                    "{case}: |J| fully decayed below {:.0e} (slope sentinel -inf)",
                    oscint::J_FLOOR
                );
            } else {
                println!("{case}: fitted slope {:.4}", report.slope());
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Lemmas { all, suite } => cmd_lemmas(all, suite, seed),
    }
}

fn require<T>(field: &'static str, v: Option<T>) -> Result<T, Error> {
    v.ok_or(Error::InvalidInput { field, reason: "missing (flag or config)".into() })
}

fn merge_knobs(knobs: &SolverKnobs, cfg: &FileConfig) -> Result<SolverSettings, Error> {
    let ppw = knobs
        .points_per_wavelength
        .or(cfg.points_per_wavelength)
        .unwrap_or(solver::DEFAULT_POINTS_PER_WAVELENGTH);
    if !(8.0..=64.0).contains(&ppw) {
        return Err(Error::InvalidInput {
            field: "points_per_wavelength",
            reason: format!("must be in [8, 64], got {ppw}"),
        });
    }
    let cap = knobs.node_cap.or(cfg.node_cap).unwrap_or(solver::DEFAULT_NODE_CAP);
    if cap > (1 << 20) {
        return Err(Error::InvalidInput {
            field: "node_cap",
            reason: format!("must be <= 2^20, got {cap}"),
        });
    }
    Ok(SolverSettings { points_per_wavelength: ppw, node_cap: cap })
}

fn load_data(
    g: Option<String>,
    g_file: Option<PathBuf>,
    cfg: &FileConfig,
) -> Result<fourier::FourierData, Error> {
    Ok(load_data_named(g, g_file, cfg)?.0)
}

fn load_data_named(
    g: Option<String>,
    g_file: Option<PathBuf>,
    cfg: &FileConfig,
) -> Result<(fourier::FourierData, String), Error> {
    let g_file = g_file.or_else(|| cfg.g_file.clone().map(PathBuf::from));
    if let Some(path) = g_file {
        let text = std::fs::read_to_string(&path)?;
        return Ok((fourier::from_json(&text)?, format!("file:{}", path.display())));
    }
    let spec = require("g", g.or_else(|| cfg.g.clone()))?;
    match spec.strip_prefix("builtin:") {
        Some(name) => Ok((fourier::builtin(name)?, spec.clone())),
        None => Err(Error::InvalidInput {
            field: "g",
            reason: format!("expected builtin:<name> or --g-file, got `{spec}`"),
        }),
    }
}

fn load_points(path: &Path) -> Result<Vec<[f64; 2]>, Error> {
    let text = std::fs::read_to_string(path)?;
    let pts: Vec<[f64; 2]> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if pts.is_empty() {
        return Err(Error::InvalidInput { field: "points", reason: "empty point list".into() });
    }
    Ok(pts)
}

fn default_ring(dom: &geometry::ConvexDomain, n: usize) -> Vec<[f64; 2]> {
    let d = 0.2 * dom.inradius();
    (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let p = dom.point(t);
            let nrm = dom.normal(t);
            [p[0] - d * nrm[0], p[1] - d * nrm[1]]
        })
        .collect()
}

fn parse_eps_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput {
            field: "eps_grid",
            reason: format!("expected start:ratio:count, got `{spec}`"),
        });
    }
    let start: f64 = parts[0].parse().map_err(|_| Error::InvalidInput {
        field: "eps_grid",
        reason: format!("bad start `{}`", parts[0]),
    })?;
    let ratio: f64 = parts[1].parse().map_err(|_| Error::InvalidInput {
        field: "eps_grid",
        reason: format!("bad ratio `{}`", parts[1]),
    })?;
    let count: usize = parts[2].parse().map_err(|_| Error::InvalidInput {
        field: "eps_grid",
        reason: format!("bad count `{}`", parts[2]),
    })?;
    if !(start > 0.0 && start <= 1.0 && ratio > 0.0 && ratio < 1.0 && count >= 1) {
        return Err(Error::InvalidInput {
            field: "eps_grid",
            reason: "need start in (0,1], ratio in (0,1), count >= 1".into(),
        });
    }
    Ok(rates::geometric_grid(start, ratio, count))
}

fn parse_p_list(spec: &str) -> Result<Vec<f64>, Error> {
    let mut out = Vec::new();
    for tok in spec.split(',') {
        let p: f64 = tok.trim().parse().map_err(|_| Error::InvalidInput {
            field: "p",
            reason: format!("bad exponent `{tok}`"),
        })?;
        if !(p >= 1.0) {
            return Err(Error::InvalidInput { field: "p", reason: format!("need p >= 1, got {p}") });
        }
        out.push(p);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    dom: &geometry::ConvexDomain,
    g: &fourier::FourierData,
    eps: f64,
    points: &[[f64; 2]],
    backend: Option<&str>,
    out: &str,
    out_dir: &Path,
    settings: &SolverSettings,
) -> Result<(), Error> {
    let sol = solver::solve_oscillating(dom, g, eps, None, backend, settings)?;
    let u0 = g.mean().re;
    let mut rows = Vec::with_capacity(points.len());
    for x in points {
        let (dist, _) = dom.distance_to_boundary(x)?;
        let u = sol.evaluate_interior(x)?;
        rows.push((x[0], x[1], dist, u, u0, (u - u0).abs()));
    }
    std::fs::create_dir_all(out_dir)?;
    let path = match out {
        "csv" => {
            let mut text = String::from("x1,x2,dist,u_eps,u0,abs_err\n");
            for (x1, x2, dist, u, u0, err) in &rows {
                let _ = writeln!(text, "{x1},{x2},{dist},{u},{u0},{err}");
            }
            let path = out_dir.join("solve.csv");
            std::fs::write(&path, text)?;
            path
        }
        "json" => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|(x1, x2, dist, u, u0, err)| {
                    serde_json::json!({
                        "x": [x1, x2], "dist": dist, "u_eps": u, "u0": u0, "abs_err": err
                    })
                })
                .collect();
            let path = out_dir.join("solve.json");
            std::fs::write(&path, serde_json::to_string_pretty(&items)?)?;
            path
        }
        other => {
            return Err(Error::InvalidInput {
                field: "out",
                reason: format!("expected csv or json, got `{other}`"),
            })
        }
    };
    println!(
        "solved {} nodes on {} via {}; wrote {}",
        sol.resolution(),
        dom.descriptor(),
        sol.backend_name(),
        path.display()
    );
    Ok(())
}

fn print_rates_summary(report: &oscihomog_core::rates::RateReport) {
    match &report.pointwise_fit {
        Some(SlopeFit::Fit { slope, r2, .. }) => {
            println!("pointwise: slope {slope:.4} (r2 {r2:.4})");
        }
        Some(SlopeFit::Exact) => println!("pointwise: exact (errors at floor)"),
        _ => println!("pointwise: no fit"),
    }
    if let Some(SlopeFit::Fit { slope, .. }) = &report.kappa_hat {
        println!("kappa_hat: {slope:.4}");
    }
    for entry in &report.lp {
        match &entry.fit {
            SlopeFit::Fit { slope, .. } => println!("L^{}: slope {slope:.4}", entry.p),
            _ => println!("L^{}: no fit", entry.p),
        }
    }
}

fn cmd_lemmas(all: bool, suite: Option<String>, seed: u64) -> Result<(), Error> {
    let _ = all;
    let reports = match suite.as_deref() {
        None => lemmas::run_all(seed)?,
        Some("kernel-bounds") => vec![lemmas::kernel_bound_suite()?],
        Some("multiindex") => vec![lemmas::multiindex_suite()?],
        Some("coefficient-decay") => vec![lemmas::coefficient_decay_suite()?],
        Some("oscillatory-decay") => vec![lemmas::oscillatory_suite(seed)?],
        Some(other) => {
            return Err(Error::UnknownStrategy {
                kind: "suite",
                name: other.into(),
                available: "kernel-bounds, multiindex, coefficient-decay, oscillatory-decay".into(),
            })
        }
    };
    let mut all_passed = true;
    for rep in &reports {
        println!("[{}]", rep.suite);
        for c in &rep.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            println!("  {tag}  {} — {}", c.name, c.detail);
            all_passed &= c.passed;
        }
    }
    if all_passed {
        println!("all suites passed");
        Ok(())
    } else {
        Err(Error::SolveFailure(
            "one or more checks failed; rerun the failing suite with --suite for detail".into(),
        ))
    }
}
