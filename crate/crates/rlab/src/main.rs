//! `rlab`: batch front end for the reinhardt library.
//!
//! Exit status is 0 on success, 1 on usage or input errors, 2 when a
//! hypothesis of the requested check is not met and 3 when a quadrature or
//! extrapolation failed to converge. Unconverged results are still written
//! before exiting with 3.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use reinhardt::diagnostics::{l1ball_counterexample, verify_comparison_lemma, verify_weight_equivalence};
use reinhardt::geometry::{
    classify_boundary, curvatures_at, domain_from_exponent, dual_complement, support_constants, DomainGeometry, DomainSpec,
};
use reinhardt::leray::{boundedness_report, leray_norm_grid, moment_table};
use reinhardt::numerics::QuadConfig;
use reinhardt::transform::{
    bergman_model_series, bergman_nu_norm_sq, bergman_omega_norm_sq, hardy_model_series, hardy_norm_sq, invert_laplace, laplace_map,
    CoefficientGrid, NuWeight, Side,
};

use output::{emit, json, num, Format, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] reinhardt::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("result not converged: {0}")]
    Unconverged(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(reinhardt::Error::HypothesisNotMet(_)) => 2,
            CliError::Lib(reinhardt::Error::NoConvergence { .. } | reinhardt::Error::Inconclusive) | CliError::Unconverged(_) => 3,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "rlab", version, about = "Leray norms, Laplace maps and diagnostics for convex Reinhardt domains")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Common {
    /// Domain as inline JSON or `@path`.
    #[arg(long, global = true)]
    domain: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Intercepts, exponent limits, class membership and boundary type.
    Describe,
    /// The dual complement and a sample of both exponent profiles.
    Dual {
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Curvatures and the recovered exponent at chosen parameters.
    Curvature {
        /// Comma-separated parameters in (0, 1).
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        /// Equally spaced interior parameters, used when `--s` is absent.
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
    /// Leray norms on the square grid of degrees up to `--max`.
    LerayGrid {
        #[arg(long, default_value_t = 20)]
        max: u32,
    },
    /// Ray sequences, grid sup growth and the boundedness verdict.
    LerayRays {
        #[arg(long, default_value_t = 64)]
        max: u32,
        /// Comma-separated ratios m1/m2.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        rays: Vec<f64>,
    },
    /// Laplace coefficients of a Hardy grid, or the inverse of a Laplace grid.
    Laplace {
        /// Coefficient grid as inline JSON or `@path`.
        #[arg(long)]
        coeffs: String,
    },
    /// Hardy and weighted Bergman norms of a coefficient grid.
    Norms {
        #[arg(long)]
        coeffs: String,
    },
    /// Sampled check of the comparison inequalities for `1 - F`.
    CompareLemma {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Stability of the normalised exponential weight over radii and directions.
    WeightEquiv {
        #[arg(long, default_value_t = 2.0)]
        rmin: f64,
        #[arg(long, default_value_t = 50.0)]
        rmax: f64,
        #[arg(long, default_value_t = 12)]
        nr: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1.5)]
        factor: f64,
    },
    /// Partial sums of the witness series on the L¹ ball.
    Counterexample {
        #[arg(long, default_value_t = 10_000)]
        kmax: u32,
    },
}

fn read_arg(value: &str) -> Result<String> {
    match value.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(value.to_string()),
    }
}

fn load_domain(common: &Common, cfg: &QuadConfig) -> Result<DomainGeometry> {
    let raw = common.domain.as_deref().ok_or_else(|| CliError::Usage("--domain is required for this command".into()))?;
    let spec = DomainSpec::from_json(&read_arg(raw)?)?;
    Ok(domain_from_exponent(&spec.to_profile()?, cfg)?)
}

fn load_grid(raw: &str) -> Result<CoefficientGrid> {
    Ok(CoefficientGrid::from_json(&read_arg(raw)?)?)
}

fn pick(format: Option<Format>, default: Format, csv_ok: bool) -> Result<Format> {
    let f = format.unwrap_or(default);
    if f == Format::Csv && !csv_ok {
        return Err(CliError::Usage("this command only writes JSON".into()));
    }
    Ok(f)
}

/// Text to write and, if something failed to converge, a note about it.
struct Outcome {
    text: String,
    unconverged: Option<String>,
}

impl Outcome {
    fn done(text: String) -> Self {
        Outcome { text, unconverged: None }
    }

    fn checked(text: String, converged: bool, what: &str) -> Self {
        Outcome { text, unconverged: (!converged).then(|| what.to_string()) }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let common = &cli.common;
    let cfg = QuadConfig::default().with_rel_tol(common.tol);
    cfg.validate()?;
    match cli.verb {
        Verb::Describe => {
            pick(common.format, Format::Json, false)?;
            let g = load_domain(common, &cfg)?;
            let report = json!({
                "domain": g.profile().to_spec(),
                "label": g.profile().label(),
                "b1": g.b1(),
                "b2": g.b2(),
                "p_limits": g.p_limits,
                "membership": g.membership,
                "classification": classify_boundary(&g),
                "support_constants": support_constants(&g),
            });
            Ok(Outcome::done(json(&report)?))
        }
        Verb::Dual { samples } => {
            let format = pick(common.format, Format::Json, true)?;
            let g = load_domain(common, &cfg)?;
            let d = dual_complement(&g);
            let ss: Vec<f64> = (1..=samples).map(|i| i as f64 / (samples + 1) as f64).collect();
            match format {
                Format::Csv => {
                    let mut t = Table::new(&["s", "p_check", "p_check_dual", "r1", "r2", "r1_star", "r2_star"]);
                    for s in ss {
                        t.push(vec![num(s), num(g.p_check(s)), num(d.p_check(s)), num(g.r1(s)), num(g.r2(s)), num(g.r1_star(s)), num(g.r2_star(s))]);
                    }
                    Ok(Outcome::done(t.render()?))
                }
                Format::Json => {
                    let samples: Vec<_> = ss.iter().map(|&s| json!({ "s": s, "p_check": g.p_check(s), "p_check_dual": d.p_check(s) })).collect();
                    let report = json!({
                        "domain": g.profile().to_spec(),
                        "dual": d.profile().to_spec(),
                        "b1_dual": d.b1(),
                        "b2_dual": d.b2(),
                        "p_limits_dual": d.p_limits,
                        "membership_dual": d.membership,
                        "samples": samples,
                    });
                    Ok(Outcome::done(json(&report)?))
                }
            }
        }
        Verb::Curvature { s, samples } => {
            let format = pick(common.format, Format::Csv, true)?;
            let g = load_domain(common, &cfg)?;
            let ss = if s.is_empty() { (1..=samples).map(|i| i as f64 / (samples + 1) as f64).collect() } else { s };
            let rows = ss.iter().map(|&s| Ok((s, curvatures_at(&g, s)?))).collect::<Result<Vec<_>>>()?;
            match format {
                Format::Csv => {
                    let mut t = Table::new(&["s", "p_check", "kappa1", "kappa2", "kappa3", "kappa_ratio", "normal_factor", "recovered_exponent"]);
                    for (s, c) in &rows {
                        t.push(vec![
                            num(*s),
                            num(g.p_check(*s)),
                            num(c.kappa1),
                            num(c.kappa2),
                            num(c.kappa3),
                            num(c.kappa_ratio),
                            num(c.normal_factor),
                            num(c.recovered_exponent()),
                        ]);
                    }
                    Ok(Outcome::done(t.render()?))
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        s: f64,
                        p_check: f64,
                        #[serde(flatten)]
                        curvatures: reinhardt::geometry::CurvatureTriple,
                        recovered_exponent: f64,
                    }
                    let rows: Vec<Row> =
                        rows.into_iter().map(|(s, c)| Row { s, p_check: g.p_check(s), curvatures: c, recovered_exponent: c.recovered_exponent() }).collect();
                    Ok(Outcome::done(json(&rows)?))
                }
            }
        }
        Verb::LerayGrid { max } => {
            let format = pick(common.format, Format::Csv, true)?;
            let g = load_domain(common, &cfg)?;
            let grid = leray_norm_grid(&g, max, max, &cfg)?;
            let text = match format {
                Format::Csv => {
                    let mut t = Table::new(&["m1", "m2", "log_norm_sq", "err_est"]);
                    for (m1, m2, v, e) in grid.entries() {
                        t.push(vec![m1.to_string(), m2.to_string(), num(v), num(e)]);
                    }
                    t.render()?
                }
                Format::Json => json(&grid)?,
            };
            Ok(Outcome::checked(text, grid.all_converged(), "some Leray norms"))
        }
        Verb::LerayRays { max, rays } => {
            pick(common.format, Format::Json, false)?;
            let g = load_domain(common, &cfg)?;
            let report = boundedness_report(&g, max, &rays, &cfg)?;
            let ok = report.rays.iter().all(|r| r.converged);
            Ok(Outcome::checked(json(&report)?, ok, "ray extrapolation"))
        }
        Verb::Laplace { coeffs } => {
            let format = pick(common.format, Format::Json, true)?;
            let g = load_domain(common, &cfg)?;
            let grid = load_grid(&coeffs)?;
            let (m1, m2) = grid.max_degrees();
            let table = moment_table(&g, m1, m2, &cfg)?;
            let image = match grid.side {
                Side::Hardy => laplace_map(&g, &grid, &table)?,
                Side::Laplace => invert_laplace(&g, &grid, &table)?,
                Side::Bergman => return Err(CliError::Usage("laplace expects a hardy or laplace grid".into())),
            };
            let text = match format {
                Format::Csv => {
                    let mut t = Table::new(&["m1", "m2", "re", "im"]);
                    for (m1, m2, c) in image.iter() {
                        t.push(vec![m1.to_string(), m2.to_string(), num(c.re), num(c.im)]);
                    }
                    t.render()?
                }
                Format::Json => image.to_json() + "\n",
            };
            Ok(Outcome::checked(text, table.all_converged(), "moment table"))
        }
        Verb::Norms { coeffs } => {
            pick(common.format, Format::Json, false)?;
            let g = load_domain(common, &cfg)?;
            let grid = load_grid(&coeffs)?;
            match grid.side {
                Side::Hardy => {
                    let (m1, m2) = grid.max_degrees();
                    let table = moment_table(&g, m1, m2, &cfg)?;
                    let mu = hardy_norm_sq(&g, &grid, &table)?;
                    let model = hardy_model_series(&g, &grid, &table)?;
                    let mut beta = laplace_map(&g, &grid, &table)?;
                    beta.side = Side::Bergman;
                    let nu = bergman_nu_norm_sq(&g, &beta, NuWeight::Euclidean, &cfg)?;
                    let ok = mu.converged && nu.converged;
                    let report = json!({
                        "side": grid.side,
                        "hardy": mu,
                        "hardy_model_series": model,
                        "laplace_nu": nu,
                        "ratio": (nu.log_value - mu.log_value).exp(),
                    });
                    Ok(Outcome::checked(json(&report)?, ok, "norm quadrature"))
                }
                Side::Bergman | Side::Laplace => {
                    let mut beta = grid;
                    beta.side = Side::Bergman;
                    let nu = bergman_nu_norm_sq(&g, &beta, NuWeight::Euclidean, &cfg)?;
                    let model = bergman_model_series(&g, &beta, &cfg)?;
                    let omega = bergman_omega_norm_sq(&g, &beta, &cfg)?;
                    let ok = nu.converged && model.converged && omega.converged;
                    let report = json!({ "side": Side::Bergman, "nu": nu, "nu_model_series": model, "omega": omega });
                    Ok(Outcome::checked(json(&report)?, ok, "norm quadrature"))
                }
            }
        }
        Verb::CompareLemma { samples, seed } => {
            pick(common.format, Format::Json, false)?;
            let g = load_domain(common, &cfg)?;
            Ok(Outcome::done(json(&verify_comparison_lemma(&g, samples, seed)?)?))
        }
        Verb::WeightEquiv { rmin, rmax, nr, t, factor } => {
            let format = pick(common.format, Format::Json, true)?;
            let g = load_domain(common, &cfg)?;
            let r = verify_weight_equivalence(&g, (rmin, rmax), nr, &t, factor, &cfg)?;
            let text = match format {
                Format::Csv => {
                    let mut tab = Table::new(&["t", "r", "rho"]);
                    for (t, row) in r.t_values.iter().zip(&r.rho) {
                        for (rv, rho) in r.r_values.iter().zip(row) {
                            tab.push(vec![num(*t), num(*rv), num(*rho)]);
                        }
                    }
                    tab.render()?
                }
                Format::Json => json(&r)?,
            };
            Ok(Outcome::done(text))
        }
        Verb::Counterexample { kmax } => {
            let format = pick(common.format, Format::Json, true)?;
            let r = l1ball_counterexample(kmax)?;
            let text = match format {
                Format::Csv => {
                    let mut t = Table::new(&["k", "hardy", "nu_f", "nu_g", "omega_g"]);
                    for k in 0..r.hardy_partial_sums.len() {
                        t.push(vec![
                            (k + 1).to_string(),
                            num(r.hardy_partial_sums[k]),
                            num(r.bergman_nu_partial_sums[k]),
                            num(r.bergman_nu_partial_sums_g[k]),
                            num(r.bergman_omega_partial_sums[k]),
                        ]);
                    }
                    t.render()?
                }
                Format::Json => json(&r)?,
            };
            Ok(Outcome::done(text))
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("RLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| CliError::Usage(format!("RLAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.common.out.clone();
    let result = configure_threads().and_then(|_| run(cli)).and_then(|o| {
        emit(&o.text, out.as_deref())?;
        match o.unconverged {
            Some(what) => Err(CliError::Unconverged(what)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
