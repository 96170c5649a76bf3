use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use frax_core::extension::{extend, extend2, poisson_kernel, poisson_kernel_mass};
use frax_core::grid::{frac_laplacian, product_frac_laplacian};
use frax_core::hyperbolic::{
    radial_residual_halfspace, radial_residual_hyperboloid, spherical_function, HalfSpaceVariant,
    PowerBranch,
};
use frax_core::scattering::{extension_heights, scattering_from_extension, scattering_matrix_spectral};
use frax_core::specfun::bessel_k;
use frax_core::{FracParams, GridFunction, ProductParams, RootDatum};
use frax_cli::grid_file::{read_grid, render_grid, write_text, GridDocument};
use frax_cli::{run_verification_suite, CliError, Suite, SuiteConfig};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "frax", version, about = "Fractional Laplacians, extensions and product scattering on periodic grids")]
struct Cli {
    /// Output format; `verify` defaults to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScatterMethod {
    Spectral,
    Extension,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RadialModel {
    HalfspaceEuler,
    HalfspaceBessel,
    Hyperboloid,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Branch {
    Decaying,
    Growing,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KernelMode {
    Eval,
    Mass,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply (-Δ)^γ, or the axis product when --gamma2 is given.
    FracApply {
        #[arg(long)]
        gamma: f64,
        /// Second-axis order for a two-dimensional grid.
        #[arg(long)]
        gamma2: Option<f64>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the extension at one height, or at a pair of heights.
    Extend {
        #[arg(long, value_delimiter = ',', num_args = 1..=2, required = true)]
        gamma: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 1..=2, required = true)]
        height: Vec<f64>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the four scattering entries of a two-dimensional grid.
    Scatter {
        #[arg(long)]
        gamma1: f64,
        #[arg(long)]
        gamma2: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value = "spectral")]
        method: ScatterMethod,
    },
    /// Tabulate a radial solution and its equation residual.
    Radial {
        #[arg(long, value_enum)]
        model: RadialModel,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum, default_value = "decaying")]
        branch: Branch,
        #[arg(long, default_value_t = 0.1)]
        from: f64,
        #[arg(long, default_value_t = 10.0)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Evaluate the weighted Poisson kernel or its total mass.
    Kernel {
        #[arg(long, value_enum)]
        mode: KernelMode,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        height: f64,
        /// Boundary point for `eval`, comma separated.
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
    },
    /// Run the verification suite.
    Verify {
        /// JSON suite configuration; flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Replace every check tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        gammas: Vec<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("frax: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means the command ran but some verification check failed.
fn run(cli: Cli) -> Result<bool, CliError> {
    let format = cli.format;
    match cli.command {
        Command::FracApply { gamma, gamma2, input, output } => {
            let f = read_grid(&input)?;
            let out = match gamma2 {
                None => frac_laplacian(&f, gamma)?,
                Some(g2) if f.dim() == 2 => product_frac_laplacian(&f, gamma, g2)?,
                Some(_) => {
                    return Err(CliError::Usage(format!("--gamma2 needs a two-dimensional grid, got dim={}", f.dim())))
                }
            };
            emit_grid(&out, format, output.as_deref())?;
        }
        Command::Extend { gamma, height, input, output } => {
            let f = read_grid(&input)?;
            let out = match (gamma.as_slice(), height.as_slice()) {
                ([g], [y]) => extend(&f, &FracParams::new(f.dim() as u32, *g)?, *y)?,
                ([g1, g2], [y1, y2]) => {
                    if f.dim() != 2 {
                        return Err(CliError::Usage("a product extension needs a two-dimensional grid".into()));
                    }
                    extend2(&f, &ProductParams::planar(*g1, *g2)?, *y1, *y2)?
                }
                _ => return Err(CliError::Usage("--gamma and --height must both have one or two values".into())),
            };
            emit_grid(&out, format, output.as_deref())?;
        }
        Command::Scatter { gamma1, gamma2, input, out_dir, method } => {
            let f = read_grid(&input)?;
            let params = ProductParams::planar(gamma1, gamma2)?;
            let (quad, fit) = match method {
                ScatterMethod::Spectral => (scattering_matrix_spectral(&f, &params)?, None),
                ScatterMethod::Extension => {
                    let (q, outcome) = scattering_from_extension(&f, &params, &extension_heights())?;
                    (q, Some(outcome))
                }
            };
            std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
            let names = ["s11", "s12", "s21", "s22"];
            for (name, entry) in names.iter().zip(quad.entries()) {
                write_text(&out_dir.join(format!("{name}.csv")), &render_grid(entry))?;
            }
            let mut summary = json!({
                "gamma1": gamma1,
                "gamma2": gamma2,
                "method": format!("{method:?}").to_lowercase(),
                "sizes": f.sizes(),
                "entries": names,
            });
            if let Some(outcome) = fit {
                summary["max_fit_residual"] = json!(outcome.residual.max_abs());
                summary["condition_number"] = json!(outcome.condition);
            }
            write_text(&out_dir.join("summary.json"), &serde_json::to_string_pretty(&summary)?)?;
        }
        Command::Radial { model, n, gamma, branch, from, to, points } => {
            if !(from > 0.0 && to > from && points >= 2) {
                return Err(CliError::Usage("need 0 < --from < --to and --points >= 2".into()));
            }
            let params = FracParams::new(n, gamma)?;
            let mut rows = Vec::with_capacity(points);
            for j in 0..points {
                let r = from * (to / from).powf(j as f64 / (points - 1) as f64);
                rows.push(radial_row(model, branch, &params, r)?);
            }
            let text = match format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("r,solution,residual\n");
                    for (r, v, res) in &rows {
                        let _ = writeln!(s, "{r},{v},{res}");
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(
                    &rows.iter().map(|(r, v, res)| json!({ "r": r, "solution": v, "residual": res })).collect::<Vec<_>>(),
                )?,
            };
            print!("{text}");
        }
        Command::Kernel { mode, n, gamma, height, x } => {
            let params = FracParams::new(n, gamma)?;
            let (label, value) = match mode {
                KernelMode::Mass => ("mass", poisson_kernel_mass(&params, height)?),
                KernelMode::Eval => {
                    if x.len() != n as usize {
                        return Err(CliError::Usage(format!("--x needs {n} coordinates, got {}", x.len())));
                    }
                    ("kernel", poisson_kernel(&x, height, &params)?)
                }
            };
            match format.unwrap_or(Format::Csv) {
                Format::Csv => println!("{label}\n{value}"),
                Format::Json => println!("{}", json!({ label: value })),
            }
        }
        Command::Verify { config, suite, seed, tolerance, sizes, gammas, output } => {
            let mut cfg = match &config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                    SuiteConfig::from_json(&text)?
                }
                None => SuiteConfig::default(),
            };
            if !suite.is_empty() {
                cfg.suites = suite.iter().map(|s| s.parse::<Suite>()).collect::<Result<_, _>>()?;
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if tolerance.is_some() {
                cfg.tolerance_override = tolerance;
            }
            if !sizes.is_empty() {
                cfg.sizes = sizes;
            }
            if !gammas.is_empty() {
                cfg.gammas = gammas;
            }
            let report = run_verification_suite(&cfg)?;
            let text = match format.unwrap_or(Format::Json) {
                Format::Json => report.to_json()? + "\n",
                Format::Csv => report.to_csv(),
            };
            emit_text(&text, output.as_deref())?;
            for failure in report.failures() {
                eprintln!("FAIL {} metric={:e} tolerance={:e}", failure.check_id, failure.metric, failure.tolerance);
            }
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

/// `(r, solution, relative residual)` for one radial sample.
fn radial_row(model: RadialModel, branch: Branch, params: &FracParams, r: f64) -> Result<(f64, f64, f64), CliError> {
    let (n, gamma) = (params.nf(), params.gamma());
    let row = match model {
        RadialModel::HalfspaceEuler => {
            let (exponent, which) = match branch {
                Branch::Decaying => (0.5 * n + gamma, PowerBranch::Decaying),
                Branch::Growing => (0.5 * n - gamma, PowerBranch::Growing),
            };
            (r, r.powf(exponent), radial_residual_halfspace(r, params, HalfSpaceVariant::Euler(which))?)
        }
        RadialModel::HalfspaceBessel => (
            r,
            r.powf(0.5 * n) * bessel_k(gamma, r)?,
            radial_residual_halfspace(r, params, HalfSpaceVariant::Bessel)?,
        ),
        RadialModel::Hyperboloid => (
            r,
            spherical_function(&RootDatum::new(1, params.n())?, gamma, r)?,
            radial_residual_hyperboloid(r, params)?,
        ),
    };
    Ok(row)
}

fn emit_grid(f: &GridFunction, format: Option<Format>, output: Option<&Path>) -> Result<(), CliError> {
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => render_grid(f),
        Format::Json => serde_json::to_string_pretty(&GridDocument::from(f))? + "\n",
    };
    emit_text(&text, output)
}

fn emit_text(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
