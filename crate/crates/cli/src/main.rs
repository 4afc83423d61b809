mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use qcurv::explorer::{AxisGrid, SweepPlan};
use qcurv::{Dim, IntegratorConfig, ShotSpec};

use config::{RunConfig, ShotSection, SweepSection};

#[derive(Parser, Debug)]
#[command(name = "qcurv", version, about = "Radial constant Q-curvature metrics on R^2m")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Integrate and classify one shot.
    Solve(SolveArgs),
    /// Classify every point of a grid of initial data.
    Sweep(SweepArgs),
    /// Run the built-in oracle suite.
    Verify(VerifyArgs),
    /// Classify a polynomial candidate for Q = 0.
    Polyzero(PolyArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// TOML or JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: $QCURV_OUT_DIR, then the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long)]
    u_max: Option<f64>,
    #[arg(long)]
    max_steps: Option<usize>,
}

impl Common {
    fn load(&self) -> anyhow::Result<RunConfig> {
        match &self.config {
            Some(p) => RunConfig::load(p),
            None => Ok(RunConfig { schema_version: qcurv::defaults::SCHEMA_VERSION, ..Default::default() }),
        }
    }

    fn integrator(&self, base: IntegratorConfig) -> anyhow::Result<IntegratorConfig> {
        let mut c = base;
        if let Some(v) = self.r_max {
            c.r_max = v;
        }
        if let Some(v) = self.rtol {
            c.rtol = v;
        }
        if let Some(v) = self.atol {
            c.atol = v;
        }
        if let Some(v) = self.u_max {
            c.u_max = v;
        }
        if let Some(v) = self.max_steps {
            c.max_steps = v;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long = "Q", allow_negative_numbers = true)]
    q: Option<f64>,
    /// Comma-separated u^(2j)(0), j = 0..m-1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    #[command(flatten)]
    common: Common,
}

/// `a,b,c` or `start:end:count`.
fn parse_grid(s: &str) -> Result<AxisGrid, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("range '{s}' must be start:end:count"));
        };
        let count = c.trim().parse::<usize>().map_err(|_| format!("'{c}' is not a count"))?;
        if count == 0 {
            return Err("range count must be positive".into());
        }
        Ok(AxisGrid::Range { start: num(a)?, end: num(b)?, count })
    } else {
        let vals = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
        Ok(AxisGrid::List(vals))
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long = "Q", allow_negative_numbers = true)]
    q: Option<f64>,
    /// One grid per α_j, in order: `a,b,c` or `start:end:count`.
    #[arg(long = "alpha-grid", value_parser = parse_grid, allow_hyphen_values = true)]
    alpha_grid: Vec<AxisGrid>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Continue an interrupted sweep from the rows already written.
    #[arg(long)]
    resume: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run only checks whose group or name contains this.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
    perturb_gamma: f64,
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Polynomial, e.g. "-1*x1^2 - x2^2 + 3/2*x3".
    #[arg(allow_hyphen_values = true, conflicts_with = "example_noncoercive")]
    poly: Option<String>,
    /// Number of variables (default 2m).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: usize,
    /// Use u = -(1 + x1^2)(x2^2 + ... + x2m^2), which vanishes along x1.
    #[arg(long)]
    example_noncoercive: bool,
}

fn usage(kind: ErrorKind, msg: &str) -> ! {
    Cli::command().error(kind, msg).exit()
}

fn run_solve(a: SolveArgs) -> anyhow::Result<ExitCode> {
    let cfg = a.common.load()?;
    let shot = match (a.m, a.q, a.alpha, cfg.shot) {
        (Some(m), Some(q), Some(alpha), _) => ShotSection { m, q, alpha },
        (m, q, alpha, Some(s)) => ShotSection { m: m.unwrap_or(s.m), q: q.unwrap_or(s.q), alpha: alpha.unwrap_or(s.alpha) },
        (_, _, None, None) => usage(ErrorKind::MissingRequiredArgument, "--alpha is required without a [shot] config"),
        _ => usage(ErrorKind::MissingRequiredArgument, "--m and --Q are required without a [shot] config"),
    };
    let spec = ShotSpec::new(Dim::new(shot.m)?, shot.q, shot.alpha)?;
    let integ = a.common.integrator(cfg.integrator)?;
    let dir = commands::out_dir(a.common.out.clone(), cfg.output.dir);
    let outcome = commands::solve(&spec, &integ, &dir)?;
    let alpha = outcome.alpha_bounds().map_or("none".to_string(), |(lo, hi)| format!("[{lo}, {hi}]"));
    println!(
        "{} status={} r_end={} alpha={alpha} max_u={}",
        outcome.label.as_str(),
        outcome.status.label(),
        outcome.r_end,
        outcome.max_u.0
    );
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(a: SweepArgs) -> anyhow::Result<ExitCode> {
    let cfg = a.common.load()?;
    let section = match (a.m, a.q, a.alpha_grid.is_empty(), cfg.sweep) {
        (Some(m), Some(q), false, _) => SweepSection { m, q, alpha: a.alpha_grid },
        (m, q, empty, Some(s)) => SweepSection {
            m: m.unwrap_or(s.m),
            q: q.unwrap_or(s.q),
            alpha: if empty { s.alpha } else { a.alpha_grid },
        },
        _ => usage(ErrorKind::MissingRequiredArgument, "--m, --Q and --alpha-grid are required without a [sweep] config"),
    };
    let integ = a.common.integrator(cfg.integrator)?;
    let plan = SweepPlan { m: section.m, q: section.q, alpha: section.alpha, integrator: integ };
    let jobs = a.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let dir = commands::out_dir(a.common.out.clone(), cfg.output.dir);
    let summary = commands::sweep(&plan, jobs, a.resume, &dir)?;
    println!("{}", commands::to_sorted_json(&summary)?);
    Ok(ExitCode::SUCCESS)
}

fn run_verify(a: VerifyArgs) -> ExitCode {
    let (lines, ok) = commands::verify(a.filter, a.perturb_gamma);
    for l in lines {
        println!("{l}");
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run_poly(a: PolyArgs) -> anyhow::Result<ExitCode> {
    if a.poly.is_none() && !a.example_noncoercive {
        usage(ErrorKind::MissingRequiredArgument, "give a polynomial or --example-noncoercive");
    }
    println!("{}", commands::polyzero(a.poly.as_deref(), a.n, a.m, a.example_noncoercive)?);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Solve(a) => run_solve(a),
        Cmd::Sweep(a) => run_sweep(a),
        Cmd::Verify(a) => Ok(run_verify(a)),
        Cmd::Polyzero(a) => run_poly(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<config::ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
