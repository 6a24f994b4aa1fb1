use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use gliderpath::planner::schema::{load_scenario, LoadedScenario};
use gliderpath::planner::Method;
use gliderpath::{Bounds3d, Position3d};

use gliderpath_cli::density::{density_report, scenario_density, surface_area_bound};
use gliderpath_cli::run::{run_plan, Overrides, RunStatus};
use gliderpath_cli::sweep::{run_sweep, SweepSpec};
use gliderpath_cli::workers;

/// Minimum-travel-time planning for underwater gliders in layered currents.
#[derive(Parser)]
#[command(name = "gliderpath", version, about)]
struct Cli {
    /// Worker threads (overrides the GLIDERPATH_WORKERS environment variable).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Streamline,
    Baseline,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Streamline => Method::Streamline,
            MethodArg::Baseline => Method::Baseline,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Plan one scenario and write plan/trajectory/metrics files.
    Plan(PlanArgs),
    /// Run a seeded sweep over control counts and methods.
    Sweep(SweepArgs),
    /// Inspect a field file: layers, speed probes, divergence check.
    FieldInfo(FieldInfoArgs),
    /// Control-sample density analysis for a scenario.
    Density(DensityArgs),
}

#[derive(Args)]
struct PlanArgs {
    /// Scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario's steering method.
    #[arg(long)]
    method: Option<MethodArg>,
    /// Override the scenario's control-sample count.
    #[arg(long)]
    controls: Option<usize>,
    /// Draw controls randomly with this seed instead of the deterministic grid.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep specification file.
    #[arg(long)]
    spec: PathBuf,
    /// Output directory for metrics.csv, timings.csv, summary.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FieldInfoArgs {
    /// Layered-field file.
    #[arg(long)]
    field: PathBuf,
    /// Divergence probes per layer.
    #[arg(long, default_value_t = 1000)]
    probes: usize,
    /// Probe region as x0,y0,z0,x1,y1,z1 (defaults to a 1 km box).
    #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
    bounds: Option<Bounds3d>,
}

#[derive(Args)]
struct DensityArgs {
    /// Scenario file providing the model, field and neighbour structure.
    #[arg(long)]
    scenario: PathBuf,
    /// Control-sample budget c.
    #[arg(long, default_value_t = 54)]
    controls: usize,
    /// Maximum number of neighbour pairs to report.
    #[arg(long, default_value_t = 32)]
    pairs: usize,
    /// Explicit pair instead of scenario neighbours: x,y,z of the start.
    #[arg(long, value_parser = parse_pos, requires = "to", allow_hyphen_values = true)]
    from: Option<Position3d>,
    /// x,y,z of the target.
    #[arg(long, value_parser = parse_pos, requires = "from", allow_hyphen_values = true)]
    to: Option<Position3d>,
}

fn parse_pos(s: &str) -> Result<Position3d, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if parts.len() != 3 {
        return Err("expected x,y,z".into());
    }
    Ok(Position3d::new(parts[0], parts[1], parts[2]))
}

fn parse_bounds(s: &str) -> Result<Bounds3d, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if parts.len() != 6 {
        return Err("expected x0,y0,z0,x1,y1,z1".into());
    }
    Ok(Bounds3d::new(
        Position3d::new(parts[0], parts[1], parts[2]),
        Position3d::new(parts[3], parts[4], parts[5]),
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = workers::resolve(cli.workers);
    let result = workers::with_workers(workers, || dispatch(cli.command));
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Plan(args) => {
            let overrides = Overrides {
                method: args.method.map(Into::into),
                n_controls: args.controls,
                seed: args.seed,
            };
            let status = run_plan(&args.scenario, overrides, &args.out)
                .with_context(|| format!("planning {}", args.scenario.display()))?;
            match status {
                RunStatus::Solved => {
                    println!("solution written to {}", args.out.display());
                    Ok(ExitCode::SUCCESS)
                }
                RunStatus::NoSolution => {
                    println!(
                        "no solution; roadmap metrics written to {}",
                        args.out.display()
                    );
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Sweep(args) => {
            let spec = SweepSpec::load(&args.spec)
                .with_context(|| format!("reading {}", args.spec.display()))?;
            let base = args.spec.parent().unwrap_or(std::path::Path::new("."));
            let results = run_sweep(&spec, base, &args.out)?;
            println!(
                "{} runs written to {} ({} solved)",
                results.rows.len(),
                args.out.display(),
                results.rows.iter().filter(|r| r.solved).count()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::FieldInfo(args) => {
            let field = gliderpath::flowfield::schema::load_field::<f64>(&args.field)
                .with_context(|| format!("reading {}", args.field.display()))?;
            let bounds = args.bounds.unwrap_or(Bounds3d::new(
                Position3d::new(-500.0, -500.0, -200.0),
                Position3d::new(500.0, 500.0, 0.0),
            ));
            println!("layers: {}", field.layers().len());
            let report = field.divergence_report(&bounds, args.probes, 0);
            for ld in report {
                // probe the layer's speed range over the same region
                let mut max_speed = 0.0f64;
                let steps = 40;
                for ix in 0..=steps {
                    for iy in 0..=steps {
                        let x =
                            bounds.min.x + (bounds.max.x - bounds.min.x) * ix as f64 / steps as f64;
                        let y =
                            bounds.min.y + (bounds.max.y - bounds.min.y) * iy as f64 / steps as f64;
                        let v = field
                            .eval_flow(&Position3d::new(x, y, ld.z))
                            .expect("finite probe");
                        max_speed = max_speed.max(v.speed());
                    }
                }
                println!(
                    "  z = {:8.1} m  max |div v| = {:.3e} 1/s  max speed = {:.3} m/s",
                    ld.z, ld.max_abs_divergence, max_speed
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Density(args) => {
            let loaded: LoadedScenario<f64> = load_scenario(&args.scenario)
                .with_context(|| format!("reading {}", args.scenario.display()))?;
            println!(
                "surface area bound: {:.4} m^2/s^2, rho_surface = {:.4} per (m/s)^2 at c = {}",
                surface_area_bound(&loaded.model),
                args.controls as f64 / surface_area_bound(&loaded.model),
                args.controls
            );
            if let (Some(from), Some(to)) = (args.from, args.to) {
                let r = density_report(&loaded.model, &loaded.field, &from, &to, args.controls)?;
                print_density_row(&from, &to, &r);
            } else {
                let rows = scenario_density(
                    &loaded.scenario,
                    &loaded.field,
                    &loaded.model,
                    args.controls,
                    args.pairs,
                )?;
                for (from, to, r) in &rows {
                    print_density_row(from, to, r);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_density_row(
    from: &Position3d,
    to: &Position3d,
    r: &gliderpath_cli::density::DensityReport,
) {
    match (r.rho_line, r.ratio) {
        (Some(rho_line), Some(ratio)) => println!(
            "  ({:7.1},{:7.1},{:7.1}) -> ({:7.1},{:7.1},{:7.1})  v_min = {:.3}  rho_line = {:9.3}  ratio = {:9.1}",
            from.x, from.y, from.z, to.x, to.y, to.z, r.v_min, rho_line, ratio
        ),
        _ => println!(
            "  ({:7.1},{:7.1},{:7.1}) -> ({:7.1},{:7.1},{:7.1})  v_min = {:.3}  infeasible (lowest plane speed above the glider's maximum)",
            from.x, from.y, from.z, to.x, to.y, to.z, r.v_min
        ),
    }
}
