use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isocov::{
    load_criteria, load_problem, load_topology, problem_to_json, rank_isocov_with, rank_topsis,
    satisfaction_matrix, BoundsPolicy, CompareReport, DecisionProblem, DegreesReport, Error,
    OutputFormat, RankingReport, DEFAULT_ROUTE_CAP,
};

#[derive(Parser)]
#[command(
    name = "isocov",
    version,
    about = "Constraint-aware multi-criteria route ranking with a TOPSIS baseline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the alternatives of a decision matrix
    Rank(RankArgs),
    /// Emit the constraint-satisfaction degrees and the per-route flags
    Degrees(DegreesArgs),
    /// Run isocov-hard, isocov-soft, and topsis side by side
    Compare(DegreesArgs),
    /// Enumerate acyclic routes of a topology; with criteria, rank them
    Paths(PathsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Isocov,
    Topsis,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstraintsArg {
    Hard,
    Soft,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Table => OutputFormat::Table,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Output format; json carries full precision, csv/table round scores
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Decimal places for scores in csv/table output
    #[arg(long, default_value_t = isocov::DEFAULT_PRECISION)]
    precision: usize,

    /// Clamp constraint bounds to the column data range instead of failing
    #[arg(long)]
    clamp_bounds: bool,
}

#[derive(Args)]
struct RankArgs {
    /// CSV decision matrix: id column, then one column per criterion
    #[arg(long)]
    matrix: PathBuf,

    /// JSON criteria specification (name, nature, weight, bounds)
    #[arg(long)]
    criteria: PathBuf,

    #[arg(long, value_enum, default_value_t = MethodArg::Isocov)]
    method: MethodArg,

    /// Treat value constraints as mandatory (hard) or best-effort (soft)
    #[arg(long, value_enum, default_value_t = ConstraintsArg::Hard)]
    constraints: ConstraintsArg,

    /// Include the intermediate matrices in the output
    #[arg(long)]
    intermediates: bool,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DegreesArgs {
    /// CSV decision matrix: id column, then one column per criterion
    #[arg(long)]
    matrix: PathBuf,

    /// JSON criteria specification (name, nature, weight, bounds)
    #[arg(long)]
    criteria: PathBuf,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct PathsArgs {
    /// JSON topology (nodes, links, source, destination, rules)
    #[arg(long)]
    topology: PathBuf,

    /// Rank the enumerated routes against this criteria specification
    #[arg(long)]
    criteria: Option<PathBuf>,

    /// Maximum number of routes to enumerate
    #[arg(long)]
    cap: Option<usize>,

    /// Emit the built decision problem as JSON instead of ranking it
    #[arg(long, requires = "criteria")]
    emit_problem: bool,

    #[arg(long, value_enum, default_value_t = MethodArg::Isocov)]
    method: MethodArg,

    /// Treat value constraints as mandatory (hard) or best-effort (soft)
    #[arg(long, value_enum, default_value_t = ConstraintsArg::Hard)]
    constraints: ConstraintsArg,

    /// Include the intermediate matrices in the output
    #[arg(long)]
    intermediates: bool,

    #[command(flatten)]
    common: CommonArgs,
}

fn policy(common: &CommonArgs) -> BoundsPolicy {
    if common.clamp_bounds {
        BoundsPolicy::Clamp
    } else {
        BoundsPolicy::Strict
    }
}

fn rank_problem(
    problem: &DecisionProblem,
    method: MethodArg,
    policy: BoundsPolicy,
    intermediates: bool,
) -> Result<RankingReport, Error> {
    let mut report = match method {
        MethodArg::Isocov => rank_isocov_with(problem, policy)?,
        MethodArg::Topsis => rank_topsis(problem)?,
    };
    if !intermediates {
        report.intermediates = None;
    }
    Ok(report)
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::Rank(args) => {
            let hard = args.constraints == ConstraintsArg::Hard;
            let problem = load_problem(&args.matrix, &args.criteria, hard)?;
            let report = rank_problem(
                &problem,
                args.method,
                policy(&args.common),
                args.intermediates,
            )?;
            Ok(report.emit(args.common.format.into(), args.common.precision))
        }
        Command::Degrees(args) => {
            let problem = load_problem(&args.matrix, &args.criteria, false)?;
            let resolved = problem.resolve_with(policy(&args.common))?;
            let satisfaction = satisfaction_matrix(&problem, &resolved);
            let report = DegreesReport::new(&problem, &satisfaction);
            Ok(report.emit(args.common.format.into(), args.common.precision))
        }
        Command::Compare(args) => {
            let problem = load_problem(&args.matrix, &args.criteria, true)?;
            let bounds = policy(&args.common);
            let hard = rank_isocov_with(&problem, bounds)?;
            let mut soft_problem = problem.clone();
            soft_problem.hard = false;
            let soft = rank_isocov_with(&soft_problem, bounds)?;
            let topsis = rank_topsis(&problem)?;
            let report = CompareReport::new(&hard, &soft, &topsis, &problem.alternatives)?;
            Ok(report.emit(args.common.format.into(), args.common.precision))
        }
        Command::Paths(args) => {
            let topology = load_topology(&args.topology)?;
            let cap = args.cap.unwrap_or(DEFAULT_ROUTE_CAP);
            match &args.criteria {
                None => {
                    let routes = topology.enumerate_routes_capped(cap)?;
                    Ok(emit_routes(&routes, &topology, args.common.format))
                }
                Some(criteria_path) => {
                    let criteria = load_criteria(criteria_path)?;
                    let hard = args.constraints == ConstraintsArg::Hard;
                    let problem = topology.build_problem_capped(&criteria, hard, cap)?;
                    if args.emit_problem {
                        return problem_to_json(&problem);
                    }
                    let report = rank_problem(
                        &problem,
                        args.method,
                        policy(&args.common),
                        args.intermediates,
                    )?;
                    Ok(report.emit(args.common.format.into(), args.common.precision))
                }
            }
        }
    }
}

fn emit_routes(routes: &[Vec<String>], topology: &isocov::Topology, format: FormatArg) -> String {
    match format {
        FormatArg::Json => {
            let value = serde_json::json!({
                "source": topology.source,
                "destination": topology.destination,
                "routes": routes,
            });
            let mut out = serde_json::to_string_pretty(&value).expect("route lists serialize");
            out.push('\n');
            out
        }
        FormatArg::Csv => {
            let mut out = String::from("route\n");
            for route in routes {
                out.push_str(&route.join("->"));
                out.push('\n');
            }
            out
        }
        FormatArg::Table => {
            let mut out = String::new();
            for route in routes {
                out.push_str(&route.join(" -> "));
                out.push('\n');
            }
            out.push_str(&format!("{} route(s)\n", routes.len()));
            out
        }
    }
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Validation(_) | Error::RouteCapExceeded { .. } => 2,
        Error::Io { .. } | Error::Parse { .. } => 3,
        Error::Invariant(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code(&error))
        }
    }
}
