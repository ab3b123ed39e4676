use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kform::arith::{parse_rational_lenient, Discriminant, Rational};
use kform::poly::{load_map_file, map_to_json};
use kform::schwarz;
use kform::suite::{self, emit_report, Format, Suite, SuiteConfig, DEFAULT_BOUND, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "kform", version, about = "Exact checks for the Schwarz action and its twisted forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Print one of the built maps in the map-file JSON format.
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Arith,
    Schwarz,
    Twist,
    Prop1,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    Mu,
    Tau,
    Phi,
    PhiInverse,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Non-square rational, as p or p/q.
    #[arg(long, default_value = "2", value_parser = parse_alpha, allow_hyphen_values = true)]
    alpha: Rational,
    /// Repeatable; defaults to all.
    #[arg(long = "suite", value_enum)]
    suites: Vec<SuiteArg>,
    #[arg(long, default_value_t = DEFAULT_BOUND, value_parser = clap::value_parser!(u32).range(0..=12))]
    degree_bound: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Include the elimination trace.
    #[arg(long)]
    trace: bool,
    /// Also check a user map (K^2 or A^4 endomorphism) from a JSON file.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Leave wall times out of the report.
    #[arg(long)]
    no_timing: bool,
}

#[derive(clap::Args)]
struct ExportArgs {
    #[arg(value_enum)]
    map: MapArg,
    #[arg(long, default_value = "2", value_parser = parse_alpha, allow_hyphen_values = true)]
    alpha: Rational,
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn parse_alpha(s: &str) -> Result<Rational, String> {
    parse_rational_lenient(s).map_err(|e| e.to_string())
}

fn verify(args: VerifyArgs) -> Result<i32, String> {
    let mut cfg = SuiteConfig::new(args.alpha);
    if !args.suites.is_empty() && !args.suites.iter().any(|s| matches!(s, SuiteArg::All)) {
        cfg.suites = args
            .suites
            .iter()
            .map(|s| match s {
                SuiteArg::Arith => Suite::Arith,
                SuiteArg::Schwarz => Suite::Schwarz,
                SuiteArg::Twist => Suite::Twist,
                SuiteArg::Prop1 | SuiteArg::All => Suite::Prop1,
            })
            .collect();
    }
    cfg.degree_bound = args.degree_bound;
    cfg.seed = args.seed;
    cfg.trace = args.trace;
    cfg.timing = !args.no_timing;
    // alpha is validated before the map file is read
    cfg.validate().map_err(|e| e.to_string())?;
    if let Some(path) = &args.map {
        cfg.map = Some(load_map_file(path).map_err(|e| format!("map file: {e}"))?);
    }
    let report = suite::run_suite(&cfg).map_err(|e| e.to_string())?;
    let format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    emit(&emit_report(&report, format));
    Ok(report.exit_code())
}

fn export(args: ExportArgs) -> Result<i32, String> {
    let disc = Discriminant::new(args.alpha).map_err(|e| e.to_string())?;
    let map = match args.map {
        MapArg::Mu => schwarz::build_mu(&disc),
        MapArg::Tau => schwarz::build_tau(&disc),
        MapArg::Phi => schwarz::build_phi(&disc),
        MapArg::PhiInverse => schwarz::build_phi_inverse(&disc).map_err(|e| e.to_string())?,
    };
    emit(&format!("{}\n", map_to_json(&map)));
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Export(a) => export(a),
    };
    match out {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
