use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use prodavail::{load_model, write_profile_csv, LoadError, Parallel, Report, RunParameters, REFERENCE_MODEL_JSON};
use prodavail_core::engine::{BatchRunner, SimConfig};
use prodavail_core::indicators::{indicator_table, resolve_subsystem, standard_subsystems, SubsystemSelector};
use prodavail_core::model::{Diagnostic, Severity};
use prodavail_core::{aggregate, validate, Model, PreparedModel};

/// Production availability of flow block diagrams by Monte Carlo simulation.
#[derive(Parser)]
#[command(name = "prodavail", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file and list every diagnostic.
    Validate { model: PathBuf },
    /// Simulate a batch of histories and report production availability.
    Simulate {
        model: PathBuf,
        #[command(flatten)]
        batch: BatchArgs,
        /// Set every crew mobilization time and spare lead time to zero.
        #[arg(long)]
        zero_logistics: bool,
        /// Availability profile CSV; defaults to `<out>.profile.csv` when
        /// --out is given.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Criticality and contribution to unavailability per subsystem.
    Indicators {
        model: PathBuf,
        #[command(flatten)]
        batch: BatchArgs,
        /// Comma-separated family names or equipment ids, or `all`.
        #[arg(long, default_value = "all")]
        subsystems: String,
    },
    /// Print (or write) the bundled reference model.
    ReferenceModel {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, default_value_t = 1000)]
    runs: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Profile bucket width in hours.
    #[arg(long, default_value_t = 24.0)]
    bucket: f64,
    /// Keep failure clocks running during plant shutdowns.
    #[arg(long)]
    age_in_shutdown: bool,
    /// Maximum worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl BatchArgs {
    fn config(&self) -> SimConfig {
        SimConfig { bucket_hours: self.bucket, freeze_clocks_during_shutdown: !self.age_in_shutdown }
    }

    fn parameters(&self, zero_logistics: bool) -> RunParameters {
        RunParameters {
            runs: self.runs,
            seed: self.seed,
            bucket_hours: self.bucket,
            zero_logistics,
            freeze_clocks_during_shutdown: !self.age_in_shutdown,
        }
    }
}

enum Failure {
    /// I/O or parse error: exit 1.
    Io(String),
    /// Invalid model or arguments: exit 2.
    Usage(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::Io(e.to_string())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn print_diagnostics(diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("{d}");
    }
}

/// Loads and validates; warnings are printed and tolerated.
fn load_valid(path: &Path) -> Result<Model, Failure> {
    let model = load_model(path)?;
    let diagnostics = validate(&model);
    print_diagnostics(&diagnostics);
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(Failure::Usage(format!("{} is not a valid model", path.display())));
    }
    Ok(model)
}

fn check_batch(batch: &BatchArgs) -> Result<(), Failure> {
    if batch.runs == 0 {
        return Err(Failure::Usage("--runs must be at least 1".into()));
    }
    if !(batch.bucket.is_finite() && batch.bucket > 0.0) {
        return Err(Failure::Usage("--bucket must be a positive number of hours".into()));
    }
    Ok(())
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), Failure> {
    if let Some(path) = out {
        write_file(path, &report.to_json())?;
    }
    print!("{}", report.summary());
    Ok(())
}

fn cmd_validate(path: &Path) -> Result<(), Failure> {
    let model = load_model(path)?;
    let diagnostics = validate(&model);
    if diagnostics.is_empty() {
        println!("valid");
        return Ok(());
    }
    for d in &diagnostics {
        println!("{d}");
    }
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        Err(Failure::Usage(format!("{} diagnostic(s)", diagnostics.len())))
    } else {
        println!("valid with warnings");
        Ok(())
    }
}

fn cmd_simulate(path: &Path, batch: &BatchArgs, zero_logistics: bool, profile: Option<&Path>) -> Result<(), Failure> {
    check_batch(batch)?;
    let model = load_valid(path)?;
    let scenario = if zero_logistics { model.with_zero_logistics() } else { model.clone() };
    let prepared = PreparedModel::new(&scenario).map_err(|e| Failure::Usage(e.to_string()))?;
    let results = Parallel::with_threads(batch.threads)
        .run_batch(&prepared, batch.seed, batch.runs, &batch.config())
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let stats = aggregate(&results).map_err(|e| Failure::Usage(e.to_string()))?;

    let profile = profile.map(Path::to_path_buf).or_else(|| batch.out.as_ref().map(|o| o.with_extension("profile.csv")));
    if let Some(p) = &profile {
        let file = fs::File::create(p).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?;
        write_profile_csv(&stats, std::io::BufWriter::new(file))
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?;
    }
    let report = Report::new(&model, batch.parameters(zero_logistics), stats);
    emit(&report, batch.out.as_deref())
}

fn select_subsystems(model: &Model, spec: &str) -> Result<Vec<SubsystemSelector>, Failure> {
    let names: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(Failure::Usage("no subsystems given".into()));
    }
    if names == ["all"] {
        return Ok(standard_subsystems(model));
    }
    names
        .iter()
        .map(|n| resolve_subsystem(model, n).ok_or_else(|| Failure::Usage(format!("unknown subsystem `{n}`"))))
        .collect()
}

fn cmd_indicators(path: &Path, batch: &BatchArgs, subsystems: &str) -> Result<(), Failure> {
    check_batch(batch)?;
    let model = load_valid(path)?;
    let selected = select_subsystems(&model, subsystems)?;
    let runner = Parallel::with_threads(batch.threads);
    let table = indicator_table(&model, &selected, batch.runs, batch.seed, &batch.config(), &runner)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let report = Report::new(&model, batch.parameters(false), table.base.clone()).with_indicators(table);
    emit(&report, batch.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate { model } => cmd_validate(model),
        Command::Simulate { model, batch, zero_logistics, profile } => {
            cmd_simulate(model, batch, *zero_logistics, profile.as_deref())
        }
        Command::Indicators { model, batch, subsystems } => cmd_indicators(model, batch, subsystems),
        Command::ReferenceModel { out: Some(path) } => write_file(path, REFERENCE_MODEL_JSON),
        Command::ReferenceModel { out: None } => {
            print!("{REFERENCE_MODEL_JSON}");
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
