use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pouspec::catalog;
use pouspec_cli::config::AnalysisConfig;
use pouspec_cli::report::AnalysisReport;
use pouspec_cli::{
    emit_report, emit_svg, parse_config, run_many, run_oracle, run_verify, to_json, CliError, Format,
};

#[derive(Parser)]
#[command(
    name = "pouspec",
    version,
    about = "Spectral analysis of positive finite-rank operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write reports.
    Analyze {
        /// Configuration file; repeat to analyze several operators concurrently.
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Overrides the configured seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the built-in operator families.
    Catalog,
    /// Structural and lemma checks only, no spectrum.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Cross-check QR eigenvalues against characteristic-polynomial roots (rank <= 5).
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn load(path: &Path, seed: Option<u64>) -> Result<AnalysisConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn summary(report: &AnalysisReport) -> String {
    let name = report.operator.as_ref().map_or("<unbuilt>", |o| o.name.as_str());
    let spectrum = report.classification().map_or("no spectrum", |c| c.as_str());
    let checks = if report.checks.all_passed() {
        "checks passed"
    } else {
        "checks FAILED"
    };
    let mut line = format!("{name}: {spectrum}, {checks}");
    for d in &report.diagnostics {
        line.push_str(&format!("\n  {d}"));
    }
    line
}

fn write_outputs(
    report: &AnalysisReport,
    json: Option<&Path>,
    csv: Option<&Path>,
    svg: Option<&Path>,
) -> Result<bool, CliError> {
    let outputs = &report.config.outputs;
    let json = json.or(outputs.json.as_deref());
    let csv = csv.or(outputs.csv.as_deref());
    let svg = svg.or(outputs.svg.as_deref());
    if let Some(p) = json {
        write(p, &emit_report(report, Format::Json)?)?;
    }
    if let Some(p) = csv {
        write(p, &emit_report(report, Format::Csv)?)?;
    }
    if let Some(p) = svg {
        write(p, &emit_svg(report))?;
    }
    Ok(json.is_some())
}

fn analyze(
    configs: &[PathBuf],
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
    seed: Option<u64>,
) -> Result<i32, CliError> {
    if configs.len() > 1 && (json.is_some() || csv.is_some() || svg.is_some()) {
        return Err(CliError::Unsupported(
            "--json/--csv/--svg apply to a single config; use [outputs] per config instead".into(),
        ));
    }
    let configs = configs
        .iter()
        .map(|p| load(p, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let reports = run_many(&configs);
    let mut unwritten = Vec::new();
    for report in &reports {
        eprintln!("{}", summary(report));
        if !write_outputs(report, json.as_deref(), csv.as_deref(), svg.as_deref())? {
            unwritten.push(report);
        }
    }
    match unwritten.as_slice() {
        [] => {}
        [one] => print!("{}", emit_report(one, Format::Json)?),
        many => print!("{}", to_json(&many)),
    }
    Ok(if reports.iter().all(AnalysisReport::passed) {
        0
    } else {
        1
    })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze {
            config,
            json,
            csv,
            svg,
            seed,
        } => analyze(&config, json, csv, svg, seed),
        Command::Catalog => {
            for (name, description) in catalog::describe() {
                println!("{name:<12} {description}");
            }
            Ok(0)
        }
        Command::Verify { config, json, seed } => {
            let report = run_verify(&load(&config, seed)?);
            eprintln!("{}", summary(&report));
            let text = emit_report(&report, Format::Json)?;
            match json {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(report.exit_code())
        }
        Command::Oracle { config, json } => {
            let report = run_oracle(&load(&config, None)?)?;
            eprintln!(
                "n = {}: max matched distance {:e} (tolerance {:e}) {}",
                report.dim,
                report.distance,
                report.tolerance,
                if report.passed { "ok" } else { "FAILED" }
            );
            let text = to_json(&report);
            match json {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
