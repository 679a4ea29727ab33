use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use lightcone_doppler::scenario::{self, ScenarioConfig, ScenarioReport};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lcdoppler",
    about = "Light-cone Doppler scenario runner",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its report.
    Run {
        config: PathBuf,
        /// Output directory, overriding the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every `*.cfg` / `*.toml` scenario in a directory.
    CheckAll {
        dir: PathBuf,
        /// Parent directory for per-scenario outputs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the kernel multiplier table for a scenario's grid.
    ExportKernel {
        config: PathBuf,
        /// Destination CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match cli.command {
        Command::Run { config, out } => run(&config, out.as_deref()),
        Command::CheckAll { dir, out } => check_all(&dir, out.as_deref()),
        Command::ExportKernel { config, out } => export_kernel(&config, out.as_deref()),
        Command::Version => {
            println!("{} {}", scenario::TOOL_NAME, scenario::VERSION);
            ExitCode::SUCCESS
        }
    }
}

fn load(path: &Path, out: Option<&Path>) -> Result<ScenarioConfig, String> {
    let mut config = scenario::load_config(path).map_err(|e| e.to_string())?;
    if let Some(out) = out {
        config.output_dir = out.to_path_buf();
    }
    Ok(config)
}

fn print_report(report: &ScenarioReport) {
    for c in &report.checks {
        let status = match (c.pass, c.is_errored()) {
            (true, _) => "PASS",
            (false, true) => "ERROR",
            (false, false) => "FAIL",
        };
        let err = c.compared_error().map_or("-".into(), |e| format!("{e:.3e}"));
        println!(
            "  {status:<5} {:<28} error {err:>10}  tol {:.1e}",
            c.name, c.tolerance
        );
        if let Some(msg) = c.diagnostics.get("error").and_then(|v| v.as_str()) {
            println!("        {msg}");
        }
    }
}

fn run(path: &Path, out: Option<&Path>) -> ExitCode {
    let config = match load(path, out) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match scenario::run_scenario(&config) {
        Ok(report) => {
            println!(
                "{}: report written to {}",
                config.name,
                config.output_dir.join("report.json").display()
            );
            print_report(&report);
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

enum Outcome {
    Report(Box<ScenarioReport>),
    Broken(String),
}

fn check_all(dir: &Path, out: Option<&Path>) -> ExitCode {
    let entries = match std::fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && matches!(p.extension().and_then(|x| x.to_str()), Some("cfg" | "toml")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        eprintln!("error: no scenario configs in {}", dir.display());
        return ExitCode::from(EXIT_USAGE);
    }

    let started = Instant::now();
    let rows: Vec<(String, Outcome, f64)> = paths
        .par_iter()
        .map(|p| {
            let t = Instant::now();
            let name = p
                .file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            let stem_out = out.map(|o| o.join(p.file_stem().unwrap_or_default()));
            let outcome = match load(p, stem_out.as_deref()) {
                Ok(config) => match scenario::run_scenario(&config) {
                    Ok(r) => Outcome::Report(Box::new(r)),
                    Err(e) => Outcome::Broken(e.to_string()),
                },
                Err(e) => Outcome::Broken(e),
            };
            (name, outcome, t.elapsed().as_secs_f64())
        })
        .collect();

    println!("{:<32} {:>7} {:>8}  status", "scenario", "passed", "seconds");
    let mut code = 0u8;
    for (name, outcome, secs) in &rows {
        match outcome {
            Outcome::Report(r) => {
                let passed = r.checks.iter().filter(|c| c.pass).count();
                let status = if r.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{name:<32} {:>7} {secs:>8.2}  {status}",
                    format!("{passed}/{}", r.checks.len())
                );
                for c in r.checks.iter().filter(|c| !c.pass) {
                    println!(
                        "    {} failed (error {:?}, tol {:e})",
                        c.name,
                        c.compared_error(),
                        c.tolerance
                    );
                }
                if !r.passed() {
                    code = code.max(EXIT_FAIL);
                }
            }
            Outcome::Broken(msg) => {
                println!("{name:<32} {:>7} {secs:>8.2}  ERROR", "-");
                println!("    {msg}");
                code = EXIT_USAGE;
            }
        }
    }
    println!(
        "{} scenarios in {:.2} s",
        rows.len(),
        started.elapsed().as_secs_f64()
    );
    ExitCode::from(code)
}

fn export_kernel(path: &Path, out: Option<&Path>) -> ExitCode {
    let config = match load(path, None) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match scenario::export_kernel(&config, out) {
        Ok(p) => {
            println!("{}", p.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
