//! Scenario runner CLI: solve a configured Dirichlet problem and run the
//! verification checks, run whole suites, pretty-print reports, or re-emit
//! images from run artifacts.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nodalab::scenario::{self, Overrides};

#[derive(Parser)]
#[command(name = "nodalab", version, about = "Planar quasilinear Dirichlet laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Output directory (default: $NODALAB_OUT or ./out)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the lattice spacing h of the scenario(s)
    #[arg(long)]
    h: Option<f64>,
    /// Override the tau policy with a single factor of max|u|
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario config and write its report and artifacts
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run every .toml scenario in a directory and write a summary table
    Suite {
        dir: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        /// Worker threads for independent scenarios
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Pretty-print a report.json
    Report { report: PathBuf },
    /// Re-emit images from a run's artifacts (labels.txt, solution.grid.txt)
    Render { report: PathBuf },
}

fn out_dir(common: &CommonOpts) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| std::env::var_os(scenario::OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn overrides(common: &CommonOpts) -> Overrides {
    Overrides {
        h: common.h,
        tau_factor: common.tau,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, common } => {
            let out = out_dir(&common);
            match scenario::run_scenario_file(&config, &overrides(&common), Some(&out)) {
                Ok(run) => {
                    print!("{}", run.report.pretty());
                    println!(
                        "artifacts: {}",
                        out.join(&run.report.name).display()
                    );
                    if run.report.all_passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {}", e);
                    ExitCode::from(2)
                }
            }
        }
        Command::Suite { dir, common, jobs } => {
            let out = out_dir(&common);
            match scenario::run_suite(&dir, &out, &overrides(&common), jobs) {
                Ok(outcome) => {
                    for row in &outcome.rows {
                        println!(
                            "{:<28} {}",
                            row.name,
                            if row.all_passed { "PASS" } else { "FAIL" }
                        );
                    }
                    println!(
                        "{} of {} scenarios passed; summary at {}",
                        outcome.rows.iter().filter(|r| r.all_passed).count(),
                        outcome.rows.len(),
                        out.join("summary.csv").display()
                    );
                    if outcome.all_passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {}", e);
                    ExitCode::from(2)
                }
            }
        }
        Command::Report { report } => match read_report(&report) {
            Ok(r) => {
                print!("{}", r.pretty());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {}", e);
                ExitCode::from(2)
            }
        },
        Command::Render { report } => match render_artifacts(&report) {
            Ok(written) => {
                for p in written {
                    println!("wrote {}", p.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {}", e);
                ExitCode::from(2)
            }
        },
    }
}

fn read_report(path: &Path) -> Result<nodalab::scenario::report::RunReport, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    nodalab::scenario::report::RunReport::from_json(&text)
        .map_err(|e| format!("{}: {}", path.display(), e))
}

fn render_artifacts(report_path: &Path) -> Result<Vec<PathBuf>, String> {
    let _ = read_report(report_path)?; // validate it really is a run report
    let dir = report_path
        .parent()
        .ok_or_else(|| "report has no parent directory".to_string())?;
    let mut written = Vec::new();

    let labels = dir.join("labels.txt");
    if labels.exists() {
        let text =
            std::fs::read_to_string(&labels).map_err(|e| format!("{}: {}", labels.display(), e))?;
        let (w, h, rgb) = nodalab::render::labels_rgb_from_text(&text)?;
        let out = dir.join("nodal.ppm");
        nodalab::render::write_ppm(&out, w, h, &rgb)
            .map_err(|e| format!("{}: {}", out.display(), e))?;
        written.push(out);
    }

    let grid = dir.join("solution.grid.txt");
    if grid.exists() {
        let text =
            std::fs::read_to_string(&grid).map_err(|e| format!("{}: {}", grid.display(), e))?;
        let (w, h, rgb) = nodalab::render::field_rgb_from_text(&text)?;
        let out = dir.join("field.ppm");
        nodalab::render::write_ppm(&out, w, h, &rgb)
            .map_err(|e| format!("{}: {}", out.display(), e))?;
        written.push(out);
    }

    if written.is_empty() {
        return Err("no renderable artifacts (labels.txt, solution.grid.txt) next to the report".into());
    }
    Ok(written)
}
