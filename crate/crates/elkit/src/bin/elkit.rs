//! Command-line front end: Monte Carlo scenarios, single-dataset fits,
//! global-maximum tests, estimating-equation roots, and histograms.
//!
//! Exit codes: 0 on success, 2 on domain or parse errors, 3 when no finite
//! candidate exists in the search box.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use elkit::el::InnerSolveConfig;
use elkit::error::Error;
use elkit::experiments::{
    builtin, emit_histogram, read_dataset, run_scenario, write_report, BinSpec, ReportFormat,
    BUILTIN_IDS,
};
use elkit::gmtests::{global_maximum_test, ElVariant};
use elkit::models;
use elkit::optimize::{mele, solve_estimating_equation, SearchSpec};

#[derive(Parser)]
#[command(
    name = "elkit",
    about = "Empirical-likelihood estimation and global-maximum diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a builtin Monte Carlo scenario and emit its report.
    Simulate {
        /// Scenario id (table1..table8, fig1, fig2).
        #[arg(long)]
        scenario: String,
        /// Restrict the scenario to a single sample size.
        #[arg(long)]
        n: Option<usize>,
        /// Override the replication count.
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Fit a model to a dataset and print the FitResult as JSON.
    Fit {
        #[arg(long)]
        data: PathBuf,
        /// Model id (see `elkit models`).
        #[arg(long)]
        model: String,
        #[arg(long)]
        obs_dim: usize,
        /// Use the adjusted EL (pseudo-observation) profile.
        #[arg(long)]
        ael: bool,
        /// Search box, two values: LO HI.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        r#box: Option<Vec<f64>>,
        /// Grid points for the scan.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Test whether theta is the global minimum of the profile EL ratio.
    TestGlobal {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: String,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        obs_dim: usize,
        /// Evaluate with the adjusted EL throughout.
        #[arg(long)]
        ael: bool,
        /// Disable the adjusted-EL fallback on hull failure.
        #[arg(long)]
        no_ael_fallback: bool,
    },
    /// All roots of the sample estimating equation inside the box.
    Roots {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: String,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        r#box: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        obs_dim: usize,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Histogram a single-column dataset into equal-width bins.
    Hist {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bins: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// List model and scenario identifiers.
    Models,
}

fn search_spec(bounds: Option<Vec<f64>>, grid: Option<usize>) -> SearchSpec {
    let (lo, hi) = match bounds.as_deref() {
        Some([lo, hi]) => (*lo, *hi),
        _ => (-10.0, 10.0),
    };
    let mut spec = SearchSpec::scalar(lo, hi);
    if let Some(g) = grid {
        spec.grid_points = g;
    }
    spec
}

fn run(cli: Cli) -> elkit::Result<()> {
    match cli.command {
        Command::Simulate {
            scenario,
            n,
            reps,
            alpha,
            seed,
            out,
            format,
        } => {
            let mut spec = builtin(&scenario)?;
            if let Some(n) = n {
                spec.sample_sizes = vec![n];
            }
            if let Some(reps) = reps {
                spec.replications = reps;
            }
            if let Some(alpha) = alpha {
                spec.alpha = alpha;
            }
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            let report = run_scenario(&spec)?;
            let format = match format {
                OutputFormat::Csv => ReportFormat::Csv,
                OutputFormat::Json => ReportFormat::Json,
            };
            match out {
                Some(path) => write_report(&report, &path, format)?,
                None => print!("{}", report.render(format)),
            }
        }
        Command::Fit {
            data,
            model,
            obs_dim,
            ael,
            r#box,
            grid,
        } => {
            let model = models::by_id(&model)?;
            if model.obs_dim() != obs_dim {
                return Err(Error::domain(format!(
                    "model {} expects obs_dim {}, got {obs_dim}",
                    model.name(),
                    model.obs_dim()
                )));
            }
            let dataset = read_dataset(&data, obs_dim)?;
            let spec = search_spec(r#box, grid);
            let fit = mele(&dataset, &model, &spec, ael, &InnerSolveConfig::default())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&fit).expect("fit serializes")
            );
        }
        Command::TestGlobal {
            data,
            model,
            theta,
            alpha,
            obs_dim,
            ael,
            no_ael_fallback,
        } => {
            let model = models::by_id(&model)?;
            let dataset = read_dataset(&data, obs_dim)?;
            let variant = if ael {
                ElVariant::Ael
            } else if no_ael_fallback {
                ElVariant::Plain
            } else {
                ElVariant::PlainWithAelFallback
            };
            let outcome = global_maximum_test(
                &dataset,
                &model,
                &[theta],
                alpha,
                &InnerSolveConfig::default(),
                variant,
            )?;
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome).expect("outcome serializes")
            );
        }
        Command::Roots {
            data,
            model,
            r#box,
            obs_dim,
            grid,
        } => {
            let model = models::by_id(&model)?;
            let dataset = read_dataset(&data, obs_dim)?;
            let spec = search_spec(Some(r#box), grid);
            let roots = solve_estimating_equation(&dataset, &model, &spec)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&roots).expect("roots serialize")
            );
        }
        Command::Hist { input, bins, out } => {
            let dataset = read_dataset(&input, 1)?;
            let spec = BinSpec::covering(dataset.values(), bins)?;
            let rows = emit_histogram(dataset.values(), &spec)?;
            let mut text = String::from("bin_left,bin_right,count\n");
            for (l, r, c) in rows {
                text.push_str(&format!("{l},{r},{c}\n"));
            }
            std::fs::write(&out, text)?;
        }
        Command::Models => {
            println!("models:");
            for id in models::MODEL_IDS {
                println!("  {id}");
            }
            println!("scenarios:");
            for id in BUILTIN_IDS {
                println!("  {id}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::NoFit) => {
            eprintln!("error: {}", Error::NoFit);
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
