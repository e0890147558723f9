use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prefmab::config::{self, RunConfig};
use prefmab::harness::{self, ExperimentResult, Parallelism};
use prefmab::{demo, env, plot, Error};

/// Preference-aware multi-objective bandit simulator.
#[derive(Parser)]
#[command(name = "prefmab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Config file (JSON).
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory for results.csv, summary.json, config.echo.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Config overrides as path=value, e.g. --set dims.T=1000.
    #[arg(long = "set", value_name = "PATH=VALUE")]
    set: Vec<String>,
    /// Replaces base_seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for trial execution; 0 picks the machine default.
    /// Without this flag trials run serially.
    #[arg(long, value_name = "N")]
    parallel: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run(RunArgs),
    /// Parse and validate a config file, reporting every violation.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
    /// Run the built-in two-arm, two-user separation instance with all
    /// algorithms: preference-free selection is forced to linear regret
    /// there while preference-aware selection is not.
    Prop1 {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare weighted and unweighted preference estimators on a toy
    /// two-arm instance; writes a CSV table and an SVG chart.
    WlsDemo {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Number of independent seeds to average over.
        #[arg(long, default_value_t = 50)]
        seeds: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Render the regret chart for an existing results.csv.
    Plot {
        /// Path to a results.csv produced by run or prop1.
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if input_error(&err) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

/// Input problems (unreadable file, parse error, validation, bad
/// overrides, malformed CSV) exit 1; runtime failures exit 2.
fn input_error(err: &Error) -> bool {
    matches!(
        err,
        Error::InvalidConfig(_)
            | Error::ConfigParse(_)
            | Error::UnknownOverridePath { .. }
            | Error::BadOverrideValue { .. }
            | Error::InputRead { .. }
            | Error::MalformedRow { .. }
    )
}

fn dispatch() -> Result<(), Error> {
    match Cli::parse().command {
        Command::Run(args) => {
            let cfg = load_config(&args.config, &args.common)?;
            execute(&cfg, &args.common, false)
        }
        Command::Validate { config: path, set } => {
            let text = read_input(&path)?;
            config::parse_with_overrides(&text, &set)?;
            println!("ok: {}", path.display());
            Ok(())
        }
        Command::Prop1 { common } => {
            let mut cfg = env::two_point_config_all();
            if !common.set.is_empty() {
                let text = config::canonical_json(&cfg);
                cfg = config::parse_with_overrides(&text, &common.set)?;
            }
            execute(&cfg, &common, true)
        }
        Command::WlsDemo { out, seeds, seed } => {
            let result = demo::run_wls_demo(seeds, seed)?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("wls_demo.csv"), demo::demo_csv(&result))?;
            fs::write(out.join("wls_demo.svg"), demo::demo_chart(&result)?)?;
            print!("{}", demo::demo_csv(&result));
            println!("wrote {}", out.join("wls_demo.csv").display());
            println!("wrote {}", out.join("wls_demo.svg").display());
            Ok(())
        }
        Command::Plot { results, out } => {
            let text = read_input(&results)?;
            let svg = plot::regret_chart_from_csv(&text)?;
            fs::create_dir_all(&out)?;
            let path = out.join("regret.svg");
            fs::write(&path, svg)?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::InputRead {
        path: path.display().to_string(),
        source,
    })
}

fn load_config(path: &PathBuf, common: &CommonArgs) -> Result<RunConfig, Error> {
    let text = read_input(path)?;
    let mut overrides = common.set.clone();
    if let Some(seed) = common.seed {
        overrides.push(format!("base_seed={seed}"));
    }
    config::parse_with_overrides(&text, &overrides)
}

fn execute(cfg: &RunConfig, common: &CommonArgs, chart: bool) -> Result<(), Error> {
    let mut cfg = cfg.clone();
    if let Some(seed) = common.seed {
        cfg.base_seed = seed;
    }
    let parallelism = match common.parallel {
        None => Parallelism::Serial,
        Some(workers) => Parallelism::Threads(workers),
    };
    let result = harness::run_experiment(&cfg, parallelism)?;
    let mut written = harness::persist(&result, &common.out)?;
    if chart {
        let svg = plot::render_regret_chart(&result.summaries)?;
        let chart_path = common.out.join("regret.svg");
        fs::write(&chart_path, &svg)?;
        written.push(harness::FileEntry {
            path: chart_path,
            bytes: svg.len() as u64,
        });
    }

    print_table(&result);
    for entry in &written {
        println!("wrote {} ({} bytes)", entry.path.display(), entry.bytes);
    }
    if result.failures.is_empty() {
        Ok(())
    } else {
        Err(Error::TrialsFailed {
            failed: result.failures.len(),
            total: result.failures.len() + result.records.len(),
        })
    }
}

fn print_table(result: &ExperimentResult) {
    println!("config digest: {}", result.digest);
    println!(
        "{:<12} {:>7} {:>14} {:>12}",
        "algorithm", "trials", "final regret", "std"
    );
    for summary in &result.summaries {
        println!(
            "{:<12} {:>7} {:>14.2} {:>12.2}",
            summary.name, summary.trials, summary.final_mean, summary.final_std
        );
    }
    for failure in &result.failures {
        println!(
            "failed: {} trial {}: {}",
            failure.algorithm, failure.trial, failure.error
        );
    }
    println!("elapsed: {:.2}s", result.elapsed.as_secs_f64());
}
