use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oemde::benchmarks::BenchmarkFunction;
use oemde::harness::{self, ExperimentConfig};
use oemde::{make_problem, run, BenchmarkSpec, Error, Variant};

#[derive(Parser)]
#[command(
    name = "oemde",
    version,
    about = "Micro differential evolution experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute an experiment described by a TOML config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Single optimization run.
    Solve {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        function: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        nfc_max: Option<u64>,
        #[arg(long)]
        cr: Option<f64>,
        #[arg(long)]
        np: Option<usize>,
        #[arg(long, default_value_t = 1)]
        shift_seed: u64,
        /// Write the trace CSV here instead of stdout.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Verdict matrix and tally of a finished experiment.
    Compare {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value = "OEMDE")]
        reference: String,
    },
    /// Convergence CSV for one function and dimension.
    Curves {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        function: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = harness::DEFAULT_GRID_POINTS)]
        grid: usize,
        /// Write `<prefix>.csv` and `<prefix>_median.csv` instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    ListFunctions,
    ListVariants,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}

fn print(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        })
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run { config } => {
            let config = ExperimentConfig::from_file(&config)?;
            let report = harness::run_experiment(&config)?;
            print(&harness::summaries_to_csv(&report.summaries))?;
            if !report.verdicts.entries.is_empty() {
                print("\n")?;
                print(&report.verdicts.tally_csv())?;
            }
            eprintln!("results written to {}", config.output_dir.display());
        }
        Command::Solve {
            variant,
            function,
            dim,
            seed,
            nfc_max,
            cr,
            np,
            shift_seed,
            trace,
        } => {
            let mut config = oemde::expand_preset(&variant, dim)?;
            if let Some(n) = nfc_max {
                config.nfc_max = n;
            }
            if let Some(c) = cr {
                config.cr = c;
            }
            if let Some(n) = np {
                config.np = n;
            }
            let problem = make_problem(&BenchmarkSpec::new(&function, dim, shift_seed))?;
            let result = run(&problem, &config, seed)?;
            let mut doc = serde_json::to_string_pretty(&result).expect("result serializes");
            doc.push('\n');
            print(&doc)?;
            let csv = result.trace.to_csv();
            match trace {
                Some(path) => harness::write_atomic(&path, csv.as_bytes())?,
                None => {
                    print("\n")?;
                    print(&csv)?;
                }
            }
        }
        Command::Compare {
            dir,
            alpha,
            reference,
        } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Config(format!("alpha {alpha} outside (0, 1)")));
            }
            let matrix = harness::compare_dir(&dir, alpha, &reference)?;
            print(&matrix.to_csv())?;
            print("\n")?;
            print(&matrix.tally_csv())?;
        }
        Command::Curves {
            dir,
            function,
            dim,
            grid,
            out,
        } => {
            function.parse::<BenchmarkFunction>()?;
            let curves = harness::convergence_from_dir(&dir, &function, dim, grid)?;
            match out {
                Some(prefix) => {
                    let long = prefix.with_extension("csv");
                    let mut median = prefix.clone().into_os_string();
                    median.push("_median.csv");
                    harness::write_atomic(&long, curves.traces.as_bytes())?;
                    harness::write_atomic(&PathBuf::from(median), curves.medians.as_bytes())?;
                }
                None => {
                    print(&curves.traces)?;
                    print("\n")?;
                    print(&curves.medians)?;
                }
            }
        }
        Command::ListFunctions => {
            let mut text = String::new();
            for f in BenchmarkFunction::ALL {
                text.push_str(&format!("{}\t{}\n", f.id(), f.class().label()));
            }
            print(&text)?;
        }
        Command::ListVariants => {
            let mut text = String::new();
            for v in Variant::ALL {
                text.push_str(&format!("{}\t{}\n", v.name(), v.description()));
            }
            print(&text)?;
        }
    }
    Ok(())
}
