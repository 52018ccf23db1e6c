//! Command-line front end: run a preset, sweep configurations, or run the
//! runtime validation suite.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use dcsnn::geometry::NodeDistribution;
use dcsnn::harness::{self, RunConfig, Seeds};
use dcsnn::problems::PresetName;

#[derive(Parser)]
#[command(name = "dcsnn", version, about = "Mesh-free interface-problem solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistArg {
    Chebyshev,
    Uniform,
    Random,
}

impl From<DistArg> for NodeDistribution {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::Chebyshev => NodeDistribution::Chebyshev,
            DistArg::Uniform => NodeDistribution::Uniform,
            DistArg::Random => NodeDistribution::Random,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Train one preset end to end and write its outputs.
    Run {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        neurons: Option<usize>,
        #[arg(long)]
        dist: Option<DistArg>,
        /// Base seed; init/sample/test streams use seed, seed+1, seed+2.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        loss_tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a list of configurations from a JSON file and emit sweep.csv.
    Sweep {
        /// JSON array of run configurations.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (defaults to sweep.csv next to the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant/oracle validation suite.
    Validate,
}

fn configure_threads() {
    if let Ok(v) = std::env::var("DCSNN_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> dcsnn::Result<ExitCode> {
    match cli.command {
        Command::Run { preset, neurons, dist, seed, max_iters, loss_tol, out } => {
            let name: PresetName = preset.parse()?;
            let mut config = RunConfig::new(name);
            config.neurons = neurons;
            config.dist = dist.map(Into::into);
            config.seeds = seed.map(Seeds::from_base);
            config.max_iters = max_iters;
            config.loss_tol = loss_tol;
            config.out_dir = out;
            let output = harness::run(&config)?;
            let rec = &output.record;
            println!(
                "preset={} N={} N_p={} iters={} final_loss={:e} stop={:?}",
                name.as_str(),
                rec.neurons,
                rec.param_count,
                rec.train.iterations,
                rec.train.final_loss,
                rec.train.stop_reason,
            );
            if let Some(e) = &rec.errors {
                println!(
                    "testing errors: l_inf={:e} l2={:e} rel_l2={:e} (n_test={})",
                    e.l_inf, e.l2, e.rel_l2, e.n_test
                );
            }
            Ok(if rec.succeeded() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Sweep { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let configs: Vec<RunConfig> = serde_json::from_str(&text)?;
            let rows = harness::sweep(&configs)?;
            let csv = harness::sweep_csv(&rows);
            let out_path = out.unwrap_or_else(|| {
                config.parent().unwrap_or(std::path::Path::new(".")).join("sweep.csv")
            });
            std::fs::write(&out_path, &csv)?;
            print!("{csv}");
            let ok = rows.iter().all(|r| r.status == "ok");
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Validate => {
            let results = harness::validate();
            let mut ok = true;
            for r in &results {
                println!("{} {} — {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                ok &= r.passed;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
