use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use esloo::benchfns::FunctionId;
use esloo::harness::{self, ExperimentConfig, Method};

#[derive(Parser)]
#[command(name = "esloo", version, about = "Adaptive sampling experiments for GP emulators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run replicated experiments for one function and one method.
    Run(RunArgs),
    /// Print the benchmark function ids.
    ListFunctions,
    /// Print the sampling method ids.
    ListMethods,
}

#[derive(Args)]
struct RunArgs {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    function: Option<FunctionId>,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    init_size: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    test_points: Option<usize>,
    /// Results CSV; the median table and final designs are written beside it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write zero in the seconds column.
    #[arg(long)]
    no_timing: bool,
    /// End a replication once its RMSE drops below this value.
    #[arg(long)]
    stop_rmse: Option<f64>,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match (&self.config, self.function, self.method) {
            (Some(path), _, _) => ExperimentConfig::from_kv_file(path)
                .with_context(|| format!("reading config {}", path.display()))?,
            (None, Some(f), Some(m)) => ExperimentConfig::new(f, m),
            _ => bail!("--function and --method are required unless --config is given"),
        };
        if let Some(f) = self.function {
            cfg.set("function", f.as_str())?;
        }
        if let Some(m) = self.method {
            cfg.set("method", m.as_str())?;
        }
        let numeric = [
            ("init_size", self.init_size.map(|v| v.to_string())),
            ("budget", self.budget.map(|v| v.to_string())),
            ("batch", self.batch.map(|v| v.to_string())),
            ("replications", self.replications.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("test_points", self.test_points.map(|v| v.to_string())),
            ("stop_rmse", self.stop_rmse.map(|v| v.to_string())),
        ];
        for (key, value) in numeric {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        if let Some(out) = self.out {
            cfg.out = Some(out);
        }
        if self.no_timing {
            cfg.record_timing = false;
        }
        cfg.validate()?;
        if cfg.out.is_none() {
            bail!("--out is required");
        }
        Ok(cfg)
    }
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = args.into_config()?;
    let out = cfg.out.clone().expect("checked in into_config");
    let outcome = harness::run_experiment(&cfg)?;
    for f in &outcome.failures {
        eprintln!("replication {} failed: {}", f.replication, f.message);
    }
    if outcome.records.is_empty() {
        bail!("all {} replications failed", cfg.replications);
    }
    harness::write_outputs(&out, &outcome).with_context(|| format!("writing {}", out.display()))?;
    let last_n = outcome.records.iter().map(|r| r.n).max().unwrap_or(0);
    let mut finals: Vec<f64> = outcome.records.iter().filter(|r| r.n == last_n).map(|r| r.rmse).collect();
    eprintln!(
        "{} on {}: {} replications, median rmse at n={} is {:.6e}; wrote {}",
        cfg.method,
        cfg.function,
        cfg.replications - outcome.failures.len(),
        last_n,
        harness::median(&mut finals),
        out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::ListFunctions => {
            for f in FunctionId::ALL {
                println!("{}\t{}\t{}", f.as_str(), f.dim(), f.description());
            }
            Ok(())
        }
        Command::ListMethods => {
            for m in Method::ALL {
                println!("{}\t{}", m.as_str(), m.description());
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
