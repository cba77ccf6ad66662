use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use turret_evasion::experiment::{self, ExperimentSpec, EXIT_BAD_SPEC, EXIT_IO};

/// Run one turret-evasion experiment described by a TOML or JSON file.
#[derive(Parser, Debug)]
#[command(name = "turret-lab", version)]
struct Args {
    /// Experiment file (TOML, or JSON if it starts with `{`).
    #[arg(long)]
    spec: PathBuf,
    /// Directory the outputs are written below.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed in the experiment file.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for parallel sweeps; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_BAD_SPEC as u8 } else { 0 });
        }
    };
    if let Some(n) = args.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_BAD_SPEC as u8);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO as u8);
        }
    }
    let mut spec = match ExperimentSpec::from_file(&args.spec) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(experiment::exit_code(&e) as u8);
        }
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    match experiment::run(&spec, &args.out) {
        Ok(report) => {
            for f in &report.outputs {
                println!("{}", report.dir.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(experiment::exit_code(&e) as u8)
        }
    }
}
