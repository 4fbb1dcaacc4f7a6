//! Command-line front end for scenario runs.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use cuspcohom::experiments::{
    export_space, list_examples, local_probe, local_record, regularity_suite, resolve, run_delta, run_scenario, ExportFormat, RunOptions,
    Scenario, DEFAULT_MAX_SIMPLICES,
};

#[derive(Parser, Debug)]
#[command(name = "cuspcohom", version, about = "Cusped spaces and compactly supported cohomology of group pairs")]
struct Cli {
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on simplices enumerated by Rips constructions.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SIMPLICES)]
    max_simplices: usize,
    /// Replaces the exhaustion schedule by radii 1..=N.
    #[arg(long, global = true)]
    stages: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario file (or built-in name) and check its known answers.
    Run {
        scenario: String,
        /// Directory for CSV and record files.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Print the built-in known-answer registry.
    List,
    /// Write the scenario's space as an edge list, simplex list or sparse boundary matrices.
    Export {
        scenario: String,
        #[arg(long, default_value = "edge-list")]
        format: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the hyperbolicity constant of the scenario's metric graph.
    Delta { scenario: String },
    /// Run the scenario's regularity and local homology probes.
    Probe { scenario: String },
}

fn load(arg: &str) -> Result<Scenario> {
    resolve(arg).with_context(|| format!("loading scenario {arg}"))
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let opts = RunOptions { seed: cli.seed, max_simplices: cli.max_simplices, stages: cli.stages };
    match cli.command {
        Command::Run { scenario, out } => {
            let s = load(&scenario)?;
            let report = run_scenario(&s, &opts)?;
            for path in report.write_to(&out)? {
                println!("wrote {}", path.display());
            }
            print!("{}", report.diff());
            if report.ok() {
                println!("{}: all expectations met", report.scenario);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("{}: expectations NOT met", report.scenario);
                Ok(ExitCode::from(report.exit_status() as u8))
            }
        }
        Command::List => {
            print!("{}", list_examples());
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { scenario, format, out } => {
            let s = load(&scenario)?;
            let format: ExportFormat = format.parse()?;
            let text = export_space(&s, format)?;
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Delta { scenario } => {
            let s = load(&scenario)?;
            print!("{}", run_delta(&s, &opts)?.to_record());
            Ok(ExitCode::SUCCESS)
        }
        Command::Probe { scenario } => {
            let mut s = load(&scenario)?;
            if let Some(n) = opts.stages {
                s.set_stages(n)?;
            }
            if let Some(seed) = opts.seed {
                s.space.seed = seed;
            }
            s.check_depth_guard()?;
            let space = s.build_space()?;
            let mut ran = false;
            if s.tasks.regularity {
                for (t, r) in regularity_suite(&s, &space)? {
                    println!("[regularity depth={t}]\n{}", r.to_record());
                }
                ran = true;
            }
            if s.tasks.local.is_some() {
                let (d, r) = local_probe(&s, &space, opts.max_simplices)?;
                println!("[delta]\n{}", d.to_record());
                println!("[local]\n{}", local_record(&r));
                ran = true;
            }
            anyhow::ensure!(ran, "scenario {} declares no probe tasks (regularity or local)", s.name);
            Ok(ExitCode::SUCCESS)
        }
    }
}
