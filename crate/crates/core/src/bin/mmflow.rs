use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mmflow::flow::FlowParams;
use mmflow::scenario::{self, InstanceBounds};
use mmflow::{git, kstab, Error};

#[derive(Parser)]
#[command(name = "mmflow", version, about = "Moment map flows, torus GIT stability and Donaldson-Futaki invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write report.json plus trajectory CSVs.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Gradient tolerance for flows.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_time: Option<f64>,
    },
    /// Classify the start point of a scenario.
    Classify { scenario: PathBuf },
    /// DF invariant of a product configuration on projective space.
    Df {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<i64>,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        jmax: u32,
    },
    /// Compare flow limits with exact classification on seeded instances.
    Suite {
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 6)]
        d_max: usize,
        #[arg(long, default_value_t = 2)]
        r_max: usize,
        #[arg(long, default_value_t = 3)]
        weight_max: i64,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::Schema { .. }
        | Error::InvalidFlowParams(_)
        | Error::EnumerationBoundExceeded
        | Error::InvalidSample(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Run { scenario: path, out, tol, max_time } => {
            let mut s = scenario::load_scenario(&path)?;
            if let Some(t) = tol {
                s.flow.grad_tol = t;
            }
            if let Some(t) = max_time {
                s.flow.max_time = t;
            }
            s.validate()?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&s.output_dir));
            let report = scenario::run_scenario_in(&s, &dir)?;
            println!("{}", report.to_json_without_timings());
            eprintln!("wrote {}", dir.join("report.json").display());
        }
        Command::Classify { scenario: path } => {
            let s = scenario::load_scenario(&path)?;
            let report = git::classify_stability(&s.build_representation()?, &s.start_point())?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Df { weights, dim, jmax } => {
            if jmax < 1 {
                return Err(Error::InvalidSample("jmax must be at least 1".into()));
            }
            let r = kstab::df_from_oracle(&weights, dim, 1..=jmax)?;
            println!("{}", serde_json::to_string_pretty(&r).expect("result serializes"));
        }
        Command::Suite { seeds, d_max, r_max, weight_max } => {
            if d_max == 0 || r_max == 0 || weight_max < 0 {
                return Err(Error::InvalidSample("bounds must be positive".into()));
            }
            let bounds = InstanceBounds { d_max, r_max, weight_max };
            let report = scenario::run_suite(seeds, &bounds, &FlowParams::default());
            print!("{}", report.table());
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
