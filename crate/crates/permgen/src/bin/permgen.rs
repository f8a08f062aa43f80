//! Command-line front end: Monte Carlo estimates, exact finite-`n` tables,
//! limiting values, the random-conjugacy-class experiment, the application
//! constants, and partition utilities.
//!
//! Exit codes: 0 success, 2 infeasible configuration, 3 capacity or budget
//! exhaustion.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use permgen::asymptotics::{
    application_constants, expected_n_limit, generation_probability_limit, hardy_ramanujan_a,
    hardy_ramanujan_b, Extended, LimitParams,
};
use permgen::error::Error;
use permgen::exact::ProbabilityTable;
use permgen::harness::{
    classify_experiment, estimate_event, exact_report, random_class_experiment, ClassSpec,
    EstimateResult, EventKind, ExperimentConfig, FillerPolicy,
};
use permgen::partitions::{
    hardy_ramanujan, partition_count, sample_uniform_partition, tail_probability_limit,
    PartitionTail,
};
use permgen::perm::CycleType;

#[derive(Parser)]
#[command(
    name = "permgen",
    version,
    about = "Probability that two random permutations of prescribed cycle types \
             generate a transitive subgroup of S_n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum EventArg {
    Transitive,
    Alternating,
    Classify,
}

#[derive(Clone, Copy, ValueEnum)]
enum FillerArg {
    LongCycle,
    ThreeCycles,
}

impl From<FillerArg> for FillerPolicy {
    fn from(f: FillerArg) -> Self {
        match f {
            FillerArg::LongCycle => FillerPolicy::LongCycle,
            FillerArg::ThreeCycles => FillerPolicy::ThreeCycles,
        }
    }
}

/// Shared class-pair selection: explicit types win over scaled parameters.
#[derive(Args)]
struct SpecArgs {
    /// First cycle type, e.g. "1^2 2^3 10^1" (total must equal n)
    #[arg(long = "type")]
    type_a: Option<String>,
    /// Second cycle type; defaults to the first
    #[arg(long = "type2")]
    type_b: Option<String>,
    /// Scaled fixed-point parameter x (c1 = floor(x sqrt(n)))
    #[arg(long, default_value_t = 0.0)]
    x: f64,
    /// Scaled 2-cycle parameter y (c2 = floor(y n / 2))
    #[arg(long, default_value_t = 0.0)]
    y: f64,
    /// x for the second class; defaults to x
    #[arg(long)]
    xp: Option<f64>,
    /// y for the second class; defaults to y
    #[arg(long)]
    yp: Option<f64>,
    /// How remaining points are filled in scaled mode
    #[arg(long, value_enum, default_value_t = FillerArg::LongCycle)]
    filler: FillerArg,
}

impl SpecArgs {
    fn resolve(&self, n: usize) -> Result<(ClassSpec, ClassSpec), Error> {
        if let Some(text) = &self.type_a {
            let a = CycleType::parse_with_degree(text, n)?;
            let b = match &self.type_b {
                Some(t) => CycleType::parse_with_degree(t, n)?,
                None => a.clone(),
            };
            return Ok((ClassSpec::Explicit(a), ClassSpec::Explicit(b)));
        }
        let filler = self.filler.into();
        let spec = ClassSpec::Scaled {
            x: self.x,
            y: self.y,
            filler,
        };
        let spec_prime = ClassSpec::Scaled {
            x: self.xp.unwrap_or(self.x),
            y: self.yp.unwrap_or(self.y),
            filler,
        };
        Ok((spec, spec_prime))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo estimate of the transitive / >= A_n event, or full
    /// classification frequencies
    Estimate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        event: EventArg,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact rational E N_k table with the short-cycle / remainder split
    Exact {
        #[arg(long)]
        n: usize,
        /// First cycle type, e.g. "1^2 2^3 10^1"
        #[arg(long = "type")]
        type_a: String,
        /// Second cycle type; defaults to the first
        #[arg(long = "type2")]
        type_b: Option<String>,
        #[arg(long)]
        kmax: usize,
        /// Largest orbit size resolved by brute force (memory/time cap)
        #[arg(long)]
        cap: Option<usize>,
        /// Load (if present) and save the brute-forced probability table
        #[arg(long)]
        table: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Limiting probability and expected orbit count; x values accept "inf"
    Limit {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 0.0)]
        y: f64,
        /// Defaults to x
        #[arg(long)]
        xp: Option<String>,
        /// Defaults to y
        #[arg(long)]
        yp: Option<f64>,
    },
    /// Uniformly random conjugacy-class pairs, classified
    RandomClass {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// The 0.6889-family application constants
    Constants,
    /// Partition utilities: exact count, uniform samples, tail limit
    Partition {
        #[arg(long)]
        n: usize,
        /// Print the exact partition count p(n) and its Hardy-Ramanujan
        /// approximation
        #[arg(long, conflicts_with_all = ["sample", "tail"])]
        count: bool,
        /// Draw this many uniform partitions
        #[arg(long, conflicts_with = "tail")]
        sample: Option<usize>,
        /// Limiting P(c1 >= X sqrt(n), c2 >= Y sqrt(n)): two values X Y
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        tail: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_extended(text: &str) -> Result<Extended, Error> {
    Extended::from_str(text)
}

fn print_estimate(result: &EstimateResult, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(result).expect("serializable")
        ),
        Format::Csv => {
            println!("{}", EstimateResult::csv_header());
            println!("{}", result.csv_row());
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Estimate {
            n,
            spec,
            event,
            samples,
            seed,
            threads,
            format,
        } => {
            let (spec_a, spec_b) = spec.resolve(n)?;
            let kind = match event {
                EventArg::Transitive => EventKind::Transitive,
                EventArg::Alternating => EventKind::Alternating,
                EventArg::Classify => EventKind::Classify,
            };
            let cfg = ExperimentConfig::new(n, spec_a, spec_b, kind, samples, seed)
                .with_threads(threads);
            match kind {
                EventKind::Classify => {
                    let report = classify_experiment(&cfg)?;
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report).expect("serializable")
                    );
                }
                _ => print_estimate(&estimate_event(&cfg)?, format),
            }
        }
        Command::Exact {
            n,
            type_a,
            type_b,
            kmax,
            cap,
            table,
            format,
        } => {
            let a = CycleType::parse_with_degree(&type_a, n)?;
            let b = match &type_b {
                Some(t) => CycleType::parse_with_degree(t, n)?,
                None => a.clone(),
            };
            let ptable = match (&table, cap) {
                (Some(path), _) if path.exists() => match cap {
                    Some(c) => ProbabilityTable::load_with_cap(path, c)?,
                    None => ProbabilityTable::load(path)?,
                },
                (_, Some(c)) => ProbabilityTable::new(c),
                _ => ProbabilityTable::default(),
            };
            let report = exact_report(n, &a, &b, kmax, &ptable)?;
            if let Some(path) = &table {
                ptable.save(path)?;
            }
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                ),
                Format::Csv => {
                    println!("k,expectation,decimal,sigma1,sigma2");
                    for row in &report.rows {
                        println!(
                            "{},{},{},{},{}",
                            row.k, row.expectation, row.decimal, row.sigma1, row.sigma2
                        );
                    }
                }
            }
        }
        Command::Limit { x, y, xp, yp } => {
            let x = parse_extended(&x)?;
            let xp = match xp {
                Some(t) => parse_extended(&t)?,
                None => x,
            };
            let params = LimitParams::new(x, y, xp, yp.unwrap_or(y))?;
            let probability = generation_probability_limit(&params)?;
            let expected_n = expected_n_limit(&params)?;
            let expected_json = if expected_n.is_finite() {
                serde_json::json!(expected_n)
            } else {
                serde_json::json!("inf")
            };
            let out = serde_json::json!({
                "x": x.to_string(),
                "y": params.y,
                "x_prime": params.x_prime.to_string(),
                "y_prime": params.y_prime,
                "probability": probability,
                "expected_n": expected_json,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Command::RandomClass {
            n,
            samples,
            seed,
            threads,
        } => {
            let report = random_class_experiment(n, samples, seed, threads)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            );
        }
        Command::Constants => {
            let constants = application_constants()?;
            let mut out = serde_json::to_value(&constants).expect("serializable");
            out["hardy_ramanujan_a"] = serde_json::json!(hardy_ramanujan_a());
            out["hardy_ramanujan_b"] = serde_json::json!(hardy_ramanujan_b());
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Command::Partition {
            n,
            count,
            sample,
            tail,
            seed,
        } => {
            if let Some(values) = tail {
                let limit = tail_probability_limit(PartitionTail {
                    x: values[0],
                    y: values[1],
                });
                let out = serde_json::json!({
                    "n": n, "x": values[0], "y": values[1], "tail_limit": limit,
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            } else if let Some(draws) = sample {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..draws {
                    println!("{}", sample_uniform_partition(n, &mut rng));
                }
            } else {
                // default to --count
                let exact = partition_count(n);
                let _ = count;
                let out = serde_json::json!({
                    "n": n,
                    "count": exact.to_string(),
                    "hardy_ramanujan": hardy_ramanujan(n),
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            }
        }
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Capacity { .. }
        | Error::BudgetExceeded(_)
        | Error::OrbitSizeRange { .. }
        | Error::Quadrature(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
