use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bipmatch::auction::eps_scaling_auction_traced;
use bipmatch::bench::{run_bench, BenchConfig};
use bipmatch::gen::{EdgeModel, GenSpec, WeightModel};
use bipmatch::gk::goldberg_kennedy_traced;
use bipmatch::hungarian::hungarian;
use bipmatch::io::{load_instance, save_instance};
use bipmatch::oracle::brute_force_optimum;
use bipmatch::trace::{compare_trace_streams, read_trace, NullSink, TraceSink, TraceWriter};
use bipmatch::{Algorithm, Error, ReductionKind, Result, Solution, SolveOptions};

#[derive(Parser)]
#[command(name = "bipmatch", version, about = "Minimum-weight bipartite matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Er,
    Dd,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    U,
    Ulh,
    Loh,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Auction,
    Gk,
    Hungarian,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Auction => Algorithm::Auction,
            AlgoArg::Gk => Algorithm::GoldbergKennedy,
            AlgoArg::Hungarian => Algorithm::Hungarian,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    Double,
    Pad,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0.0)]
        rnorm: f64,
        #[arg(long, value_enum, default_value = "u")]
        weights: WeightsArg,
        #[arg(long, default_value_t = 0.5)]
        plow: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an instance and print the matching and its weight.
    Solve {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, default_value_t = 5.0)]
        alpha: f64,
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the step trace (auction and gk only).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "double")]
        reduction: ReductionArg,
    },
    /// Check a solver against exhaustive search (s ≤ 9).
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        against: AlgoArg,
        #[arg(long, default_value_t = 5.0)]
        alpha: f64,
    },
    /// Compare two trace files and report the first divergence.
    TraceDiff { first: PathBuf, second: PathBuf },
    /// Run a benchmark grid.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run_solver(
    algo: Algorithm,
    graph: &bipmatch::WeightedBipartiteGraph,
    opts: &SolveOptions,
    sink: &mut dyn TraceSink,
) -> Result<Solution> {
    match algo {
        Algorithm::Auction => eps_scaling_auction_traced(graph, opts, sink),
        Algorithm::GoldbergKennedy => goldberg_kennedy_traced(graph, opts, sink),
        Algorithm::Hungarian => hungarian(graph, opts),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            model,
            n,
            s,
            density,
            rnorm,
            weights,
            plow,
            seed,
            out,
        } => {
            let spec = GenSpec {
                model: match model {
                    ModelArg::Er => EdgeModel::ErdosRenyi,
                    ModelArg::Dd => EdgeModel::DispersedDegree,
                },
                n,
                s,
                d: density,
                r_norm: rnorm,
                weight_model: match weights {
                    WeightsArg::U => WeightModel::Uniform,
                    WeightsArg::Ulh => WeightModel::UniformLowHigh,
                    WeightsArg::Loh => WeightModel::LowOrHigh,
                },
                p_low: plow,
                seed,
            };
            save_instance(&spec.generate()?, out)?;
        }
        Command::Solve {
            algo,
            alpha,
            input,
            trace,
            reduction,
        } => {
            let algo = Algorithm::from(algo);
            let graph = load_instance(input)?;
            let opts = SolveOptions {
                alpha,
                check_invariants: false,
                reduction: match reduction {
                    ReductionArg::Double => ReductionKind::Double,
                    ReductionArg::Pad => ReductionKind::Pad,
                },
                ..Default::default()
            };
            let solution = match trace {
                Some(path) => {
                    if algo == Algorithm::Hungarian {
                        return Err(Error::InvalidParameter(
                            "the hungarian solver does not emit traces".into(),
                        ));
                    }
                    let mut writer = TraceWriter::new(BufWriter::new(File::create(path)?));
                    let sol = run_solver(algo, &graph, &opts, &mut writer)?;
                    writer.finish()?;
                    sol
                }
                None => run_solver(algo, &graph, &opts, &mut NullSink)?,
            };
            let stdout = std::io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            for (u, v) in solution.matching.pairs() {
                writeln!(out, "{u} {v}")?;
            }
            writeln!(out, "weight {}", solution.weight)?;
        }
        Command::Verify {
            input,
            against,
            alpha,
        } => {
            let algo = Algorithm::from(against);
            let graph = load_instance(input)?;
            let opts = SolveOptions {
                alpha,
                check_invariants: true,
                ..Default::default()
            };
            let expected = brute_force_optimum(&graph)?;
            let got = run_solver(algo, &graph, &opts, &mut NullSink);
            match (expected, got) {
                (None, Err(Error::Infeasible)) => println!("ok: infeasible"),
                (Some((_, w)), Ok(sol)) if sol.weight == w => {
                    graph
                        .validate_matching(&sol.matching, true)
                        .map_err(Error::InvalidMatching)?;
                    println!("ok: weight {w}");
                }
                (expected, got) => {
                    let expected = expected.map_or("infeasible".to_string(), |(_, w)| w.to_string());
                    let got = match got {
                        Ok(sol) => sol.weight.to_string(),
                        Err(e) => e.to_string(),
                    };
                    println!("mismatch: oracle {expected}, {algo} {got}");
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::TraceDiff { first, second } => {
            let a = read_trace(BufReader::new(File::open(first)?));
            let b = read_trace(BufReader::new(File::open(second)?));
            match compare_trace_streams(a, b)? {
                None => println!("identical"),
                Some(d) => {
                    println!("{d}");
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::Bench { config, out } => {
            let config = BenchConfig::load(config)?;
            let rows = run_bench(&config, &out)?;
            println!("{} rows written to {}", rows.len(), out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
