use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graal_bench::defaults::defaults_text;
use graal_bench::experiment::{run_experiment, ExperimentConfig, ExperimentError, ProblemSpec, DEFAULT_EDGE_PROB};
use graal_core::solver::{Algorithm, GammaSchedule, SolverConfig};

/// Golden-ratio solvers on matrix games and sparse logistic regression.
#[derive(Parser)]
#[command(name = "graal-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Server-placement matrix game on a random or given graph.
    Game {
        /// Number of graph vertices.
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_EDGE_PROB)]
        edge_prob: f64,
        /// Edge list ("u v" per line, 0-based) instead of a random graph.
        #[arg(long, conflicts_with_all = ["k", "edge_prob"])]
        graph: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// l1-regularized logistic regression on a LIBSVM file.
    Logreg {
        /// Plain-text LIBSVM file (decompress .bz2 archives first).
        #[arg(long)]
        data: PathBuf,
        /// Feature dimension; defaults to the largest index in the file.
        #[arg(long)]
        features: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Print default parameters.
    Defaults,
}

#[derive(Args)]
struct Common {
    /// Seeds the graph generator and the start perturbation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of modified, bgraal, agraal.
    #[arg(long, value_delimiter = ',', default_value = "modified,bgraal")]
    algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 0.8)]
    eta0: f64,
    #[arg(long, default_value_t = 0.75)]
    eta1: f64,
    #[arg(long)]
    gamma_r: Option<f64>,
    #[arg(long)]
    gamma_s: Option<f64>,
    #[arg(long)]
    gamma_t: Option<f64>,
    /// Output directory for <algo>.csv.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write <algo>_branches.csv with the step-size branch per iteration.
    #[arg(long)]
    trace_branches: bool,
}

impl Common {
    fn into_config(self, problem: ProblemSpec, gamma: GammaSchedule) -> ExperimentConfig {
        let gamma = GammaSchedule {
            r: self.gamma_r.unwrap_or(gamma.r),
            s: self.gamma_s.unwrap_or(gamma.s),
            t: self.gamma_t.unwrap_or(gamma.t),
        };
        ExperimentConfig {
            problem,
            algorithms: self.algos,
            solver: SolverConfig {
                tol: self.tol,
                max_iter: self.max_iter,
                seed: self.seed,
                eta0: self.eta0,
                eta1: self.eta1,
                gamma,
                ..SolverConfig::default()
            },
            output: self.out,
            trace_branches: self.trace_branches,
        }
    }
}

fn main() -> ExitCode {
    let config = match Cli::parse().command {
        Command::Defaults => {
            print!("{}", defaults_text());
            return ExitCode::SUCCESS;
        }
        Command::Game {
            k,
            edge_prob,
            graph,
            common,
        } => {
            let problem = match graph {
                Some(path) => ProblemSpec::GameFile(path),
                None => ProblemSpec::Game {
                    k,
                    edge_prob,
                    seed: common.seed,
                },
            };
            common.into_config(problem, GammaSchedule::MATRIX_GAME)
        }
        Command::Logreg { data, features, common } => common.into_config(
            ProblemSpec::LogReg {
                path: data,
                n_features: features,
            },
            GammaSchedule::LOGREG,
        ),
    };

    match run_experiment(&config) {
        Ok(summaries) => {
            for s in &summaries {
                println!("{s}");
            }
            if summaries.iter().all(|s| s.converged) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                ExperimentError::Config(_) | ExperimentError::Input(_) | ExperimentError::Output { .. } => ExitCode::from(2),
            }
        }
    }
}
