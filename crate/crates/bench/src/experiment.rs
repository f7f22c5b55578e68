//! Seeded benchmark runs and their CSV traces.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Instant;

use graal_core::problems::{random_connected_graph, LogRegDataset, LogisticRegression, MatrixGame};
use graal_core::solver::{run_with_clock, Algorithm, Clock, Problem, RunOutput, RunRecord, SolverConfig};

use crate::edgelist::read_edge_list_file;
use crate::libsvm::read_libsvm_file;

pub const DEFAULT_EDGE_PROB: f64 = 0.3;

pub const CSV_HEADER: &str = "iter,elapsed_seconds,lambda,residual_norm,merit";

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// Server placement on a seeded random connected graph.
    Game { k: usize, edge_prob: f64, seed: u64 },
    /// Server placement on a graph read from an edge list.
    GameFile(PathBuf),
    /// Logistic regression on a plain-text LIBSVM file.
    LogReg { path: PathBuf, n_features: Option<usize> },
    /// Logistic regression on seeded synthetic data.
    SyntheticLogReg { m: usize, n: usize, flip_prob: f64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub algorithms: Vec<Algorithm>,
    /// Shared solver settings; the algorithm field is set per run.
    pub solver: SolverConfig,
    pub output: PathBuf,
    /// Also write `<algo>_branches.csv` with the step-size branch per
    /// iteration.
    pub trace_branches: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read input: {0}")]
    Input(String),
    #[error("cannot write output {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub algorithm: Algorithm,
    pub iterations: usize,
    pub final_residual: f64,
    pub final_merit: f64,
    pub seconds: f64,
    pub converged: bool,
    pub csv: PathBuf,
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: iterations={} residual={:e} merit={:e} seconds={:.3} converged={}",
            self.algorithm, self.iterations, self.final_residual, self.final_merit, self.seconds, self.converged
        )
    }
}

/// Wall-clock time since construction.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        Self(Instant::now())
    }
}

impl Clock for WallClock {
    fn now(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

pub enum BuiltProblem {
    Game(MatrixGame),
    LogReg(LogisticRegression),
}

impl BuiltProblem {
    pub fn as_problem(&self) -> &(dyn Problem + Sync) {
        match self {
            BuiltProblem::Game(g) => g,
            BuiltProblem::LogReg(l) => l,
        }
    }
}

pub fn build_problem(spec: &ProblemSpec) -> Result<BuiltProblem, ExperimentError> {
    let cfg = |e: graal_core::Error| ExperimentError::Config(e.to_string());
    Ok(match spec {
        ProblemSpec::Game { k, edge_prob, seed } => {
            let g = random_connected_graph(*k, *edge_prob, *seed).map_err(cfg)?;
            BuiltProblem::Game(MatrixGame::from_graph(&g).map_err(cfg)?)
        }
        ProblemSpec::GameFile(path) => {
            let g = read_edge_list_file(path).map_err(|e| ExperimentError::Input(format!("{}: {e}", path.display())))?;
            BuiltProblem::Game(MatrixGame::from_graph(&g).map_err(|e| ExperimentError::Input(format!("{}: {e}", path.display())))?)
        }
        ProblemSpec::LogReg { path, n_features } => {
            let ds = read_libsvm_file(path, *n_features).map_err(|e| ExperimentError::Input(format!("{}: {e}", path.display())))?;
            BuiltProblem::LogReg(LogisticRegression::new(ds).map_err(cfg)?)
        }
        ProblemSpec::SyntheticLogReg { m, n, flip_prob, seed } => {
            let ds = LogRegDataset::synthetic(*m, *n, *flip_prob, *seed).map_err(cfg)?;
            BuiltProblem::LogReg(LogisticRegression::new(ds).map_err(cfg)?)
        }
    })
}

/// Writes the trace CSV. Floats use Rust's shortest round-trip formatting.
pub fn write_trace_csv<W: Write>(mut w: W, records: &[RunRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{},{},{},{},{}", r.iter, r.elapsed_seconds, r.lambda, r.residual_norm, r.merit)?;
    }
    w.flush()
}

pub fn write_branch_csv<W: Write>(mut w: W, records: &[RunRecord]) -> io::Result<()> {
    writeln!(w, "iter,branch")?;
    for r in records {
        writeln!(w, "{},{}", r.iter, r.branch.as_str())?;
    }
    w.flush()
}

fn write_file(path: &Path, f: impl FnOnce(BufWriter<File>) -> io::Result<()>) -> Result<(), ExperimentError> {
    File::create(path)
        .and_then(|file| f(BufWriter::new(file)))
        .map_err(|source| ExperimentError::Output {
            path: path.to_path_buf(),
            source,
        })
}

pub fn validate(config: &ExperimentConfig) -> Result<(), ExperimentError> {
    if config.algorithms.is_empty() {
        return Err(ExperimentError::Config("no algorithms requested".into()));
    }
    for (i, a) in config.algorithms.iter().enumerate() {
        if config.algorithms[..i].contains(a) {
            return Err(ExperimentError::Config(format!("algorithm {a} requested twice")));
        }
    }
    config
        .solver
        .validate()
        .map_err(|e| ExperimentError::Config(e.to_string()))
}

/// Builds the problem, runs every requested algorithm on its own thread and
/// writes `<output>/<algo>.csv` for each. Summaries follow the order of
/// `config.algorithms`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunSummary>, ExperimentError> {
    validate(config)?;
    let built = build_problem(&config.problem)?;
    let problem = built.as_problem();
    fs::create_dir_all(&config.output).map_err(|source| ExperimentError::Output {
        path: config.output.clone(),
        source,
    })?;

    let outputs: Vec<Result<(RunOutput, f64), graal_core::Error>> = thread::scope(|s| {
        let handles: Vec<_> = config
            .algorithms
            .iter()
            .map(|&algo| {
                let cfg = config.solver.clone().with_algorithm(algo);
                s.spawn(move || {
                    let clock = WallClock::start();
                    let out = run_with_clock(problem, &cfg, &clock)?;
                    Ok((out, clock.now()))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });

    let mut summaries = Vec::with_capacity(outputs.len());
    for (algo, res) in config.algorithms.iter().zip(outputs) {
        let (out, seconds) = res.map_err(|e| ExperimentError::Config(format!("{algo}: {e}")))?;
        let csv = config.output.join(format!("{algo}.csv"));
        write_file(&csv, |w| write_trace_csv(w, &out.records))?;
        if config.trace_branches {
            let path = config.output.join(format!("{algo}_branches.csv"));
            write_file(&path, |w| write_branch_csv(w, &out.records))?;
        }
        summaries.push(RunSummary {
            algorithm: *algo,
            iterations: out.iterations(),
            final_residual: out.final_residual(),
            final_merit: out.final_merit(),
            seconds,
            converged: out.converged,
            csv,
        });
    }
    Ok(summaries)
}
