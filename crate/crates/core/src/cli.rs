//! The `fastrg` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors (bad files,
//! invalid models, I/O failures).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, BenchConfig};
use crate::blockmodels::{memberships_from_block_sizes, BlockSpec};
use crate::error::Error;
use crate::io::{self, EdgeFormat, MatrixFormat};
use crate::matrix::Matrix;
use crate::model::FactorModel;
use crate::sampler::{sample_graph, GraphOptions, OutputKind};

#[derive(Debug, Parser)]
#[command(
    name = "fastrg",
    version,
    about = "Sample sparse random graphs with low-rank expectation X S Y^T"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample from factor matrices read from files.
    Sample(SampleArgs),
    /// Sample from a blockmodel family.
    Model {
        #[command(subcommand)]
        kind: ModelKind,
    },
    /// Time edge-list generation over a grid of sizes; CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Rescale S so the expected number of edges per node is this value.
    #[arg(long)]
    avg_deg: Option<f64>,
    #[arg(long)]
    undirected: bool,
    #[arg(long)]
    no_self_loops: bool,
    /// Undirected, loop-free and thresholded to a simple graph.
    #[arg(long)]
    simple: bool,
    /// Transform S to -ln(1 - S) so thresholded edges have probability S.
    #[arg(long)]
    bernoulli: bool,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "tsv")]
    format: EdgeFormat,
    /// Sample block pairs in parallel on per-block random streams.
    #[arg(long)]
    parallel_blocks: bool,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    s: PathBuf,
    #[arg(long)]
    y: Option<PathBuf>,
    /// Factor file format; guessed from the extension when omitted.
    #[arg(long)]
    input_format: Option<MatrixFormat>,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Debug, Args)]
struct Labels {
    /// Block sizes, filled in order starting with block 0.
    #[arg(long, value_delimiter = ',', conflicts_with = "memberships")]
    block_sizes: Option<Vec<usize>>,
    /// Explicit 0-based block label per node.
    #[arg(long, value_delimiter = ',')]
    memberships: Option<Vec<usize>>,
}

#[derive(Debug, Subcommand)]
enum ModelKind {
    Sbm {
        #[command(flatten)]
        labels: Labels,
        /// Block matrix B, row-major, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        b: Vec<f64>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    Dcsbm {
        #[command(flatten)]
        labels: Labels,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        b: Vec<f64>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    Mmsbm {
        /// Membership matrix file, one simplex row per node.
        #[arg(long)]
        pi: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        b: Vec<f64>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    Overlapping {
        /// 0/1 membership matrix file.
        #[arg(long)]
        z: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        b: Vec<f64>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    Chunglu {
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required_unless_present = "weights_file"
        )]
        weights: Option<Vec<f64>>,
        /// One weight per line (or a single CSV column).
        #[arg(long, conflicts_with = "weights")]
        weights_file: Option<PathBuf>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Node counts, e.g. 1e4,1e5,1e6.
    #[arg(long, value_delimiter = ',', value_parser = io::parse_count, default_value = "1e4,1e5,1e6")]
    n_grid: Vec<usize>,
    /// Expected edge counts, e.g. 1e5,1e6,1e7.
    #[arg(long, value_delimiter = ',', value_parser = io::parse_count, default_value = "1e5,1e6,1e7")]
    m_grid: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    dims: usize,
    #[arg(long, default_value_t = 200_000_000)]
    max_factor_entries: usize,
    /// Run grid points concurrently (timings become contended).
    #[arg(long)]
    parallel_grid: bool,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

fn read_matrix(path: &Path, format: Option<MatrixFormat>) -> Result<Matrix, Failure> {
    let format = format.unwrap_or_else(|| MatrixFormat::from_path(path));
    Ok(io::read_factor_matrix(path, format)?)
}

fn square_b(values: &[f64]) -> Result<Matrix, Failure> {
    let k = (values.len() as f64).sqrt().round() as usize;
    if k == 0 || k * k != values.len() {
        return Err(Failure::Usage(format!(
            "--b needs K*K values for a K x K matrix, got {}",
            values.len()
        )));
    }
    Ok(Matrix::new(k, k, values.to_vec())?)
}

fn labels(labels: &Labels) -> Result<Vec<usize>, Failure> {
    match (&labels.block_sizes, &labels.memberships) {
        (Some(sizes), None) => Ok(memberships_from_block_sizes(sizes)),
        (None, Some(m)) => Ok(m.clone()),
        _ => Err(Failure::Usage(
            "give exactly one of --block-sizes or --memberships".into(),
        )),
    }
}

fn is_sbm_shaped(x: &Matrix) -> bool {
    (0..x.rows()).all(|i| {
        let row = x.row(i);
        row.iter().filter(|&&v| v != 0.0).count() == 1 && row.iter().all(|&v| v == 0.0 || v == 1.0)
    })
}

fn sample_and_write(model: FactorModel, args: &SamplingArgs, err: &mut dyn Write) -> Result<(), Failure> {
    let model = match args.avg_deg {
        Some(avg) => {
            if args.bernoulli {
                let _ = writeln!(
                    err,
                    "warning: --avg-deg rescales S after the Bernoulli transform, so thresholded edge probabilities no longer equal B"
                );
            }
            model.scale_to_avg_degree(avg)?
        }
        None => model,
    };
    let options = GraphOptions {
        directed: !args.undirected,
        allow_self_loops: !args.no_self_loops,
        output_kind: if args.simple {
            OutputKind::ThresholdedSimple
        } else {
            OutputKind::PoissonMultigraph
        },
        seed: args.seed,
        parallel_blocks: args.parallel_blocks,
    };
    let graph = sample_graph(&model, &options)?;
    io::write_edge_list(&graph, &args.out, args.format)?;
    Ok(())
}

fn run_sample(args: SampleArgs, err: &mut dyn Write) -> Result<(), Failure> {
    let x = read_matrix(&args.x, args.input_format)?;
    let s = read_matrix(&args.s, args.input_format)?;
    let y = args
        .y
        .as_deref()
        .map(|p| read_matrix(p, args.input_format))
        .transpose()?;
    let s = if args.sampling.bernoulli {
        if y.is_some() || !is_sbm_shaped(&x) {
            return Err(Error::UnsupportedMeanFunction.into());
        }
        crate::blockmodels::bernoulli_transform(&s)?
    } else {
        s
    };
    let model = crate::model::validate(x, s, y)?;
    sample_and_write(model, &args.sampling, err)
}

fn run_model(kind: ModelKind, err: &mut dyn Write) -> Result<(), Failure> {
    let (spec, sampling) = match kind {
        ModelKind::Sbm { labels: l, b, sampling } => (
            BlockSpec::Sbm {
                memberships: labels(&l)?,
                b: square_b(&b)?,
            },
            sampling,
        ),
        ModelKind::Dcsbm {
            labels: l,
            theta,
            b,
            sampling,
        } => (
            BlockSpec::DegreeCorrected {
                memberships: labels(&l)?,
                theta,
                b: square_b(&b)?,
            },
            sampling,
        ),
        ModelKind::Mmsbm { pi, b, sampling } => (
            BlockSpec::MixedMembership {
                pi: read_matrix(&pi, None)?,
                b: square_b(&b)?,
            },
            sampling,
        ),
        ModelKind::Overlapping { z, b, sampling } => (
            BlockSpec::Overlapping {
                z: read_matrix(&z, None)?,
                b: square_b(&b)?,
            },
            sampling,
        ),
        ModelKind::Chunglu {
            weights,
            weights_file,
            sampling,
        } => {
            let weights = match (weights, weights_file) {
                (Some(w), _) => w,
                (None, Some(path)) => read_matrix(&path, None)?.as_slice().to_vec(),
                (None, None) => return Err(Failure::Usage("--weights or --weights-file is required".into())),
            };
            (BlockSpec::ChungLu { weights }, sampling)
        }
    };
    let model = spec.factors(sampling.bernoulli)?;
    sample_and_write(model, &sampling, err)
}

fn run_bench(args: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let config = BenchConfig {
        n_grid: args.n_grid,
        m_grid: args.m_grid,
        reps: args.reps,
        seed: args.seed,
        dims: args.dims,
        max_factor_entries: args.max_factor_entries,
        parallel_grid: args.parallel_grid,
    };
    let records = bench::run_bench(&config)?;
    bench::write_bench_csv(&records, out).map_err(Error::from)?;
    for (n, slope) in bench::slopes_by_n(&records) {
        if let Some(slope) = slope {
            let _ = writeln!(err, "n={n}: log-log slope of time vs E(m) = {slope:.3}");
        }
    }
    for r in records.iter().filter(|r| !r.count_is_plausible()) {
        let _ = writeln!(
            err,
            "note: n={} sampled {} edges, far from E(m)={}",
            r.n, r.actual_m, r.expected_m
        );
    }
    Ok(())
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run_with_io<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Sample(args) => run_sample(args, err),
        Command::Model { kind } => run_model(kind, err),
        Command::Bench(args) => run_bench(args, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Entry point used by the binary.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}
