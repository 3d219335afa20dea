//! Run-time scaling harness.
//!
//! For each grid point `(n, E(m))` the harness draws `X` (`n × K`, i.i.d.
//! Poisson(1)) and `S` (`K × K`, i.i.d. Uniform[0, 1]), rescales `S` to an
//! average degree of `E(m) / n`, and times one directed multigraph sample
//! with self-loops. Model construction and output are outside the timed
//! region.
//!
//! Randomness is split from a single seed: grid point `p` (counting reps)
//! uses substream `3p + 1` for `X`, `3p + 2` for `S`, and the first word of
//! substream `3p + 3` as the sampling seed.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::FactorModel;
use crate::rng::substream;
use crate::sampler::{sample_graph, GraphOptions};
use crate::variates;

pub const CSV_HEADER: &str = "n,expected_m,actual_m,elapsed_seconds,seed,model_kind";

pub const MODEL_KIND: &str = "poisson-x-uniform-s";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub expected_m: usize,
    pub actual_m: usize,
    pub elapsed_seconds: f64,
    pub seed: u64,
    pub model_kind: String,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{},{}",
            self.n, self.expected_m, self.actual_m, self.elapsed_seconds, self.seed, self.model_kind
        )
    }

    /// Whether `actual_m` lies within `6·√E(m)` of `E(m)`.
    pub fn count_is_plausible(&self) -> bool {
        let expected = self.expected_m as f64;
        (self.actual_m as f64 - expected).abs() <= 6.0 * expected.sqrt().max(1.0)
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub n_grid: Vec<usize>,
    pub m_grid: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    /// Latent dimension `K`.
    pub dims: usize,
    /// Largest `n·K` the harness will allocate.
    pub max_factor_entries: usize,
    /// Run grid points concurrently. Each timed region still samples alone
    /// on its thread, but timings become contended.
    pub parallel_grid: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            n_grid: vec![10_000, 100_000, 1_000_000],
            m_grid: vec![100_000, 1_000_000, 10_000_000],
            reps: 3,
            seed: 0,
            dims: 5,
            max_factor_entries: 200_000_000,
            parallel_grid: false,
        }
    }
}

/// The harness's random model, rescaled to `avg_deg` edges per node.
pub fn bench_model(n: usize, dims: usize, avg_deg: f64, seed: u64, point: u64) -> Result<FactorModel> {
    let mut x_rng = substream(seed, 3 * point + 1);
    let x: Vec<f64> = (0..n * dims)
        .map(|_| variates::poisson(1.0, &mut x_rng) as f64)
        .collect();
    let mut s_rng = substream(seed, 3 * point + 2);
    let s: Vec<f64> = (0..dims * dims).map(|_| s_rng.random::<f64>()).collect();
    let model = FactorModel::square(Matrix::new(n, dims, x)?, Matrix::new(dims, dims, s)?)?;
    model.scale_to_avg_degree(avg_deg)
}

fn sampling_seed(seed: u64, point: u64) -> u64 {
    substream(seed, 3 * point + 3).next_u64()
}

fn run_point(config: &BenchConfig, n: usize, expected_m: usize, point: u64) -> Result<BenchRecord> {
    let model = bench_model(n, config.dims, expected_m as f64 / n as f64, config.seed, point)?;
    let seed = sampling_seed(config.seed, point);
    let options = GraphOptions::with_seed(seed);
    let start = Instant::now();
    let graph = sample_graph(&model, &options)?;
    let elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(BenchRecord {
        n,
        expected_m,
        actual_m: graph.len(),
        elapsed_seconds,
        seed,
        model_kind: MODEL_KIND.to_string(),
    })
}

/// Runs the grid in `n`-major order, `reps` samples per point.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if config.n_grid.is_empty() || config.m_grid.is_empty() {
        return Err(Error::InvalidArgument("bench grids must be non-empty".into()));
    }
    if let Some(&n) = config.n_grid.iter().find(|&&n| n == 0) {
        return Err(Error::InvalidArgument(format!("grid size n = {n} must be positive")));
    }
    let largest = config.n_grid.iter().max().copied().unwrap_or(0);
    let requested = largest.saturating_mul(config.dims);
    if requested > config.max_factor_entries {
        return Err(Error::ResourceLimit {
            requested,
            cap: config.max_factor_entries,
        });
    }

    let mut points = Vec::new();
    for &n in &config.n_grid {
        for &m in &config.m_grid {
            for _ in 0..config.reps {
                points.push((n, m, points.len() as u64));
            }
        }
    }
    if config.parallel_grid {
        points
            .into_par_iter()
            .map(|(n, m, p)| run_point(config, n, m, p))
            .collect()
    } else {
        points.into_iter().map(|(n, m, p)| run_point(config, n, m, p)).collect()
    }
}

pub fn write_bench_csv<W: Write + ?Sized>(records: &[BenchRecord], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slope of time against `E(m)` for each `n` in the records.
pub fn slopes_by_n(records: &[BenchRecord]) -> Vec<(usize, Option<f64>)> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let pts: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| r.n == n)
                .map(|r| (r.expected_m as f64, r.elapsed_seconds))
                .collect();
            (n, loglog_slope(&pts))
        })
        .collect()
}
