//! The fast sampler: a Poisson edge count, a multinomial split of the edges
//! over block pairs, then alias-table draws for the endpoints.

use rand::Rng;
use rayon::prelude::*;

use crate::alias::AliasTable;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{FactorModel, NormalizedModel};
use crate::postprocess;
use crate::rng::{block_stream, seeded_rng};
use crate::variates;

/// Largest Poisson rate accepted for the total edge count.
pub const MAX_EDGE_RATE: f64 = 4_611_686_018_427_387_904.0; // 2^62

/// Consecutive self-loop redraws tolerated for one edge in loopless mode.
pub const MAX_LOOP_REJECTIONS: u64 = 1_000_000;

/// A sampled graph in coordinate form. Repeated pairs are multi-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    n: usize,
    d: usize,
    directed: bool,
    edges: Vec<(usize, usize)>,
}

impl EdgeList {
    /// Checks every source is below `n` and every target below `d`.
    pub fn new(n: usize, d: usize, directed: bool, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= n || j >= d) {
            return Err(Error::IndexOutOfRange { i, j, n, d });
        }
        Ok(Self { n, d, directed, edges })
    }

    pub(crate) fn from_parts(n: usize, d: usize, directed: bool, edges: Vec<(usize, usize)>) -> Self {
        Self { n, d, directed, edges }
    }

    pub(crate) fn edges_mut(&mut self) -> &mut Vec<(usize, usize)> {
        &mut self.edges
    }

    pub(crate) fn set_directed(&mut self, directed: bool) {
        self.directed = directed;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_square(&self) -> bool {
        self.n == self.d
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<(usize, usize)> {
        self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn self_loops(&self) -> usize {
        self.edges.iter().filter(|(i, j)| i == j).count()
    }

    /// Distinct pairs with their multiplicity, sorted lexicographically.
    pub fn multiplicities(&self) -> Vec<(usize, usize, u64)> {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        let mut out: Vec<(usize, usize, u64)> = Vec::new();
        for (i, j) in sorted {
            match out.last_mut() {
                Some((a, b, m)) if *a == i && *b == j => *m += 1,
                _ => out.push((i, j, 1)),
            }
        }
        out
    }

    /// Dense `n × d` count matrix, row-major. Meant for small graphs.
    pub fn count_matrix(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n * self.d];
        for &(i, j) in &self.edges {
            counts[i * self.d + j] += 1;
        }
        counts
    }
}

/// Number of edges allotted to each block pair `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCounts {
    kx: usize,
    ky: usize,
    counts: Vec<u64>,
    total: u64,
}

impl BlockCounts {
    pub fn new(kx: usize, ky: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != kx * ky {
            return Err(Error::DimensionMismatch(format!(
                "{} block counts for a {kx} x {ky} block grid",
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(Self { kx, ky, counts, total })
    }

    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.counts[u * self.ky + v]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn kx(&self) -> usize {
        self.kx
    }

    pub fn ky(&self) -> usize {
        self.ky
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    /// Nonzero blocks `(u, v, count)` in row-major order.
    fn nonzero(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let ky = self.ky;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(k, &c)| (k / ky, k % ky, c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputKind {
    /// Raw Poisson multigraph: `A_ij ~ Poisson(λ_ij)`.
    #[default]
    PoissonMultigraph,
    /// Undirected, loop-free, thresholded: `A_ij ~ Bernoulli(1 - e^{-λ_ij})`.
    ThresholdedSimple,
}

/// What kind of graph [`sample_graph`] produces.
///
/// `ThresholdedSimple` always symmetrizes and excludes self-loops before
/// thresholding, regardless of `directed` and `allow_self_loops`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphOptions {
    pub directed: bool,
    pub allow_self_loops: bool,
    pub output_kind: OutputKind,
    pub seed: u64,
    /// Give each block pair its own substream and sample blocks in parallel.
    /// Output is identical to a serial run with this flag set, but differs
    /// from the single-stream output produced when it is off.
    pub parallel_blocks: bool,
}

impl Default for GraphOptions {
    fn default() -> Self {
        Self {
            directed: true,
            allow_self_loops: true,
            output_kind: OutputKind::PoissonMultigraph,
            seed: 0,
            parallel_blocks: false,
        }
    }
}

impl GraphOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn undirected(mut self) -> Self {
        self.directed = false;
        self
    }

    pub fn without_self_loops(mut self) -> Self {
        self.allow_self_loops = false;
        self
    }

    pub fn simple(mut self) -> Self {
        self.output_kind = OutputKind::ThresholdedSimple;
        self
    }

    pub fn parallel(mut self) -> Self {
        self.parallel_blocks = true;
        self
    }

    fn is_undirected(&self) -> bool {
        !self.directed || self.output_kind == OutputKind::ThresholdedSimple
    }

    fn keeps_loops(&self) -> bool {
        self.allow_self_loops && self.output_kind == OutputKind::PoissonMultigraph
    }
}

/// Draws the total edge count `m ~ Poisson(rate)`.
pub fn sample_edge_count<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> Result<u64> {
    if !(rate.is_finite() && rate <= MAX_EDGE_RATE) {
        return Err(Error::ModelTooLarge(rate));
    }
    Ok(variates::poisson(rate, rng))
}

/// Block weights `S̃` plus the alias tables the fast path draws from: one per
/// non-empty column of `X̃` and `Ỹ`, and one over the cells of `S̃`.
#[derive(Debug, Clone)]
pub struct EdgeSampler {
    n: usize,
    d: usize,
    s_tilde: Matrix,
    lambda_total: f64,
    x_tables: Vec<Option<AliasTable>>,
    y_tables: Option<Vec<Option<AliasTable>>>,
    cells: Option<AliasTable>,
}

impl EdgeSampler {
    /// Builds the tables straight from the columns of `X` and `Y`; the
    /// normalized factors are never materialized.
    pub fn new(model: &FactorModel) -> Self {
        let (cx, cy, s_tilde) = model.block_weights();
        let x_tables = AliasTable::from_columns(model.x(), &cx);
        let y_tables = (!model.is_square()).then(|| AliasTable::from_columns(model.y(), &cy));
        Self::assemble(model.n(), model.d(), s_tilde, x_tables, y_tables)
    }

    pub fn from_normalized(norm: &NormalizedModel) -> Self {
        let tables = |m: &Matrix| AliasTable::from_columns(m, &m.column_sums());
        let x_tables = tables(norm.x_tilde());
        let y_tables = (!norm.is_square()).then(|| tables(norm.y_tilde()));
        Self::assemble(
            norm.x_tilde().rows(),
            norm.y_tilde().rows(),
            norm.s_tilde().clone(),
            x_tables,
            y_tables,
        )
    }

    fn assemble(
        n: usize,
        d: usize,
        s_tilde: Matrix,
        x_tables: Vec<Option<AliasTable>>,
        y_tables: Option<Vec<Option<AliasTable>>>,
    ) -> Self {
        let lambda_total = s_tilde.sum();
        let cells = (lambda_total > 0.0).then(|| AliasTable::build(s_tilde.as_slice()).expect("positive total mass"));
        Self {
            n,
            d,
            s_tilde,
            lambda_total,
            x_tables,
            y_tables,
            cells,
        }
    }

    pub fn s_tilde(&self) -> &Matrix {
        &self.s_tilde
    }

    /// `Σ S̃ = Σᵢⱼ λᵢⱼ`.
    pub fn lambda_total(&self) -> f64 {
        self.lambda_total
    }

    fn x_table(&self, u: usize) -> &AliasTable {
        self.x_tables[u]
            .as_ref()
            .expect("blocks with positive counts have non-empty columns")
    }

    fn y_table(&self, v: usize) -> &AliasTable {
        self.y_tables.as_ref().unwrap_or(&self.x_tables)[v]
            .as_ref()
            .expect("blocks with positive counts have non-empty columns")
    }

    /// `m ~ Poisson(Σ S̃)`.
    pub fn sample_edge_count<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        sample_edge_count(self.lambda_total, rng)
    }

    /// Splits `m` edges over block pairs, `Multinomial(m, S̃ / Σ S̃)`, by
    /// sequential binomials over the cells in row-major order.
    pub fn sample_block_counts<R: Rng + ?Sized>(&self, m: u64, rng: &mut R) -> BlockCounts {
        let s = &self.s_tilde;
        let counts = variates::multinomial(m, s.as_slice(), rng);
        BlockCounts::new(s.rows(), s.cols(), counts).expect("one count per cell")
    }

    /// Places the edges of every block: for block `(u, v)` with count `c`, `c`
    /// sources from column `u` of `X̃`, then `c` targets from column `v` of
    /// `Ỹ`, with the t-th source paired to the t-th target. Blocks are visited
    /// in row-major order on the one stream.
    pub fn sample_edges<R: Rng + ?Sized>(&self, counts: &BlockCounts, rng: &mut R) -> EdgeList {
        let mut edges = Vec::with_capacity(counts.total() as usize);
        for (u, v, c) in counts.nonzero() {
            self.fill_block(u, v, c as usize, rng, &mut edges);
        }
        EdgeList::from_parts(self.n, self.d, true, edges)
    }

    fn fill_block<R: Rng + ?Sized>(
        &self,
        u: usize,
        v: usize,
        count: usize,
        rng: &mut R,
        edges: &mut Vec<(usize, usize)>,
    ) {
        let start = edges.len();
        let sources = self.x_table(u);
        edges.extend((0..count).map(|_| (sources.draw(rng), 0)));
        let targets = self.y_table(v);
        for edge in &mut edges[start..] {
            edge.1 = targets.draw(rng);
        }
    }

    /// Redraws every self-loop in `edges[start..]` as a whole `(U, V, I, J)`
    /// tuple until it is not a loop.
    fn reject_loops<R: Rng + ?Sized>(&self, edges: &mut [(usize, usize)], rng: &mut R) -> Result<()> {
        for edge in edges.iter_mut().filter(|(i, j)| i == j) {
            let mut attempts = 0;
            while edge.0 == edge.1 {
                if attempts == MAX_LOOP_REJECTIONS {
                    return Err(Error::RejectionStall(MAX_LOOP_REJECTIONS));
                }
                *edge = self.sample_single_edge(rng)?;
                attempts += 1;
            }
        }
        Ok(())
    }

    /// One edge of the literal per-edge loop: draw `(U, V) ∝ S̃`, then
    /// `I ~ X̃·U` and `J ~ Ỹ·V`. Marginally `P(I=i, J=j) = λᵢⱼ / Σλ`.
    pub fn sample_single_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(usize, usize)> {
        let cells = self.cells.as_ref().ok_or(Error::DegenerateModel)?;
        let cell = cells.draw(rng);
        let ky = self.s_tilde.cols();
        let (u, v) = (cell / ky, cell % ky);
        let i = self.x_table(u).draw(rng);
        let j = self.y_table(v).draw(rng);
        Ok((i, j))
    }

    /// Infinite i.i.d. edge stream borrowing this sampler.
    pub fn stream<R: Rng>(&self, rng: R) -> Result<EdgeStream<&Self, R>> {
        EdgeStream::new(self, rng)
    }
}

/// Lazily yields i.i.d. edges with `P((I, J) = (i, j)) ∝ λᵢⱼ`, the
/// edge-by-edge growth of an edge-exchangeable low-rank graph.
#[derive(Debug, Clone)]
pub struct EdgeStream<S, R> {
    sampler: S,
    rng: R,
}

impl<S: AsRef<EdgeSampler>, R: Rng> EdgeStream<S, R> {
    pub fn new(sampler: S, rng: R) -> Result<Self> {
        if sampler.as_ref().cells.is_none() {
            return Err(Error::DegenerateModel);
        }
        Ok(Self { sampler, rng })
    }
}

impl AsRef<EdgeSampler> for EdgeSampler {
    fn as_ref(&self) -> &EdgeSampler {
        self
    }
}

impl<S: AsRef<EdgeSampler>, R: Rng> Iterator for EdgeStream<S, R> {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<Self::Item> {
        self.sampler.as_ref().sample_single_edge(&mut self.rng).ok()
    }
}

/// Edge stream that owns its sampler.
pub fn sample_edge_stream<R: Rng>(model: &FactorModel, rng: R) -> Result<EdgeStream<EdgeSampler, R>> {
    EdgeStream::new(EdgeSampler::new(model), rng)
}

/// A model prepared for repeated [`sample_graph`] calls with fixed options.
#[derive(Debug, Clone)]
pub struct GraphSampler {
    sampler: EdgeSampler,
    options: GraphOptions,
    rate: f64,
}

impl GraphSampler {
    pub fn new(model: &FactorModel, options: GraphOptions) -> Result<Self> {
        let undirected = options.is_undirected();
        let loops = options.keeps_loops();
        if (undirected || !loops) && !model.is_square() {
            return Err(Error::NotSquare);
        }
        // Symmetrizing doubles each rate, so sample from S/2.
        let halved;
        let working = if undirected {
            halved = model.scale_mixing(0.5)?;
            &halved
        } else {
            model
        };
        let sampler = EdgeSampler::new(working);
        let rate = if loops {
            sampler.lambda_total()
        } else {
            working.loopless_rate()?
        };
        if !(rate.is_finite() && rate <= MAX_EDGE_RATE) {
            return Err(Error::ModelTooLarge(rate));
        }
        Ok(Self { sampler, options, rate })
    }

    /// Poisson rate of the raw edge count before any post-processing.
    pub fn edge_rate(&self) -> f64 {
        self.rate
    }

    pub fn options(&self) -> &GraphOptions {
        &self.options
    }

    /// Samples with the stored options' seed.
    pub fn sample(&self) -> Result<EdgeList> {
        self.sample_with_seed(self.options.seed)
    }

    pub fn sample_with_seed(&self, seed: u64) -> Result<EdgeList> {
        let loopless = !self.options.keeps_loops();
        let mut rng = seeded_rng(seed);
        let m = sample_edge_count(self.rate, &mut rng)?;
        let counts = self.sampler.sample_block_counts(m, &mut rng);
        let (n, d) = (self.sampler.n, self.sampler.d);

        let edges = if self.options.parallel_blocks {
            let ky = counts.ky();
            let blocks: Vec<_> = counts.nonzero().collect();
            let parts = blocks
                .into_par_iter()
                .map(|(u, v, c)| {
                    let mut block_rng = block_stream(seed, u, v, ky);
                    let mut part = Vec::with_capacity(c as usize);
                    self.sampler.fill_block(u, v, c as usize, &mut block_rng, &mut part);
                    if loopless {
                        self.sampler.reject_loops(&mut part, &mut block_rng)?;
                    }
                    Ok(part)
                })
                .collect::<Result<Vec<_>>>()?;
            parts.concat()
        } else {
            let mut edges = Vec::with_capacity(m as usize);
            for (u, v, c) in counts.nonzero() {
                let start = edges.len();
                self.sampler.fill_block(u, v, c as usize, &mut rng, &mut edges);
                if loopless {
                    self.sampler.reject_loops(&mut edges[start..], &mut rng)?;
                }
            }
            edges
        };

        let mut graph = EdgeList::from_parts(n, d, true, edges);
        if self.options.is_undirected() {
            postprocess::symmetrize_in_place(&mut graph);
        }
        if self.options.output_kind == OutputKind::ThresholdedSimple {
            postprocess::threshold_in_place(&mut graph);
        }
        Ok(graph)
    }
}

/// Samples one graph from `model` under `options`.
///
/// * directed, loops, multigraph: the plain fast sampler, `A_ij ~ Poisson(λ_ij)`;
/// * undirected: sample from `S/2`, then drop edge directions;
/// * no self-loops: edge count from [`FactorModel::loopless_rate`], each loop
///   redrawn as a full tuple until it is not a loop;
/// * thresholded-simple: undirected and loop-free, then multiplicities
///   collapsed to one.
pub fn sample_graph(model: &FactorModel, options: &GraphOptions) -> Result<EdgeList> {
    GraphSampler::new(model, *options)?.sample()
}
