//! Reference samplers that visit every cell: the element-wise Poisson graph
//! and the shared-uniform coupling between a thresholded Poisson graph and a
//! Bernoulli graph. They cost `O(n·d)` and exist to check the fast path.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::model::FactorModel;

/// Cell limit for the dense samplers.
pub const MAX_DENSE_CELLS: usize = 100_000_000;

/// Dense `rows × cols` matrix of counts, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
}

impl CountMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Binary matrices built from one shared uniform per cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledPair {
    /// `1(U < 1 - e^{-λ})`, distributed as the thresholded Poisson graph.
    pub thresholded: Vec<bool>,
    /// `1(U < λ)`, distributed as the Bernoulli graph.
    pub bernoulli: Vec<bool>,
    pub uniforms_consumed: usize,
}

impl CoupledPair {
    /// `‖thresholded − bernoulli‖²_F`, the number of disagreeing cells.
    pub fn disagreements(&self) -> usize {
        self.thresholded
            .iter()
            .zip(&self.bernoulli)
            .filter(|(a, b)| a != b)
            .count()
    }
}

fn guard(model: &FactorModel) -> Result<()> {
    let (rows, cols) = (model.n(), model.d());
    if rows.saturating_mul(cols) > MAX_DENSE_CELLS {
        return Err(Error::TooLarge { rows, cols });
    }
    Ok(())
}

/// Dense matrix of all `λᵢⱼ`.
pub fn lambda_matrix(model: &FactorModel) -> Result<Vec<f64>> {
    guard(model)?;
    let mut out = Vec::with_capacity(model.n() * model.d());
    for i in 0..model.n() {
        for j in 0..model.d() {
            out.push(model.lambda_unchecked(i, j));
        }
    }
    Ok(out)
}

/// The element-wise sampler: every cell independently `Poisson(λᵢⱼ)`.
pub fn dense_poisson_sample<R: Rng + ?Sized>(model: &FactorModel, rng: &mut R) -> Result<CountMatrix> {
    let lambdas = lambda_matrix(model)?;
    let counts = lambdas
        .iter()
        .map(|&l| {
            if l > 0.0 {
                Poisson::new(l).expect("positive finite rate").sample(rng) as u64
            } else {
                0
            }
        })
        .collect();
    Ok(CountMatrix {
        rows: model.n(),
        cols: model.d(),
        counts,
    })
}

/// `1 - e^{-λ}` without cancellation for small `λ`.
pub fn threshold_probability(lambda: f64) -> f64 {
    -(-lambda).exp_m1()
}

/// `λ - (1 - e^{-λ})`, the per-cell disagreement probability of the
/// coupling. Uses the alternating series below `1e-3`, where `λ + expm1(-λ)`
/// would cancel.
pub fn cell_discrepancy(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        // λ²/2 − λ³/6 + λ⁴/24 − λ⁵/120
        let l = lambda;
        l * l * (0.5 - l * (1.0 / 6.0 - l * (1.0 / 24.0 - l / 120.0)))
    } else {
        lambda + (-lambda).exp_m1()
    }
}

fn couple<R: Rng + ?Sized>(
    model: &FactorModel,
    cells: impl Iterator<Item = (usize, usize)>,
    rng: &mut R,
) -> Result<CoupledPair> {
    let size = model.n() * model.d();
    let mut thresholded = vec![false; size];
    let mut bernoulli = vec![false; size];
    let mut uniforms_consumed = 0;
    for (i, j) in cells {
        let lambda = model.lambda_unchecked(i, j);
        if lambda > 1.0 {
            return Err(Error::ProbabilityOverflow {
                row: i,
                col: j,
                value: lambda,
            });
        }
        let u: f64 = rng.random();
        uniforms_consumed += 1;
        let k = i * model.d() + j;
        thresholded[k] = u < threshold_probability(lambda);
        bernoulli[k] = u < lambda;
    }
    Ok(CoupledPair {
        thresholded,
        bernoulli,
        uniforms_consumed,
    })
}

/// Couples every ordered cell. Requires every `λᵢⱼ ≤ 1`.
pub fn coupled_pair<R: Rng + ?Sized>(model: &FactorModel, rng: &mut R) -> Result<CoupledPair> {
    guard(model)?;
    let d = model.d();
    couple(model, (0..model.n()).flat_map(|i| (0..d).map(move |j| (i, j))), rng)
}

/// Couples only the cells `i ≤ j` of a square model, for undirected
/// comparisons. Cells below the diagonal stay `false`.
pub fn coupled_pair_upper<R: Rng + ?Sized>(model: &FactorModel, rng: &mut R) -> Result<CoupledPair> {
    if !model.is_square() {
        return Err(Error::NotSquare);
    }
    guard(model)?;
    let n = model.n();
    couple(model, (0..n).flat_map(|i| (i..n).map(move |j| (i, j))), rng)
}

/// `E‖t(Ã) − B‖²_F = Σᵢⱼ (λᵢⱼ − (1 − e^{-λᵢⱼ}))` under the coupling.
pub fn discrepancy_expectation(model: &FactorModel) -> Result<f64> {
    Ok(lambda_matrix(model)?.into_iter().map(cell_discrepancy).sum())
}

/// `E‖B‖²_F = Σᵢⱼ λᵢⱼ` for the binary Bernoulli graph.
pub fn bernoulli_frobenius_expectation(model: &FactorModel) -> f64 {
    model.expected_edge_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmodels::chung_lu_factors;
    use crate::matrix::Matrix;
    use crate::rng::seeded_rng;

    fn uniform_model(n: usize, lambda: f64) -> FactorModel {
        chung_lu_factors(&vec![lambda.sqrt(); n]).unwrap()
    }

    #[test]
    fn zero_rates() {
        let model = FactorModel::square(Matrix::identity(3), Matrix::zeros(3, 3)).unwrap();
        let mut rng = seeded_rng(1);
        assert_eq!(dense_poisson_sample(&model, &mut rng).unwrap().total(), 0);
        let pair = coupled_pair(&model, &mut rng).unwrap();
        assert!(pair.thresholded.iter().chain(&pair.bernoulli).all(|&b| !b));
        assert_eq!(pair.uniforms_consumed, 9);
        assert_eq!(discrepancy_expectation(&model).unwrap(), 0.0);
    }

    #[test]
    fn single_cell_poisson_mean() {
        let model = FactorModel::square(Matrix::identity(1), Matrix::from_rows(&[[4.0]]).unwrap()).unwrap();
        let mut rng = seeded_rng(2);
        let reps = 100_000;
        let total: u64 = (0..reps)
            .map(|_| dense_poisson_sample(&model, &mut rng).unwrap().get(0, 0))
            .sum();
        let mean = total as f64 / reps as f64;
        assert!((mean - 4.0).abs() < 3.0 * (4.0f64 / reps as f64).sqrt(), "{mean}");
    }

    #[test]
    fn discrepancy_values() {
        // 0.1 + e^{-0.1} - 1 = 0.004837418035959...
        assert!((cell_discrepancy(0.1) - 0.004_837_418_035_959_573).abs() < 1e-15);
        let single = uniform_model(1, 0.1);
        assert!((discrepancy_expectation(&single).unwrap() - 0.00483742).abs() < 1e-8);
        // series and closed form agree across the switch point
        for l in [5e-4f64, 9.99e-4, 1e-3, 1.001e-3] {
            let closed = l + (-l).exp_m1();
            assert!((cell_discrepancy(l) - closed).abs() / closed < 1e-9);
        }
        // tiny rates stay accurate: λ²/2 to leading order
        let l = 1e-9;
        assert!((cell_discrepancy(l) / (l * l / 2.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn relative_discrepancy_decays_like_one_over_n() {
        let c = 2.0;
        let ratios: Vec<f64> = [10usize, 100, 1000]
            .iter()
            .map(|&n| {
                let model = uniform_model(n, c / n as f64);
                discrepancy_expectation(&model).unwrap() / bernoulli_frobenius_expectation(&model)
            })
            .collect();
        for pair in ratios.windows(2) {
            let shrink = pair[0] / pair[1];
            assert!(shrink > 8.0 && shrink < 12.0, "ratio shrink {shrink}");
        }
    }

    #[test]
    fn coupling_is_monotone_and_guarded() {
        let model = uniform_model(10, 0.3);
        let mut rng = seeded_rng(3);
        for _ in 0..200 {
            let pair = coupled_pair(&model, &mut rng).unwrap();
            assert!(pair.thresholded.iter().zip(&pair.bernoulli).all(|(&t, &b)| !t || b));
        }
        let heavy = uniform_model(2, 1.5);
        assert!(matches!(
            coupled_pair(&heavy, &mut rng),
            Err(Error::ProbabilityOverflow { .. })
        ));
        let upper = coupled_pair_upper(&model, &mut rng).unwrap();
        assert_eq!(upper.uniforms_consumed, 55);
    }

    #[test]
    fn disagreement_frequency_at_one_tenth() {
        let model = uniform_model(10, 0.1);
        let mut rng = seeded_rng(4);
        let pairs = 10_000;
        let cells = pairs * 100;
        let disagreements: usize = (0..pairs)
            .map(|_| coupled_pair(&model, &mut rng).unwrap().disagreements())
            .sum();
        let p = 0.004837418;
        let freq = disagreements as f64 / cells as f64;
        assert!((freq - p).abs() < 3.0 * (p / cells as f64).sqrt(), "{freq}");
    }

    #[test]
    fn dense_guard() {
        let big = chung_lu_factors(&vec![1e-3; 20_000]).unwrap();
        assert!(matches!(
            dense_poisson_sample(&big, &mut seeded_rng(0)),
            Err(Error::TooLarge { .. })
        ));
    }
}
