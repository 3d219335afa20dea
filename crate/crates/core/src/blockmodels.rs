//! Factor models for the common blockmodel families.
//!
//! | family                 | row `i` of `X`                         |
//! |------------------------|----------------------------------------|
//! | SBM                    | one-hot block indicator                |
//! | degree-corrected SBM   | `θᵢ` times the block indicator         |
//! | mixed membership SBM   | a point on the probability simplex     |
//! | overlapping SBM        | any 0/1 vector                         |
//! | Chung-Lu               | a single non-negative weight (`K = 1`) |
//!
//! Erdős–Rényi-type uniform rates are Chung-Lu with equal weights. All models
//! are square (`Y = X`) with `S = B`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::FactorModel;

const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Parameters of one of the supported families.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockSpec {
    Sbm {
        memberships: Vec<usize>,
        b: Matrix,
    },
    DegreeCorrected {
        memberships: Vec<usize>,
        theta: Vec<f64>,
        b: Matrix,
    },
    MixedMembership {
        pi: Matrix,
        b: Matrix,
    },
    Overlapping {
        z: Matrix,
        b: Matrix,
    },
    ChungLu {
        weights: Vec<f64>,
    },
}

impl BlockSpec {
    /// Builds the factor model. `bernoulli` requests the `-ln(1 - B)`
    /// transform, which only the plain SBM supports.
    pub fn factors(&self, bernoulli: bool) -> Result<FactorModel> {
        match self {
            BlockSpec::Sbm { memberships, b } => sbm_factors(memberships, b, bernoulli),
            _ if bernoulli => Err(Error::UnsupportedMeanFunction),
            BlockSpec::DegreeCorrected { memberships, theta, b } => dcsbm_factors(memberships, theta, b),
            BlockSpec::MixedMembership { pi, b } => mixed_membership_factors(pi, b),
            BlockSpec::Overlapping { z, b } => overlapping_factors(z, b),
            BlockSpec::ChungLu { weights } => chung_lu_factors(weights),
        }
    }
}

/// Labels for consecutive blocks of the given sizes: block 0 first.
pub fn memberships_from_block_sizes(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(k, &size)| std::iter::repeat_n(k, size))
        .collect()
}

fn check_square_b(b: &Matrix) -> Result<()> {
    if b.rows() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "block matrix is {} x {}, expected square",
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

fn one_hot(memberships: &[usize], scale: impl Fn(usize) -> f64, blocks: usize) -> Result<Matrix> {
    let mut x = Matrix::zeros(memberships.len(), blocks);
    for (node, &label) in memberships.iter().enumerate() {
        if label >= blocks {
            return Err(Error::LabelOutOfRange { node, label, blocks });
        }
        x.set(node, label, scale(node));
    }
    Ok(x)
}

/// `S_kl = -ln(1 - B_kl)`, so that thresholding a Poisson(S) count gives an
/// edge with probability exactly `B_kl`.
pub fn bernoulli_transform(b: &Matrix) -> Result<Matrix> {
    if let Some((row, col, value)) = b.entries().find(|&(_, _, p)| !(0.0..1.0).contains(&p)) {
        return Err(Error::ProbabilityOutOfRange { row, col, value });
    }
    Ok(b.map(|p| -(-p).ln_1p()))
}

/// Stochastic blockmodel with one-hot `X`.
pub fn sbm_factors(memberships: &[usize], b: &Matrix, bernoulli: bool) -> Result<FactorModel> {
    check_square_b(b)?;
    let x = one_hot(memberships, |_| 1.0, b.rows())?;
    let s = if bernoulli { bernoulli_transform(b)? } else { b.clone() };
    FactorModel::square(x, s)
}

/// Degree-corrected SBM: row `i` of `X` is `θᵢ e_{membership(i)}`.
pub fn dcsbm_factors(memberships: &[usize], theta: &[f64], b: &Matrix) -> Result<FactorModel> {
    check_square_b(b)?;
    if theta.len() != memberships.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} degree parameters for {} nodes",
            theta.len(),
            memberships.len()
        )));
    }
    if let Some((index, &value)) = theta.iter().enumerate().find(|(_, &t)| !(t > 0.0 && t.is_finite())) {
        return Err(Error::NonPositiveTheta { index, value });
    }
    let x = one_hot(memberships, |i| theta[i], b.rows())?;
    FactorModel::square(x, b.clone())
}

/// Mixed-membership SBM: rows of `pi` lie on the probability simplex.
pub fn mixed_membership_factors(pi: &Matrix, b: &Matrix) -> Result<FactorModel> {
    check_square_b(b)?;
    let model = FactorModel::square(pi.clone(), b.clone())?;
    for row in 0..pi.rows() {
        let sum: f64 = pi.row(row).iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::SimplexViolation { row, sum });
        }
    }
    Ok(model)
}

/// Overlapping SBM: `z` is a 0/1 membership matrix.
pub fn overlapping_factors(z: &Matrix, b: &Matrix) -> Result<FactorModel> {
    check_square_b(b)?;
    if let Some((row, col, value)) = z.entries().find(|&(_, _, v)| v != 0.0 && v != 1.0) {
        return Err(Error::NonBinaryEntry { row, col, value });
    }
    FactorModel::square(z.clone(), b.clone())
}

/// Chung-Lu: `λᵢⱼ = wᵢ wⱼ`.
pub fn chung_lu_factors(weights: &[f64]) -> Result<FactorModel> {
    let x = Matrix::column_vector(weights.to_vec());
    let model = FactorModel::square(x, Matrix::identity(1))?;
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::AllZero);
    }
    Ok(model)
}
