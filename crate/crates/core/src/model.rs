//! Factor-model parameterization `E(A) = X S Yᵀ` and its column normalization.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Non-negative factors `(X, S, Y)`.
///
/// Row `i` of `X` is the feature of source node `i`, row `j` of `Y` the
/// feature of target node `j`, and `S` mixes the two latent spaces. When the
/// model is square, `Y` is `X` itself and is not stored twice.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    x: Matrix,
    s: Matrix,
    y: Option<Matrix>,
}

fn check_entries(name: &'static str, m: &Matrix) -> Result<()> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::EmptyMatrix { matrix: name });
    }
    for (row, col, value) in m.entries() {
        if !value.is_finite() {
            return Err(Error::NonFinite { matrix: name, row, col });
        }
        if value < 0.0 {
            return Err(Error::NegativeEntry {
                matrix: name,
                row,
                col,
                value,
            });
        }
    }
    Ok(())
}

/// Checks `X`, `S` and an optional separate `Y`, returning the model.
///
/// Passing `y = None` declares the model square (`Y = X`).
pub fn validate(x: Matrix, s: Matrix, y: Option<Matrix>) -> Result<FactorModel> {
    check_entries("X", &x)?;
    check_entries("S", &s)?;
    if let Some(y) = &y {
        check_entries("Y", y)?;
    }
    if x.cols() != s.rows() {
        return Err(Error::DimensionMismatch(format!(
            "X has {} columns but S has {} rows",
            x.cols(),
            s.rows()
        )));
    }
    let ky = y.as_ref().unwrap_or(&x).cols();
    if s.cols() != ky {
        return Err(Error::DimensionMismatch(format!(
            "S has {} columns but Y has {ky}",
            s.cols()
        )));
    }
    Ok(FactorModel { x, s, y })
}

impl FactorModel {
    /// Square model with `Y = X`.
    pub fn square(x: Matrix, s: Matrix) -> Result<Self> {
        validate(x, s, None)
    }

    pub fn rectangular(x: Matrix, s: Matrix, y: Matrix) -> Result<Self> {
        validate(x, s, Some(y))
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn y(&self) -> &Matrix {
        self.y.as_ref().unwrap_or(&self.x)
    }

    pub fn is_square(&self) -> bool {
        self.y.is_none()
    }

    /// Number of source nodes.
    pub fn n(&self) -> usize {
        self.x.rows()
    }

    /// Number of target nodes.
    pub fn d(&self) -> usize {
        self.y().rows()
    }

    pub fn kx(&self) -> usize {
        self.x.cols()
    }

    pub fn ky(&self) -> usize {
        self.s.cols()
    }

    /// Replaces `S`, keeping `X` and `Y`.
    pub fn with_mixing(&self, s: Matrix) -> Result<Self> {
        validate(self.x.clone(), s, self.y.clone())
    }

    /// Same model with `S` multiplied by a non-negative scalar.
    pub fn scale_mixing(&self, factor: f64) -> Result<Self> {
        self.with_mixing(self.s.scaled(factor))
    }

    /// `λᵢⱼ = xᵢᵀ S yⱼ` with 0-based indices.
    pub fn lambda(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.n() || j >= self.d() {
            return Err(Error::IndexOutOfRange {
                i,
                j,
                n: self.n(),
                d: self.d(),
            });
        }
        Ok(self.lambda_unchecked(i, j))
    }

    pub(crate) fn lambda_unchecked(&self, i: usize, j: usize) -> f64 {
        bilinear(self.x.row(i), &self.s, self.y().row(j))
    }

    /// `Σᵢⱼ λᵢⱼ = (1ᵀX) S (Yᵀ1)`, the Poisson rate of the total edge count.
    pub fn expected_edge_count(&self) -> f64 {
        bilinear(&self.x.column_sums(), &self.s, &self.y().column_sums())
    }

    /// Rescales `S` so that the expected number of edges per source node
    /// equals `avg_deg`. Degree here counts edges of the raw directed
    /// multigraph, before symmetrizing or thresholding.
    pub fn scale_to_avg_degree(&self, avg_deg: f64) -> Result<Self> {
        if !(avg_deg.is_finite() && avg_deg > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "average degree must be positive, got {avg_deg}"
            )));
        }
        let total = self.expected_edge_count();
        if total <= 0.0 {
            return Err(Error::DegenerateModel);
        }
        self.scale_mixing(avg_deg * self.n() as f64 / total)
    }

    /// Poisson rate of the edge count once self-loops are excluded:
    /// `Σ S̃ − Σᵢ ⟨xᵢ, xᵢ⟩_S`, clamped at zero against rounding.
    pub fn loopless_rate(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let loops: f64 = (0..self.n()).map(|i| self.lambda_unchecked(i, i)).sum();
        Ok((self.expected_edge_count() - loops).max(0.0))
    }

    /// Column normalization of the factors.
    pub fn normalize(&self) -> NormalizedModel {
        let (cx, cy, s_tilde) = self.block_weights();
        let x_tilde = normalize_columns(&self.x, &cx);
        let y_tilde = self.y.as_ref().map(|y| normalize_columns(y, &cy));
        let lambda_total = s_tilde.sum();
        NormalizedModel {
            x_tilde,
            y_tilde,
            s_tilde,
            lambda_total,
            cx,
            cy,
        }
    }

    /// Column sums of `X` and `Y` and the block weights `S̃ = C_X S C_Y`.
    pub(crate) fn block_weights(&self) -> (Vec<f64>, Vec<f64>, Matrix) {
        let cx = self.x.column_sums();
        let cy = match &self.y {
            None => cx.clone(),
            Some(y) => y.column_sums(),
        };
        let mut s_tilde = Matrix::zeros(self.kx(), self.ky());
        for (u, v, s) in self.s.entries() {
            s_tilde.set(u, v, cx[u] * s * cy[v]);
        }
        (cx, cy, s_tilde)
    }
}

fn bilinear(x: &[f64], s: &Matrix, y: &[f64]) -> f64 {
    let mut total = 0.0;
    for (u, &xu) in x.iter().enumerate() {
        if xu == 0.0 {
            continue;
        }
        let inner: f64 = s.row(u).iter().zip(y).map(|(a, b)| a * b).sum();
        total += xu * inner;
    }
    total
}

// Empty columns keep a divisor of 1, so they stay all-zero.
fn normalize_columns(m: &Matrix, sums: &[f64]) -> Matrix {
    let inv: Vec<f64> = sums.iter().map(|&c| if c > 0.0 { 1.0 / c } else { 1.0 }).collect();
    let mut out = m.clone();
    for (i, j, v) in m.entries() {
        out.set(i, j, v * inv[j]);
    }
    out
}

/// The normalized factors `X̃ = X C_X⁻¹`, `S̃ = C_X S C_Y`, `Ỹ = Y C_Y⁻¹`.
///
/// Every non-empty column of `X̃` and `Ỹ` is a probability distribution over
/// nodes. An empty column of `X` (or `Y`) yields a zero row (column) of `S̃`,
/// so its block can never be drawn.
#[derive(Debug, Clone)]
pub struct NormalizedModel {
    x_tilde: Matrix,
    y_tilde: Option<Matrix>,
    s_tilde: Matrix,
    lambda_total: f64,
    cx: Vec<f64>,
    cy: Vec<f64>,
}

impl NormalizedModel {
    pub fn x_tilde(&self) -> &Matrix {
        &self.x_tilde
    }

    pub fn y_tilde(&self) -> &Matrix {
        self.y_tilde.as_ref().unwrap_or(&self.x_tilde)
    }

    pub fn s_tilde(&self) -> &Matrix {
        &self.s_tilde
    }

    /// `Σ_{u,v} S̃_{uv}`.
    pub fn lambda_total(&self) -> f64 {
        self.lambda_total
    }

    pub fn cx(&self) -> &[f64] {
        &self.cx
    }

    pub fn cy(&self) -> &[f64] {
        &self.cy
    }

    pub fn is_square(&self) -> bool {
        self.y_tilde.is_none()
    }
}
