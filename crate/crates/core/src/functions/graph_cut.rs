use serde::{Deserialize, Serialize};

use super::facility::SimilarityKernel;
use crate::error::{Error, Result};
use crate::set::Subset;

/// Generalized graph cut
/// `f(A) = λ Σ_{i∈Ω} Σ_{a∈A} s_ia − Σ_{a1,a2∈A} s_{a1 a2}`.
///
/// The sum over `A × A` runs over ordered pairs and includes the diagonal.
/// Monotone only for `λ ≥ 2`; [`GraphCutParams::relaxed`] admits smaller
/// `λ` for exploring the non-monotone regime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphCutRaw", into = "GraphCutRaw")]
pub struct GraphCutParams {
    kernel: SimilarityKernel,
    lambda: f64,
    relaxed: bool,
    col_sums: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GraphCutRaw {
    kernel: Vec<Vec<f64>>,
    lambda: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    relaxed: bool,
}

impl TryFrom<GraphCutRaw> for GraphCutParams {
    type Error = Error;
    fn try_from(raw: GraphCutRaw) -> Result<Self> {
        if raw.relaxed {
            GraphCutParams::relaxed(raw.kernel, raw.lambda)
        } else {
            GraphCutParams::new(raw.kernel, raw.lambda)
        }
    }
}

impl From<GraphCutParams> for GraphCutRaw {
    fn from(g: GraphCutParams) -> Self {
        GraphCutRaw {
            kernel: g.kernel.rows(),
            lambda: g.lambda,
            relaxed: g.relaxed,
        }
    }
}

impl GraphCutParams {
    pub fn new(rows: Vec<Vec<f64>>, lambda: f64) -> Result<Self> {
        if !(lambda >= 2.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "graph cut needs lambda >= 2 for monotonicity, got {lambda}"
            )));
        }
        Self::build(rows, lambda, false)
    }

    /// Any finite `λ ≥ 0`; the result is submodular but may not be monotone.
    pub fn relaxed(rows: Vec<Vec<f64>>, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Self::build(rows, lambda, lambda < 2.0)
    }

    fn build(rows: Vec<Vec<f64>>, lambda: f64, relaxed: bool) -> Result<Self> {
        let kernel = SimilarityKernel::new(rows)?;
        if !kernel.is_symmetric(1e-12) {
            return Err(Error::invalid("graph cut kernel must be symmetric"));
        }
        let n = kernel.size();
        let col_sums = (0..n)
            .map(|a| (0..n).map(|i| kernel.get(i, a)).sum())
            .collect();
        Ok(Self {
            kernel,
            lambda,
            relaxed,
            col_sums,
        })
    }

    pub fn kernel(&self) -> &SimilarityKernel {
        &self.kernel
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub(crate) fn col_sum(&self, a: usize) -> f64 {
        self.col_sums[a]
    }

    /// `S(X, Y) = Σ_{x∈X, y∈Y} s_xy`.
    pub(crate) fn cross(&self, x: &Subset, y: &Subset) -> f64 {
        let ys: Vec<usize> = y.iter().collect();
        x.iter()
            .map(|i| ys.iter().map(|&j| self.kernel.get(i, j)).sum::<f64>())
            .sum()
    }

    pub(crate) fn eval(&self, a: &Subset) -> f64 {
        let linear: f64 = a.iter().map(|j| self.col_sums[j]).sum();
        self.lambda * linear - self.cross(a, a)
    }
}
