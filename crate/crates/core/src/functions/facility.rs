use serde::{Deserialize, Serialize};

use super::{kernel_from_rows, rows_of};
use crate::error::{Error, Result};
use crate::set::Subset;

/// Facility location `f(A) = Σ_i max_{a∈A} s_ia` over a square kernel with
/// entries in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRaw", into = "KernelRaw")]
pub struct SimilarityKernel {
    n: usize,
    s: Vec<f64>,
    diagonal_is_one: bool,
}

#[derive(Serialize, Deserialize)]
struct KernelRaw {
    kernel: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    diagonal_is_one: bool,
}

impl TryFrom<KernelRaw> for SimilarityKernel {
    type Error = Error;
    fn try_from(raw: KernelRaw) -> Result<Self> {
        if raw.diagonal_is_one {
            SimilarityKernel::with_unit_diagonal(raw.kernel)
        } else {
            SimilarityKernel::new(raw.kernel)
        }
    }
}

impl From<SimilarityKernel> for KernelRaw {
    fn from(k: SimilarityKernel) -> Self {
        KernelRaw {
            kernel: rows_of(&k.s, k.n),
            diagonal_is_one: k.diagonal_is_one,
        }
    }
}

impl SimilarityKernel {
    /// Like [`SimilarityKernel::new`] but also requires `s_ii = 1`.
    pub fn with_unit_diagonal(rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut k = Self::new(rows)?;
        if let Some(i) = (0..k.n).find(|&i| k.get(i, i) != 1.0) {
            return Err(Error::invalid(format!(
                "kernel[{i}][{i}] = {} but the diagonal must be 1",
                k.get(i, i)
            )));
        }
        k.diagonal_is_one = true;
        Ok(k)
    }

    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let (n, s) = kernel_from_rows(&rows, "kernel")?;
        if let Some(pos) = s.iter().position(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::invalid(format!(
                "kernel[{}][{}] = {} outside [0, 1]",
                pos / n,
                pos % n,
                s[pos]
            )));
        }
        Ok(Self {
            n,
            s,
            diagonal_is_one: false,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.s[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        rows_of(&self.s, self.n)
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 1.0)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// `max_{a∈A} s_ia` for every `i`, zero for empty `A`.
    pub(crate) fn maxes(&self, a: &Subset) -> Vec<f64> {
        let mut m = vec![0.0f64; self.n];
        for j in a.iter() {
            for (i, mi) in m.iter_mut().enumerate() {
                let v = self.get(i, j);
                if v > *mi {
                    *mi = v;
                }
            }
        }
        m
    }

    pub(crate) fn eval(&self, a: &Subset) -> f64 {
        self.maxes(a).iter().sum()
    }
}
