use serde::{Deserialize, Serialize};

use super::check_weights;
use crate::error::{Error, Result};
use crate::set::Subset;

/// `f(A) = min(|A|, c)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TruncationRaw", into = "TruncationRaw")]
pub struct TruncationRank {
    n: usize,
    cap: usize,
}

#[derive(Serialize, Deserialize)]
struct TruncationRaw {
    n: usize,
    cap: usize,
}

impl TryFrom<TruncationRaw> for TruncationRank {
    type Error = Error;
    fn try_from(raw: TruncationRaw) -> Result<Self> {
        TruncationRank::new(raw.n, raw.cap)
    }
}

impl From<TruncationRank> for TruncationRaw {
    fn from(t: TruncationRank) -> Self {
        TruncationRaw { n: t.n, cap: t.cap }
    }
}

impl TruncationRank {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        if cap == 0 || cap > n {
            return Err(Error::invalid(format!(
                "truncation cap {cap} outside [1, {n}]"
            )));
        }
        Ok(Self { n, cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    /// `f^(3)(i,j,k;A) = −1` whenever `|A| = c − 2` and three elements
    /// remain outside `A`.
    pub fn is_second_order_supermodular(&self) -> bool {
        self.cap < 2 || self.cap >= self.n
    }

    pub(crate) fn at(&self, size: usize) -> f64 {
        size.min(self.cap) as f64
    }

    pub(crate) fn eval(&self, a: &Subset) -> f64 {
        self.at(a.len())
    }
}

/// `f(A) = w(A)^a` for `a ∈ (0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConcaveRaw", into = "ConcaveRaw")]
pub struct ConcavePowerModular {
    weights: Vec<f64>,
    exponent: f64,
}

#[derive(Serialize, Deserialize)]
struct ConcaveRaw {
    weights: Vec<f64>,
    exponent: f64,
}

impl TryFrom<ConcaveRaw> for ConcavePowerModular {
    type Error = Error;
    fn try_from(raw: ConcaveRaw) -> Result<Self> {
        ConcavePowerModular::new(raw.weights, raw.exponent)
    }
}

impl From<ConcavePowerModular> for ConcaveRaw {
    fn from(c: ConcavePowerModular) -> Self {
        ConcaveRaw {
            weights: c.weights,
            exponent: c.exponent,
        }
    }
}

impl ConcavePowerModular {
    pub fn new(weights: Vec<f64>, exponent: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::dim("concave power weights must be non-empty"));
        }
        check_weights(&weights, "weights")?;
        if !(exponent > 0.0 && exponent <= 1.0) {
            return Err(Error::invalid(format!(
                "exponent {exponent} outside (0, 1]"
            )));
        }
        Ok(Self { weights, exponent })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub(crate) fn weight(&self, a: &Subset) -> f64 {
        a.iter().map(|j| self.weights[j]).sum()
    }

    pub(crate) fn at(&self, w: f64) -> f64 {
        if w <= 0.0 {
            0.0
        } else {
            w.powf(self.exponent)
        }
    }

    pub(crate) fn eval(&self, a: &Subset) -> f64 {
        self.at(self.weight(a))
    }
}
