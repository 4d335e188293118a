use serde::{Deserialize, Serialize};

use super::{check_weights, rows_of};
use crate::error::{Error, Result};
use crate::set::Subset;

/// Set cover `f(A) = w(∪_{a∈A} γ(a))` over a weighted concept universe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoverRaw", into = "CoverRaw")]
pub struct CoverageMap {
    cover: Vec<Subset>,
    concept_weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CoverRaw {
    cover: Vec<Vec<usize>>,
    concept_weights: Vec<f64>,
}

impl TryFrom<CoverRaw> for CoverageMap {
    type Error = Error;
    fn try_from(raw: CoverRaw) -> Result<Self> {
        CoverageMap::new(raw.cover, raw.concept_weights)
    }
}

impl From<CoverageMap> for CoverRaw {
    fn from(c: CoverageMap) -> Self {
        CoverRaw {
            cover: c.cover.iter().map(Subset::to_indices).collect(),
            concept_weights: c.concept_weights,
        }
    }
}

impl CoverageMap {
    /// `cover[a]` lists the concepts covered by element `a`.
    pub fn new(cover: Vec<Vec<usize>>, concept_weights: Vec<f64>) -> Result<Self> {
        if cover.is_empty() {
            return Err(Error::dim("coverage map needs at least one element"));
        }
        check_weights(&concept_weights, "concept_weights")?;
        let m = concept_weights.len();
        let cover = cover
            .into_iter()
            .enumerate()
            .map(|(a, concepts)| {
                if let Some(&u) = concepts.iter().find(|&&u| u >= m) {
                    return Err(Error::dim(format!(
                        "element {a} covers concept {u} but only {m} concepts have weights"
                    )));
                }
                Subset::from_indices(m, concepts)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            cover,
            concept_weights,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.cover.len()
    }

    pub fn concepts(&self) -> usize {
        self.concept_weights.len()
    }

    pub fn concept_weights(&self) -> &[f64] {
        &self.concept_weights
    }

    pub fn covered_by(&self, a: usize) -> &Subset {
        &self.cover[a]
    }

    /// `γ(A)`.
    pub fn gamma(&self, a: &Subset) -> Subset {
        let mut acc = Subset::empty(self.concepts());
        for j in a.iter() {
            acc.union_with(&self.cover[j]);
        }
        acc
    }

    pub(crate) fn weight(&self, concepts: &Subset) -> f64 {
        concepts.iter().map(|u| self.concept_weights[u]).sum()
    }

    pub(crate) fn eval(&self, a: &Subset) -> f64 {
        self.weight(&self.gamma(a))
    }
}

/// Probabilistic set cover `f(A) = Σ_i w_i (1 − Π_{a∈A} (1 − p_ia))`.
///
/// `probs` is element-major: `probs[a][i]` is the probability that element
/// `a` covers concept `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProbRaw", into = "ProbRaw")]
pub struct ProbCoverageMatrix {
    n: usize,
    m: usize,
    probs: Vec<f64>,
    concept_weights: Vec<f64>,
    log_space: bool,
}

#[derive(Serialize, Deserialize)]
struct ProbRaw {
    probs: Vec<Vec<f64>>,
    concept_weights: Vec<f64>,
}

impl TryFrom<ProbRaw> for ProbCoverageMatrix {
    type Error = Error;
    fn try_from(raw: ProbRaw) -> Result<Self> {
        ProbCoverageMatrix::new(raw.probs, raw.concept_weights)
    }
}

impl From<ProbCoverageMatrix> for ProbRaw {
    fn from(p: ProbCoverageMatrix) -> Self {
        ProbRaw {
            probs: rows_of(&p.probs, p.m),
            concept_weights: p.concept_weights,
        }
    }
}

const NEAR_ONE: f64 = 1.0 - 1e-12;

impl ProbCoverageMatrix {
    pub fn new(probs: Vec<Vec<f64>>, concept_weights: Vec<f64>) -> Result<Self> {
        let n = probs.len();
        if n == 0 {
            return Err(Error::dim("probability matrix needs at least one element"));
        }
        check_weights(&concept_weights, "concept_weights")?;
        let m = concept_weights.len();
        let mut flat = Vec::with_capacity(n * m);
        for (a, row) in probs.iter().enumerate() {
            if row.len() != m {
                return Err(Error::dim(format!(
                    "probs row {a} has {} entries, expected {m}",
                    row.len()
                )));
            }
            if let Some(i) = row.iter().position(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::invalid(format!(
                    "probs[{a}][{i}] = {} outside [0, 1]",
                    row[i]
                )));
            }
            flat.extend_from_slice(row);
        }
        let log_space = flat.iter().any(|&p| p > NEAR_ONE && p < 1.0);
        Ok(Self {
            n,
            m,
            probs: flat,
            concept_weights,
            log_space,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn concepts(&self) -> usize {
        self.m
    }

    pub fn concept_weights(&self) -> &[f64] {
        &self.concept_weights
    }

    #[inline]
    pub fn prob(&self, a: usize, i: usize) -> f64 {
        self.probs[a * self.m + i]
    }

    /// `P_i(A) = Π_{a∈A} (1 − p_ia)`: the probability that no element of
    /// `A` covers concept `i`.
    pub fn miss(&self, a: &Subset) -> Vec<f64> {
        if self.log_space {
            let mut logs = vec![0.0f64; self.m];
            let mut zero = vec![false; self.m];
            for j in a.iter() {
                for i in 0..self.m {
                    let p = self.prob(j, i);
                    if p >= 1.0 {
                        zero[i] = true;
                    } else {
                        logs[i] += (-p).ln_1p();
                    }
                }
            }
            logs.iter()
                .zip(&zero)
                .map(|(&l, &z)| if z { 0.0 } else { l.exp() })
                .collect()
        } else {
            let mut out = vec![1.0f64; self.m];
            for j in a.iter() {
                for (i, o) in out.iter_mut().enumerate() {
                    *o *= 1.0 - self.prob(j, i);
                }
            }
            out
        }
    }

    pub(crate) fn eval(&self, a: &Subset) -> f64 {
        self.miss(a)
            .iter()
            .zip(&self.concept_weights)
            .map(|(p, w)| w * (1.0 - p))
            .sum()
    }
}
