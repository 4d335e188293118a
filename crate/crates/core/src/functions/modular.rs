use serde::{Deserialize, Serialize};

use super::check_weights;
use crate::error::{Error, Result};
use crate::set::Subset;

/// `f(A) = Σ_{a∈A} w_a` with non-negative weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModularRaw", into = "ModularRaw")]
pub struct ModularWeights {
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ModularRaw {
    weights: Vec<f64>,
}

impl TryFrom<ModularRaw> for ModularWeights {
    type Error = Error;
    fn try_from(raw: ModularRaw) -> Result<Self> {
        ModularWeights::new(raw.weights)
    }
}

impl From<ModularWeights> for ModularRaw {
    fn from(m: ModularWeights) -> Self {
        ModularRaw { weights: m.weights }
    }
}

impl ModularWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::dim("modular weights must be non-empty"));
        }
        check_weights(&weights, "weights")?;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub(crate) fn eval(&self, a: &Subset) -> f64 {
        a.iter().map(|j| self.weights[j]).sum()
    }
}
