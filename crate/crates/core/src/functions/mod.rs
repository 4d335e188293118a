//! Concrete submodular families and their closed-form information measures.
//!
//! [`FunctionSpec`] is a closed tagged union over the seven families plus a
//! non-negative mixture of them. Every spec is validated on construction
//! (including deserialization) and is immutable afterwards. User-defined
//! oracles enter through [`SetFunction`] directly and only get the generic
//! measure paths.

mod closed;
mod coverage;
mod facility;
pub mod generate;
mod graph_cut;
mod modular;
mod scalar;

use serde::{Deserialize, Serialize};

pub use closed::{
    closed_form, closed_form_conditional_gain, closed_form_conditional_mi,
    closed_form_conditional_mi_prob_cover, closed_form_metric, closed_form_multiset_mi,
    closed_form_mutual_information,
};
pub use coverage::{CoverageMap, ProbCoverageMatrix};
pub use facility::SimilarityKernel;
pub use graph_cut::GraphCutParams;
pub use modular::ModularWeights;
pub use scalar::{ConcavePowerModular, TruncationRank};

use crate::error::{Error, Result};
use crate::measures::check_ground;
use crate::oracle::{Properties, SetFunction};
use crate::set::Subset;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FunctionSpec {
    Modular(ModularWeights),
    SetCover(CoverageMap),
    ProbSetCover(ProbCoverageMatrix),
    FacilityLocation(SimilarityKernel),
    GraphCut(GraphCutParams),
    Truncation(TruncationRank),
    ConcavePower(ConcavePowerModular),
    Mixture(Mixture),
}

/// One weighted term of a [`Mixture`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub function: FunctionSpec,
}

/// Non-negative weighted sum of family members over one ground set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixtureRaw", into = "MixtureRaw")]
pub struct Mixture {
    n: usize,
    components: Vec<Component>,
}

#[derive(Serialize, Deserialize)]
struct MixtureRaw {
    components: Vec<Component>,
}

impl TryFrom<MixtureRaw> for Mixture {
    type Error = Error;
    fn try_from(raw: MixtureRaw) -> Result<Self> {
        Mixture::new(raw.components)
    }
}

impl From<Mixture> for MixtureRaw {
    fn from(m: Mixture) -> Self {
        MixtureRaw {
            components: m.components,
        }
    }
}

impl Mixture {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::invalid("mixture needs at least one component"))?;
        let n = first.function.ground_size();
        for c in &components {
            if !(c.weight >= 0.0 && c.weight.is_finite()) {
                return Err(Error::invalid(
                    "mixture weights must be finite and non-negative",
                ));
            }
            if c.function.ground_size() != n {
                return Err(Error::dim("mixture components disagree on ground-set size"));
            }
        }
        Ok(Self { n, components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }
}

impl FunctionSpec {
    pub fn family(&self) -> &'static str {
        match self {
            FunctionSpec::Modular(_) => "modular",
            FunctionSpec::SetCover(_) => "set_cover",
            FunctionSpec::ProbSetCover(_) => "prob_set_cover",
            FunctionSpec::FacilityLocation(_) => "facility_location",
            FunctionSpec::GraphCut(_) => "graph_cut",
            FunctionSpec::Truncation(_) => "truncation",
            FunctionSpec::ConcavePower(_) => "concave_power",
            FunctionSpec::Mixture(_) => "mixture",
        }
    }

    pub fn ground_size(&self) -> usize {
        match self {
            FunctionSpec::Modular(m) => m.len(),
            FunctionSpec::SetCover(c) => c.ground_size(),
            FunctionSpec::ProbSetCover(p) => p.ground_size(),
            FunctionSpec::FacilityLocation(k) => k.size(),
            FunctionSpec::GraphCut(g) => g.kernel().size(),
            FunctionSpec::Truncation(t) => t.ground_size(),
            FunctionSpec::ConcavePower(c) => c.len(),
            FunctionSpec::Mixture(m) => m.n,
        }
    }

    /// Claimed structural properties; all shipped families are normalized
    /// polymatroids except the relaxed graph cut.
    pub fn claimed_properties(&self) -> Properties {
        let second_order = match self {
            FunctionSpec::Truncation(t) => t.is_second_order_supermodular(),
            FunctionSpec::Mixture(m) => m.components.iter().all(|c| {
                c.weight == 0.0 || c.function.claimed_properties().second_order_supermodular
            }),
            _ => true,
        };
        let monotone = match self {
            FunctionSpec::GraphCut(g) => g.lambda() >= 2.0,
            FunctionSpec::Mixture(m) => m
                .components
                .iter()
                .all(|c| c.weight == 0.0 || c.function.claimed_properties().monotone),
            _ => true,
        };
        Properties {
            normalized: true,
            monotone,
            submodular: true,
            second_order_supermodular: second_order,
        }
    }

    fn raw_eval(&self, a: &Subset) -> f64 {
        match self {
            FunctionSpec::Modular(m) => m.eval(a),
            FunctionSpec::SetCover(c) => c.eval(a),
            FunctionSpec::ProbSetCover(p) => p.eval(a),
            FunctionSpec::FacilityLocation(k) => k.eval(a),
            FunctionSpec::GraphCut(g) => g.eval(a),
            FunctionSpec::Truncation(t) => t.eval(a),
            FunctionSpec::ConcavePower(c) => c.eval(a),
            FunctionSpec::Mixture(m) => m
                .components
                .iter()
                .map(|c| c.weight * c.function.raw_eval(a))
                .sum(),
        }
    }
}

/// `f(A)` for the family formula, with a ground-set check.
pub fn evaluate(spec: &FunctionSpec, a: &Subset) -> Result<f64> {
    check_ground(spec, [a])?;
    Ok(spec.raw_eval(a))
}

impl SetFunction for FunctionSpec {
    fn ground_size(&self) -> usize {
        FunctionSpec::ground_size(self)
    }

    fn eval(&self, set: &Subset) -> f64 {
        self.raw_eval(set)
    }

    fn properties(&self) -> Properties {
        self.claimed_properties()
    }
}

pub(crate) fn kernel_from_rows(rows: &[Vec<f64>], what: &str) -> Result<(usize, Vec<f64>)> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::dim(format!("{what} must be non-empty")));
    }
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::dim(format!(
                "{what} row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        flat.extend_from_slice(row);
    }
    Ok((n, flat))
}

pub(crate) fn rows_of(flat: &[f64], cols: usize) -> Vec<Vec<f64>> {
    flat.chunks(cols).map(<[f64]>::to_vec).collect()
}

pub(crate) fn check_weights(w: &[f64], what: &str) -> Result<()> {
    if let Some(i) = w.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::invalid(format!(
            "{what}[{i}] = {} must be finite and non-negative",
            w[i]
        )));
    }
    Ok(())
}
