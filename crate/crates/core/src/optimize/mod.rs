//! Greedy maximizers and the summarization, partitioning and metric-sum
//! drivers built on them.
//!
//! Selection is deterministic: gains may be evaluated in parallel but every
//! decision is an ordered reduction (largest gain, then smallest index), and
//! randomness comes from one seeded generator consumed in a fixed order.

mod drivers;
mod greedy;
mod metric;
mod partition;

use serde::{Deserialize, Serialize};

pub use drivers::{
    cg_max, csmi_max, nsmi_max, smi_max, symmetric_mi_select, Objective, SymmetricMi,
};
pub use greedy::{greedy_max, randomized_greedy_max, GAIN_THRESHOLD};
pub use metric::{minimize_metric_sum, MetricMode};
pub use partition::{
    partition_multiset_mi_max, partition_multiset_mi_max_spec, partition_total_correlation,
    Direction, PartitionObjective, PartitionReport,
};

use crate::analysis::{verify_properties, DEFAULT_N_LIMIT};
use crate::error::{Error, Result};
use crate::oracle::{Properties, SetFunction};
use crate::set::Subset;

/// How an optimizer treats the structural properties it depends on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    /// Accept the oracle's claimed flags.
    TrustFlags,
    /// Check exhaustively when `n ≤ 16`, otherwise fall back to the flags.
    #[default]
    VerifyAtDeskScale,
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub budget: usize,
    pub seed: u64,
    pub lazy: bool,
    pub guard: Guard,
}

impl OptimizerConfig {
    pub fn new(budget: usize) -> Self {
        Self {
            budget,
            seed: 0,
            lazy: true,
            guard: Guard::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_lazy(mut self, lazy: bool) -> Self {
        self.lazy = lazy;
        self
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guard = guard;
        self
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if self.budget == 0 || self.budget > n {
            return Err(Error::invalid(format!(
                "budget {} outside [1, {n}]",
                self.budget
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Driver {
    Greedy,
    RandomizedGreedy,
    SymmetricMi,
    Smi,
    Cg,
    Csmi,
    Nsmi,
    MetricMin,
}

/// One greedy step; `element` is `None` when a padding dummy was drawn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainStep {
    pub element: Option<usize>,
    pub gain: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuaranteeKind {
    /// `1 − 1/e` for monotone submodular maximization.
    OneMinusInvE,
    /// `1/e` in expectation for randomized greedy.
    InvE,
    /// `(1 − 1/e)(OPT − k·κ)` for symmetric MI.
    OneMinusInvEWithSlack,
    /// `1 − κ_f` for metric-sum minimization via the additive surrogate.
    OneMinusCurvature,
    Exact,
}

/// Approximation statement attached to a selection; never checked at runtime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guarantee {
    pub kind: GuaranteeKind,
    pub factor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<f64>,
    /// Factor applied to `f` before optimizing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    pub vacuous: bool,
}

impl Guarantee {
    pub(crate) fn plain(kind: GuaranteeKind, factor: f64) -> Self {
        Self {
            kind,
            factor,
            slack: None,
            curvature: None,
            scale: None,
            vacuous: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub driver: Driver,
    pub chosen: Subset,
    pub objective_value: f64,
    pub gain_trace: Vec<GainStep>,
    pub guarantee: Option<Guarantee>,
    /// Objective evaluations performed by the optimizer itself.
    pub oracle_calls: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

pub(crate) const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / std::f64::consts::E;
pub(crate) const INV_E: f64 = 1.0 / std::f64::consts::E;

fn missing(required: Properties, claimed: Properties) -> Vec<&'static str> {
    let mut out = Vec::new();
    if required.normalized && !claimed.normalized {
        out.push("normalized");
    }
    if required.monotone && !claimed.monotone {
        out.push("monotone");
    }
    if required.submodular && !claimed.submodular {
        out.push("submodular");
    }
    if required.second_order_supermodular && !claimed.second_order_supermodular {
        out.push("second-order supermodular");
    }
    out
}

/// Enforces `required` on `f` according to `guard`.
pub(crate) fn enforce<F: SetFunction + ?Sized>(
    f: &F,
    required: Properties,
    guard: Guard,
    role: &str,
) -> Result<()> {
    let trust = |f: &F| {
        let gaps = missing(required, f.properties());
        if gaps.is_empty() {
            Ok(())
        } else {
            Err(Error::Structural {
                reason: format!("{role} does not claim: {}", gaps.join(", ")),
                report: None,
            })
        }
    };
    match guard {
        Guard::Unchecked => Ok(()),
        Guard::TrustFlags => trust(f),
        Guard::VerifyAtDeskScale if f.ground_size() > DEFAULT_N_LIMIT => trust(f),
        Guard::VerifyAtDeskScale => match verify_properties(f, required, DEFAULT_N_LIMIT)? {
            None => Ok(()),
            Some(report) => Err(Error::Structural {
                reason: format!("{role} is not {}", report.property.name()),
                report: Some(Box::new(report)),
            }),
        },
    }
}

pub(crate) fn check_subset(n: usize, s: &Subset) -> Result<()> {
    if s.ground_size() != n {
        return Err(Error::GroundSetMismatch {
            expected: n,
            found: s.ground_size(),
        });
    }
    Ok(())
}
