//! Instance documents.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "ground_set": { "size": 4 },
//!   "function": { "family": "modular", "weights": [1, 2, 3, 4] },
//!   "sets": { "A": [0, 1], "B": [1, 2] },
//!   "task": { "kind": "measure", "measure": "mi", "sets": ["A", "B"] }
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use subinfo::analysis::Property;
use subinfo::functions::FunctionSpec;
use subinfo::optimize::{Direction, Guard, MetricMode, PartitionObjective};
use subinfo::{GroundSet, Measure, Subset};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub schema_version: u32,
    pub ground_set: GroundSet,
    pub function: FunctionSpec,
    #[serde(default)]
    pub sets: BTreeMap<String, Vec<usize>>,
    pub task: Task,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    Measure(MeasureTask),
    Check(CheckTask),
    Select(SelectTask),
    Partition(PartitionTask),
    MetricMin(MetricTask),
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Measure(_) => "measure",
            Task::Check(_) => "check",
            Task::Select(_) => "select",
            Task::Partition(_) => "partition",
            Task::MetricMin(_) => "metric-min",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureTask {
    pub measure: Measure,
    pub sets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
}

fn default_properties() -> Vec<Property> {
    vec![
        Property::Normalized,
        Property::Monotone,
        Property::Submodular,
        Property::SecondOrderSupermodular,
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckTask {
    #[serde(default = "default_properties")]
    pub properties: Vec<Property>,
    #[serde(default)]
    pub curvature: bool,
    /// Named sets for the per-set curvatures; implies `curvature`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curvature_at: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_limit: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriverName {
    Greedy,
    RandomizedGreedy,
    SymmetricMi,
    Smi,
    Cg,
    Csmi,
    Nsmi,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectTask {
    pub driver: DriverName,
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub lazy: bool,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub private: Option<String>,
    /// The `g` of the composite objectives; `f` itself when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diversity: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<Guard>,
}

fn max_direction() -> Direction {
    Direction::Max
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionTask {
    pub objective: PartitionObjective,
    #[serde(default = "max_direction")]
    pub direction: Direction,
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricTask {
    pub anchors: Vec<String>,
    pub mode: MetricMode,
}

/// Parses and validates an instance, reporting the JSON path and position of
/// the first problem.
pub fn parse(text: &str) -> Result<Instance, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let instance: Instance = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path.is_empty() || path == "." {
            CliError::invalid(inner.to_string())
        } else {
            CliError::invalid(format!("{path}: {inner}"))
        }
    })?;
    instance.validate()?;
    Ok(instance)
}

impl Instance {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::invalid(format!(
                "schema_version: unsupported version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        self.ground_set
            .validate()
            .map_err(|e| CliError::invalid(format!("ground_set: {e}")))?;
        let n = self.ground_set.size();
        let check_function = |spec: &FunctionSpec, field: &str| {
            if spec.ground_size() != n {
                return Err(CliError::invalid(format!(
                    "{field}: {} is defined over {} elements but the ground set has {n}",
                    spec.family(),
                    spec.ground_size()
                )));
            }
            Ok(())
        };
        check_function(&self.function, "function")?;
        for (name, indices) in &self.sets {
            if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
                return Err(CliError::invalid(format!(
                    "sets.{name}: index {bad} is outside the ground set of size {n}"
                )));
            }
            if indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::invalid(format!(
                    "sets.{name}: indices must be strictly increasing"
                )));
            }
        }
        let names: Vec<(&str, &String)> = match &self.task {
            Task::Measure(t) => t
                .sets
                .iter()
                .map(|s| ("task.sets", s))
                .chain(t.condition.iter().map(|s| ("task.condition", s)))
                .collect(),
            Task::Check(t) => t
                .curvature_at
                .iter()
                .map(|s| ("task.curvature_at", s))
                .collect(),
            Task::Select(t) => {
                if let Some(g) = &t.diversity {
                    check_function(g, "task.diversity")?;
                }
                t.query
                    .iter()
                    .map(|s| ("task.query", s))
                    .chain(t.private.iter().map(|s| ("task.private", s)))
                    .collect()
            }
            Task::Partition(_) => Vec::new(),
            Task::MetricMin(t) => t.anchors.iter().map(|s| ("task.anchors", s)).collect(),
        };
        for (field, name) in names {
            if !self.sets.contains_key(name) {
                return Err(CliError::invalid(format!("{field}: no set named {name:?}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.ground_set.size()
    }

    /// The named set as a subset of the ground set; names are validated.
    pub fn set(&self, name: &str) -> Subset {
        Subset::from_indices(self.n(), self.sets[name].iter().copied()).expect("validated set")
    }
}
