use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use subinfo::analysis::{CurvatureReport, PropertyReport};
use subinfo::optimize::{PartitionReport, SelectionReport};
use subinfo::{Measure, Path};

use crate::instance::{Instance, SCHEMA_VERSION};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub task: String,
    /// `sha256:` of the canonical serialization of the parsed instance.
    pub instance_digest: String,
    /// Seed actually used; absent for tasks without randomness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: TaskResult,
    pub oracle_calls: u64,
    pub duration_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TaskResult {
    Measure(MeasureOutcome),
    Check(CheckOutcome),
    Selection(SelectionReport),
    Partition(PartitionReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureOutcome {
    pub measure: Measure,
    pub value: f64,
    pub path: Path,
    /// Both values when the two paths were compared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub generic: f64,
    /// Absent when the family has no closed form for this request.
    pub closed_form: Option<f64>,
    pub abs_diff: Option<f64>,
    pub tolerance: f64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub properties: Vec<PropertyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureReport>,
}

pub fn digest(instance: &Instance) -> String {
    let canonical = serde_json::to_vec(instance).expect("instances serialize");
    format!("sha256:{}", hex::encode(Sha256::digest(&canonical)))
}

impl Report {
    pub fn new(
        instance: &Instance,
        seed: Option<u64>,
        result: TaskResult,
        oracle_calls: u64,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            task: instance.task.name().to_string(),
            instance_digest: digest(instance),
            seed,
            result,
            oracle_calls,
            duration_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }
}
