use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use subinfo::functions::generate::{
    constant_kernel, random_coverage, random_kernel, random_prob_cover,
};
use subinfo::functions::{FunctionSpec, GraphCutParams, SimilarityKernel};
use subinfo::GroundSet;

use crate::error::CliError;
use crate::instance::SCHEMA_VERSION;

#[derive(Clone, Debug, PartialEq)]
pub enum Fixture {
    /// Facility location, or graph cut when `lambda` is set. A constant
    /// off-diagonal ignores the seed.
    Kernel {
        off_diagonal: Option<f64>,
        graph_cut_lambda: Option<f64>,
    },
    Coverage {
        concepts: usize,
        multiplicity: usize,
    },
    ProbCover {
        concepts: usize,
    },
}

/// The `ground_set` and `function` parts of an instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fragment {
    pub schema_version: u32,
    pub ground_set: GroundSet,
    pub function: FunctionSpec,
}

pub fn generate(fixture: &Fixture, n: usize, seed: u64) -> Result<Fragment, CliError> {
    if n == 0 {
        return Err(CliError::invalid("n must be at least 1"));
    }
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let function = match *fixture {
        Fixture::Kernel {
            off_diagonal,
            graph_cut_lambda,
        } => {
            let rows = match off_diagonal {
                Some(v) if !(0.0..=1.0).contains(&v) => {
                    return Err(CliError::invalid(format!(
                        "off-diagonal {v} outside [0, 1]"
                    )))
                }
                Some(v) => constant_kernel(n, v),
                None => random_kernel(n, rng),
            };
            match graph_cut_lambda {
                Some(lambda) => FunctionSpec::GraphCut(GraphCutParams::new(rows, lambda)?),
                None => FunctionSpec::FacilityLocation(SimilarityKernel::with_unit_diagonal(rows)?),
            }
        }
        Fixture::Coverage {
            concepts,
            multiplicity,
        } => {
            if concepts == 0 {
                return Err(CliError::invalid("concepts must be at least 1"));
            }
            FunctionSpec::SetCover(random_coverage(n, concepts, multiplicity, rng)?)
        }
        Fixture::ProbCover { concepts } => {
            if concepts == 0 {
                return Err(CliError::invalid("concepts must be at least 1"));
            }
            FunctionSpec::ProbSetCover(random_prob_cover(n, concepts, rng)?)
        }
    };
    Ok(Fragment {
        schema_version: SCHEMA_VERSION,
        ground_set: GroundSet::new(n)?,
        function,
    })
}
