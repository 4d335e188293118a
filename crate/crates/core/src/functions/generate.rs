//! Seeded random instances for every family.

use rand::seq::index::sample;
use rand::Rng;

use super::{
    ConcavePowerModular, CoverageMap, FunctionSpec, GraphCutParams, ModularWeights,
    ProbCoverageMatrix, SimilarityKernel, TruncationRank,
};
use crate::error::{Error, Result};

/// Symmetric kernel with unit diagonal and off-diagonal entries in `[0, 1)`.
pub fn random_kernel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        rows[i][i] = 1.0;
        for j in 0..i {
            let v: f64 = rng.gen();
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    rows
}

/// Unit diagonal with every off-diagonal entry equal to `off`.
pub fn constant_kernel(n: usize, off: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { off }).collect())
        .collect()
}

/// Every concept is covered by exactly `multiplicity` distinct elements drawn
/// uniformly; concept weights are uniform in `[0.5, 1.5)`.
pub fn random_coverage<R: Rng + ?Sized>(
    n: usize,
    concepts: usize,
    multiplicity: usize,
    rng: &mut R,
) -> Result<CoverageMap> {
    if multiplicity == 0 || multiplicity > n {
        return Err(Error::invalid(format!(
            "concept multiplicity {multiplicity} outside [1, {n}]"
        )));
    }
    let mut cover = vec![Vec::new(); n];
    for concept in 0..concepts {
        for e in sample(rng, n, multiplicity) {
            cover[e].push(concept);
        }
    }
    let weights = (0..concepts).map(|_| rng.gen_range(0.5..1.5)).collect();
    CoverageMap::new(cover, weights)
}

/// Dense `n × concepts` probabilities in `[0, 1)` with weights in `[0.5, 1.5)`.
pub fn random_prob_cover<R: Rng + ?Sized>(
    n: usize,
    concepts: usize,
    rng: &mut R,
) -> Result<ProbCoverageMatrix> {
    let probs = (0..n)
        .map(|_| (0..concepts).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let weights = (0..concepts).map(|_| rng.gen_range(0.5..1.5)).collect();
    ProbCoverageMatrix::new(probs, weights)
}

pub const FAMILIES: [&str; 7] = [
    "modular",
    "set_cover",
    "prob_set_cover",
    "facility_location",
    "graph_cut",
    "truncation",
    "concave_power",
];

/// A random member of the named family over `n` elements.
pub fn random_spec<R: Rng + ?Sized>(family: &str, n: usize, rng: &mut R) -> Result<FunctionSpec> {
    Ok(match family {
        "modular" => FunctionSpec::Modular(ModularWeights::new(
            (0..n).map(|_| rng.gen_range(0.0..2.0)).collect(),
        )?),
        "set_cover" => {
            let concepts = n + 2;
            let mult = rng.gen_range(1..=3.min(n));
            FunctionSpec::SetCover(random_coverage(n, concepts, mult, rng)?)
        }
        "prob_set_cover" => FunctionSpec::ProbSetCover(random_prob_cover(n, 4, rng)?),
        "facility_location" => FunctionSpec::FacilityLocation(
            SimilarityKernel::with_unit_diagonal(random_kernel(n, rng))?,
        ),
        "graph_cut" => {
            let lambda = rng.gen_range(2.0..3.0);
            FunctionSpec::GraphCut(GraphCutParams::new(random_kernel(n, rng), lambda)?)
        }
        "truncation" => FunctionSpec::Truncation(TruncationRank::new(n, rng.gen_range(1..=n))?),
        "concave_power" => {
            let w = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
            FunctionSpec::ConcavePower(ConcavePowerModular::new(w, rng.gen_range(0.2..=1.0))?)
        }
        other => return Err(Error::invalid(format!("unknown family {other}"))),
    })
}

/// Integer-valued members, for checks that must hold exactly.
pub fn random_integer_spec<R: Rng + ?Sized>(
    family: &str,
    n: usize,
    rng: &mut R,
) -> Result<FunctionSpec> {
    Ok(match family {
        "modular" => FunctionSpec::Modular(ModularWeights::new(
            (0..n).map(|_| rng.gen_range(0..5) as f64).collect(),
        )?),
        "set_cover" => {
            let concepts = n + 2;
            let cover = (0..n)
                .map(|_| {
                    let m = rng.gen_range(1..=3);
                    let mut c = sample(rng, concepts, m).into_vec();
                    c.sort_unstable();
                    c
                })
                .collect();
            let w = (0..concepts).map(|_| rng.gen_range(1..4) as f64).collect();
            FunctionSpec::SetCover(CoverageMap::new(cover, w)?)
        }
        "truncation" => FunctionSpec::Truncation(TruncationRank::new(n, rng.gen_range(1..=n))?),
        other => return random_spec(other, n, rng),
    })
}
