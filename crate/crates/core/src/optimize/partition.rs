use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::greedy::GAIN_THRESHOLD;
use crate::error::{Error, Result};
use crate::functions::{closed_form_multiset_mi, FunctionSpec};
use crate::measures::{multiset_mutual_information, total_correlation, MAX_MULTISET_ARITY};
use crate::oracle::{Counting, SetFunction};
use crate::set::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionObjective {
    TotalCorr,
    MultiMi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub blocks: Vec<Subset>,
    pub objective: f64,
    pub objective_kind: PartitionObjective,
    pub direction: Direction,
    /// Evaluations of `f` itself; closed-form objective values are not counted.
    pub oracle_calls: u64,
}

fn validate(n: usize, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid(format!("need at least 2 parts, got {k}")));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "cannot split {n} elements into {k} non-empty parts"
        )));
    }
    Ok(())
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Index of the best block under `better`, first index on ties.
fn pick(
    candidates: impl Iterator<Item = (usize, f64)>,
    better: impl Fn(f64, f64) -> bool,
) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in candidates {
        match best {
            Some((_, b)) if !better(v, b) => {}
            _ => best = Some((i, v)),
        }
    }
    best.expect("at least one block").0
}

/// Greedy partition for total correlation.
///
/// `Max` is greedy welfare: elements in seeded random order, each to the
/// block with the largest `f(j | A_i)`; when the remaining elements are just
/// enough to fill the empty blocks, only empty blocks are eligible. `Min`
/// seeds blocks farthest-first (each new seed maximizes its smallest gain
/// against the existing blocks) and sends every other element to the block
/// with the smallest gain. Both are heuristics with non-empty blocks.
pub fn partition_total_correlation<F: SetFunction + ?Sized>(
    f: &F,
    k_parts: usize,
    direction: Direction,
    seed: u64,
) -> Result<PartitionReport> {
    let n = f.ground_size();
    validate(n, k_parts)?;
    let f = &Counting::new(f);
    let order = permutation(n, seed);
    let mut blocks = vec![Subset::empty(n); k_parts];
    let mut values = vec![0.0f64; k_parts];
    let gain = |blocks: &[Subset], values: &[f64], i: usize, j: usize| {
        f.eval(&blocks[i].with(j)) - values[i]
    };
    match direction {
        Direction::Max => {
            for (pos, &j) in order.iter().enumerate() {
                let empty = blocks.iter().filter(|b| b.is_empty()).count();
                let forced = n - pos == empty;
                let i = pick(
                    (0..k_parts)
                        .filter(|&i| !forced || blocks[i].is_empty())
                        .map(|i| (i, gain(&blocks, &values, i, j))),
                    |v, b| v > b,
                );
                blocks[i].insert(j);
                values[i] = f.eval(&blocks[i]);
            }
        }
        Direction::Min => {
            let mut rest: Vec<usize> = order.clone();
            let first = rest.remove(0);
            blocks[0].insert(first);
            values[0] = f.eval(&blocks[0]);
            for b in 1..k_parts {
                let spread = |j: usize| {
                    (0..b)
                        .map(|i| gain(&blocks, &values, i, j))
                        .fold(f64::INFINITY, f64::min)
                };
                let pos = pick(rest.iter().map(|&j| spread(j)).enumerate(), |v, b| v > b);
                let j = rest.remove(pos);
                blocks[b].insert(j);
                values[b] = f.eval(&blocks[b]);
            }
            for j in rest {
                let i = pick(
                    (0..k_parts).map(|i| (i, gain(&blocks, &values, i, j))),
                    |v, b| v < b,
                );
                blocks[i].insert(j);
                values[i] = f.eval(&blocks[i]);
            }
        }
    }
    let objective = total_correlation(f, &blocks)?;
    Ok(PartitionReport {
        blocks,
        objective,
        objective_kind: PartitionObjective::TotalCorr,
        direction,
        oracle_calls: f.calls(),
    })
}

fn multiset_search<F: SetFunction + ?Sized>(
    f: &F,
    k_parts: usize,
    seed: u64,
    objective: &dyn Fn(&[Subset]) -> Result<f64>,
) -> Result<PartitionReport> {
    let n = f.ground_size();
    validate(n, k_parts)?;
    let order = permutation(n, seed);
    let mut blocks = vec![Subset::empty(n); k_parts];
    let mut owner = vec![usize::MAX; n];
    for (i, &j) in order.iter().take(k_parts).enumerate() {
        blocks[i].insert(j);
        owner[j] = i;
    }
    let mut current = objective(&blocks)?;
    for &j in order.iter().skip(k_parts) {
        // Ties on the objective go to the block where j adds the most on its own.
        let mut best: Option<(usize, f64, f64)> = None;
        for i in 0..k_parts {
            blocks[i].insert(j);
            let v = objective(&blocks)?;
            blocks[i].remove(j);
            let own = f.gain(j, &blocks[i]);
            let better = match best {
                None => true,
                Some((_, bv, bo)) => {
                    v > bv + GAIN_THRESHOLD || (v >= bv - GAIN_THRESHOLD && own > bo)
                }
            };
            if better {
                best = Some((i, v, own));
            }
        }
        let (i, v, _) = best.expect("k_parts >= 2");
        blocks[i].insert(j);
        owner[j] = i;
        current = v;
    }

    let mut moves = 0;
    'search: while moves < 10 * n {
        for e in 0..n {
            let from = owner[e];
            if blocks[from].len() == 1 {
                continue;
            }
            for to in (0..k_parts).filter(|&t| t != from) {
                blocks[from].remove(e);
                blocks[to].insert(e);
                let v = objective(&blocks)?;
                if v > current + GAIN_THRESHOLD {
                    owner[e] = to;
                    current = v;
                    moves += 1;
                    continue 'search;
                }
                blocks[to].remove(e);
                blocks[from].insert(e);
            }
        }
        for e in 0..n {
            for e2 in e + 1..n {
                let (a, b) = (owner[e], owner[e2]);
                if a == b {
                    continue;
                }
                blocks[a].remove(e);
                blocks[b].remove(e2);
                blocks[a].insert(e2);
                blocks[b].insert(e);
                let v = objective(&blocks)?;
                if v > current + GAIN_THRESHOLD {
                    owner[e] = b;
                    owner[e2] = a;
                    current = v;
                    moves += 1;
                    continue 'search;
                }
                blocks[a].remove(e2);
                blocks[b].remove(e);
                blocks[a].insert(e);
                blocks[b].insert(e2);
            }
        }
        break;
    }
    Ok(PartitionReport {
        blocks,
        objective: current,
        objective_kind: PartitionObjective::MultiMi,
        direction: Direction::Max,
        oracle_calls: 0,
    })
}

/// Seeded greedy assignment plus move/swap local search maximizing the
/// multi-set MI of the blocks through the generic path.
pub fn partition_multiset_mi_max<F: SetFunction + ?Sized>(
    f: &F,
    k_parts: usize,
    seed: u64,
) -> Result<PartitionReport> {
    if k_parts > MAX_MULTISET_ARITY {
        return Err(Error::ResourceLimit(format!(
            "generic multi-set MI over {k_parts} blocks exceeds {MAX_MULTISET_ARITY}"
        )));
    }
    let counted = Counting::new(f);
    let mut report = multiset_search(&counted, k_parts, seed, &|b| {
        multiset_mutual_information(&counted, b)
    })?;
    report.oracle_calls = counted.calls();
    Ok(report)
}

/// As [`partition_multiset_mi_max`], using the family closed form when one
/// exists.
pub fn partition_multiset_mi_max_spec(
    spec: &FunctionSpec,
    k_parts: usize,
    seed: u64,
) -> Result<PartitionReport> {
    let n = spec.ground_size();
    let probe = vec![Subset::empty(n); k_parts.max(1)];
    match closed_form_multiset_mi(spec, &probe) {
        Ok(_) => {
            let counted = Counting::new(spec);
            let mut report = multiset_search(&counted, k_parts, seed, &|b| {
                closed_form_multiset_mi(spec, b)
            })?;
            report.oracle_calls = counted.calls();
            Ok(report)
        }
        Err(Error::NoClosedForm { .. }) => partition_multiset_mi_max(spec, k_parts, seed),
        Err(e) => Err(e),
    }
}
