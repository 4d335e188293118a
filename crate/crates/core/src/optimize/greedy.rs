use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    enforce, Driver, GainStep, Guarantee, GuaranteeKind, OptimizerConfig, SelectionReport, INV_E,
    ONE_MINUS_INV_E,
};
use crate::error::Result;
use crate::oracle::{Counting, Properties, SetFunction};
use crate::set::Subset;

/// Gains at or below this are treated as zero.
pub const GAIN_THRESHOLD: f64 = 1e-12;

/// Max gain first, then the smaller index.
fn beats(a: (f64, usize), b: (f64, usize)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.1 < b.1,
    }
}

struct Entry {
    bound: f64,
    idx: usize,
    stamp: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn gains<F: SetFunction + ?Sized>(h: &F, current: &Subset, value: f64) -> Vec<(f64, usize)> {
    let n = h.ground_size();
    (0..n)
        .into_par_iter()
        .filter(|&j| !current.contains(j))
        .map(|j| (h.eval(&current.with(j)) - value, j))
        .collect()
}

pub(crate) struct Run {
    pub chosen: Subset,
    pub value: f64,
    pub trace: Vec<GainStep>,
}

pub(crate) fn eager<F: SetFunction + ?Sized>(h: &F, k: usize) -> Run {
    let n = h.ground_size();
    let mut current = Subset::empty(n);
    let mut value = h.eval(&current);
    let mut trace = Vec::new();
    while trace.len() < k {
        let best = gains(h, &current, value)
            .into_iter()
            .reduce(|a, b| if beats(b, a) { b } else { a });
        let Some((gain, j)) = best else { break };
        if gain <= GAIN_THRESHOLD {
            break;
        }
        current.insert(j);
        value = h.eval(&current);
        trace.push(GainStep {
            element: Some(j),
            gain,
        });
    }
    Run {
        chosen: current,
        value,
        trace,
    }
}

/// Stale upper bounds in a max-heap; an entry refreshed in the current round
/// that reaches the top is the exact greedy choice.
pub(crate) fn lazy<F: SetFunction + ?Sized>(h: &F, k: usize) -> Run {
    let n = h.ground_size();
    let mut current = Subset::empty(n);
    let mut value = h.eval(&current);
    let mut trace = Vec::new();
    let mut heap: BinaryHeap<Entry> = gains(h, &current, value)
        .into_iter()
        .map(|(bound, idx)| Entry {
            bound,
            idx,
            stamp: 0,
        })
        .collect();
    let mut round = 0;
    while trace.len() < k {
        let Some(top) = heap.pop() else { break };
        if top.stamp == round {
            if top.bound <= GAIN_THRESHOLD {
                break;
            }
            current.insert(top.idx);
            value = h.eval(&current);
            trace.push(GainStep {
                element: Some(top.idx),
                gain: top.bound,
            });
            round += 1;
        } else {
            let fresh = h.eval(&current.with(top.idx)) - value;
            heap.push(Entry {
                bound: fresh,
                idx: top.idx,
                stamp: round,
            });
        }
    }
    Run {
        chosen: current,
        value,
        trace,
    }
}

/// Standard greedy for monotone submodular maximization under `|A| ≤ k`.
pub fn greedy_max<F: SetFunction + ?Sized>(
    objective: &F,
    cfg: &OptimizerConfig,
) -> Result<SelectionReport> {
    cfg.validate(objective.ground_size())?;
    enforce(objective, Properties::POLYMATROID, cfg.guard, "objective")?;
    Ok(run_greedy(objective, cfg, Driver::Greedy, None))
}

pub(crate) fn run_greedy<F: SetFunction + ?Sized>(
    objective: &F,
    cfg: &OptimizerConfig,
    driver: Driver,
    lambda: Option<f64>,
) -> SelectionReport {
    let h = Counting::new(objective);
    let run = if cfg.lazy {
        lazy(&h, cfg.budget)
    } else {
        eager(&h, cfg.budget)
    };
    SelectionReport {
        driver,
        chosen: run.chosen,
        objective_value: run.value,
        gain_trace: run.trace,
        guarantee: Some(Guarantee::plain(
            GuaranteeKind::OneMinusInvE,
            ONE_MINUS_INV_E,
        )),
        oracle_calls: h.calls(),
        lambda,
    }
}

/// Randomized greedy for possibly non-monotone submodular objectives.
///
/// Each of the `k` steps draws uniformly from the `k` candidates with the
/// largest positive gains, padded with no-op dummies up to `k`.
pub fn randomized_greedy_max<F: SetFunction + ?Sized>(
    objective: &F,
    cfg: &OptimizerConfig,
) -> Result<SelectionReport> {
    cfg.validate(objective.ground_size())?;
    let required = Properties {
        submodular: true,
        ..Properties::NONE
    };
    enforce(objective, required, cfg.guard, "objective")?;
    Ok(run_randomized(objective, cfg, Driver::RandomizedGreedy))
}

pub(crate) fn run_randomized<F: SetFunction + ?Sized>(
    objective: &F,
    cfg: &OptimizerConfig,
    driver: Driver,
) -> SelectionReport {
    let h = Counting::new(objective);
    let k = cfg.budget;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = Subset::empty(h.ground_size());
    let mut value = h.eval(&current);
    let mut trace = Vec::with_capacity(k);
    for _ in 0..k {
        let mut pool: Vec<(f64, usize)> = gains(&h, &current, value)
            .into_iter()
            .filter(|(g, _)| *g > GAIN_THRESHOLD)
            .collect();
        pool.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        pool.truncate(k);
        let pick = rng.gen_range(0..k);
        match pool.get(pick) {
            Some(&(gain, j)) => {
                current.insert(j);
                value = h.eval(&current);
                trace.push(GainStep {
                    element: Some(j),
                    gain,
                });
            }
            None => trace.push(GainStep {
                element: None,
                gain: 0.0,
            }),
        }
    }
    SelectionReport {
        driver,
        chosen: current,
        objective_value: value,
        gain_trace: trace,
        guarantee: Some(Guarantee::plain(GuaranteeKind::InvE, INV_E)),
        oracle_calls: h.calls(),
        lambda: None,
    }
}
