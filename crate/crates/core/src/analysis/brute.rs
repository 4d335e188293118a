use rayon::prelude::*;

use super::ValueTable;
use crate::error::{Error, Result};
use crate::measures::check_ground;
use crate::oracle::SetFunction;
use crate::set::Subset;

pub const BRUTE_FORCE_LIMIT: usize = 20;

fn check_size(n: usize) -> Result<()> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "exhaustive search over 2^{n} subsets; limit is n <= {BRUTE_FORCE_LIMIT}"
        )));
    }
    Ok(())
}

/// Prefers the larger value, then the smaller mask.
fn better_max(a: (u64, f64), b: (u64, f64)) -> (u64, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

fn better_min(a: (u64, f64), b: (u64, f64)) -> (u64, f64) {
    if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

/// Exact `argmax_{|A| ≤ k} objective(A)`, smallest mask on ties.
pub fn brute_force_max<F: SetFunction + ?Sized>(objective: &F, k: usize) -> Result<(Subset, f64)> {
    let n = objective.ground_size();
    check_size(n)?;
    let (mask, value) = (0..1u64 << n)
        .into_par_iter()
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| (m, objective.eval(&Subset::from_bits(n, m))))
        .reduce(|| (u64::MAX, f64::NEG_INFINITY), better_max);
    Ok((Subset::from_bits(n, mask), value))
}

/// Exact `argmin_A Σ_i D_f(A, S_i)`, smallest mask on ties.
pub fn brute_force_min_metric_sum<F: SetFunction + ?Sized>(
    f: &F,
    anchors: &[Subset],
) -> Result<(Subset, f64)> {
    if anchors.is_empty() {
        return Err(Error::invalid(
            "metric-sum minimization needs at least one anchor",
        ));
    }
    let n = f.ground_size();
    check_size(n)?;
    check_ground(f, anchors)?;
    let table = ValueTable::build(f, BRUTE_FORCE_LIMIT)?;
    let masks: Vec<u64> = anchors.iter().map(|s| s.bits().expect("n <= 20")).collect();
    let (mask, value) = (0..1u64 << n)
        .into_par_iter()
        .map(|a| (a, masks.iter().map(|&s| table.metric(a, s)).sum::<f64>()))
        .reduce(|| (u64::MAX, f64::INFINITY), better_min);
    Ok((Subset::from_bits(n, mask), value))
}
