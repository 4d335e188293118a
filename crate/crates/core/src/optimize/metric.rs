use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Driver, Guarantee, GuaranteeKind, SelectionReport};
use crate::analysis::{brute_force_min_metric_sum, curvature, ValueTable, BRUTE_FORCE_LIMIT};
use crate::error::{Error, Result};
use crate::measures::check_ground;
use crate::oracle::{Counting, SetFunction};
use crate::set::Subset;
use crate::TOLERANCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricMode {
    /// Exhaustive minimum of `Σ D_f(A, S_i)`.
    Exact,
    /// Exhaustive minimum of the additive Hamming surrogate `Σ D^SHA(A, S_i)`.
    Surrogate,
}

/// `argmin_A Σ_i D_f(A, S_i)`.
///
/// `objective_value` is always the true `D_f` sum at the returned set. In
/// surrogate mode the guarantee factor is `1 − κ_f`, flagged vacuous when
/// `κ_f = 1`.
pub fn minimize_metric_sum<F: SetFunction + ?Sized>(
    f: &F,
    anchors: &[Subset],
    mode: MetricMode,
) -> Result<SelectionReport> {
    if anchors.is_empty() {
        return Err(Error::invalid(
            "metric-sum minimization needs at least one anchor",
        ));
    }
    check_ground(f, anchors)?;
    let counted = Counting::new(f);
    let n = f.ground_size();
    let (chosen, guarantee) = match mode {
        MetricMode::Exact => {
            let (a, _) = brute_force_min_metric_sum(&counted, anchors)?;
            (a, Guarantee::plain(GuaranteeKind::Exact, 1.0))
        }
        MetricMode::Surrogate => {
            let table = ValueTable::build(&counted, BRUTE_FORCE_LIMIT)?;
            let masks: Vec<u64> = anchors.iter().map(|s| s.bits().expect("n <= 20")).collect();
            let (best, _) = (0..1u64 << n)
                .into_par_iter()
                .map(|a| {
                    let v: f64 = masks
                        .iter()
                        .map(|&s| table.get(a & !s) + table.get(s & !a))
                        .sum();
                    (a, v)
                })
                .reduce(
                    || (u64::MAX, f64::INFINITY),
                    |x, y| {
                        if y.1 < x.1 || (y.1 == x.1 && y.0 < x.0) {
                            y
                        } else {
                            x
                        }
                    },
                );
            let guarantee = match curvature(&table) {
                Ok(c) => Guarantee {
                    kind: GuaranteeKind::OneMinusCurvature,
                    factor: 1.0 - c.kappa_global,
                    slack: None,
                    curvature: Some(c.kappa_global),
                    scale: None,
                    vacuous: c.kappa_global >= 1.0 - TOLERANCE,
                },
                Err(Error::Degenerate(_)) => Guarantee {
                    kind: GuaranteeKind::OneMinusCurvature,
                    factor: 0.0,
                    slack: None,
                    curvature: None,
                    scale: None,
                    vacuous: true,
                },
                Err(e) => return Err(e),
            };
            (Subset::from_bits(n, best), guarantee)
        }
    };
    let value = {
        let table = ValueTable::build(f, BRUTE_FORCE_LIMIT)?;
        let a = chosen.bits().expect("n <= 20");
        anchors
            .iter()
            .map(|s| table.metric(a, s.bits().expect("n <= 20")))
            .sum()
    };
    Ok(SelectionReport {
        driver: Driver::MetricMin,
        chosen,
        objective_value: value,
        gain_trace: Vec::new(),
        guarantee: Some(guarantee),
        oracle_calls: counted.calls(),
        lambda: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{FunctionSpec, ModularWeights, TruncationRank};

    #[test]
    fn modular_single_anchor_both_modes() {
        let f = FunctionSpec::Modular(ModularWeights::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap());
        let s = Subset::from_indices(4, [0, 2]).unwrap();
        for mode in [MetricMode::Exact, MetricMode::Surrogate] {
            let r = minimize_metric_sum(&f, std::slice::from_ref(&s), mode).unwrap();
            assert_eq!(r.chosen, s);
            assert_eq!(r.objective_value, 0.0);
        }
    }

    #[test]
    fn truncation_guarantee_is_vacuous() {
        let f = FunctionSpec::Truncation(TruncationRank::new(5, 2).unwrap());
        let s = Subset::from_indices(5, [0, 1]).unwrap();
        let r = minimize_metric_sum(&f, &[s], MetricMode::Surrogate).unwrap();
        let g = r.guarantee.unwrap();
        assert!(g.vacuous);
        assert_eq!(g.curvature, Some(1.0));
    }

    #[test]
    fn empty_anchors_rejected() {
        let f = FunctionSpec::Truncation(TruncationRank::new(3, 2).unwrap());
        assert!(minimize_metric_sum(&f, &[], MetricMode::Exact).is_err());
    }
}
