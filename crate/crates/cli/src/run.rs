use std::io::Write;
use std::path::PathBuf;

use subinfo::analysis::{
    check_normalized, curvature_report, monotone_on, pseudo_metric_on, second_order_on,
    submodular_on, Property, ValueTable, DEFAULT_N_LIMIT, PSEUDO_METRIC_N_LIMIT,
};
use subinfo::functions::{closed_form, FunctionSpec};
use subinfo::measures::{evaluate, MeasureRequest};
use subinfo::optimize::{
    cg_max, csmi_max, greedy_max, minimize_metric_sum, nsmi_max, partition_multiset_mi_max_spec,
    partition_total_correlation, randomized_greedy_max, smi_max, symmetric_mi_select, Direction,
    Guard, OptimizerConfig, PartitionObjective, SelectionReport,
};
use subinfo::oracle::Counting;
use subinfo::{Error, MeasureResult, Subset};

use crate::error::{CliError, EXIT_DISAGREEMENT, EXIT_OK};
use crate::instance::{CheckTask, DriverName, Instance, MeasureTask, SelectTask, Task};
use crate::report::{CheckOutcome, CrossCheck, MeasureOutcome, Report, TaskResult};

/// Largest allowed gap between the closed-form and generic values.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PathMode {
    /// Closed form when the family has one, generic otherwise.
    #[default]
    Auto,
    ClosedForm,
    Generic,
    Both,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub path_mode: PathMode,
    pub seed_override: Option<u64>,
    pub guard: Option<Guard>,
    /// Where to write the gain trace of a selection as CSV.
    pub trace_csv: Option<PathBuf>,
}

pub struct Outcome {
    pub report: Report,
    pub exit_code: u8,
}

pub fn run(instance: &Instance, opts: &RunOptions) -> Result<Outcome, CliError> {
    let mut exit_code = EXIT_OK;
    let (seed, result, calls) = match &instance.task {
        Task::Measure(t) => {
            let (outcome, calls) = measure(instance, t, opts.path_mode)?;
            if outcome.cross_check.as_ref().is_some_and(|c| !c.agree) {
                exit_code = EXIT_DISAGREEMENT;
            }
            (None, TaskResult::Measure(outcome), calls)
        }
        Task::Check(t) => {
            let (outcome, calls) = check(instance, t)?;
            (None, TaskResult::Check(outcome), calls)
        }
        Task::Select(t) => {
            let seed = opts.seed_override.unwrap_or(t.seed);
            let report = select(instance, t, seed, opts.guard)?;
            if let Some(path) = &opts.trace_csv {
                write_trace(path, &report)?;
            }
            let calls = report.oracle_calls;
            (Some(seed), TaskResult::Selection(report), calls)
        }
        Task::Partition(t) => {
            let seed = opts.seed_override.unwrap_or(t.seed);
            let f = &instance.function;
            let report = match (t.objective, t.direction) {
                (PartitionObjective::TotalCorr, d) => partition_total_correlation(f, t.k, d, seed)?,
                (PartitionObjective::MultiMi, Direction::Max) => {
                    partition_multiset_mi_max_spec(f, t.k, seed)?
                }
                (PartitionObjective::MultiMi, Direction::Min) => {
                    return Err(Error::Rejected(
                        "minimizing multi-set MI over partitions is not supported; \
                         use total_corr with direction min for clustering"
                            .into(),
                    )
                    .into())
                }
            };
            let calls = report.oracle_calls;
            (Some(seed), TaskResult::Partition(report), calls)
        }
        Task::MetricMin(t) => {
            let anchors: Vec<Subset> = t.anchors.iter().map(|a| instance.set(a)).collect();
            let report = minimize_metric_sum(&instance.function, &anchors, t.mode)?;
            let calls = report.oracle_calls;
            (None, TaskResult::Selection(report), calls)
        }
    };
    Ok(Outcome {
        report: Report::new(instance, seed, result, calls),
        exit_code,
    })
}

fn measure(
    inst: &Instance,
    t: &MeasureTask,
    mode: PathMode,
) -> Result<(MeasureOutcome, u64), CliError> {
    let sets = t.sets.iter().map(|s| inst.set(s)).collect();
    let mut req = MeasureRequest::new(t.measure, sets);
    if let Some(c) = &t.condition {
        req = req.conditioned_on(inst.set(c));
    }
    req.validate()?;
    let f = &inst.function;
    let closed = || match closed_form(f, &req) {
        Ok(r) => Ok(Some(r)),
        Err(Error::NoClosedForm { .. } | Error::Precondition { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let plain = |r: MeasureResult| MeasureOutcome {
        measure: r.measure,
        value: r.value,
        path: r.path,
        cross_check: None,
    };
    Ok(match mode {
        PathMode::Auto => match closed()? {
            Some(r) => (plain(r), 0),
            None => {
                let r = evaluate(f, &req)?;
                let calls = r.oracle_calls;
                (plain(r), calls)
            }
        },
        PathMode::ClosedForm => (plain(closed_form(f, &req)?), 0),
        PathMode::Generic => {
            let r = evaluate(f, &req)?;
            let calls = r.oracle_calls;
            (plain(r), calls)
        }
        PathMode::Both => {
            let generic = evaluate(f, &req)?;
            let calls = generic.oracle_calls;
            let closed = closed()?.map(|r| r.value);
            let diff = closed.map(|c| (c - generic.value).abs());
            let agree = diff.is_none_or(|d| d <= CROSS_CHECK_TOLERANCE);
            let mut out = plain(generic.clone());
            out.cross_check = Some(CrossCheck {
                generic: generic.value,
                closed_form: closed,
                abs_diff: diff,
                tolerance: CROSS_CHECK_TOLERANCE,
                agree,
            });
            (out, calls)
        }
    })
}

fn check(inst: &Instance, t: &CheckTask) -> Result<(CheckOutcome, u64), CliError> {
    let counted = Counting::new(&inst.function);
    let n_limit = t.n_limit.unwrap_or(DEFAULT_N_LIMIT);
    let exhaustive = t.properties.iter().any(|p| *p != Property::Normalized);
    let table = if exhaustive {
        Some(ValueTable::build(&counted, n_limit)?)
    } else {
        None
    };
    let mut properties = Vec::new();
    for p in &t.properties {
        let report = match (p, &table) {
            (Property::Normalized, _) => check_normalized(&counted),
            (Property::Monotone, Some(t)) => monotone_on(t),
            (Property::Submodular, Some(t)) => submodular_on(t),
            (Property::SecondOrderSupermodular, Some(t)) => second_order_on(t),
            (Property::PseudoMetricAxioms, Some(t)) => {
                if inst.n() > PSEUDO_METRIC_N_LIMIT {
                    return Err(Error::ResourceLimit(format!(
                        "pseudo-metric axioms are checked only for n <= {PSEUDO_METRIC_N_LIMIT}"
                    ))
                    .into());
                }
                pseudo_metric_on(t)
            }
            (_, None) => unreachable!("table is built for exhaustive checks"),
        };
        properties.push(report);
    }
    let curvature = if t.curvature || !t.curvature_at.is_empty() {
        let sets: Vec<Subset> = t.curvature_at.iter().map(|s| inst.set(s)).collect();
        let report = match &table {
            Some(table) => curvature_report(table, &sets),
            None => curvature_report(&counted, &sets),
        };
        match report {
            Ok(r) => Some(r),
            Err(Error::Degenerate(_)) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    Ok((
        CheckOutcome {
            properties,
            curvature,
        },
        counted.calls(),
    ))
}

fn select(
    inst: &Instance,
    t: &SelectTask,
    seed: u64,
    guard: Option<Guard>,
) -> Result<SelectionReport, CliError> {
    let mut cfg = OptimizerConfig::new(t.k).with_seed(seed).with_lazy(t.lazy);
    if let Some(g) = guard.or(t.guard) {
        cfg = cfg.with_guard(g);
    }
    let f = &inst.function;
    let g: &FunctionSpec = t.diversity.as_ref().unwrap_or(f);
    let named = |name: &Option<String>, what: &str| {
        name.as_deref().map(|s| inst.set(s)).ok_or_else(|| {
            CliError::invalid(format!(
                "task.{what}: required by the {:?} driver",
                t.driver
            ))
        })
    };
    let empty = Subset::empty(inst.n());
    Ok(match t.driver {
        DriverName::Greedy => greedy_max(f, &cfg)?,
        DriverName::RandomizedGreedy => randomized_greedy_max(f, &cfg)?,
        DriverName::SymmetricMi => symmetric_mi_select(f, &cfg)?,
        DriverName::Smi => smi_max(f, g, &named(&t.query, "query")?, t.lambda, &cfg)?,
        DriverName::Cg => cg_max(f, g, &named(&t.private, "private")?, t.lambda, &cfg)?,
        DriverName::Csmi => {
            let q = named(&t.query, "query")?;
            let p = t.private.as_deref().map_or(empty, |s| inst.set(s));
            csmi_max(f, g, &q, &p, t.lambda, &cfg)?
        }
        DriverName::Nsmi => {
            let q = t.query.as_deref().map_or(empty.clone(), |s| inst.set(s));
            let p = t.private.as_deref().map_or(empty, |s| inst.set(s));
            nsmi_max(f, g, &q, &p, t.lambda, &cfg)?
        }
    })
}

fn write_trace(path: &PathBuf, report: &SelectionReport) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = std::fs::File::create(path).map_err(io)?;
    let mut text = String::from("step,element,gain\n");
    for (i, step) in report.gain_trace.iter().enumerate() {
        let element = step.element.map(|e| e.to_string()).unwrap_or_default();
        text.push_str(&format!("{},{},{}\n", i + 1, element, step.gain));
    }
    out.write_all(text.as_bytes()).map_err(io)
}
