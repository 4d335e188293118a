//! Exhaustive property certification at desk scale.
//!
//! Every checker first tabulates all `2^n` values of the oracle, in parallel,
//! then scans the table. Reports carry the worst margin found (positive means
//! the inequality holds with room to spare) and, on failure, the first
//! violating witness in ascending mask order.

mod brute;
mod curvature;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use brute::{brute_force_max, brute_force_min_metric_sum, BRUTE_FORCE_LIMIT};
pub use curvature::{
    curvature, curvature_at, curvature_report, dummy_elements, symmetric_curvature_at,
    CurvatureReport, SetValue,
};

use crate::error::{Error, Result};
use crate::oracle::{Properties, SetFunction};
use crate::set::Subset;
use crate::TOLERANCE;

pub const DEFAULT_N_LIMIT: usize = 16;

/// Ceiling on any table regardless of the caller's `n_limit`.
pub const HARD_N_LIMIT: usize = 24;

/// Triples of subsets grow as `8^n`; the axiom check stops here.
pub const PSEUDO_METRIC_N_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Normalized,
    Monotone,
    Submodular,
    SecondOrderSupermodular,
    PseudoMetricAxioms,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Normalized => "normalized",
            Property::Monotone => "monotone",
            Property::Submodular => "submodular",
            Property::SecondOrderSupermodular => "second-order supermodular",
            Property::PseudoMetricAxioms => "a pseudo-metric",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricAxiom {
    Identity,
    NonNegativity,
    Symmetry,
    Triangle,
}

/// Sets and values exhibiting a violation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `f(∅) ≠ 0`.
    Normalized { value: f64 },
    /// `f(element | base) < 0`.
    Gain {
        element: usize,
        base: Subset,
        gain: f64,
    },
    /// `f^(2)(i, j; base) > 0`.
    SecondOrder {
        i: usize,
        j: usize,
        base: Subset,
        f2: f64,
    },
    /// `f^(2)(i, j; base ∪ k) < f^(2)(i, j; base)`.
    ThirdOrder {
        i: usize,
        j: usize,
        k: usize,
        base: Subset,
        f2_base: f64,
        f2_extended: f64,
    },
    /// `D_f` breaks an axiom; `c` is only set for the triangle inequality.
    Metric {
        axiom: MetricAxiom,
        a: Subset,
        b: Subset,
        c: Option<Subset>,
        lhs: f64,
        rhs: f64,
    },
}

fn second_difference<F: SetFunction + ?Sized>(f: &F, i: usize, j: usize, base: &Subset) -> f64 {
    let (fi, fj) = (f.eval(&base.with(i)), f.eval(&base.with(j)));
    (f.eval(&base.with(i).with(j)) - fi) - (fj - f.eval(base))
}

fn metric<F: SetFunction + ?Sized>(f: &F, a: &Subset, b: &Subset) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let u = f.eval(&lo.union(hi));
    (u - f.eval(lo)) + (u - f.eval(hi))
}

impl Witness {
    /// Re-evaluates the witness against `f` directly and confirms the same
    /// inequality is violated by more than `tol`.
    pub fn reproduces<F: SetFunction + ?Sized>(&self, f: &F, tol: f64) -> bool {
        let n = f.ground_size();
        match self {
            Witness::Normalized { .. } => f.eval(&Subset::empty(n)).abs() > tol,
            Witness::Gain { element, base, .. } => {
                !base.contains(*element) && f.gain(*element, base) < -tol
            }
            Witness::SecondOrder { i, j, base, .. } => second_difference(f, *i, *j, base) > tol,
            Witness::ThirdOrder { i, j, k, base, .. } => {
                let lo = second_difference(f, *i, *j, base);
                let hi = second_difference(f, *i, *j, &base.with(*k));
                hi - lo < -tol
            }
            Witness::Metric { axiom, a, b, c, .. } => match axiom {
                MetricAxiom::Identity => metric(f, a, a).abs() > tol,
                MetricAxiom::NonNegativity => metric(f, a, b) < -tol,
                MetricAxiom::Symmetry => (metric(f, a, b) - metric(f, b, a)).abs() > tol,
                MetricAxiom::Triangle => match c {
                    Some(c) => metric(f, a, c) > metric(f, a, b) + metric(f, b, c) + tol,
                    None => false,
                },
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Number of inequalities evaluated.
    pub pairs_checked: u64,
    /// Smallest slack seen; negative beyond `-tolerance` means violated.
    pub worst_margin: f64,
    pub tolerance: f64,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Every value of a set function, indexed by subset mask.
#[derive(Clone, Debug)]
pub struct ValueTable {
    n: usize,
    values: Vec<f64>,
}

impl ValueTable {
    pub fn build<F: SetFunction + ?Sized>(f: &F, n_limit: usize) -> Result<Self> {
        let n = f.ground_size();
        let limit = n_limit.min(HARD_N_LIMIT);
        if n > limit {
            return Err(Error::ResourceLimit(format!(
                "exhaustive tabulation needs 2^{n} evaluations; limit is n <= {limit}"
            )));
        }
        let values = (0..1u64 << n)
            .into_par_iter()
            .map(|mask| f.eval(&Subset::from_bits(n, mask)))
            .collect();
        Ok(Self { n, values })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `D_f` in the same summation order as the generic measure.
    #[inline]
    pub fn metric(&self, a: u64, b: u64) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let u = self.get(lo | hi);
        (u - self.get(lo)) + (u - self.get(hi))
    }

    #[inline]
    fn f2(&self, i: usize, j: usize, base: u64) -> f64 {
        let (bi, bj) = (base | 1 << i, base | 1 << j);
        (self.get(bi | bj) - self.get(bi)) - (self.get(bj) - self.get(base))
    }
}

impl SetFunction for ValueTable {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &Subset) -> f64 {
        self.get(set.bits().expect("value tables cover at most 24 elements"))
    }
}

/// Running minimum plus the first violation by `key`.
struct Scan {
    worst: f64,
    checked: u64,
    first: Option<(Vec<u64>, Witness)>,
}

impl Scan {
    fn new() -> Self {
        Self {
            worst: f64::INFINITY,
            checked: 0,
            first: None,
        }
    }

    fn record(
        &mut self,
        margin: f64,
        key: impl FnOnce() -> Vec<u64>,
        witness: impl FnOnce() -> Witness,
    ) {
        self.checked += 1;
        if margin < self.worst {
            self.worst = margin;
        }
        if margin < -TOLERANCE {
            let key = key();
            if self.first.as_ref().is_none_or(|(k, _)| key < *k) {
                self.first = Some((key, witness()));
            }
        }
    }

    fn merge(mut self, other: Scan) -> Scan {
        self.worst = self.worst.min(other.worst);
        self.checked += other.checked;
        self.first = match (self.first, other.first) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    fn report(self, property: Property) -> PropertyReport {
        let (verdict, witness) = match self.first {
            Some((_, w)) => (Verdict::Violated, Some(w)),
            None => (Verdict::Holds, None),
        };
        PropertyReport {
            property,
            verdict,
            witness,
            pairs_checked: self.checked,
            worst_margin: if self.checked == 0 {
                0.0
            } else {
                self.worst + 0.0
            },
            tolerance: TOLERANCE,
        }
    }
}

fn scan_bases(n: usize, per_base: impl Fn(u64, &mut Scan) + Sync) -> Scan {
    (0..1u64 << n)
        .into_par_iter()
        .fold(Scan::new, |mut acc, base| {
            per_base(base, &mut acc);
            acc
        })
        .reduce(Scan::new, Scan::merge)
}

fn outside(n: usize, base: u64) -> impl Iterator<Item = usize> {
    (0..n).filter(move |&i| base >> i & 1 == 0)
}

pub fn check_normalized<F: SetFunction + ?Sized>(f: &F) -> PropertyReport {
    let value = f.eval(&Subset::empty(f.ground_size()));
    let mut scan = Scan::new();
    scan.record(-value.abs(), Vec::new, || Witness::Normalized { value });
    scan.report(Property::Normalized)
}

pub fn check_monotone<F: SetFunction + ?Sized>(f: &F, n_limit: usize) -> Result<PropertyReport> {
    let table = ValueTable::build(f, n_limit)?;
    Ok(monotone_on(&table))
}

pub fn monotone_on(t: &ValueTable) -> PropertyReport {
    let n = t.n;
    scan_bases(n, |base, acc| {
        for j in outside(n, base) {
            let gain = t.get(base | 1 << j) - t.get(base);
            acc.record(
                gain,
                || vec![base, j as u64],
                || Witness::Gain {
                    element: j,
                    base: Subset::from_bits(n, base),
                    gain,
                },
            );
        }
    })
    .report(Property::Monotone)
}

pub fn check_submodular<F: SetFunction + ?Sized>(f: &F, n_limit: usize) -> Result<PropertyReport> {
    let table = ValueTable::build(f, n_limit)?;
    Ok(submodular_on(&table))
}

pub fn submodular_on(t: &ValueTable) -> PropertyReport {
    let n = t.n;
    scan_bases(n, |base, acc| {
        for i in outside(n, base) {
            for j in outside(n, base).filter(|&j| j > i) {
                let f2 = t.f2(i, j, base);
                acc.record(
                    -f2,
                    || vec![base, i as u64, j as u64],
                    || Witness::SecondOrder {
                        i,
                        j,
                        base: Subset::from_bits(n, base),
                        f2,
                    },
                );
            }
        }
    })
    .report(Property::Submodular)
}

pub fn check_second_order_supermodular<F: SetFunction + ?Sized>(
    f: &F,
    n_limit: usize,
) -> Result<PropertyReport> {
    let table = ValueTable::build(f, n_limit)?;
    Ok(second_order_on(&table))
}

/// `f^(3)(i,j,k;A) ≥ 0` over all `A` and distinct `i, j, k ∉ A`, with `i < j`.
pub fn second_order_on(t: &ValueTable) -> PropertyReport {
    let n = t.n;
    scan_bases(n, |base, acc| {
        for i in outside(n, base) {
            for j in outside(n, base).filter(|&j| j > i) {
                let f2_base = t.f2(i, j, base);
                for k in outside(n, base).filter(|&k| k != i && k != j) {
                    let f2_extended = t.f2(i, j, base | 1 << k);
                    acc.record(
                        f2_extended - f2_base,
                        || vec![base, i as u64, j as u64, k as u64],
                        || Witness::ThirdOrder {
                            i,
                            j,
                            k,
                            base: Subset::from_bits(n, base),
                            f2_base,
                            f2_extended,
                        },
                    );
                }
            }
        }
    })
    .report(Property::SecondOrderSupermodular)
}

/// Identity, non-negativity, symmetry and the triangle inequality of `D_f`
/// over every pair and triple of subsets.
pub fn check_pseudo_metric<F: SetFunction + ?Sized>(
    f: &F,
    n_limit: usize,
) -> Result<PropertyReport> {
    let table = ValueTable::build(f, n_limit.min(PSEUDO_METRIC_N_LIMIT))?;
    Ok(pseudo_metric_on(&table))
}

pub fn pseudo_metric_on(t: &ValueTable) -> PropertyReport {
    let n = t.n;
    let size = 1u64 << n;
    let set = |m: u64| Subset::from_bits(n, m);
    scan_bases(n, |a, acc| {
        let daa = t.metric(a, a);
        acc.record(
            -daa.abs(),
            || vec![a, 0, 0, 0],
            || Witness::Metric {
                axiom: MetricAxiom::Identity,
                a: set(a),
                b: set(a),
                c: None,
                lhs: daa,
                rhs: 0.0,
            },
        );
        for b in 0..size {
            let (dab, dba) = (t.metric(a, b), t.metric(b, a));
            acc.record(
                dab,
                || vec![a, b, 1, 0],
                || Witness::Metric {
                    axiom: MetricAxiom::NonNegativity,
                    a: set(a),
                    b: set(b),
                    c: None,
                    lhs: 0.0,
                    rhs: dab,
                },
            );
            acc.record(
                -(dab - dba).abs(),
                || vec![a, b, 2, 0],
                || Witness::Metric {
                    axiom: MetricAxiom::Symmetry,
                    a: set(a),
                    b: set(b),
                    c: None,
                    lhs: dab,
                    rhs: dba,
                },
            );
            for c in 0..size {
                let lhs = t.metric(a, c);
                let rhs = dab + t.metric(b, c);
                acc.record(
                    rhs - lhs,
                    || vec![a, b, 3, c],
                    || Witness::Metric {
                        axiom: MetricAxiom::Triangle,
                        a: set(a),
                        b: set(b),
                        c: Some(set(c)),
                        lhs,
                        rhs,
                    },
                );
            }
        }
    })
    .report(Property::PseudoMetricAxioms)
}

/// Reports for normalized, monotone and submodular over one shared table.
pub fn certify_polymatroid<F: SetFunction + ?Sized>(
    f: &F,
    n_limit: usize,
) -> Result<Vec<PropertyReport>> {
    let t = ValueTable::build(f, n_limit)?;
    let mut normalized = Scan::new();
    let v = t.get(0);
    normalized.record(-v.abs(), Vec::new, || Witness::Normalized { value: v });
    Ok(vec![
        normalized.report(Property::Normalized),
        monotone_on(&t),
        submodular_on(&t),
    ])
}

/// Verifies the subset of `required` properties against `f`, returning the
/// first failing report.
pub(crate) fn verify_properties<F: SetFunction + ?Sized>(
    f: &F,
    required: Properties,
    n_limit: usize,
) -> Result<Option<PropertyReport>> {
    let t = ValueTable::build(f, n_limit)?;
    let mut checks: Vec<Box<dyn Fn() -> PropertyReport + '_>> = Vec::new();
    if required.normalized {
        checks.push(Box::new(|| {
            let v = t.get(0);
            let mut s = Scan::new();
            s.record(-v.abs(), Vec::new, || Witness::Normalized { value: v });
            s.report(Property::Normalized)
        }));
    }
    if required.monotone {
        checks.push(Box::new(|| monotone_on(&t)));
    }
    if required.submodular {
        checks.push(Box::new(|| submodular_on(&t)));
    }
    if required.second_order_supermodular {
        checks.push(Box::new(|| second_order_on(&t)));
    }
    Ok(checks.iter().map(|c| c()).find(|r| !r.holds()))
}
