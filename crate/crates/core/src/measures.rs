//! Generic information measures computed purely through oracle calls.
//!
//! Every measure assumes a normalized oracle (`f(∅) = 0`); the empty-union
//! term of the inclusion–exclusion sums is dropped accordingly.
//!
//! Arguments of symmetric measures are ordered by mask value before any
//! arithmetic happens, so swapping them yields bit-identical results. The
//! summation orders are also chosen so that the reduction chain holds exactly:
//! two-set multi-set MI, two-set total correlation and mutual information all
//! evaluate `(f(lo) + f(hi)) − f(lo ∪ hi)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::Subset;

/// Largest number of sets accepted by the generic inclusion–exclusion path.
pub const MAX_MULTISET_ARITY: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// `I_f(A) = f(A)`.
    Info,
    CondGain,
    #[serde(rename = "mi")]
    MI,
    #[serde(rename = "cmi")]
    CMI,
    #[serde(rename = "multi_mi")]
    MultiMI,
    TotalCorr,
    CondTotalCorr,
    VarInfo,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Info => "info",
            Measure::CondGain => "cond_gain",
            Measure::MI => "mi",
            Measure::CMI => "cmi",
            Measure::MultiMI => "multi_mi",
            Measure::TotalCorr => "total_corr",
            Measure::CondTotalCorr => "cond_total_corr",
            Measure::VarInfo => "var_info",
        }
    }
}

/// Which route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    Generic,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub value: f64,
    pub measure: Measure,
    /// Distinct subsets evaluated (0 on the closed-form path).
    pub oracle_calls: u64,
    pub path: Path,
}

/// One measure applied to concrete sets.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureRequest {
    pub measure: Measure,
    pub sets: Vec<Subset>,
    pub condition: Option<Subset>,
}

impl MeasureRequest {
    pub fn new(measure: Measure, sets: Vec<Subset>) -> Self {
        Self {
            measure,
            sets,
            condition: None,
        }
    }

    pub fn conditioned_on(mut self, condition: Subset) -> Self {
        self.condition = Some(condition);
        self
    }

    /// Checks arity and condition presence for the measure.
    pub fn validate(&self) -> Result<()> {
        let k = self.sets.len();
        let arity_ok = match self.measure {
            Measure::Info => k == 1,
            Measure::CondGain | Measure::MI | Measure::CMI | Measure::VarInfo => k == 2,
            Measure::MultiMI | Measure::TotalCorr | Measure::CondTotalCorr => k >= 1,
        };
        if !arity_ok {
            return Err(Error::invalid(format!(
                "{} does not take {k} set argument(s)",
                self.measure.name()
            )));
        }
        let needs_condition = matches!(self.measure, Measure::CMI | Measure::CondTotalCorr);
        let allows_condition = needs_condition || self.measure == Measure::MultiMI;
        match (&self.condition, needs_condition, allows_condition) {
            (None, true, _) => Err(Error::invalid(format!(
                "{} requires a conditioning set",
                self.measure.name()
            ))),
            (Some(_), _, false) => Err(Error::invalid(format!(
                "{} does not take a conditioning set",
                self.measure.name()
            ))),
            _ => Ok(()),
        }
    }
}

pub(crate) fn check_ground<'a, F, I>(f: &F, sets: I) -> Result<()>
where
    F: SetFunction + ?Sized,
    I: IntoIterator<Item = &'a Subset>,
{
    let n = f.ground_size();
    for s in sets {
        if s.ground_size() != n {
            return Err(Error::GroundSetMismatch {
                expected: n,
                found: s.ground_size(),
            });
        }
    }
    Ok(())
}

/// Deduplicating evaluator; the map size is the distinct-call count.
struct Tally<'a, F: ?Sized> {
    f: &'a F,
    seen: HashMap<Subset, f64>,
}

impl<'a, F: SetFunction + ?Sized> Tally<'a, F> {
    fn new(f: &'a F) -> Self {
        Self {
            f,
            seen: HashMap::new(),
        }
    }

    fn eval(&mut self, s: &Subset) -> f64 {
        if let Some(&v) = self.seen.get(s) {
            return v;
        }
        let v = self.f.eval(s);
        self.seen.insert(s.clone(), v);
        v
    }

    fn calls(&self) -> u64 {
        self.seen.len() as u64
    }
}

/// `g(X) = f(X | C)`, or `f` itself when unconditioned.
struct View<'t, 'a, F: ?Sized> {
    tally: &'t mut Tally<'a, F>,
    condition: Option<(Subset, f64)>,
}

impl<'t, 'a, F: SetFunction + ?Sized> View<'t, 'a, F> {
    fn new(tally: &'t mut Tally<'a, F>, condition: Option<&Subset>) -> Self {
        let condition = condition.map(|c| {
            let base = tally.eval(c);
            (c.clone(), base)
        });
        Self { tally, condition }
    }

    fn g(&mut self, s: &Subset) -> f64 {
        match &self.condition {
            None => self.tally.eval(s),
            Some((c, base)) => {
                let base = *base;
                let u = s.union(c);
                self.tally.eval(&u) - base
            }
        }
    }

    fn conditional_gain(&mut self, a: &Subset, b: &Subset) -> f64 {
        self.g(&a.union(b)) - self.g(b)
    }

    fn mutual_information(&mut self, a: &Subset, b: &Subset) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let sum = self.g(lo) + self.g(hi);
        sum - self.g(&lo.union(hi))
    }

    fn variation_of_information(&mut self, a: &Subset, b: &Subset) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let u = self.g(&lo.union(hi));
        (u - self.g(lo)) + (u - self.g(hi))
    }

    fn total_correlation(&mut self, sets: &[Subset]) -> f64 {
        let sorted = sorted(sets);
        let mut union = Subset::empty(sorted[0].ground_size());
        let mut sum = 0.0;
        for s in &sorted {
            sum += self.g(s);
            union.union_with(s);
        }
        sum - self.g(&union)
    }

    /// Inclusion–exclusion over non-empty index sets in Gray-code order.
    /// Unions are maintained incrementally through per-element multiplicities.
    fn multiset(&mut self, sets: &[Subset]) -> f64 {
        let sorted = sorted(sets);
        let k = sorted.len();
        let n = sorted[0].ground_size();
        let mut counts = vec![0u32; n];
        let mut union = Subset::empty(n);
        let (mut odd, mut even) = (0.0, 0.0);
        let mut gray = 0u64;
        for step in 1..(1u64 << k) {
            let flip = step.trailing_zeros() as usize;
            gray ^= 1 << flip;
            if gray >> flip & 1 == 1 {
                for e in sorted[flip].iter() {
                    counts[e] += 1;
                    if counts[e] == 1 {
                        union.insert(e);
                    }
                }
            } else {
                for e in sorted[flip].iter() {
                    counts[e] -= 1;
                    if counts[e] == 0 {
                        union.remove(e);
                    }
                }
            }
            let term = self.g(&union);
            if gray.count_ones() % 2 == 1 {
                odd += term;
            } else {
                even += term;
            }
        }
        odd - even
    }
}

fn sorted(sets: &[Subset]) -> Vec<Subset> {
    let mut v = sets.to_vec();
    v.sort();
    v
}

fn check_multiset_arity(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("multi-set measures need at least one set"));
    }
    if k > MAX_MULTISET_ARITY {
        return Err(Error::ResourceLimit(format!(
            "generic multi-set MI over {k} sets needs 2^{k} evaluations (limit {MAX_MULTISET_ARITY} sets)"
        )));
    }
    Ok(())
}

/// Evaluates a request on the generic path.
pub fn evaluate<F: SetFunction + ?Sized>(f: &F, req: &MeasureRequest) -> Result<MeasureResult> {
    req.validate()?;
    check_ground(f, req.sets.iter().chain(req.condition.iter()))?;
    let s = &req.sets;
    if matches!(req.measure, Measure::MultiMI) {
        check_multiset_arity(s.len())?;
    }
    let mut tally = Tally::new(f);
    let value = {
        let mut view = View::new(&mut tally, req.condition.as_ref());
        match req.measure {
            Measure::Info => view.g(&s[0]),
            Measure::CondGain => view.conditional_gain(&s[0], &s[1]),
            Measure::MI | Measure::CMI => view.mutual_information(&s[0], &s[1]),
            Measure::MultiMI => view.multiset(s),
            Measure::TotalCorr | Measure::CondTotalCorr => view.total_correlation(s),
            Measure::VarInfo => view.variation_of_information(&s[0], &s[1]),
        }
    };
    Ok(MeasureResult {
        value,
        measure: req.measure,
        oracle_calls: tally.calls(),
        path: Path::Generic,
    })
}

/// `f(A|B) = f(A ∪ B) − f(B)`.
pub fn conditional_gain<F: SetFunction + ?Sized>(f: &F, a: &Subset, b: &Subset) -> Result<f64> {
    check_ground(f, [a, b])?;
    Ok(View::new(&mut Tally::new(f), None).conditional_gain(a, b))
}

/// `I_f(A;B) = f(A) + f(B) − f(A ∪ B)`.
pub fn mutual_information<F: SetFunction + ?Sized>(f: &F, a: &Subset, b: &Subset) -> Result<f64> {
    check_ground(f, [a, b])?;
    Ok(View::new(&mut Tally::new(f), None).mutual_information(a, b))
}

/// `I_f(A;B|C)`, the mutual information of the conditioned oracle `f(·|C)`.
pub fn conditional_mutual_information<F: SetFunction + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
    c: &Subset,
) -> Result<f64> {
    check_ground(f, [a, b, c])?;
    Ok(View::new(&mut Tally::new(f), Some(c)).mutual_information(a, b))
}

/// `I_f(A_1; …; A_k)` by inclusion–exclusion. Negative values are possible
/// for `k ≥ 3`.
pub fn multiset_mutual_information<F: SetFunction + ?Sized>(f: &F, sets: &[Subset]) -> Result<f64> {
    check_multiset_arity(sets.len())?;
    check_ground(f, sets)?;
    Ok(View::new(&mut Tally::new(f), None).multiset(sets))
}

pub fn conditional_multiset_mi<F: SetFunction + ?Sized>(
    f: &F,
    sets: &[Subset],
    c: &Subset,
) -> Result<f64> {
    check_multiset_arity(sets.len())?;
    check_ground(f, sets.iter().chain([c]))?;
    Ok(View::new(&mut Tally::new(f), Some(c)).multiset(sets))
}

/// `C_f(A_1, …, A_k) = Σ f(A_i) − f(∪ A_i)`.
pub fn total_correlation<F: SetFunction + ?Sized>(f: &F, sets: &[Subset]) -> Result<f64> {
    if sets.is_empty() {
        return Err(Error::invalid("total correlation needs at least one set"));
    }
    check_ground(f, sets)?;
    Ok(View::new(&mut Tally::new(f), None).total_correlation(sets))
}

pub fn conditional_total_correlation<F: SetFunction + ?Sized>(
    f: &F,
    sets: &[Subset],
    c: &Subset,
) -> Result<f64> {
    if sets.is_empty() {
        return Err(Error::invalid("total correlation needs at least one set"));
    }
    check_ground(f, sets.iter().chain([c]))?;
    Ok(View::new(&mut Tally::new(f), Some(c)).total_correlation(sets))
}

/// `D_f(A,B) = f(A|B) + f(B|A)`.
pub fn variation_of_information<F: SetFunction + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
) -> Result<f64> {
    check_ground(f, [a, b])?;
    Ok(View::new(&mut Tally::new(f), None).variation_of_information(a, b))
}

/// `A ⊥_f B` read as `|I_f(A;B)| ≤ tol`.
pub fn is_independent<F: SetFunction + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
    tol: f64,
) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::invalid(
            "independence tolerance must be non-negative",
        ));
    }
    Ok(mutual_information(f, a, b)?.abs() <= tol)
}

/// Submodular Hamming metric `D^SH(A,B) = f(A Δ B)`.
pub fn hamming_metric<F: SetFunction + ?Sized>(f: &F, a: &Subset, b: &Subset) -> Result<f64> {
    check_ground(f, [a, b])?;
    Ok(f.eval(&a.symmetric_difference(b)))
}

/// Additive submodular Hamming metric `D^SHA(A,B) = f(A \ B) + f(B \ A)`.
pub fn additive_hamming_metric<F: SetFunction + ?Sized>(
    f: &F,
    a: &Subset,
    b: &Subset,
) -> Result<f64> {
    check_ground(f, [a, b])?;
    Ok(f.eval(&a.difference(b)) + f.eval(&b.difference(a)))
}
