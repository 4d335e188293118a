use super::{FunctionSpec, ProbCoverageMatrix};
use crate::error::{Error, Result};
use crate::measures::{check_ground, Measure, MeasureRequest, MeasureResult, Path};
use crate::set::Subset;

fn no_closed_form(spec: &FunctionSpec, measure: &'static str) -> Error {
    Error::NoClosedForm {
        family: spec.family(),
        measure,
    }
}

fn mixture_sum(spec: &FunctionSpec, each: impl Fn(&FunctionSpec) -> Result<f64>) -> Result<f64> {
    let FunctionSpec::Mixture(m) = spec else {
        unreachable!("mixture_sum on a non-mixture")
    };
    let mut total = 0.0;
    for c in m.components() {
        total += c.weight * each(&c.function)?;
    }
    Ok(total)
}

/// `f(A | B)` from family structure.
pub fn closed_form_conditional_gain(spec: &FunctionSpec, a: &Subset, b: &Subset) -> Result<f64> {
    check_ground(spec, [a, b])?;
    Ok(cg(spec, a, b))
}

fn cg(spec: &FunctionSpec, a: &Subset, b: &Subset) -> f64 {
    match spec {
        FunctionSpec::Modular(m) => m.eval(&a.difference(b)),
        FunctionSpec::SetCover(c) => c.weight(&c.gamma(a).difference(&c.gamma(b))),
        FunctionSpec::ProbSetCover(p) => {
            let pb = p.miss(b);
            let pa = p.miss(&a.difference(b));
            weighted(p, |i| pb[i] * (1.0 - pa[i]))
        }
        FunctionSpec::FacilityLocation(k) => {
            let (ma, mb) = (k.maxes(a), k.maxes(b));
            ma.iter().zip(&mb).map(|(x, y)| (x - y).max(0.0)).sum()
        }
        FunctionSpec::GraphCut(g) => {
            let d = a.difference(b);
            g.eval(&d) - 2.0 * g.cross(&d, b)
        }
        FunctionSpec::Truncation(t) => t.at(a.union(b).len()) - t.at(b.len()),
        FunctionSpec::ConcavePower(c) => {
            let wb = c.weight(b);
            c.at(wb + c.weight(&a.difference(b))) - c.at(wb)
        }
        FunctionSpec::Mixture(_) => mixture_sum(spec, |f| Ok(cg(f, a, b))).unwrap_or(f64::NAN),
    }
}

fn weighted(p: &ProbCoverageMatrix, term: impl Fn(usize) -> f64) -> f64 {
    p.concept_weights()
        .iter()
        .enumerate()
        .map(|(i, w)| w * term(i))
        .sum()
}

/// `I_f(A; B)` from family structure.
pub fn closed_form_mutual_information(spec: &FunctionSpec, a: &Subset, b: &Subset) -> Result<f64> {
    check_ground(spec, [a, b])?;
    Ok(mi(spec, a, b))
}

fn mi(spec: &FunctionSpec, a: &Subset, b: &Subset) -> f64 {
    match spec {
        FunctionSpec::Modular(m) => m.eval(&a.intersection(b)),
        FunctionSpec::SetCover(c) => c.weight(&c.gamma(a).intersection(&c.gamma(b))),
        FunctionSpec::ProbSetCover(p) => {
            let (pa, pb, pu) = (p.miss(a), p.miss(b), p.miss(&a.union(b)));
            weighted(p, |i| 1.0 - (pa[i] + pb[i] - pu[i]))
        }
        FunctionSpec::FacilityLocation(k) => {
            let (ma, mb) = (k.maxes(a), k.maxes(b));
            ma.iter().zip(&mb).map(|(x, y)| x.min(*y)).sum()
        }
        FunctionSpec::GraphCut(g) => {
            let z = a.intersection(b);
            g.eval(&z) + 2.0 * g.cross(a, b) - 2.0 * g.cross(&a.union(b), &z)
        }
        FunctionSpec::Truncation(t) => t.at(a.len()) + t.at(b.len()) - t.at(a.union(b).len()),
        FunctionSpec::ConcavePower(c) => {
            c.at(c.weight(a)) + c.at(c.weight(b)) - c.at(c.weight(&a.union(b)))
        }
        FunctionSpec::Mixture(_) => mixture_sum(spec, |f| Ok(mi(f, a, b))).unwrap_or(f64::NAN),
    }
}

/// `D_f(A, B) = f(A | B) + f(B | A)` from family structure.
pub fn closed_form_metric(spec: &FunctionSpec, a: &Subset, b: &Subset) -> Result<f64> {
    check_ground(spec, [a, b])?;
    Ok(metric(spec, a, b))
}

fn metric(spec: &FunctionSpec, a: &Subset, b: &Subset) -> f64 {
    match spec {
        FunctionSpec::Modular(m) => m.eval(&a.symmetric_difference(b)),
        FunctionSpec::SetCover(c) => c.weight(&c.gamma(a).symmetric_difference(&c.gamma(b))),
        FunctionSpec::FacilityLocation(k) => {
            let (ma, mb) = (k.maxes(a), k.maxes(b));
            ma.iter().zip(&mb).map(|(x, y)| (x - y).abs()).sum()
        }
        FunctionSpec::Mixture(_) => mixture_sum(spec, |f| Ok(metric(f, a, b))).unwrap_or(f64::NAN),
        _ => cg(spec, a, b) + cg(spec, b, a),
    }
}

/// `I_f(A_1; …; A_k)` from family structure.
///
/// Truncation and concave-over-modular have none; a mixture has one only if
/// every component does. The probabilistic cover form requires pairwise
/// disjoint sets.
pub fn closed_form_multiset_mi(spec: &FunctionSpec, sets: &[Subset]) -> Result<f64> {
    if sets.is_empty() {
        return Err(Error::invalid("multi-set MI needs at least one set"));
    }
    check_ground(spec, sets)?;
    multiset(spec, sets)
}

fn multiset(spec: &FunctionSpec, sets: &[Subset]) -> Result<f64> {
    let n = spec.ground_size();
    let common = || {
        sets.iter()
            .fold(Subset::full(n), |acc, s| acc.intersection(s))
    };
    Ok(match spec {
        FunctionSpec::Modular(m) => m.eval(&common()),
        FunctionSpec::SetCover(c) => {
            let all = Subset::full(c.concepts());
            c.weight(
                &sets
                    .iter()
                    .fold(all, |acc, s| acc.intersection(&c.gamma(s))),
            )
        }
        FunctionSpec::ProbSetCover(p) => {
            require_pairwise_disjoint(spec, sets)?;
            let misses: Vec<Vec<f64>> = sets.iter().map(|s| p.miss(s)).collect();
            weighted(p, |i| misses.iter().map(|m| 1.0 - m[i]).product())
        }
        FunctionSpec::FacilityLocation(k) => {
            let maxes: Vec<Vec<f64>> = sets.iter().map(|s| k.maxes(s)).collect();
            (0..n)
                .map(|i| maxes.iter().map(|m| m[i]).fold(f64::INFINITY, f64::min))
                .sum()
        }
        FunctionSpec::GraphCut(g) => {
            let k = sets.len();
            let inter = common();
            let linear: f64 = inter.iter().map(|e| g.col_sum(e)).sum();
            let member: Vec<Subset> = (0..n)
                .map(|e| {
                    Subset::from_indices(k, (0..k).filter(|&i| sets[i].contains(e)))
                        .expect("indices below k")
                })
                .collect();
            let all = Subset::full(k);
            let mut quad = 0.0;
            for e in 0..n {
                for f in 0..n {
                    let s = g.kernel().get(e, f);
                    if s == 0.0 {
                        continue;
                    }
                    let hits_all = member[e].union(&member[f]) == all;
                    let c = inter.contains(e) as i32 + inter.contains(f) as i32 - hits_all as i32;
                    quad += s * c as f64;
                }
            }
            g.lambda() * linear - quad
        }
        FunctionSpec::Truncation(_) | FunctionSpec::ConcavePower(_) => {
            return Err(no_closed_form(spec, "multi_mi"))
        }
        FunctionSpec::Mixture(_) => {
            return mixture_sum(spec, |f| multiset(f, sets)).map_err(|e| match e {
                Error::NoClosedForm { .. } => no_closed_form(spec, "multi_mi"),
                other => other,
            })
        }
    })
}

fn require_pairwise_disjoint(spec: &FunctionSpec, sets: &[Subset]) -> Result<()> {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                return Err(Error::Precondition {
                    family: spec.family(),
                    reason: format!(
                        "sets {i} and {j} overlap; the closed form needs pairwise disjoint sets"
                    ),
                });
            }
        }
    }
    Ok(())
}

/// `I_f(A; B | C)` for the probabilistic cover, with pairwise disjoint sets:
/// `Σ_i w_i (1 − P_i(A)) (1 − P_i(B)) P_i(C)`.
pub fn closed_form_conditional_mi_prob_cover(
    spec: &FunctionSpec,
    a: &Subset,
    b: &Subset,
    c: &Subset,
) -> Result<f64> {
    let FunctionSpec::ProbSetCover(p) = spec else {
        return Err(Error::invalid(format!(
            "expected a prob_set_cover spec, got {}",
            spec.family()
        )));
    };
    check_ground(spec, [a, b, c])?;
    require_pairwise_disjoint(spec, &[a.clone(), b.clone(), c.clone()])?;
    let (pa, pb, pc) = (p.miss(a), p.miss(b), p.miss(c));
    Ok(weighted(p, |i| (1.0 - pa[i]) * (1.0 - pb[i]) * pc[i]))
}

/// `I_f(A; B | C)` from family structure.
pub fn closed_form_conditional_mi(
    spec: &FunctionSpec,
    a: &Subset,
    b: &Subset,
    c: &Subset,
) -> Result<f64> {
    check_ground(spec, [a, b, c])?;
    cmi(spec, a, b, c)
}

fn cmi(spec: &FunctionSpec, a: &Subset, b: &Subset, c: &Subset) -> Result<f64> {
    Ok(match spec {
        FunctionSpec::Modular(m) => m.eval(&a.intersection(b).difference(c)),
        FunctionSpec::SetCover(cov) => {
            let g = cov
                .gamma(a)
                .intersection(&cov.gamma(b))
                .difference(&cov.gamma(c));
            cov.weight(&g)
        }
        FunctionSpec::ProbSetCover(_) => {
            return closed_form_conditional_mi_prob_cover(spec, a, b, c)
        }
        FunctionSpec::FacilityLocation(k) => {
            let (ma, mb, mc) = (k.maxes(a), k.maxes(b), k.maxes(c));
            (0..k.size())
                .map(|i| ma[i].max(mc[i]).min(mb[i].max(mc[i])) - mc[i])
                .sum()
        }
        FunctionSpec::GraphCut(g) => {
            let (a2, b2) = (a.difference(c), b.difference(c));
            let z = a2.intersection(&b2);
            let u: f64 = z
                .iter()
                .map(|x| {
                    g.lambda() * g.col_sum(x)
                        - 2.0 * g.cross(&Subset::singleton(c.ground_size(), x), c)
                })
                .sum();
            u - g.cross(&z, &z) + 2.0 * g.cross(&a2.difference(&b2), &b2.difference(&a2))
        }
        FunctionSpec::Truncation(t) => {
            let cl = c.len();
            let ac = a.difference(c).len() + cl;
            let bc = b.difference(c).len() + cl;
            let abc = a.union(b).difference(c).len() + cl;
            t.at(ac) + t.at(bc) - t.at(abc) - t.at(cl)
        }
        FunctionSpec::ConcavePower(cp) => {
            let wc = cp.weight(c);
            let wa = cp.weight(&a.difference(c)) + wc;
            let wb = cp.weight(&b.difference(c)) + wc;
            let wab = cp.weight(&a.union(b).difference(c)) + wc;
            cp.at(wa) + cp.at(wb) - cp.at(wab) - cp.at(wc)
        }
        FunctionSpec::Mixture(_) => return mixture_sum(spec, |f| cmi(f, a, b, c)),
    })
}

/// Evaluates a request through family closed forms.
pub fn closed_form(spec: &FunctionSpec, req: &MeasureRequest) -> Result<MeasureResult> {
    req.validate()?;
    check_ground(spec, req.sets.iter().chain(req.condition.iter()))?;
    let s = &req.sets;
    let value = match (req.measure, &req.condition) {
        (Measure::Info, _) => spec.raw_eval(&s[0]),
        (Measure::CondGain, _) => cg(spec, &s[0], &s[1]),
        (Measure::MI, _) => mi(spec, &s[0], &s[1]),
        (Measure::VarInfo, _) => metric(spec, &s[0], &s[1]),
        (Measure::CMI, Some(c)) => cmi(spec, &s[0], &s[1], c)?,
        (Measure::MultiMI, None) => multiset(spec, s)?,
        (m, _) => return Err(no_closed_form(spec, m.name())),
    };
    Ok(MeasureResult {
        value,
        measure: req.measure,
        oracle_calls: 0,
        path: Path::ClosedForm,
    })
}
