use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::check_ground;
use crate::oracle::SetFunction;
use crate::set::Subset;

/// A subset paired with a value, for the per-set curvature maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetValue {
    pub set: Subset,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub kappa_global: f64,
    /// Elements with `f(j) = 0`, excluded from every ratio.
    pub dummies: Vec<usize>,
    pub kappa_at: Vec<SetValue>,
    pub sym_kappa_at: Vec<SetValue>,
}

fn singletons<F: SetFunction + ?Sized>(f: &F) -> Vec<f64> {
    let n = f.ground_size();
    (0..n).map(|j| f.eval(&Subset::singleton(n, j))).collect()
}

pub fn dummy_elements<F: SetFunction + ?Sized>(f: &F) -> Vec<usize> {
    singletons(f)
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == 0.0)
        .map(|(j, _)| j)
        .collect()
}

fn kappa_with(f: &(impl SetFunction + ?Sized), single: &[f64], a: &Subset) -> Option<f64> {
    let fa = f.eval(a);
    a.iter()
        .filter(|&j| single[j] != 0.0)
        .map(|j| (fa - f.eval(&a.without(j))) / single[j])
        .fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |m| m.min(r)))
        })
        .map(|m| 1.0 - m)
}

fn sym_with(f: &(impl SetFunction + ?Sized), single: &[f64], a: &Subset) -> f64 {
    let rest = a.complement();
    let frest = f.eval(&rest);
    rest.iter()
        .filter(|&j| single[j] != 0.0)
        .map(|j| (frest - f.eval(&rest.without(j))) / single[j])
        .fold(0.0, f64::max)
}

/// `κ_f(A) = 1 − min_{j∈A} f(j | A \ j) / f(j)`, dummies excluded; zero when
/// `A` has no non-dummy element.
pub fn curvature_at<F: SetFunction + ?Sized>(f: &F, a: &Subset) -> Result<f64> {
    check_ground(f, [a])?;
    Ok(kappa_with(f, &singletons(f), a).unwrap_or(0.0))
}

/// `max_{j∉A} f(j | Ω \ (A ∪ j)) / f(j)`, dummies excluded; zero when no
/// candidate remains.
pub fn symmetric_curvature_at<F: SetFunction + ?Sized>(f: &F, a: &Subset) -> Result<f64> {
    check_ground(f, [a])?;
    Ok(sym_with(f, &singletons(f), a))
}

/// `κ_f = κ_f(Ω)`.
pub fn curvature<F: SetFunction + ?Sized>(f: &F) -> Result<CurvatureReport> {
    curvature_report(f, &[])
}

/// Global curvature plus both per-set curvatures at each of `sets`.
pub fn curvature_report<F: SetFunction + ?Sized>(
    f: &F,
    sets: &[Subset],
) -> Result<CurvatureReport> {
    check_ground(f, sets)?;
    let n = f.ground_size();
    let single = singletons(f);
    let dummies: Vec<usize> = (0..n).filter(|&j| single[j] == 0.0).collect();
    let kappa_global = kappa_with(f, &single, &Subset::full(n))
        .ok_or_else(|| Error::Degenerate("every element is a dummy (f(j) = 0)".into()))?;
    let kappa_at = sets
        .iter()
        .map(|s| SetValue {
            set: s.clone(),
            value: kappa_with(f, &single, s).unwrap_or(0.0),
        })
        .collect();
    let sym_kappa_at = sets
        .iter()
        .map(|s| SetValue {
            set: s.clone(),
            value: sym_with(f, &single, s),
        })
        .collect();
    Ok(CurvatureReport {
        kappa_global,
        dummies,
        kappa_at,
        sym_kappa_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{FunctionSpec, ModularWeights, SimilarityKernel, TruncationRank};

    #[test]
    fn modular_has_zero_curvature() {
        let f = FunctionSpec::Modular(ModularWeights::new(vec![1.0, 2.0, 0.0, 4.0]).unwrap());
        let r = curvature(&f).unwrap();
        assert_eq!(r.kappa_global, 0.0);
        assert_eq!(r.dummies, vec![2]);
    }

    #[test]
    fn truncation_is_fully_curved() {
        let f = FunctionSpec::Truncation(TruncationRank::new(5, 3).unwrap());
        assert_eq!(curvature(&f).unwrap().kappa_global, 1.0);
    }

    #[test]
    fn all_dummies_is_degenerate() {
        let f = FunctionSpec::Modular(ModularWeights::new(vec![0.0; 3]).unwrap());
        assert!(matches!(curvature(&f), Err(Error::Degenerate(_))));
    }

    #[test]
    fn facility_location_direct_formula() {
        let rows = vec![
            vec![1.0, 0.6, 0.2],
            vec![0.6, 1.0, 0.3],
            vec![0.2, 0.3, 1.0],
        ];
        let f = FunctionSpec::FacilityLocation(SimilarityKernel::new(rows.clone()).unwrap());
        let fj: Vec<f64> = (0..3).map(|j| (0..3).map(|i| rows[i][j]).sum()).collect();
        // f(j | Ω \ j) = Σ_i max(0, s_ij − max_{a≠j} s_ia)
        let kappa = 1.0
            - (0..3)
                .map(|j| {
                    let g: f64 = (0..3)
                        .map(|i| {
                            let other = (0..3)
                                .filter(|&a| a != j)
                                .map(|a| rows[i][a])
                                .fold(0.0, f64::max);
                            (rows[i][j] - other).max(0.0)
                        })
                        .sum();
                    g / fj[j]
                })
                .fold(f64::INFINITY, f64::min);
        let got = curvature(&f).unwrap().kappa_global;
        assert!((got - kappa).abs() < 1e-12);
        assert!(got > 0.0 && got < 1.0);
    }

    #[test]
    fn per_set_values() {
        let f = FunctionSpec::Truncation(TruncationRank::new(4, 2).unwrap());
        let a = Subset::from_indices(4, [0]).unwrap();
        let r = curvature_report(&f, &[a.clone(), Subset::full(4)]).unwrap();
        assert_eq!(r.kappa_at[0].value, 0.0);
        assert_eq!(r.kappa_at[1].value, r.kappa_global);
        // Ω \ A has three elements; removing one leaves two, so each gain is 0.
        assert_eq!(r.sym_kappa_at[0].value, 0.0);
        assert_eq!(r.sym_kappa_at[1].value, 0.0);
    }
}
