use super::greedy::{run_greedy, run_randomized};
use super::{
    check_subset, enforce, Driver, Guarantee, GuaranteeKind, OptimizerConfig, SelectionReport,
    ONE_MINUS_INV_E,
};
use crate::analysis::symmetric_curvature_at;
use crate::error::{Error, Result};
use crate::measures::mutual_information;
use crate::oracle::{Properties, Scaled, SetFunction};
use crate::set::Subset;

/// `I(A; Q | P) + λ g(A)` with the optional parts switched off.
///
/// The information term is evaluated as `h(A) − (h(A ∪ Q) − h(Q))` where
/// `h = f(· | P)`, or `f` itself without `P`. Keeping one formula for every
/// driver makes the reductions exact: `Q = Ω` yields `f(A | P) + λ g(A)` and
/// `P = ∅` yields the unconditioned objective bit for bit.
pub struct Objective<'a, F: ?Sized, G: ?Sized> {
    f: &'a F,
    g: &'a G,
    lambda: f64,
    query: Option<Subset>,
    private: Option<(Subset, f64)>,
    query_value: f64,
}

impl<'a, F: SetFunction + ?Sized, G: SetFunction + ?Sized> Objective<'a, F, G> {
    fn build(
        f: &'a F,
        g: &'a G,
        lambda: f64,
        query: Option<Subset>,
        private: Option<Subset>,
    ) -> Result<Self> {
        let n = f.ground_size();
        if g.ground_size() != n {
            return Err(Error::GroundSetMismatch {
                expected: n,
                found: g.ground_size(),
            });
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        for s in query.iter().chain(private.iter()) {
            check_subset(n, s)?;
        }
        let private = private.filter(|p| !p.is_empty()).map(|p| {
            let base = f.eval(&p);
            (p, base)
        });
        let mut obj = Self {
            f,
            g,
            lambda,
            query,
            private,
            query_value: 0.0,
        };
        if let Some(q) = &obj.query {
            obj.query_value = obj.h(q);
        }
        Ok(obj)
    }

    /// `I_f(A; Q) + λ g(A)`.
    pub fn smi(f: &'a F, g: &'a G, query: Subset, lambda: f64) -> Result<Self> {
        Self::build(f, g, lambda, Some(query), None)
    }

    /// `f(A | P) + λ g(A)`.
    pub fn cg(f: &'a F, g: &'a G, private: Subset, lambda: f64) -> Result<Self> {
        Self::build(f, g, lambda, None, Some(private))
    }

    /// `I_f(A; Q | P) + λ g(A)`.
    pub fn csmi(f: &'a F, g: &'a G, query: Subset, private: Subset, lambda: f64) -> Result<Self> {
        Self::build(f, g, lambda, Some(query), Some(private))
    }

    fn h(&self, a: &Subset) -> f64 {
        match &self.private {
            None => self.f.eval(a),
            Some((p, base)) => self.f.eval(&a.union(p)) - base,
        }
    }

    fn information(&self, a: &Subset) -> f64 {
        let ha = self.h(a);
        match &self.query {
            None => ha,
            Some(q) => ha - (self.h(&a.union(q)) - self.query_value),
        }
    }
}

impl<F: SetFunction + ?Sized, G: SetFunction + ?Sized> SetFunction for Objective<'_, F, G> {
    fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    fn eval(&self, a: &Subset) -> f64 {
        self.information(a) + self.lambda * self.g.eval(a)
    }
}

fn polymatroid_sos() -> Properties {
    Properties::POLYMATROID.with_second_order(true)
}

fn guard_pair<F, G>(f: &F, g: &G, f_needs: Properties, cfg: &OptimizerConfig) -> Result<()>
where
    F: SetFunction + ?Sized,
    G: SetFunction + ?Sized,
{
    cfg.validate(f.ground_size())?;
    enforce(f, f_needs, cfg.guard, "f")?;
    enforce(g, Properties::POLYMATROID, cfg.guard, "g")
}

/// SMIMax: greedy on `I_f(A; Q) + λ g(A)`; needs second-order supermodular `f`.
pub fn smi_max<F, G>(
    f: &F,
    g: &G,
    query: &Subset,
    lambda: f64,
    cfg: &OptimizerConfig,
) -> Result<SelectionReport>
where
    F: SetFunction + ?Sized,
    G: SetFunction + ?Sized,
{
    let obj = Objective::smi(f, g, query.clone(), lambda)?;
    guard_pair(f, g, polymatroid_sos(), cfg)?;
    Ok(run_greedy(&obj, cfg, Driver::Smi, Some(lambda)))
}

/// CGMax: greedy on `f(A | P) + λ g(A)`.
pub fn cg_max<F, G>(
    f: &F,
    g: &G,
    private: &Subset,
    lambda: f64,
    cfg: &OptimizerConfig,
) -> Result<SelectionReport>
where
    F: SetFunction + ?Sized,
    G: SetFunction + ?Sized,
{
    let obj = Objective::cg(f, g, private.clone(), lambda)?;
    guard_pair(f, g, Properties::POLYMATROID, cfg)?;
    Ok(run_greedy(&obj, cfg, Driver::Cg, Some(lambda)))
}

/// CSMIMax: greedy on `I_f(A; Q | P) + λ g(A)`; needs second-order
/// supermodular `f`.
pub fn csmi_max<F, G>(
    f: &F,
    g: &G,
    query: &Subset,
    private: &Subset,
    lambda: f64,
    cfg: &OptimizerConfig,
) -> Result<SelectionReport>
where
    F: SetFunction + ?Sized,
    G: SetFunction + ?Sized,
{
    let obj = Objective::csmi(f, g, query.clone(), private.clone(), lambda)?;
    guard_pair(f, g, polymatroid_sos(), cfg)?;
    Ok(run_greedy(&obj, cfg, Driver::Csmi, Some(lambda)))
}

/// NSMIMax is refused: it is a difference of submodular functions with no
/// multiplicative approximation in general.
pub fn nsmi_max<F, G>(
    _f: &F,
    _g: &G,
    _query: &Subset,
    _private: &Subset,
    _lambda: f64,
    _cfg: &OptimizerConfig,
) -> Result<SelectionReport>
where
    F: SetFunction + ?Sized,
    G: SetFunction + ?Sized,
{
    Err(Error::Rejected(
        "NSMIMax maximizes a difference of submodular functions and admits no \
         constant-factor approximation in the worst case; use cg_max (conditional gain) \
         for privacy-preserving summarization instead"
            .into(),
    ))
}

/// `g(A) = I_f(A; Ω \ A) = f(A) + f(Ω \ A) − f(Ω)`.
pub struct SymmetricMi<'a, F: ?Sized> {
    f: &'a F,
    full: f64,
}

impl<'a, F: SetFunction + ?Sized> SymmetricMi<'a, F> {
    pub fn new(f: &'a F) -> Self {
        let full = f.eval(&Subset::full(f.ground_size()));
        Self { f, full }
    }
}

impl<F: SetFunction + ?Sized> SetFunction for SymmetricMi<'_, F> {
    fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    fn eval(&self, a: &Subset) -> f64 {
        (self.f.eval(a) + self.f.eval(&a.complement())) - self.full
    }
}

/// Randomized greedy on `I_f(A; Ω \ A)`.
///
/// When some `f(j)` exceeds one, `f` is rescaled by `1 / max_j f(j)` first;
/// the scale is recorded in the guarantee and `objective_value` is reported
/// in the original units. The slack `k·κ(Â)` uses the symmetric curvature at
/// the returned set, which is indicative only: the bound involves the
/// unknown optimum.
pub fn symmetric_mi_select<F: SetFunction + ?Sized>(
    f: &F,
    cfg: &OptimizerConfig,
) -> Result<SelectionReport> {
    let n = f.ground_size();
    cfg.validate(n)?;
    enforce(f, Properties::POLYMATROID, cfg.guard, "f")?;
    let top = (0..n)
        .map(|j| f.eval(&Subset::singleton(n, j)))
        .fold(0.0, f64::max);
    let scale = if top > 1.0 { 1.0 / top } else { 1.0 };
    let scaled = Scaled::new(f, scale);
    let objective = SymmetricMi::new(&scaled);
    let mut report = run_randomized(&objective, cfg, Driver::SymmetricMi);
    let kappa = symmetric_curvature_at(&scaled, &report.chosen)?;
    report.objective_value = mutual_information(f, &report.chosen, &report.chosen.complement())?;
    report.guarantee = Some(Guarantee {
        kind: GuaranteeKind::OneMinusInvEWithSlack,
        factor: ONE_MINUS_INV_E,
        slack: Some(cfg.budget as f64 * kappa),
        curvature: Some(kappa),
        scale: Some(scale),
        vacuous: false,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{
        CoverageMap, FunctionSpec, GraphCutParams, ModularWeights, SimilarityKernel,
    };
    use crate::set::all_subsets;

    fn facility() -> FunctionSpec {
        FunctionSpec::FacilityLocation(
            SimilarityKernel::new(vec![
                vec![1.0, 0.8, 0.1, 0.0, 0.3],
                vec![0.8, 1.0, 0.2, 0.1, 0.0],
                vec![0.1, 0.2, 1.0, 0.9, 0.4],
                vec![0.0, 0.1, 0.9, 1.0, 0.5],
                vec![0.3, 0.0, 0.4, 0.5, 1.0],
            ])
            .unwrap(),
        )
    }

    #[test]
    fn csmi_reductions_are_exact() {
        let f = facility();
        let g = FunctionSpec::Modular(ModularWeights::new(vec![0.5, 0.1, 0.9, 0.3, 0.7]).unwrap());
        let full = Subset::full(5);
        let p = Subset::from_indices(5, [1, 4]).unwrap();
        let q = Subset::from_indices(5, [0, 2]).unwrap();
        let empty = Subset::empty(5);
        let csmi_q = Objective::csmi(&f, &g, full.clone(), p.clone(), 0.7).unwrap();
        let cg = Objective::cg(&f, &g, p, 0.7).unwrap();
        let csmi_p = Objective::csmi(&f, &g, q.clone(), empty.clone(), 0.7).unwrap();
        let smi = Objective::smi(&f, &g, q, 0.7).unwrap();
        let plain = Objective::csmi(&f, &g, full, empty, 0.0).unwrap();
        for a in all_subsets(5) {
            assert_eq!(csmi_q.eval(&a).to_bits(), cg.eval(&a).to_bits());
            assert_eq!(csmi_p.eval(&a).to_bits(), smi.eval(&a).to_bits());
            assert_eq!(plain.eval(&a).to_bits(), f.eval(&a).to_bits());
        }
    }

    #[test]
    fn smi_with_empty_query_is_diversity_only() {
        let f = facility();
        let g = FunctionSpec::Modular(ModularWeights::new(vec![0.5, 0.1, 0.9, 0.3, 0.7]).unwrap());
        let obj = Objective::smi(&f, &g, Subset::empty(5), 2.0).unwrap();
        for a in all_subsets(5) {
            assert!((obj.eval(&a) - 2.0 * g.eval(&a)).abs() < 1e-12);
        }
    }

    #[test]
    fn cg_with_everything_private_selects_nothing() {
        let f = facility();
        let r = cg_max(&f, &f, &Subset::full(5), 0.0, &OptimizerConfig::new(3)).unwrap();
        assert!(r.chosen.is_empty());
        assert_eq!(r.objective_value, 0.0);
    }

    #[test]
    fn smi_full_query_matches_plain_greedy() {
        let f = facility();
        let cfg = OptimizerConfig::new(3);
        let a = smi_max(&f, &f, &Subset::full(5), 0.0, &cfg).unwrap();
        let b = super::super::greedy_max(&f, &cfg).unwrap();
        assert_eq!(a.chosen, b.chosen);
        assert_eq!(a.objective_value, b.objective_value);
    }

    #[test]
    fn nsmi_is_rejected() {
        let f = facility();
        let s = Subset::empty(5);
        let err = nsmi_max(&f, &f, &s, &s, 1.0, &OptimizerConfig::new(2)).unwrap_err();
        assert!(matches!(err, Error::Rejected(ref m) if m.contains("cg_max")));
    }

    #[test]
    fn truncation_fails_smi_guard() {
        let f = FunctionSpec::Truncation(crate::functions::TruncationRank::new(5, 3).unwrap());
        let err = smi_max(&f, &f, &Subset::full(5), 1.0, &OptimizerConfig::new(2)).unwrap_err();
        assert!(matches!(err, Error::Structural { .. }));
    }

    #[test]
    fn symmetric_mi_on_two_clusters_straddles() {
        let mut rows = vec![vec![0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                if i / 3 == j / 3 {
                    rows[i][j] = 1.0;
                }
            }
        }
        rows[0][3] = 0.5;
        rows[3][0] = 0.5;
        let f = FunctionSpec::GraphCut(GraphCutParams::new(rows, 2.0).unwrap());
        let r = symmetric_mi_select(&f, &OptimizerConfig::new(2).with_seed(3)).unwrap();
        let generic = mutual_information(&f, &r.chosen, &r.chosen.complement()).unwrap();
        assert_eq!(r.objective_value, generic);
        assert!(r.guarantee.unwrap().scale.unwrap() < 1.0);
    }

    #[test]
    fn symmetric_mi_never_returns_full_set() {
        let f = FunctionSpec::SetCover(
            CoverageMap::new(
                vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
                vec![1.0; 4],
            )
            .unwrap(),
        );
        for seed in 0..20 {
            let r = symmetric_mi_select(&f, &OptimizerConfig::new(4).with_seed(seed)).unwrap();
            assert_ne!(r.chosen, Subset::full(4));
        }
    }
}
