//! Acceptance gate: one PASS/FAIL line per criterion.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subinfo::analysis::{
    brute_force_max, check_pseudo_metric, check_second_order_supermodular, check_submodular,
    curvature, symmetric_curvature_at, ValueTable, Witness,
};
use subinfo::functions::generate::{random_coverage, random_integer_spec, random_spec, FAMILIES};
use subinfo::functions::{closed_form, Component, FunctionSpec, Mixture, TruncationRank};
use subinfo::measures::*;
use subinfo::optimize::*;
use subinfo::oracle::Scaled;
use subinfo::set::all_subsets;
use subinfo::{Error, FnOracle, Measure, SetFunction, Subset};

const TOL: f64 = 1e-9;
const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / std::f64::consts::E;
const RANDOM_CASES: usize = 1000;
const DRIVER_INSTANCES: u64 = 50;
const SYMMETRIC_SEEDS: u64 = 200;
const SYMMETRIC_MEAN_FACTOR: f64 = 0.95;
const METRIC_INSTANCES: u64 = 50;
const THREADS_MANY: &str = "4";

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mask(n: usize, m: u64) -> Subset {
    Subset::from_bits(n, m)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn with_mixture(mut specs: Vec<FunctionSpec>) -> Vec<FunctionSpec> {
    let mix = Mixture::new(
        specs
            .iter()
            .take(3)
            .enumerate()
            .map(|(i, f)| Component {
                weight: 0.5 + i as f64,
                function: f.clone(),
            })
            .collect(),
    )
    .unwrap();
    specs.push(FunctionSpec::Mixture(mix));
    specs
}

fn family_specs(n: usize, seed: u64) -> Vec<FunctionSpec> {
    let mut r = rng(seed);
    with_mixture(
        FAMILIES
            .iter()
            .map(|f| random_spec(f, n, &mut r).unwrap())
            .collect(),
    )
}

// 1. Closed-form and generic paths agree.

fn agree(
    spec: &FunctionSpec,
    req: &MeasureRequest,
    tol: f64,
    compared: &mut u64,
) -> Result<(), String> {
    let generic = evaluate(spec, req).map_err(|e| e.to_string())?;
    match closed_form(spec, req) {
        Ok(c) => {
            *compared += 1;
            ensure((c.value - generic.value).abs() <= tol, || {
                format!(
                    "{} {:?} on {:?}|{:?}: closed {} generic {}",
                    spec.family(),
                    req.measure,
                    req.sets,
                    req.condition,
                    c.value,
                    generic.value
                )
            })
        }
        Err(Error::NoClosedForm { .. }) if req.measure == Measure::MultiMI => Ok(()),
        Err(Error::Precondition { .. }) => {
            let all: Vec<&Subset> = req.sets.iter().chain(req.condition.iter()).collect();
            let disjoint =
                (0..all.len()).all(|i| (i + 1..all.len()).all(|j| all[i].is_disjoint(all[j])));
            ensure(!disjoint, || {
                format!("{}: precondition failed on disjoint sets", spec.family())
            })
        }
        Err(e) => Err(format!("{}: {e}", spec.family())),
    }
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut compared = 0;
    let n = 6;
    let full = 1u64 << n;
    let exact = {
        let mut r = rng(21);
        ["modular", "set_cover", "truncation"]
            .iter()
            .map(|f| random_integer_spec(f, n, &mut r).unwrap())
            .collect::<Vec<_>>()
    };
    for (spec, tol) in family_specs(n, 20)
        .into_iter()
        .map(|s| (s, TOL))
        .chain(exact.into_iter().map(|s| (s, 0.0)))
    {
        for a in 0..full {
            for b in 0..full {
                let pair = vec![mask(n, a), mask(n, b)];
                for m in [
                    Measure::CondGain,
                    Measure::MI,
                    Measure::VarInfo,
                    Measure::MultiMI,
                ] {
                    agree(
                        &spec,
                        &MeasureRequest::new(m, pair.clone()),
                        tol,
                        &mut compared,
                    )?;
                }
                if b < a {
                    continue;
                }
                for c in 0..full {
                    let req =
                        MeasureRequest::new(Measure::CMI, pair.clone()).conditioned_on(mask(n, c));
                    agree(&spec, &req, tol, &mut compared)?;
                    let triple = vec![mask(n, a), mask(n, b), mask(n, c)];
                    agree(
                        &spec,
                        &MeasureRequest::new(Measure::MultiMI, triple),
                        tol,
                        &mut compared,
                    )?;
                }
            }
        }
    }
    let n = 12;
    let mut r = rng(22);
    for family in FAMILIES.iter().chain(std::iter::once(&"mixture")) {
        for _ in 0..RANDOM_CASES {
            let spec = if *family == "mixture" {
                family_specs(n, r.gen()).pop().unwrap()
            } else {
                random_spec(family, n, &mut r).unwrap()
            };
            let mut draw = || mask(n, r.gen_range(0..1u64 << n));
            let (a, b, c, d) = (draw(), draw(), draw(), draw());
            let pair = vec![a.clone(), b.clone()];
            for m in [Measure::CondGain, Measure::MI, Measure::VarInfo] {
                agree(
                    &spec,
                    &MeasureRequest::new(m, pair.clone()),
                    TOL,
                    &mut compared,
                )?;
            }
            agree(
                &spec,
                &MeasureRequest::new(Measure::CMI, pair).conditioned_on(c.clone()),
                TOL,
                &mut compared,
            )?;
            agree(
                &spec,
                &MeasureRequest::new(Measure::MultiMI, vec![a, b, c, d]),
                TOL,
                &mut compared,
            )?;
            if spec.family() == "prob_set_cover" {
                let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..3)).collect();
                let blocks: Vec<Subset> = (0..3)
                    .map(|k| Subset::from_indices(n, (0..n).filter(|&j| labels[j] == k)).unwrap())
                    .collect();
                agree(
                    &spec,
                    &MeasureRequest::new(Measure::MultiMI, blocks.clone()),
                    TOL,
                    &mut compared,
                )?;
                let req = MeasureRequest::new(Measure::CMI, blocks[..2].to_vec())
                    .conditioned_on(blocks[2].clone());
                agree(&spec, &req, TOL, &mut compared)?;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "{compared} closed-form values matched in {secs:.1}s"
    ))
}

// 2. Known values.

fn blocks(sizes: &[usize]) -> (usize, Vec<Subset>) {
    let n: usize = sizes.iter().sum();
    let mut start = 0;
    let sets = sizes
        .iter()
        .map(|&s| {
            start += s;
            Subset::from_indices(n, start - s..start).unwrap()
        })
        .collect();
    (n, sets)
}

fn truncation(n: usize, cap: usize) -> FunctionSpec {
    FunctionSpec::Truncation(TruncationRank::new(n, cap).unwrap())
}

fn criterion_2() -> Outcome {
    for (sizes, cap, expected) in [
        (&[4, 5, 5][..], 10, -4.0),
        (&[4, 4, 4, 4][..], 10, -2.0),
        (&[2, 2, 2, 2, 1][..], 6, 3.0),
    ] {
        let (n, sets) = blocks(sizes);
        let f = truncation(n, cap);
        let v = multiset_mutual_information(&f, &sets).map_err(|e| e.to_string())?;
        ensure(v == expected, || {
            format!("{sizes:?} cap {cap}: {v} != {expected}")
        })?;
    }
    let (n, sets) = blocks(&[2, 2, 2, 2, 1]);
    let smallest = sets
        .iter()
        .map(|s| truncation(n, 6).eval(s))
        .fold(f64::INFINITY, f64::min);
    ensure(smallest == 1.0, || format!("min f(A_i) = {smallest}"))?;
    for k in 1..=5 {
        let (n, sets) = blocks(&[k, k]);
        let d = variation_of_information(&truncation(n, k), &sets[0], &sets[1]).unwrap();
        ensure(d == 0.0, || format!("D_f = {d} for disjoint size-{k} sets"))?;
    }
    for (n, cap) in [(6, 3), (8, 5)] {
        let f = truncation(n, cap);
        let a = Subset::from_indices(n, 0..cap - 1).unwrap();
        let (i, j) = (cap - 1, cap);
        let f2 = f.eval(&a.with(i).with(j)) - f.eval(&a.with(i)) - f.eval(&a.with(j)) + f.eval(&a);
        ensure(f2 == -1.0, || format!("f2 at |A| = c-1 is {f2}"))?;
        let report = check_second_order_supermodular(&f, 16).unwrap();
        match report.witness {
            Some(Witness::ThirdOrder {
                f2_extended,
                ref base,
                ..
            }) if f2_extended == -1.0 && base.len() + 1 == cap - 1 => {}
            other => return Err(format!("unexpected witness {other:?}")),
        }
    }
    Ok("3-way -4, 4-way -2, 5-way 3 > min 1, D_f = 0, f2 = -1".into())
}

// 3. Inequalities and identities.

struct Table {
    t: ValueTable,
    single: Vec<f64>,
}

impl Table {
    fn new(f: &FunctionSpec) -> Self {
        let t = ValueTable::build(f, 16).unwrap();
        let single = (0..t.ground_size()).map(|j| t.get(1 << j)).collect();
        Self { t, single }
    }
    fn f(&self, m: u64) -> f64 {
        self.t.get(m)
    }
    fn cg(&self, a: u64, b: u64) -> f64 {
        self.f(a | b) - self.f(b)
    }
    fn mi(&self, a: u64, b: u64) -> f64 {
        self.f(a) + self.f(b) - self.f(a | b)
    }
    fn cmi(&self, a: u64, b: u64, c: u64) -> f64 {
        self.f(a | c) + self.f(b | c) - self.f(a | b | c) - self.f(c)
    }
    fn multi(&self, sets: &[u64]) -> f64 {
        let k = sets.len();
        (1..1u32 << k)
            .map(|t| {
                let u = (0..k)
                    .filter(|i| t >> i & 1 == 1)
                    .fold(0, |acc, i| acc | sets[i]);
                if t.count_ones() % 2 == 1 {
                    self.f(u)
                } else {
                    -self.f(u)
                }
            })
            .sum()
    }
    fn tc(&self, sets: &[u64]) -> f64 {
        sets.iter().map(|&s| self.f(s)).sum::<f64>() - self.f(sets.iter().fold(0, |a, s| a | s))
    }
    fn bits(m: u64) -> impl Iterator<Item = usize> {
        (0..64).filter(move |j| m >> j & 1 == 1)
    }
    fn kappa(&self, a: u64) -> f64 {
        Self::bits(a)
            .filter(|&j| self.single[j] != 0.0)
            .map(|j| 1.0 - self.cg(1 << j, a & !(1 << j)) / self.single[j])
            .fold(0.0, f64::max)
    }
}

fn bounds_exhaustive(f: &FunctionSpec) -> Result<(), String> {
    let t = Table::new(f);
    let n = t.t.ground_size();
    let full = (1u64 << n) - 1;
    let fam = f.family();
    for a in 0..=full {
        for b in 0..=full {
            let i = t.mi(a, b);
            ensure(
                i <= t.f(a).min(t.f(b)) + TOL && i >= t.f(a & b) - TOL,
                || format!("{fam}: MI bounds"),
            )?;
            let lower = t.f(a) - Table::bits(a & !b).map(|j| t.cg(1 << j, b)).sum::<f64>();
            let upper = t.f(a)
                - Table::bits(a & !b)
                    .map(|j| t.cg(1 << j, full & !(1 << j)))
                    .sum::<f64>();
            ensure(
                lower <= i + TOL && i <= upper + TOL && upper <= t.f(a) + TOL,
                || format!("{fam}: modular bounds"),
            )?;
            let k = 1.0 - t.kappa(a | b);
            let sh = t.f(a ^ b);
            let sha = t.f(a & !b) + t.f(b & !a);
            let d = t.cg(a, b) + t.cg(b, a);
            ensure(
                k * sh <= k * sha + TOL && k * sha <= d + TOL && d <= sh + TOL && sh <= sha + TOL,
                || format!("{fam}: Hamming sandwich at {a:b}, {b:b}"),
            )?;
            if b < a {
                continue;
            }
            for c in b..=full {
                for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                    let ci = t.cmi(x, y, z);
                    ensure(
                        ci <= t.cg(x, z).min(t.cg(y, z)) + TOL && ci >= t.cg(x & y, z) - TOL,
                        || format!("{fam}: CMI bounds"),
                    )?;
                }
                let tc = t.tc(&[a, b, c]);
                ensure(tc >= -TOL, || format!("{fam}: negative total correlation"))?;
                for x in 0..n {
                    for grown in [[a | 1 << x, b, c], [a, b | 1 << x, c], [a, b, c | 1 << x]] {
                        ensure(t.tc(&grown) >= tc - TOL, || {
                            format!("{fam}: total correlation shrank")
                        })?;
                    }
                }
                let m3 = t.multi(&[a, b, c]);
                ensure(m3 <= t.f(a).min(t.f(b)).min(t.f(c)) + TOL, || {
                    format!("{fam}: 3-way upper bound")
                })?;
                for d in 1..=full {
                    ensure(t.multi(&[a | d, b | d, c | d]) >= m3 - TOL, || {
                        format!("{fam}: common-set monotonicity")
                    })?;
                }
                for d in c..=full {
                    let m4 = t.multi(&[a, b, c, d]);
                    let bound = t.f(a).min(t.f(b)).min(t.f(c)).min(t.f(d));
                    ensure(m4 <= bound + TOL, || format!("{fam}: 4-way upper bound"))?;
                }
            }
        }
    }
    let pm = check_pseudo_metric(f, 8).unwrap();
    ensure(pm.holds(), || {
        format!("{fam}: pseudo-metric {:?}", pm.witness)
    })
}

fn bounds_on(f: &FunctionSpec, s: &[Subset]) -> Result<(), String> {
    let fam = f.family();
    let n = f.ground_size();
    let (a, b, c, d) = (&s[0], &s[1], &s[2], &s[3]);
    let e = |x: subinfo::Result<f64>| x.unwrap();
    let (fa, fb, fc, fd) = (f.eval(a), f.eval(b), f.eval(c), f.eval(d));
    let i = e(mutual_information(f, a, b));
    ensure(
        i <= fa.min(fb) + TOL && i >= f.eval(&a.intersection(b)) - TOL,
        || format!("{fam}: MI bounds"),
    )?;
    let ci = e(conditional_mutual_information(f, a, b, c));
    let (gac, gbc) = (e(conditional_gain(f, a, c)), e(conditional_gain(f, b, c)));
    let gabc = e(conditional_gain(f, &a.intersection(b), c));
    ensure(ci <= gac.min(gbc) + TOL && ci >= gabc - TOL, || {
        format!("{fam}: CMI bounds")
    })?;
    let full = Subset::full(n);
    let out = a.difference(b);
    let lower = fa - out.iter().map(|j| f.gain(j, b)).sum::<f64>();
    let upper = fa - out.iter().map(|j| f.gain(j, &full.without(j))).sum::<f64>();
    ensure(
        lower <= i + TOL && i <= upper + TOL && upper <= fa + TOL,
        || format!("{fam}: modular bounds"),
    )?;
    let three = [a.clone(), b.clone(), c.clone()];
    let tc = e(total_correlation(f, &three));
    let grown = [a.union(d), b.clone(), c.clone()];
    ensure(
        tc >= -TOL && e(total_correlation(f, &grown)) >= tc - TOL,
        || format!("{fam}: total correlation"),
    )?;
    let m3 = e(multiset_mutual_information(f, &three));
    let lifted: Vec<Subset> = three.iter().map(|x| x.union(d)).collect();
    ensure(
        e(multiset_mutual_information(f, &lifted)) >= m3 - TOL,
        || format!("{fam}: common-set monotonicity"),
    )?;
    ensure(m3 <= fa.min(fb).min(fc) + TOL, || {
        format!("{fam}: 3-way upper bound")
    })?;
    let m4 = e(multiset_mutual_information(
        f,
        &[a.clone(), b.clone(), c.clone(), d.clone()],
    ));
    ensure(m4 <= fa.min(fb).min(fc).min(fd) + TOL, || {
        format!("{fam}: 4-way upper bound")
    })?;
    let dist = |x: &Subset, y: &Subset| e(variation_of_information(f, x, y));
    let dab = dist(a, b);
    ensure(
        dist(a, a).abs() <= TOL
            && dab >= -TOL
            && (dab - dist(b, a)).abs() <= TOL
            && dab <= dist(a, c) + dist(c, b) + TOL,
        || format!("{fam}: pseudo-metric axioms"),
    )?;
    let k = 1.0 - e(subinfo::analysis::curvature_at(f, &a.union(b)));
    let sh = e(hamming_metric(f, a, b));
    let sha = e(additive_hamming_metric(f, a, b));
    ensure(
        k * sh <= k * sha + TOL && k * sha <= dab + TOL && dab <= sh + TOL && sh <= sha + TOL,
        || format!("{fam}: Hamming sandwich"),
    )
}

fn criterion_3() -> Outcome {
    let mut exhaustive = 0;
    for n in [4, 6] {
        for f in family_specs(n, 30 + n as u64) {
            bounds_exhaustive(&f)?;
            exhaustive += 1;
        }
    }
    let mut r = rng(31);
    for _ in 0..RANDOM_CASES {
        let n = r.gen_range(2..=10);
        let f = random_spec(FAMILIES[r.gen_range(0..FAMILIES.len())], n, &mut r).unwrap();
        let sets: Vec<Subset> = (0..4).map(|_| mask(n, r.gen_range(0..1u64 << n))).collect();
        bounds_on(&f, &sets)?;
    }
    Ok(format!(
        "{exhaustive} functions exhaustively, {RANDOM_CASES} random instances"
    ))
}

// 4. Second-order supermodularity iff I_f(.; B) is submodular for every B.

fn mi_submodular_for_all(f: &FunctionSpec) -> bool {
    let n = f.ground_size();
    (0..1u64 << n).all(|b| {
        let b = mask(n, b);
        let g = FnOracle::new(n, |a: &Subset| mutual_information(f, a, &b).unwrap());
        check_submodular(&g, 16).unwrap().holds()
    })
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for n in [4, 5, 6] {
        let mut r = rng(40 + n as u64);
        for family in ["facility_location", "set_cover", "concave_power"] {
            for _ in 0..3 {
                let f = random_spec(family, n, &mut r).unwrap();
                let sos = check_second_order_supermodular(&f, 16).unwrap().holds();
                ensure(sos, || {
                    format!("{family} n={n} is not second-order supermodular")
                })?;
                ensure(mi_submodular_for_all(&f), || {
                    format!("{family} n={n}: MI not submodular")
                })?;
                checked += 1;
            }
        }
        for cap in 2..n {
            let f = truncation(n, cap);
            let report = check_second_order_supermodular(&f, 16).unwrap();
            let w = report.witness.clone().ok_or("truncation passed")?;
            ensure(!report.holds() && w.reproduces(&f, TOL), || {
                format!("truncation cap {cap}: bad witness")
            })?;
            ensure(!mi_submodular_for_all(&f), || {
                format!("truncation cap {cap}: MI submodular")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} functions agree in both directions"))
}

// 5. Composite drivers against brute force.

fn criterion_5() -> Outcome {
    const SOS: [&str; 5] = [
        "facility_location",
        "set_cover",
        "concave_power",
        "prob_set_cover",
        "graph_cut",
    ];
    let mut worst = f64::INFINITY;
    for seed in 0..DRIVER_INSTANCES {
        let mut r = rng(500 + seed);
        let n = r.gen_range(6..=10);
        let k = r.gen_range(1..=4);
        let f = random_spec(SOS[seed as usize % SOS.len()], n, &mut r).unwrap();
        let g = random_spec(SOS[(seed as usize + 1) % SOS.len()], n, &mut r).unwrap();
        let q = mask(n, r.gen_range(0..1u64 << n));
        let p = mask(n, r.gen_range(0..1u64 << n));
        let lambda = r.gen_range(0.0..1.0);
        let cfg = OptimizerConfig::new(k).with_seed(seed);
        let runs = [
            (
                smi_max(&f, &g, &q, lambda, &cfg),
                Objective::smi(&f, &g, q.clone(), lambda).unwrap(),
            ),
            (
                cg_max(&f, &g, &p, lambda, &cfg),
                Objective::cg(&f, &g, p.clone(), lambda).unwrap(),
            ),
            (
                csmi_max(&f, &g, &q, &p, lambda, &cfg),
                Objective::csmi(&f, &g, q.clone(), p.clone(), lambda).unwrap(),
            ),
        ];
        for (report, objective) in runs {
            let report = report.map_err(|e| format!("seed {seed}: {e}"))?;
            let (_, opt) = brute_force_max(&objective, k).unwrap();
            ensure(
                report.objective_value >= ONE_MINUS_INV_E * opt - TOL,
                || {
                    format!(
                        "seed {seed} {:?}: {} < (1-1/e)·{opt}",
                        report.driver, report.objective_value
                    )
                },
            )?;
            if opt > 0.0 {
                worst = worst.min(report.objective_value / opt);
            }
        }
    }
    let n = 8;
    for seed in 0..10 {
        let mut r = rng(600 + seed);
        let f = random_spec(SOS[seed as usize % SOS.len()], n, &mut r).unwrap();
        let g = random_spec("facility_location", n, &mut r).unwrap();
        let q = mask(n, r.gen_range(0..1u64 << n));
        let p = mask(n, r.gen_range(0..1u64 << n));
        let lambda = r.gen_range(0.0..1.0);
        let to_cg = Objective::csmi(&f, &g, Subset::full(n), p.clone(), lambda).unwrap();
        let cg = Objective::cg(&f, &g, p, lambda).unwrap();
        let to_smi = Objective::csmi(&f, &g, q.clone(), Subset::empty(n), lambda).unwrap();
        let smi = Objective::smi(&f, &g, q, lambda).unwrap();
        for a in all_subsets(n) {
            ensure(
                to_cg.eval(&a) == cg.eval(&a) && to_smi.eval(&a) == smi.eval(&a),
                || format!("reduction mismatch at {a:?}"),
            )?;
        }
    }
    Ok(format!(
        "{} runs, worst ratio {worst:.4}; reductions exact at n=8",
        3 * DRIVER_INSTANCES
    ))
}

// 6. Symmetric MI by randomized greedy.

fn criterion_6() -> Outcome {
    let (n, k) = (10, 3);
    let mut worst_mean = f64::INFINITY;
    for (i, family) in [
        "facility_location",
        "set_cover",
        "prob_set_cover",
        "concave_power",
        "graph_cut",
    ]
    .iter()
    .enumerate()
    {
        let f = random_spec(family, n, &mut rng(700 + i as u64)).unwrap();
        let top = (0..n)
            .map(|j| f.eval(&Subset::singleton(n, j)))
            .fold(0.0, f64::max);
        let scale = if top > 1.0 { 1.0 / top } else { 1.0 };
        let scaled = Scaled::new(&f, scale);
        let objective = SymmetricMi::new(&scaled);
        let (a_star, opt) = brute_force_max(&objective, k).unwrap();
        let bound =
            ONE_MINUS_INV_E * (opt - k as f64 * symmetric_curvature_at(&scaled, &a_star).unwrap());
        let mut total = 0.0;
        let mut best = f64::NEG_INFINITY;
        for seed in 0..SYMMETRIC_SEEDS {
            let r = symmetric_mi_select(&f, &OptimizerConfig::new(k).with_seed(seed))
                .map_err(|e| e.to_string())?;
            let v = r.objective_value * scale;
            total += v;
            best = best.max(v);
        }
        let mean = total / SYMMETRIC_SEEDS as f64;
        ensure(
            mean >= SYMMETRIC_MEAN_FACTOR * opt / std::f64::consts::E - TOL,
            || format!("{family}: mean {mean} < 0.95·{opt}/e"),
        )?;
        ensure(best >= bound - TOL, || {
            format!("{family}: best {best} below bound {bound}")
        })?;
        if opt > 0.0 {
            worst_mean = worst_mean.min(mean / opt);
        }
    }
    Ok(format!(
        "5 families × {SYMMETRIC_SEEDS} seeds, worst mean/OPT {worst_mean:.4}"
    ))
}

// 7. Metric-sum minimization via the additive surrogate.

fn criterion_7() -> Outcome {
    let n = 8;
    let mut binding = 0;
    for seed in 0..METRIC_INSTANCES {
        let mut r = rng(800 + seed);
        let (concepts, mult) = if seed % 2 == 0 { (6, 1) } else { (10, 2) };
        let f = FunctionSpec::SetCover(random_coverage(n, concepts, mult, &mut r).unwrap());
        let anchors: Vec<Subset> = (0..3).map(|_| mask(n, r.gen_range(0..1u64 << n))).collect();
        let exact =
            minimize_metric_sum(&f, &anchors, MetricMode::Exact).map_err(|e| e.to_string())?;
        let surrogate =
            minimize_metric_sum(&f, &anchors, MetricMode::Surrogate).map_err(|e| e.to_string())?;
        let kappa = match curvature(&f) {
            Ok(c) => c.kappa_global,
            Err(_) => continue,
        };
        if kappa < 1.0 {
            binding += 1;
            let limit = exact.objective_value / (1.0 - kappa) + TOL;
            ensure(surrogate.objective_value <= limit, || {
                format!(
                    "seed {seed}: {} > {limit} (κ = {kappa})",
                    surrogate.objective_value
                )
            })?;
        }
    }
    ensure(binding > 0, || "no instance had κ < 1".into())?;
    Ok(format!(
        "{binding}/{METRIC_INSTANCES} instances with κ < 1 within bound"
    ))
}

// 8. Byte-identical CLI reports across runs and thread counts.

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

fn cli(args: &[&str], threads: &str) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_subinfo"))
        .args(args)
        .env("SUBINFO_THREADS", threads)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let stable = text
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"duration_ms\""))
        .collect::<Vec<_>>()
        .join("\n");
    (out.status.code().unwrap_or(-1), stable)
}

fn criterion_8() -> Outcome {
    let mut runs = 0;
    for path in fixtures() {
        let p = path.to_str().unwrap();
        for extra in [&[][..], &["--both"][..], &["--seed-override", "12345"][..]] {
            let mut args = vec!["run", p];
            args.extend_from_slice(extra);
            let first = cli(&args, "1");
            for threads in ["1", THREADS_MANY] {
                let again = cli(&args, threads);
                ensure(again == first, || {
                    format!("{p} {extra:?} differs with {threads} threads")
                })?;
                runs += 1;
            }
        }
    }
    for kind in [
        &["kernel"][..],
        &["coverage", "--multiplicity", "3"][..],
        &["prob-cover"][..],
    ] {
        let mut args = vec!["generate"];
        args.extend_from_slice(kind);
        args.extend_from_slice(&["--n", "7", "--seed", "3"]);
        ensure(cli(&args, "1") == cli(&args, THREADS_MANY), || {
            format!("generate {kind:?} differs")
        })?;
    }
    Ok(format!("{runs} repeated runs identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("closed-form/generic equivalence", criterion_1),
        ("known values", criterion_2),
        ("inequalities and identities", criterion_3),
        ("second-order supermodularity equivalence", criterion_4),
        ("optimizer ratios and reductions", criterion_5),
        ("symmetric-MI selection", criterion_6),
        ("metric minimization bound", criterion_7),
        ("CLI determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
