#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subinfo::functions::generate::{random_integer_spec, random_spec, FAMILIES};
use subinfo::functions::{Component, FunctionSpec, Mixture};
use subinfo::Subset;

pub const TOL: f64 = 1e-9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn set(n: usize, idx: &[usize]) -> Subset {
    Subset::from_indices(n, idx.iter().copied()).unwrap()
}

pub fn mask(n: usize, bits: u64) -> Subset {
    Subset::from_bits(n, bits)
}

/// One member of each family plus a mixture of the first three.
pub fn specs(n: usize, seed: u64) -> Vec<FunctionSpec> {
    let mut r = rng(seed);
    let mut out: Vec<FunctionSpec> = FAMILIES
        .iter()
        .map(|f| random_spec(f, n, &mut r).unwrap())
        .collect();
    let mix = Mixture::new(
        out.iter()
            .take(3)
            .enumerate()
            .map(|(i, f)| Component {
                weight: 0.5 + i as f64,
                function: f.clone(),
            })
            .collect(),
    )
    .unwrap();
    out.push(FunctionSpec::Mixture(mix));
    out
}

pub fn integer_specs(n: usize, seed: u64) -> Vec<FunctionSpec> {
    let mut r = rng(seed);
    ["modular", "set_cover", "truncation"]
        .iter()
        .map(|f| random_integer_spec(f, n, &mut r).unwrap())
        .collect()
}

pub fn random_subset(n: usize, r: &mut ChaCha8Rng) -> Subset {
    use rand::Rng;
    Subset::from_bits(n, r.gen_range(0..1u64 << n))
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
