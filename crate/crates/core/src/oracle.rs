//! The set-function oracle contract.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use lru::LruCache;
use serde::{Deserialize, Serialize};

use crate::set::Subset;

/// Structural properties a provider *claims* for its function.
///
/// Claims are never trusted by optimizers unless the guard mode says so; the
/// [`analysis`](crate::analysis) checkers verify them at desk scale.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Properties {
    pub normalized: bool,
    pub monotone: bool,
    pub submodular: bool,
    pub second_order_supermodular: bool,
}

impl Properties {
    pub const NONE: Properties = Properties {
        normalized: false,
        monotone: false,
        submodular: false,
        second_order_supermodular: false,
    };

    /// Normalized, monotone and submodular.
    pub const POLYMATROID: Properties = Properties {
        normalized: true,
        monotone: true,
        submodular: true,
        second_order_supermodular: false,
    };

    pub fn with_second_order(mut self, yes: bool) -> Self {
        self.second_order_supermodular = yes;
        self
    }
}

/// A set function `f: 2^Ω → ℝ`.
///
/// `eval` must be deterministic: evaluating the same subset twice returns
/// bit-identical values.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;

    fn eval(&self, set: &Subset) -> f64;

    /// Marginal gain `f(j | set)`.
    fn gain(&self, j: usize, set: &Subset) -> f64 {
        if set.contains(j) {
            return 0.0;
        }
        self.eval(&set.with(j)) - self.eval(set)
    }

    fn properties(&self) -> Properties {
        Properties::NONE
    }
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        (**self).eval(set)
    }
    fn gain(&self, j: usize, set: &Subset) -> f64 {
        (**self).gain(j, set)
    }
    fn properties(&self) -> Properties {
        (**self).properties()
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Box<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        (**self).eval(set)
    }
    fn gain(&self, j: usize, set: &Subset) -> f64 {
        (**self).gain(j, set)
    }
    fn properties(&self) -> Properties {
        (**self).properties()
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Arc<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        (**self).eval(set)
    }
    fn gain(&self, j: usize, set: &Subset) -> f64 {
        (**self).gain(j, set)
    }
    fn properties(&self) -> Properties {
        (**self).properties()
    }
}

/// A user-supplied closure as an oracle.
pub struct FnOracle<G> {
    n: usize,
    func: G,
    props: Properties,
}

impl<G> FnOracle<G>
where
    G: Fn(&Subset) -> f64 + Send + Sync,
{
    pub fn new(n: usize, func: G) -> Self {
        Self {
            n,
            func,
            props: Properties::NONE,
        }
    }

    pub fn with_properties(mut self, props: Properties) -> Self {
        self.props = props;
        self
    }
}

impl<G> SetFunction for FnOracle<G>
where
    G: Fn(&Subset) -> f64 + Send + Sync,
{
    fn ground_size(&self) -> usize {
        self.n
    }
    fn eval(&self, set: &Subset) -> f64 {
        (self.func)(set)
    }
    fn properties(&self) -> Properties {
        self.props
    }
}

pub const DEFAULT_CACHE_CAPACITY: usize = 1 << 20;

/// LRU memo of full-set evaluations keyed by subset.
pub struct Memoized<F> {
    inner: F,
    cache: Mutex<LruCache<Subset, f64>>,
    misses: AtomicU64,
}

impl<F: SetFunction> Memoized<F> {
    pub fn new(inner: F) -> Self {
        Self::with_capacity(inner, DEFAULT_CACHE_CAPACITY)
    }

    pub fn with_capacity(inner: F, capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity).unwrap_or(NonZeroUsize::MIN);
        Self {
            inner,
            cache: Mutex::new(LruCache::new(cap)),
            misses: AtomicU64::new(0),
        }
    }

    /// Number of evaluations forwarded to the wrapped oracle.
    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: SetFunction> SetFunction for Memoized<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn eval(&self, set: &Subset) -> f64 {
        if let Some(&v) = self.cache.lock().expect("memo lock").get(set) {
            return v;
        }
        // Evaluate outside the lock; a racing duplicate computes the same value.
        let v = self.inner.eval(set);
        self.misses.fetch_add(1, Ordering::Relaxed);
        self.cache.lock().expect("memo lock").put(set.clone(), v);
        v
    }

    fn properties(&self) -> Properties {
        self.inner.properties()
    }
}

/// Counts every call to `eval`.
pub struct Counting<F> {
    inner: F,
    calls: AtomicU64,
}

impl<F: SetFunction> Counting<F> {
    pub fn new(inner: F) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<F: SetFunction> SetFunction for Counting<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.eval(set)
    }
    fn properties(&self) -> Properties {
        self.inner.properties()
    }
}

/// `g(X) = f(X | C) = f(X ∪ C) − f(C)`.
///
/// Conditioning preserves normalization, monotonicity, submodularity and
/// second-order supermodularity, so the claimed flags carry over.
pub struct Conditioned<F> {
    inner: F,
    condition: Subset,
    base: f64,
}

impl<F: SetFunction> Conditioned<F> {
    pub fn new(inner: F, condition: Subset) -> Self {
        let base = inner.eval(&condition);
        Self {
            inner,
            condition,
            base,
        }
    }

    pub fn condition(&self) -> &Subset {
        &self.condition
    }
}

impl<F: SetFunction> SetFunction for Conditioned<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        self.inner.eval(&set.union(&self.condition)) - self.base
    }
    fn properties(&self) -> Properties {
        let mut p = self.inner.properties();
        p.normalized = true;
        p
    }
}

/// `c · f` for a positive constant `c`.
pub struct Scaled<F> {
    inner: F,
    factor: f64,
}

impl<F: SetFunction> Scaled<F> {
    pub fn new(inner: F, factor: f64) -> Self {
        Self { inner, factor }
    }
}

impl<F: SetFunction> SetFunction for Scaled<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        self.factor * self.inner.eval(set)
    }
    fn properties(&self) -> Properties {
        self.inner.properties()
    }
}
