//! Ground sets and subsets.
//!
//! A [`Subset`] is a bitmask over `[0, n)`. Ground sets with `n ≤ 64` fit in a
//! single inline word; larger ground sets spill into a fixed-width vector of
//! words. All binary set operations require both operands to share the same
//! ground-set size and panic otherwise; the fallible measure entry points
//! validate sizes up front and report [`Error::GroundSetMismatch`].

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// The finite universe Ω.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid(
                "ground set must contain at least one element",
            ));
        }
        Ok(Self { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let size = labels.len();
        if size == 0 {
            return Err(Error::invalid(
                "ground set must contain at least one element",
            ));
        }
        let distinct: HashSet<&str> = labels.iter().map(String::as_str).collect();
        if distinct.len() != size {
            return Err(Error::invalid("ground set labels must be distinct"));
        }
        Ok(Self {
            size,
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Re-checks the invariants; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::invalid(
                "ground set must contain at least one element",
            ));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.size {
                return Err(Error::invalid(format!(
                    "ground set has {} elements but {} labels",
                    self.size,
                    labels.len()
                )));
            }
            let distinct: HashSet<&str> = labels.iter().map(String::as_str).collect();
            if distinct.len() != self.size {
                return Err(Error::invalid("ground set labels must be distinct"));
            }
        }
        Ok(())
    }

    pub fn empty(&self) -> Subset {
        Subset::empty(self.size)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }
}

type Words = SmallVec<[u64; 1]>;

fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Membership bitmask over a ground set of size `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    n: usize,
    words: Words,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            words: SmallVec::from_elem(0, words_for(n)),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * 64;
            let hi = (lo + 64).min(n);
            if hi > lo {
                *word = low_bits(hi - lo);
            }
        }
        s
    }

    pub fn singleton(n: usize, j: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(j);
        s
    }

    /// Builds a subset from element indices; duplicates are ignored.
    pub fn from_indices<I>(n: usize, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(n);
        for j in indices {
            if j >= n {
                return Err(Error::invalid(format!(
                    "element index {j} out of range for ground set of size {n}"
                )));
            }
            s.insert(j);
        }
        Ok(s)
    }

    /// Builds a subset from a single-word mask. Requires `n ≤ 64`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(
            n <= 64,
            "from_bits needs a ground set of at most 64 elements"
        );
        debug_assert!(n == 64 || bits >> n == 0, "mask has bits beyond n");
        let mut words = Words::new();
        words.push(bits);
        Self { n, words }
    }

    /// The single-word mask, when `n ≤ 64`.
    pub fn bits(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.words[0])
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, j: usize) -> bool {
        j < self.n && self.words[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn insert(&mut self, j: usize) {
        assert!(
            j < self.n,
            "element {j} outside ground set of size {}",
            self.n
        );
        self.words[j / 64] |= 1 << (j % 64);
    }

    pub fn remove(&mut self, j: usize) {
        assert!(
            j < self.n,
            "element {j} outside ground set of size {}",
            self.n
        );
        self.words[j / 64] &= !(1 << (j % 64));
    }

    pub fn with(&self, j: usize) -> Self {
        let mut s = self.clone();
        s.insert(j);
        s
    }

    pub fn without(&self, j: usize) -> Self {
        let mut s = self.clone();
        s.remove(j);
        s
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Elements<'_> {
        Elements {
            words: &self.words,
            word: 0,
            current: self.words[0],
        }
    }

    /// Sorted element indices.
    pub fn to_indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn same_ground(&self, other: &Self) {
        assert_eq!(
            self.n, other.n,
            "set operation across ground sets of different sizes"
        );
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        self.same_ground(other);
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(&a, &b)| op(a, b))
            .collect();
        Self { n: self.n, words }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Self {
        Self::full(self.n).difference(self)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.same_ground(other);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.same_ground(other);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.same_ground(other);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & b == 0)
    }
}

fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Subsets order by their value as a binary number (element `n−1` is the
/// most significant bit).
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}/{}", self.n)
    }
}

/// Iterator over the members of a [`Subset`] in ascending order.
pub struct Elements<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Elements<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word];
        }
    }
}

// Subsets travel as sorted index arrays; the ground-set size comes from context.
impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Deserialized subsets carry a provisional ground-set size of
/// `max index + 1`; callers re-anchor them with [`Subset::resized`].
impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        let n = indices.iter().max().map_or(1, |m| m + 1);
        Subset::from_indices(n, indices).map_err(serde::de::Error::custom)
    }
}

impl Subset {
    /// Moves the subset into a ground set of size `n`.
    pub fn resized(&self, n: usize) -> Result<Self> {
        Subset::from_indices(n, self.iter())
    }
}

/// All `2^n` subsets in ascending mask order. Requires `n ≤ 63`.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    assert!(n < 64, "exhaustive enumeration needs n < 64");
    (0..1u64 << n).map(move |m| Subset::from_bits(n, m))
}
