//! # subinfo
//!
//! Combinatorial information measures over submodular set functions.
//!
//! Given a set function `f: 2^Ω → ℝ` the crate computes
//!
//! | Measure | Definition |
//! |---------|------------|
//! | conditional gain | `f(A|B) = f(A ∪ B) − f(B)` |
//! | mutual information | `I_f(A;B) = f(A) + f(B) − f(A ∪ B)` |
//! | conditional MI | `I_f(A;B|C) = f(A ∪ C) + f(B ∪ C) − f(A ∪ B ∪ C) − f(C)` |
//! | multi-set MI | `−Σ_{T ⊆ [k]} (−1)^{|T|} f(∪_{i∈T} A_i)` |
//! | total correlation | `Σ_i f(A_i) − f(∪_i A_i)` |
//! | variation of information | `D_f(A,B) = f(A|B) + f(B|A)` |
//!
//! Measures are available generically over any [`SetFunction`] and, for the
//! shipped families in [`functions`], through closed forms that avoid the
//! inclusion–exclusion blowup.
//!
//! The [`analysis`] module certifies or refutes structural claims
//! (monotonicity, submodularity, second-order supermodularity) exhaustively at
//! desk scale and computes curvature. [`optimize`] holds the greedy drivers for
//! summarization, partitioning and metric-sum minimization.

pub mod analysis;
mod error;
pub mod functions;
pub mod measures;
pub mod optimize;
pub mod oracle;
pub mod set;

pub use error::{Error, Result};
pub use measures::{Measure, MeasureResult, Path};
pub use oracle::{FnOracle, Memoized, Properties, SetFunction};
pub use set::{GroundSet, Subset};

/// Absolute tolerance used by every property check in the crate.
pub const TOLERANCE: f64 = 1e-9;
