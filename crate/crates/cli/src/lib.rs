//! Batch front end for `subinfo`: reads one instance document, runs its task
//! and emits a JSON report.
//!
//! Exit codes: 0 success (a violated property is still a success), 1 parse
//! or validation error, 2 structural guard or refused problem, 3 closed-form
//! and generic paths disagree under `--both`, 4 resource limit.

mod error;
pub mod generate;
pub mod instance;
pub mod report;
mod run;

pub use error::{CliError, EXIT_DISAGREEMENT, EXIT_INVALID, EXIT_OK, EXIT_REJECTED, EXIT_RESOURCE};
pub use instance::{parse, Instance, Task};
pub use report::{Report, TaskResult};
pub use run::{run, Outcome, PathMode, RunOptions, CROSS_CHECK_TOLERANCE};

/// Environment variable holding the worker-thread count; 0 or unset means
/// one per core.
pub const THREADS_ENV: &str = "SUBINFO_THREADS";
