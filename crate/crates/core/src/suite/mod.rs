//! Suites of checks: family expressions, the checker registry, reports and
//! theorem verification.

pub mod expr;
pub mod registry;
pub mod report;
pub mod spec;
pub mod theorem;

pub use registry::{registry, run_check, CheckerInfo, Context};
pub use report::{records_csv, rows_csv, search_csv, theorem_csv, Record, Report, Status, Summary};
pub use spec::{resolve_suite, run_suite, Overrides, SuiteSpec};
pub use theorem::{verify_theorem, Regime, TheoremId, TheoremReport, TheoremStatus};
