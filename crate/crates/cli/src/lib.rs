//! Driver for `farey-core`: the `farey-lab` command line, a resumable JSONL
//! result cache, and a worker pool for scanning ranges of orders.

pub mod cache;
pub mod commands;
pub mod run;

pub use cache::{CacheError, CacheRecord, ScanCache, TOOL_VERSION};
pub use commands::{run_cli, RunConfig, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
