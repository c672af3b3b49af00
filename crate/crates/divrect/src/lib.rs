//! Threaded execution, benchmark harness and result files on top of
//! [`divrect_core`].

pub mod bench;
pub mod error;
pub mod exec;

pub use divrect_core;
pub use error::{Error, Result};
pub use exec::{default_workers, run, MonotonicClock, ThreadExecutor, WORKERS_ENV};
