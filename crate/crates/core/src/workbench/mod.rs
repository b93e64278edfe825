//! Data generation, output verification and the timing harness.

mod bench;
mod gen;
mod keyfile;
mod verify;

pub use bench::{
    count_inversions, format_summary, median, run_algorithm, run_suite, run_trial, write_csv,
    AlgoRun, Algorithm, BenchError, BenchRecord, RunConfig, SuiteSpec, CSV_HEADER, MEDIAN_TRIAL,
};
pub use gen::{gen_keys, prng_next, GenError, GenSpec, SplitMix64};
pub use keyfile::{read_key_file, write_key_file, KeyFileError};
pub use verify::{verify, Stability, VerifyReport};
