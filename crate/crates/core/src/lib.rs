//! Hybrid quicksort / merge sort for shared memory, message passing and
//! cluster-style execution.
//!
//! The crate is organised bottom-up:
//!
//! * [`seq`] holds the sequential kernels (recursive merge sort, bottom-up
//!   merge sort, quicksort) and the stable two-run merge every parallel model
//!   reuses.
//! * [`shm`] partitions a buffer over a power-of-two number of workers, sorts
//!   each partition locally and merges the runs pairwise in a binary tree.
//! * [`transport`] is a small message-passing layer with an in-process and a
//!   TCP loopback implementation sharing one wire format.
//! * [`dist`] builds the two distributed sorts on top of it: the scattered
//!   hybrid sort with a message-driven tree merge, and the cluster sort that
//!   splits keys by their most significant decimal digit.
//! * [`workbench`] generates deterministic data, verifies outputs and times
//!   algorithms into CSV speedup tables.
//!
//! With the default `parallel` feature the shared-memory workers run on
//! rayon thread pools; without it every worker phase runs on the caller.

pub mod dist;
mod exec;
mod item;
pub mod seq;
pub mod shm;
pub mod transport;
pub mod workbench;

pub use item::{keys_of, Key, Keyed, SortItem};
pub use workbench::Algorithm;

/// True when the crate was built with rayon-backed workers.
pub fn parallel_enabled() -> bool {
    exec::PARALLEL
}
