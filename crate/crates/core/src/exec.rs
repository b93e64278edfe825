//! Worker execution for the shared-memory phases.
//!
//! With the `parallel` feature each worker count gets its own rayon pool of
//! exactly that many threads. Pools are cached per `(workers, lane)` so
//! repeated trials reuse parked threads, and independent callers (one per
//! simulated cluster node) can ask for separate lanes. Returning from
//! [`run_tasks`] is the barrier between phases.

#[cfg(feature = "parallel")]
mod imp {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};

    use rayon::prelude::*;
    use rayon::{ThreadPool, ThreadPoolBuilder};

    type PoolKey = (usize, usize);

    fn pools() -> &'static Mutex<HashMap<PoolKey, Arc<ThreadPool>>> {
        static POOLS: OnceLock<Mutex<HashMap<PoolKey, Arc<ThreadPool>>>> = OnceLock::new();
        POOLS.get_or_init(Default::default)
    }

    fn pool(workers: usize, lane: usize) -> Arc<ThreadPool> {
        let mut pools = pools().lock().unwrap_or_else(|e| e.into_inner());
        pools
            .entry((workers, lane))
            .or_insert_with(|| {
                let pool = ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(move |i| format!("parsort-l{lane}-w{i}"))
                    .build()
                    .expect("failed to start worker pool");
                Arc::new(pool)
            })
            .clone()
    }

    pub(crate) fn run_tasks<I, F>(workers: usize, lane: usize, tasks: Vec<I>, f: F)
    where
        I: Send,
        F: Fn(I) + Send + Sync,
    {
        if workers <= 1 || tasks.len() <= 1 {
            tasks.into_iter().for_each(f);
            return;
        }
        pool(workers, lane).install(|| tasks.into_par_iter().for_each(f));
    }

    pub(crate) const PARALLEL: bool = true;
}

#[cfg(not(feature = "parallel"))]
mod imp {
    pub(crate) fn run_tasks<I, F>(_workers: usize, _lane: usize, tasks: Vec<I>, f: F)
    where
        I: Send,
        F: Fn(I) + Send + Sync,
    {
        tasks.into_iter().for_each(f);
    }

    pub(crate) const PARALLEL: bool = false;
}

pub(crate) use imp::{run_tasks, PARALLEL};
