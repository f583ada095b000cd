//! Thread-pool execution of Monte Carlo work.
//!
//! Results are collected in task order and every task draws from its own
//! split stream, so output does not depend on the number of threads.

use ergmat_core::{Executor, Serial};
use rayon::prelude::*;

pub struct Rayon {
    pool: rayon::ThreadPool,
}

impl Rayon {
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Rayon { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Rayon {
    fn run<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..tasks).into_par_iter().map(f).collect())
    }
}

/// Serial for one thread, a pool otherwise.
pub enum Exec {
    Serial,
    Pool(Rayon),
}

impl Exec {
    pub fn with_threads(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        if threads <= 1 {
            Ok(Exec::Serial)
        } else {
            Rayon::new(threads).map(Exec::Pool)
        }
    }
}

impl Executor for Exec {
    fn run<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Serial => Serial.run(tasks, f),
            Exec::Pool(p) => p.run(tasks, f),
        }
    }
}

/// Threads available to this process (at least 1).
pub fn available_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
