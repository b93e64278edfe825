//! Timing harness.
//!
//! Every trial copies the input, times only the sort call (including
//! scatter and gather for the distributed algorithms, excluding transport
//! setup), verifies the output and only then emits a [`BenchRecord`].

use std::fmt::{self, Write as _};
use std::io::{self, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::dist::{self, ClusterConfig, DistError};
use crate::item::Key;
use crate::seq;
use crate::shm::{self, ShmError};
use crate::transport::{TrafficSnapshot, TransportError, TransportGroup, TransportKind};

use super::gen::{gen_keys, GenError, GenSpec};
use super::verify::verify;

pub const CSV_HEADER: &str = "algo,n,digits,threads,nodes,seed,trial,elapsed_ms,speedup";
/// `trial` value of the per-cell median row.
pub const MEDIAN_TRIAL: i64 = -1;

/// The closed registry of sorting algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    MergeRec,
    MergeIter,
    Quick,
    ShmMerge,
    ShmHybrid,
    DistHybrid,
    ClusterHybrid,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::MergeRec,
        Algorithm::MergeIter,
        Algorithm::Quick,
        Algorithm::ShmMerge,
        Algorithm::ShmHybrid,
        Algorithm::DistHybrid,
        Algorithm::ClusterHybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MergeRec => "merge-rec",
            Algorithm::MergeIter => "merge-iter",
            Algorithm::Quick => "quick",
            Algorithm::ShmMerge => "shm-merge",
            Algorithm::ShmHybrid => "shm-hybrid",
            Algorithm::DistHybrid => "dist-hybrid",
            Algorithm::ClusterHybrid => "cluster-hybrid",
        }
    }

    pub fn uses_threads(self) -> bool {
        matches!(
            self,
            Algorithm::ShmMerge | Algorithm::ShmHybrid | Algorithm::ClusterHybrid
        )
    }

    pub fn uses_nodes(self) -> bool {
        matches!(self, Algorithm::DistHybrid | Algorithm::ClusterHybrid)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(
        "{algo} produced an invalid result (n={n}, threads={threads}, nodes={nodes}): {report}"
    )]
    VerificationFailed {
        algo: Algorithm,
        n: usize,
        threads: usize,
        nodes: usize,
        report: String,
    },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

impl BenchError {
    /// True for errors caused by the requested configuration rather than by
    /// data or the runtime.
    pub fn is_config(&self) -> bool {
        match self {
            BenchError::Config(_) | BenchError::Gen(_) => true,
            BenchError::Dist(e) => matches!(
                e,
                DistError::InvalidDigits(_)
                    | DistError::InvalidNodeCount(_)
                    | DistError::Workers(_)
                    | DistError::GroupSize { .. }
            ),
            _ => false,
        }
    }
}

impl From<ShmError> for BenchError {
    fn from(e: ShmError) -> Self {
        BenchError::Config(e.to_string())
    }
}

/// Execution parameters of one run. Fields an algorithm does not use are
/// normalised to 1 before they reach a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub threads: usize,
    pub nodes: usize,
    pub digits: u32,
    pub transport: TransportKind,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            threads: 1,
            nodes: 1,
            digits: 3,
            transport: TransportKind::Local,
        }
    }
}

impl RunConfig {
    pub fn new(threads: usize, nodes: usize, digits: u32) -> Self {
        Self {
            threads,
            nodes,
            digits,
            ..Self::default()
        }
    }

    pub fn with_transport(mut self, transport: TransportKind) -> Self {
        self.transport = transport;
        self
    }

    /// `dist-hybrid` takes its process count from `nodes`.
    pub fn normalized(mut self, algo: Algorithm) -> Self {
        if !algo.uses_threads() {
            self.threads = 1;
        }
        if !algo.uses_nodes() {
            self.nodes = 1;
        }
        self
    }

    pub fn validate(&self, algo: Algorithm) -> Result<(), BenchError> {
        let cfg = self.normalized(algo);
        if cfg.digits == 0 || cfg.digits > dist::MAX_DIGITS {
            return Err(BenchError::Config(format!(
                "digits must be within 1..={}, got {}",
                dist::MAX_DIGITS,
                cfg.digits
            )));
        }
        if algo.uses_threads() && shm::check_workers(cfg.threads).is_err() {
            return Err(BenchError::Config(format!(
                "{algo} needs a power-of-two thread count, got {}",
                cfg.threads
            )));
        }
        match algo {
            Algorithm::DistHybrid if shm::check_workers(cfg.nodes).is_err() => {
                Err(BenchError::Config(format!(
                    "{algo} needs a power-of-two node count, got {}",
                    cfg.nodes
                )))
            }
            Algorithm::ClusterHybrid if cfg.nodes == 0 || cfg.nodes > dist::MAX_NODES => {
                Err(BenchError::Config(format!(
                    "{algo} needs 1..={} nodes, got {}",
                    dist::MAX_NODES,
                    cfg.nodes
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Result of one timed sort.
#[derive(Debug, Clone)]
pub struct AlgoRun {
    pub output: Vec<Key>,
    pub elapsed: Duration,
    /// Message counts for distributed algorithms.
    pub traffic: Option<TrafficSnapshot>,
}

/// Sorts a copy of `keys` with `algo`. Transport setup happens before the
/// clock starts.
pub fn run_algorithm(
    algo: Algorithm,
    keys: &[Key],
    cfg: &RunConfig,
) -> Result<AlgoRun, BenchError> {
    cfg.validate(algo)?;
    let cfg = cfg.normalized(algo);
    let mut group = if algo.uses_nodes() {
        Some(TransportGroup::new(cfg.transport, cfg.nodes)?)
    } else {
        None
    };
    let mut data = keys.to_vec();

    let start = Instant::now();
    let output = match algo {
        Algorithm::MergeRec => {
            seq::sort_merge_recursive(&mut data);
            data
        }
        Algorithm::MergeIter => {
            seq::sort_merge_iterative(&mut data);
            data
        }
        Algorithm::Quick => {
            seq::sort_quick(&mut data);
            data
        }
        Algorithm::ShmMerge => {
            shm::sort_shm_merge(&mut data, cfg.threads)?;
            data
        }
        Algorithm::ShmHybrid => {
            shm::sort_shm_hybrid(&mut data, cfg.threads)?;
            data
        }
        Algorithm::DistHybrid => dist::sort_dist_hybrid(&data, group.as_mut().unwrap())?,
        Algorithm::ClusterHybrid => dist::sort_cluster_hybrid(
            &data,
            &ClusterConfig::new(cfg.nodes, cfg.threads, cfg.digits),
            group.as_mut().unwrap(),
        )?,
    };
    let elapsed = start.elapsed();

    Ok(AlgoRun {
        output,
        elapsed,
        traffic: group.map(|g| g.probe().snapshot()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub algo: Algorithm,
    pub n: usize,
    pub digits: u32,
    pub threads: usize,
    pub nodes: usize,
    pub seed: u64,
    /// Trial index, or [`MEDIAN_TRIAL`] for the median row of a cell.
    pub trial: i64,
    pub elapsed_ms: f64,
    /// Baseline quicksort time over `elapsed_ms`, when a baseline exists.
    pub speedup: Option<f64>,
}

impl BenchRecord {
    pub fn is_median(&self) -> bool {
        self.trial == MEDIAN_TRIAL
    }

    pub fn csv_row(&self) -> String {
        let speedup = self.speedup.map(|s| format!("{s:.4}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{:.4},{}",
            self.algo,
            self.n,
            self.digits,
            self.threads,
            self.nodes,
            self.seed,
            self.trial,
            self.elapsed_ms,
            speedup
        )
    }
}

/// Times one sort of `keys` and verifies it. The record carries no
/// speedup; [`run_suite`] attaches one.
pub fn run_trial(
    algo: Algorithm,
    keys: &[Key],
    cfg: &RunConfig,
    seed: u64,
    trial: i64,
) -> Result<BenchRecord, BenchError> {
    let run = run_algorithm(algo, keys, cfg)?;
    let cfg = cfg.normalized(algo);
    let report = verify(keys, &run.output, false);
    if !report.passed() {
        return Err(BenchError::VerificationFailed {
            algo,
            n: keys.len(),
            threads: cfg.threads,
            nodes: cfg.nodes,
            report: report.to_string(),
        });
    }
    Ok(BenchRecord {
        algo,
        n: keys.len(),
        digits: cfg.digits,
        threads: cfg.threads,
        nodes: cfg.nodes,
        seed,
        trial,
        // Clamp so sub-resolution timings still satisfy elapsed > 0.
        elapsed_ms: (run.elapsed.as_secs_f64() * 1e3).max(1e-6),
        speedup: None,
    })
}

/// A benchmark grid: every size × algorithm × applicable (threads, nodes).
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSpec {
    pub sizes: Vec<usize>,
    pub algos: Vec<Algorithm>,
    pub threads: Vec<usize>,
    pub nodes: Vec<usize>,
    pub digits: u32,
    pub seed: u64,
    pub trials: usize,
    pub full_range: bool,
    pub transport: TransportKind,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        Self {
            sizes: vec![100_000],
            algos: vec![Algorithm::Quick],
            threads: vec![1],
            nodes: vec![1],
            digits: 3,
            seed: 42,
            trials: 3,
            full_range: false,
            transport: TransportKind::Local,
        }
    }
}

impl SuiteSpec {
    /// Distinct normalised configurations per algorithm, in grid order.
    pub fn cells(&self) -> Vec<(Algorithm, RunConfig)> {
        let mut cells = Vec::new();
        for &algo in &self.algos {
            for &threads in &self.threads {
                for &nodes in &self.nodes {
                    let cfg = RunConfig::new(threads, nodes, self.digits)
                        .with_transport(self.transport)
                        .normalized(algo);
                    if !cells.contains(&(algo, cfg)) {
                        cells.push((algo, cfg));
                    }
                }
            }
        }
        cells
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.algos.is_empty() {
            return Err(BenchError::Config(
                "need at least one size and one algorithm".into(),
            ));
        }
        if self.threads.is_empty() || self.nodes.is_empty() {
            return Err(BenchError::Config(
                "need at least one thread and node count".into(),
            ));
        }
        for (algo, cfg) in self.cells() {
            cfg.validate(algo)?;
        }
        Ok(())
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Runs the grid. Per size the keys are generated once and the sequential
/// quicksort baseline is timed (median of `trials` runs); each cell then
/// emits one row per trial plus a median row.
pub fn run_suite(spec: &SuiteSpec) -> Result<Vec<BenchRecord>, BenchError> {
    spec.validate()?;
    let cells = spec.cells();
    let mut records = Vec::new();
    for &n in &spec.sizes {
        let keys = gen_keys(&GenSpec::new(n, spec.digits, spec.seed).full_range(spec.full_range))?;

        let mut base: Vec<f64> = (0..spec.trials)
            .map(|t| {
                run_trial(
                    Algorithm::Quick,
                    &keys,
                    &RunConfig::default(),
                    spec.seed,
                    t as i64,
                )
                .map(|r| r.elapsed_ms)
            })
            .collect::<Result<_, _>>()?;
        let baseline = median(&mut base);

        for &(algo, cfg) in &cells {
            let mut times = Vec::with_capacity(spec.trials);
            let mut last = None;
            for t in 0..spec.trials {
                let mut rec = run_trial(algo, &keys, &cfg, spec.seed, t as i64)?;
                rec.speedup = Some(baseline / rec.elapsed_ms);
                times.push(rec.elapsed_ms);
                last = Some(rec.clone());
                records.push(rec);
            }
            let mut median_row = last.expect("trials >= 1");
            median_row.trial = MEDIAN_TRIAL;
            median_row.elapsed_ms = median(&mut times);
            median_row.speedup = Some(baseline / median_row.elapsed_ms);
            records.push(median_row);
        }
    }
    Ok(records)
}

pub fn write_csv<W: Write>(mut out: W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Plain-text table of the median rows.
pub fn format_summary(records: &[BenchRecord]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<15} {:>10} {:>7} {:>5} {:>12} {:>8}",
        "algo", "n", "threads", "nodes", "median_ms", "speedup"
    );
    for r in records.iter().filter(|r| r.is_median()) {
        let _ = writeln!(
            s,
            "{:<15} {:>10} {:>7} {:>5} {:>12.3} {:>8.3}",
            r.algo.name(),
            r.n,
            r.threads,
            r.nodes,
            r.elapsed_ms,
            r.speedup.unwrap_or(f64::NAN)
        );
    }
    s
}

/// Number of adjacent decreases in `values`.
pub fn count_inversions(values: &[f64]) -> usize {
    values.windows(2).filter(|w| w[1] < w[0]).count()
}
