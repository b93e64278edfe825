//! Shared-memory parallel sorts.
//!
//! Both sorts share one pipeline: the buffer is split evenly over `p`
//! workers (`p` a power of two), every worker sorts its partition with a
//! sequential kernel, and then `log2(p)` merge rounds fold the sorted
//! partitions together in a binary tree. In round `r` worker `i` is active
//! iff `i mod 2^r == 0` and merges its run with the run of worker
//! `i + 2^(r-1)`. Rounds ping-pong between the input and one auxiliary
//! buffer of the same size.

use std::ops::Range;

use thiserror::Error;

use crate::exec;
use crate::item::Keyed;
use crate::seq::{self, Run};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShmError {
    #[error("worker count must be a power of two >= 1, got {0}")]
    WorkerCount(usize),
}

pub(crate) fn check_workers(p: usize) -> Result<(), ShmError> {
    if p == 0 || !p.is_power_of_two() {
        return Err(ShmError::WorkerCount(p));
    }
    Ok(())
}

/// Contiguous per-worker index ranges covering `[0, total_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    pub total_n: usize,
    pub ranges: Vec<Range<usize>>,
}

impl PartitionPlan {
    pub fn workers(&self) -> usize {
        self.ranges.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.ranges.iter().map(|r| r.end - r.start).collect()
    }

    /// Index range spanned by partitions `[first, first + count)`.
    pub fn span(&self, first: usize, count: usize) -> Range<usize> {
        let last = (first + count).min(self.ranges.len()) - 1;
        self.ranges[first].start..self.ranges[last].end
    }
}

/// Splits `total_n` items over `p` workers. The first `total_n mod p`
/// ranges get one extra element.
pub fn partition_even(total_n: usize, p: usize) -> Result<PartitionPlan, ShmError> {
    check_workers(p)?;
    let base = total_n / p;
    let extra = total_n % p;
    let mut start = 0;
    let ranges = (0..p)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect();
    Ok(PartitionPlan { total_n, ranges })
}

/// One merge round: `(active, partner)` worker pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundStep {
    /// 1-based round index.
    pub round: usize,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeSchedule {
    pub workers: usize,
    pub rounds: Vec<RoundStep>,
}

pub fn merge_schedule(p: usize) -> Result<MergeSchedule, ShmError> {
    check_workers(p)?;
    let rounds = (1..=p.trailing_zeros() as usize)
        .map(|round| {
            let stride = 1 << round;
            let half = stride / 2;
            let pairs = (0..p).step_by(stride).map(|i| (i, i + half)).collect();
            RoundStep { round, pairs }
        })
        .collect();
    Ok(MergeSchedule { workers: p, rounds })
}

/// Sequential kernel each worker applies to its own partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalSort {
    MergeIterative,
    Quick,
}

impl LocalSort {
    fn apply<T: Keyed>(self, items: &mut [T]) {
        match self {
            LocalSort::MergeIterative => seq::sort_merge_iterative(items),
            LocalSort::Quick => seq::sort_quick(items),
        }
    }
}

/// State of the buffer after a phase, handed to an observer.
///
/// Round 0 is the end of the local-sort phase; round `r >= 1` is the end of
/// merge round `r`.
#[derive(Debug)]
pub struct RoundSnapshot<'a, T> {
    pub round: usize,
    /// The buffer holding the current runs.
    pub data: &'a [T],
    /// `(worker, region)` for every worker that owns data after this phase.
    pub owned: Vec<(usize, Run)>,
}

/// Parallel bottom-up merge sort. Stable.
pub fn sort_shm_merge<T: Keyed>(items: &mut [T], p: usize) -> Result<(), ShmError> {
    tree_sort(items, p, 0, LocalSort::MergeIterative, &mut |_| {})
}

/// Quicksort per worker followed by the parallel tree merge. Not stable.
pub fn sort_shm_hybrid<T: Keyed>(items: &mut [T], p: usize) -> Result<(), ShmError> {
    tree_sort(items, p, 0, LocalSort::Quick, &mut |_| {})
}

/// Runs the shared pipeline and calls `observer` after the local-sort phase
/// and after every merge round.
pub fn sort_shm_observed<T: Keyed>(
    items: &mut [T],
    p: usize,
    local: LocalSort,
    observer: &mut dyn FnMut(&RoundSnapshot<'_, T>),
) -> Result<(), ShmError> {
    tree_sort(items, p, 0, local, observer)
}

pub(crate) fn tree_sort<T: Keyed>(
    items: &mut [T],
    p: usize,
    lane: usize,
    local: LocalSort,
    observer: &mut dyn FnMut(&RoundSnapshot<'_, T>),
) -> Result<(), ShmError> {
    let plan = partition_even(items.len(), p)?;
    let schedule = merge_schedule(p)?;

    let chunks = split_by_lengths(items, plan.lengths().into_iter());
    exec::run_tasks(p, lane, chunks, |chunk| local.apply(chunk));
    observer(&RoundSnapshot {
        round: 0,
        data: items,
        owned: owners(&plan, 1),
    });

    if schedule.rounds.is_empty() {
        return Ok(());
    }

    let mut aux = items.to_vec();
    let mut in_aux = false;
    for step in &schedule.rounds {
        let width = 1 << step.round;
        let (src, dst): (&[T], &mut [T]) = if in_aux {
            (&aux, &mut *items)
        } else {
            (&*items, &mut aux)
        };

        // Pair spans tile [0, n) in ascending order, so dst splits cleanly
        // into one exclusive region per active worker.
        let spans: Vec<(Range<usize>, usize)> = step
            .pairs
            .iter()
            .map(|&(active, partner)| (plan.span(active, width), plan.ranges[partner].start))
            .collect();
        let outs = split_by_lengths(dst, spans.iter().map(|(s, _)| s.len()));
        let tasks: Vec<_> = spans
            .into_iter()
            .zip(outs)
            .map(|((span, mid), out)| (&src[span.start..mid], &src[mid..span.end], out))
            .collect();
        exec::run_tasks(p, lane, tasks, |(left, right, out)| {
            seq::merge_into(left, right, out)
        });

        in_aux = !in_aux;
        let data: &[T] = if in_aux { &aux } else { items };
        observer(&RoundSnapshot {
            round: step.round,
            data,
            owned: owners(&plan, width),
        });
    }
    if in_aux {
        items.copy_from_slice(&aux);
    }
    Ok(())
}

fn owners(plan: &PartitionPlan, width: usize) -> Vec<(usize, Run)> {
    (0..plan.workers())
        .step_by(width)
        .map(|i| (i, Run::from_range(plan.span(i, width))))
        .collect()
}

fn split_by_lengths<T>(mut rest: &mut [T], lengths: impl Iterator<Item = usize>) -> Vec<&mut [T]> {
    let mut out = Vec::new();
    for len in lengths {
        let (head, tail) = std::mem::take(&mut rest).split_at_mut(len);
        out.push(head);
        rest = tail;
    }
    debug_assert!(rest.is_empty());
    out
}
