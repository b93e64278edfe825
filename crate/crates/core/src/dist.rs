//! Distributed sorts over a [`TransportGroup`].
//!
//! * [`sort_dist_hybrid`]: rank 0 scatters even partitions, every rank
//!   quicksorts locally, then the tree merge of [`crate::shm`] runs over
//!   messages. In round `r` rank `i + 2^(r-1)` sends its run to rank `i`,
//!   which merges it.
//! * [`sort_cluster_hybrid`]: rank 0 splits the keys once by their most
//!   significant decimal digit into ten buckets, hands contiguous digit
//!   groups to the `m` nodes, each node sorts its share with the
//!   shared-memory hybrid sort, and the master places every result at its
//!   prefix offset. Because digit groups cover ascending, disjoint key
//!   ranges no merge is needed after the gather.
//!
//! Every rank runs on its own thread; rank 0 runs on the caller. Once the
//! master holds the result it sends `DONE` to every other rank, which is
//! also how ranks are released when the master fails early.

use std::thread;

use thiserror::Error;

use crate::item::Key;
use crate::seq::{self, merge_runs};
use crate::shm::{self, LocalSort, ShmError};
use crate::transport::{Endpoint, Message, MessageKind, Rank, TransportError, TransportGroup};

pub const BUCKETS: usize = 10;
pub const MAX_NODES: usize = 10;
/// Widest decimal width whose range `[0, 10^D)` still fits in a `u64`.
pub const MAX_DIGITS: u32 = 19;

#[derive(Debug, Error)]
pub enum DistError {
    #[error("key {key} at index {index} does not fit in {digits} decimal digits")]
    KeyOutOfRange { index: usize, key: Key, digits: u32 },
    #[error("digit width must be within 1..={MAX_DIGITS}, got {0}")]
    InvalidDigits(u32),
    #[error("node count must be within 1..={MAX_NODES}, got {0}")]
    InvalidNodeCount(usize),
    #[error("transport group has {actual} ranks, configuration needs {expected}")]
    GroupSize { expected: usize, actual: usize },
    #[error("{rank} expected a KEYS message, got {kind:?}")]
    UnexpectedMessage { rank: Rank, kind: MessageKind },
    #[error("{rank} returned {actual} keys, expected {expected}")]
    ShareSize {
        rank: Rank,
        expected: usize,
        actual: usize,
    },
    #[error("{0} aborted by the master")]
    Aborted(Rank),
    #[error(transparent)]
    Workers(#[from] ShmError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

fn check_digits(digits: u32) -> Result<(), DistError> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(DistError::InvalidDigits(digits));
    }
    Ok(())
}

fn msd_divisor(digits: u32) -> u64 {
    10u64.pow(digits - 1)
}

/// Most significant decimal digit of `key` when written with exactly
/// `digits` digits. Shorter keys are zero-padded, so they land in bucket 0.
pub fn msd_bucket_index(key: Key, digits: u32) -> Result<u8, DistError> {
    check_digits(digits)?;
    let digit = key / msd_divisor(digits);
    if digit >= BUCKETS as u64 {
        return Err(DistError::KeyOutOfRange {
            index: 0,
            key,
            digits,
        });
    }
    Ok(digit as u8)
}

/// Keys sharing one most significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    pub digit: u8,
    pub keys: Vec<Key>,
}

/// One stable counting pass into ten buckets. Input order is preserved
/// within each bucket.
pub fn msd_partition(keys: &[Key], digits: u32) -> Result<Vec<Bucket>, DistError> {
    check_digits(digits)?;
    let divisor = msd_divisor(digits);
    let mut counts = [0usize; BUCKETS];
    for (index, &key) in keys.iter().enumerate() {
        let d = key / divisor;
        if d >= BUCKETS as u64 {
            return Err(DistError::KeyOutOfRange { index, key, digits });
        }
        counts[d as usize] += 1;
    }
    let mut buckets: Vec<Bucket> = (0..BUCKETS)
        .map(|d| Bucket {
            digit: d as u8,
            keys: Vec::with_capacity(counts[d]),
        })
        .collect();
    for &key in keys {
        buckets[(key / divisor) as usize].keys.push(key);
    }
    Ok(buckets)
}

/// Contiguous digit groups, one per node, in ascending digit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeAssignment {
    /// Inclusive `(first_digit, last_digit)` per node.
    pub groups: Vec<(u8, u8)>,
}

impl NodeAssignment {
    pub fn nodes(&self) -> usize {
        self.groups.len()
    }

    /// Number of keys each node receives.
    pub fn loads(&self, bucket_sizes: &[usize; BUCKETS]) -> Vec<usize> {
        self.groups
            .iter()
            .map(|&(lo, hi)| bucket_sizes[lo as usize..=hi as usize].iter().sum())
            .collect()
    }

    pub fn node_of_digit(&self, digit: u8) -> usize {
        self.groups
            .iter()
            .position(|&(lo, hi)| lo <= digit && digit <= hi)
            .expect("groups cover every digit")
    }
}

/// Splits the ten digits into `m` contiguous groups minimising the largest
/// group total. All `C(9, m-1)` compositions are tried in lexicographic
/// order of their cut points; the first minimum wins.
pub fn assign_buckets(
    bucket_sizes: &[usize; BUCKETS],
    m: usize,
) -> Result<NodeAssignment, DistError> {
    if m == 0 || m > MAX_NODES {
        return Err(DistError::InvalidNodeCount(m));
    }
    // cuts[k] is the first digit of group k + 1.
    let mut cuts: Vec<usize> = (1..m).collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    loop {
        let load = max_group_load(bucket_sizes, &cuts);
        if best.as_ref().is_none_or(|(b, _)| load < *b) {
            best = Some((load, cuts.clone()));
        }
        if !next_combination(&mut cuts, BUCKETS - 1) {
            break;
        }
    }
    let (_, cuts) = best.expect("at least one composition");
    let mut groups = Vec::with_capacity(m);
    let mut start = 0;
    for &c in cuts.iter().chain(std::iter::once(&BUCKETS)) {
        groups.push((start as u8, (c - 1) as u8));
        start = c;
    }
    Ok(NodeAssignment { groups })
}

fn max_group_load(sizes: &[usize; BUCKETS], cuts: &[usize]) -> usize {
    let mut start = 0;
    let mut worst = 0;
    for &c in cuts.iter().chain(std::iter::once(&BUCKETS)) {
        worst = worst.max(sizes[start..c].iter().sum());
        start = c;
    }
    worst
}

/// Advances `cuts`, a strictly increasing selection from `1..=top`, to the
/// next one in lexicographic order.
fn next_combination(cuts: &mut [usize], top: usize) -> bool {
    let k = cuts.len();
    for i in (0..k).rev() {
        if cuts[i] < top - (k - 1 - i) {
            cuts[i] += 1;
            for j in i + 1..k {
                cuts[j] = cuts[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Node count, per-node worker count and key digit width of a cluster run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterConfig {
    pub nodes: usize,
    pub threads: usize,
    pub digits: u32,
}

impl ClusterConfig {
    pub fn new(nodes: usize, threads: usize, digits: u32) -> Self {
        Self {
            nodes,
            threads,
            digits,
        }
    }

    pub fn validate(&self) -> Result<(), DistError> {
        if self.nodes == 0 || self.nodes > MAX_NODES {
            return Err(DistError::InvalidNodeCount(self.nodes));
        }
        shm::check_workers(self.threads)?;
        check_digits(self.digits)
    }
}

fn expect_keys(ep: &mut Endpoint, from: Rank) -> Result<Vec<Key>, DistError> {
    let msg = ep.recv(from)?;
    match msg.kind {
        MessageKind::Keys => Ok(msg.payload),
        MessageKind::Done if from == Rank::MASTER => Err(DistError::Aborted(ep.rank())),
        kind => Err(DistError::UnexpectedMessage {
            rank: ep.rank(),
            kind,
        }),
    }
}

fn release_all(master: &mut Endpoint) {
    for r in 1..master.size() {
        let _ = master.send(Rank(r), Message::done());
    }
}

/// Wait for the master's release after this rank's work is handed over.
fn await_release(ep: &mut Endpoint) -> Result<(), DistError> {
    match ep.recv(Rank::MASTER)?.kind {
        MessageKind::Done => Ok(()),
        kind => Err(DistError::UnexpectedMessage {
            rank: ep.rank(),
            kind,
        }),
    }
}

/// Runs `master` on the calling thread and `worker` on one thread per other
/// rank. The first worker error is reported if the master succeeded.
fn run_ranks<M, W>(group: &mut TransportGroup, master: M, worker: W) -> Result<Vec<Key>, DistError>
where
    M: FnOnce(&mut Endpoint) -> Result<Vec<Key>, DistError>,
    W: Fn(&mut Endpoint) -> Result<(), DistError> + Sync,
{
    let (root, others) = group
        .endpoints_mut()
        .split_first_mut()
        .expect("groups are never empty");
    thread::scope(|s| {
        let worker = &worker;
        let handles: Vec<_> = others
            .iter_mut()
            .map(|ep| {
                s.spawn(move || {
                    let r = worker(ep);
                    if r.is_err() {
                        // Unblock peers still waiting on this rank.
                        ep.close();
                    }
                    r
                })
            })
            .collect();
        let result = master(root);
        if result.is_err() {
            release_all(root);
        }
        let mut worker_err = None;
        for h in handles {
            match h.join() {
                Ok(Err(e)) if worker_err.is_none() => worker_err = Some(e),
                Ok(_) => {}
                Err(panic) => std::panic::resume_unwind(panic),
            }
        }
        match (result, worker_err) {
            (Ok(out), None) => Ok(out),
            (Ok(_), Some(e)) | (Err(e), _) => Err(e),
        }
    })
}

/// Scatter, local quicksort, then a message-driven tree merge. The group
/// size is the process count and must be a power of two.
pub fn sort_dist_hybrid(keys: &[Key], group: &mut TransportGroup) -> Result<Vec<Key>, DistError> {
    let p = group.size();
    let plan = shm::partition_even(keys.len(), p)?;
    let rounds = p.trailing_zeros() as usize;

    // Merge rounds seen from one rank. Returns the merged run for active
    // ranks that survive every round, i.e. rank 0.
    let tree_merge =
        |ep: &mut Endpoint, mut run: Vec<Key>| -> Result<Option<Vec<Key>>, DistError> {
            let me = ep.rank().0;
            for r in 1..=rounds {
                let half = 1usize << (r - 1);
                if me.is_multiple_of(half * 2) {
                    let other = expect_keys(ep, Rank(me + half))?;
                    run = merge_runs(&run, &other);
                } else {
                    ep.send(Rank(me - half), Message::keys(run))?;
                    return Ok(None);
                }
            }
            Ok(Some(run))
        };

    run_ranks(
        group,
        |root| {
            for (r, range) in plan.ranges.iter().enumerate().skip(1) {
                root.send(Rank(r), Message::keys(keys[range.clone()].to_vec()))?;
            }
            let mut local = keys[plan.ranges[0].clone()].to_vec();
            seq::sort_quick(&mut local);
            let out = tree_merge(root, local)?.expect("rank 0 is active in every round");
            release_all(root);
            Ok(out)
        },
        |ep| {
            let mut local = expect_keys(ep, Rank::MASTER)?;
            seq::sort_quick(&mut local);
            tree_merge(ep, local)?;
            await_release(ep)
        },
    )
}

/// One-step MSD split across `cfg.nodes` ranks, shared-memory hybrid sort
/// with `cfg.threads` workers inside each node, gather by offset.
pub fn sort_cluster_hybrid(
    keys: &[Key],
    cfg: &ClusterConfig,
    group: &mut TransportGroup,
) -> Result<Vec<Key>, DistError> {
    cfg.validate()?;
    if group.size() != cfg.nodes {
        return Err(DistError::GroupSize {
            expected: cfg.nodes,
            actual: group.size(),
        });
    }
    // Everything that can reject the input happens before the first send.
    let buckets = msd_partition(keys, cfg.digits)?;
    let threads = cfg.threads;

    run_ranks(
        group,
        |root| {
            let sizes: [usize; BUCKETS] = std::array::from_fn(|d| buckets[d].keys.len());
            let assignment = assign_buckets(&sizes, cfg.nodes)?;
            let mut shares: Vec<Vec<Key>> = assignment
                .groups
                .iter()
                .map(|&(lo, hi)| {
                    buckets[lo as usize..=hi as usize]
                        .iter()
                        .flat_map(|b| b.keys.iter().copied())
                        .collect()
                })
                .collect();
            let mut own = std::mem::take(&mut shares[0]);
            for (r, share) in shares.into_iter().enumerate().skip(1) {
                root.send(Rank(r), Message::keys(share))?;
            }

            let loads = assignment.loads(&sizes);
            let mut out = vec![0; keys.len()];
            shm::tree_sort(&mut own, threads, 0, LocalSort::Quick, &mut |_| {})?;
            out[..loads[0]].copy_from_slice(&own);
            let mut offset = loads[0];
            for (r, &load) in loads.iter().enumerate().skip(1) {
                let part = expect_keys(root, Rank(r))?;
                if part.len() != load {
                    return Err(DistError::ShareSize {
                        rank: Rank(r),
                        expected: load,
                        actual: part.len(),
                    });
                }
                out[offset..offset + load].copy_from_slice(&part);
                offset += load;
            }
            release_all(root);
            Ok(out)
        },
        |ep| {
            let mut share = expect_keys(ep, Rank::MASTER)?;
            shm::tree_sort(
                &mut share,
                threads,
                ep.rank().0,
                LocalSort::Quick,
                &mut |_| {},
            )?;
            ep.send(Rank::MASTER, Message::keys(share))?;
            await_release(ep)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::{make_local_group, make_tcp_group_any};
    use crate::workbench::{gen_keys, GenSpec};
    use proptest::prelude::*;

    #[test]
    fn bucket_index_examples() {
        assert_eq!(msd_bucket_index(345, 3).unwrap(), 3);
        assert_eq!(msd_bucket_index(7, 3).unwrap(), 0);
        assert_eq!(msd_bucket_index(999, 3).unwrap(), 9);
        assert!(matches!(
            msd_bucket_index(1000, 3),
            Err(DistError::KeyOutOfRange { key: 1000, .. })
        ));
        assert_eq!(msd_bucket_index(9_999_999_999_999_999_999, 19).unwrap(), 9);
        assert!(msd_bucket_index(u64::MAX, 19).is_err());
        assert!(matches!(
            msd_bucket_index(1, 0),
            Err(DistError::InvalidDigits(0))
        ));
        assert!(matches!(
            msd_bucket_index(1, 20),
            Err(DistError::InvalidDigits(20))
        ));
    }

    #[test]
    fn partition_examples() {
        let b = msd_partition(&[345, 7, 999, 100], 3).unwrap();
        let got: Vec<Vec<u64>> = b.iter().map(|b| b.keys.clone()).collect();
        let mut expected = vec![vec![]; 10];
        expected[0] = vec![7];
        expected[1] = vec![100];
        expected[3] = vec![345];
        expected[9] = vec![999];
        assert_eq!(got, expected);

        let b = msd_partition(&[], 3).unwrap();
        assert_eq!(b.len(), 10);
        assert!(b.iter().all(|b| b.keys.is_empty()));

        match msd_partition(&[1, 2, 5000, 3], 3) {
            Err(DistError::KeyOutOfRange { index, key, .. }) => assert_eq!((index, key), (2, 5000)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn partition_matches_histogram_seed_5() {
        let keys = gen_keys(&GenSpec::new(100_000, 3, 5)).unwrap();
        let mut hist = [0usize; 10];
        for k in &keys {
            hist[(k / 100) as usize] += 1;
        }
        let b = msd_partition(&keys, 3).unwrap();
        for d in 0..10 {
            assert_eq!(b[d].keys.len(), hist[d]);
            assert!(b[d].keys.iter().all(|k| k / 100 == d as u64));
        }
    }

    // Brute force over all 2^9 subsets of cut positions.
    fn brute_force_assignment(sizes: &[usize; 10], m: usize) -> (usize, Vec<usize>) {
        let mut candidates: Vec<Vec<usize>> = (0u32..512)
            .filter(|mask| mask.count_ones() as usize == m - 1)
            .map(|mask| (1..10).filter(|c| mask & (1 << (c - 1)) != 0).collect())
            .collect();
        candidates.sort();
        let load = |cuts: &Vec<usize>| {
            let mut bounds = vec![0];
            bounds.extend(cuts);
            bounds.push(10);
            bounds
                .windows(2)
                .map(|w| sizes[w[0]..w[1]].iter().sum::<usize>())
                .max()
                .unwrap()
        };
        let best = candidates.iter().map(load).min().unwrap();
        let first = candidates.into_iter().find(|c| load(c) == best).unwrap();
        (best, first)
    }

    fn cuts_of(a: &NodeAssignment) -> Vec<usize> {
        a.groups
            .iter()
            .skip(1)
            .map(|&(lo, _)| lo as usize)
            .collect()
    }

    #[test]
    fn assignment_examples() {
        let equal = [10usize; 10];
        let a = assign_buckets(&equal, 10).unwrap();
        assert_eq!(a.groups, (0..10).map(|d| (d, d)).collect::<Vec<_>>());

        let a = assign_buckets(&equal, 5).unwrap();
        assert_eq!(a.groups, vec![(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]);

        let skewed = [100, 0, 0, 0, 0, 0, 0, 0, 0, 100];
        let a = assign_buckets(&skewed, 2).unwrap();
        let (best, first) = brute_force_assignment(&skewed, 2);
        assert_eq!(best, 100);
        assert_eq!(*a.loads(&skewed).iter().max().unwrap(), 100);
        assert_eq!(cuts_of(&a), first);
        assert_eq!(a.groups, vec![(0, 0), (1, 9)]);

        assert_eq!(assign_buckets(&equal, 1).unwrap().groups, vec![(0, 9)]);
        assert!(matches!(
            assign_buckets(&equal, 0),
            Err(DistError::InvalidNodeCount(0))
        ));
        assert!(matches!(
            assign_buckets(&equal, 11),
            Err(DistError::InvalidNodeCount(11))
        ));
    }

    #[test]
    fn dist_hybrid_small_cases() {
        let keys = gen_keys(&GenSpec::new(500, 3, 2)).unwrap();
        let mut quick = keys.clone();
        seq::sort_quick(&mut quick);
        let mut g = make_local_group(1).unwrap();
        assert_eq!(sort_dist_hybrid(&keys, &mut g).unwrap(), quick);

        let mut g = make_local_group(3).unwrap();
        assert!(matches!(
            sort_dist_hybrid(&keys, &mut g),
            Err(DistError::Workers(ShmError::WorkerCount(3)))
        ));

        let mut g = make_local_group(8).unwrap();
        assert_eq!(sort_dist_hybrid(&[], &mut g).unwrap(), Vec::<u64>::new());
        assert_eq!(sort_dist_hybrid(&[4, 1], &mut g).unwrap(), vec![1, 4]);
    }

    #[test]
    fn dist_hybrid_matches_oracle_on_both_transports() {
        let keys = gen_keys(&GenSpec::new(10_000, 3, 9)).unwrap();
        let mut oracle = keys.clone();
        oracle.sort_unstable();

        let mut local = make_local_group(4).unwrap();
        let a = sort_dist_hybrid(&keys, &mut local).unwrap();
        assert_eq!(a, oracle);

        let mut tcp = make_tcp_group_any(4).unwrap();
        let b = sort_dist_hybrid(&keys, &mut tcp).unwrap();
        assert_eq!(a, b);
        assert_eq!(local.probe().snapshot(), tcp.probe().snapshot());
    }

    #[test]
    fn dist_hybrid_message_pattern_follows_schedule() {
        for p in [2usize, 4, 8] {
            let keys = gen_keys(&GenSpec::new(4096, 3, p as u64)).unwrap();
            let mut g = make_local_group(p).unwrap();
            sort_dist_hybrid(&keys, &mut g).unwrap();
            let t = g.probe().snapshot();
            // Scatter: master to every other rank.
            for r in 1..p {
                assert_eq!(t.keys_messages(0, r), 1);
            }
            // Merge: exactly one message per schedule pair, partner to active.
            let schedule = shm::merge_schedule(p).unwrap();
            let mut merge_edges: Vec<(usize, usize, u64)> = t
                .keys_edges()
                .into_iter()
                .filter(|&(src, _, _)| src != 0)
                .collect();
            let mut expected: Vec<(usize, usize, u64)> = schedule
                .rounds
                .iter()
                .flat_map(|s| s.pairs.iter().map(|&(a, b)| (b, a, 1)))
                .collect();
            merge_edges.sort();
            expected.sort();
            assert_eq!(merge_edges.len(), p - 1);
            assert_eq!(merge_edges, expected);
        }
    }

    #[test]
    fn cluster_examples() {
        let mut g = make_local_group(2).unwrap();
        let cfg = ClusterConfig::new(2, 2, 3);
        assert_eq!(
            sort_cluster_hybrid(&[345, 7, 999, 100], &cfg, &mut g).unwrap(),
            vec![7, 100, 345, 999]
        );

        let keys = gen_keys(&GenSpec::new(2000, 3, 4)).unwrap();
        let mut quick = keys.clone();
        seq::sort_quick(&mut quick);
        let mut g = make_local_group(1).unwrap();
        assert_eq!(
            sort_cluster_hybrid(&keys, &ClusterConfig::new(1, 1, 3), &mut g).unwrap(),
            quick
        );
    }

    #[test]
    fn cluster_rejects_before_sending() {
        let mut g = make_local_group(2).unwrap();
        let cfg = ClusterConfig::new(2, 2, 3);
        assert!(matches!(
            sort_cluster_hybrid(&[1, 2000], &cfg, &mut g),
            Err(DistError::KeyOutOfRange {
                index: 1,
                key: 2000,
                digits: 3
            })
        ));
        assert_eq!(g.probe().snapshot().total_keys_messages(), 0);

        assert!(matches!(
            sort_cluster_hybrid(&[1], &ClusterConfig::new(2, 3, 3), &mut g),
            Err(DistError::Workers(ShmError::WorkerCount(3)))
        ));
        assert!(matches!(
            sort_cluster_hybrid(&[1], &ClusterConfig::new(11, 2, 3), &mut g),
            Err(DistError::InvalidNodeCount(11))
        ));
        assert!(matches!(
            sort_cluster_hybrid(&[1], &ClusterConfig::new(3, 2, 3), &mut g),
            Err(DistError::GroupSize {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn cluster_configurations_match_oracle() {
        let keys = gen_keys(&GenSpec::new(1_000_000, 3, 42)).unwrap();
        let mut oracle = keys.clone();
        oracle.sort_unstable();
        for (m, t) in [(2, 2), (5, 2), (5, 8), (10, 2)] {
            let mut g = make_local_group(m).unwrap();
            let out = sort_cluster_hybrid(&keys, &ClusterConfig::new(m, t, 3), &mut g).unwrap();
            assert_eq!(out, oracle, "m={m} t={t}");
        }
    }

    #[test]
    fn empty_node_groups_are_legal() {
        // Every key shares one digit, so most nodes receive nothing.
        let keys: Vec<u64> = (0..300).map(|i| 500 + i % 100).collect();
        let mut g = make_local_group(10).unwrap();
        let out = sort_cluster_hybrid(&keys, &ClusterConfig::new(10, 2, 3), &mut g).unwrap();
        let mut expected = keys.clone();
        expected.sort_unstable();
        assert_eq!(out, expected);
        let t = g.probe().snapshot();
        for r in 1..10 {
            assert_eq!(t.keys_messages(0, r), 1);
            assert_eq!(t.keys_messages(r, 0), 1);
        }
    }

    proptest! {
        #[test]
        fn assignment_is_optimal_contiguous_and_first(
            sizes in prop::array::uniform10(0usize..1000),
            m in 1usize..=10,
        ) {
            let a = assign_buckets(&sizes, m).unwrap();
            prop_assert_eq!(a.nodes(), m);
            let mut next = 0u8;
            for &(lo, hi) in &a.groups {
                prop_assert_eq!(lo, next);
                prop_assert!(hi >= lo);
                next = hi + 1;
            }
            prop_assert_eq!(next, 10);
            let (best, first) = brute_force_assignment(&sizes, m);
            prop_assert_eq!(*a.loads(&sizes).iter().max().unwrap(), best);
            prop_assert_eq!(cuts_of(&a), first);
            prop_assert_eq!(a.loads(&sizes).iter().sum::<usize>(), sizes.iter().sum::<usize>());
        }

        #[test]
        fn cluster_output_is_sorted_permutation(
            keys in prop::collection::vec(0u64..1000, 0..400),
            m in 1usize..=10,
            log_t in 0u32..3,
        ) {
            let mut g = make_local_group(m).unwrap();
            let out = sort_cluster_hybrid(&keys, &ClusterConfig::new(m, 1 << log_t, 3), &mut g).unwrap();
            let mut expected = keys.clone();
            expected.sort_unstable();
            prop_assert_eq!(out, expected);
        }
    }
}
