//! Sequential sorting kernels.
//!
//! All three sorts work in place on a slice of [`Keyed`] items and are
//! reentrant, so any number of workers may run them on disjoint slices.
//! The merge sorts are stable; quicksort is not.

use std::ops::Range;

use crate::item::Keyed;

/// A contiguous stretch of a key sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub offset: usize,
    pub len: usize,
}

impl Run {
    pub fn new(offset: usize, len: usize) -> Self {
        Self { offset, len }
    }

    pub fn from_range(range: Range<usize>) -> Self {
        Self::new(range.start, range.end - range.start)
    }

    pub fn end(&self) -> usize {
        self.offset + self.len
    }

    pub fn range(&self) -> Range<usize> {
        self.offset..self.end()
    }

    /// True when the run lies inside `seq` and is non-decreasing by key.
    pub fn is_sorted_in<T: Keyed>(&self, seq: &[T]) -> bool {
        self.end() <= seq.len() && is_sorted_by_key(&seq[self.range()])
    }
}

pub fn is_sorted_by_key<T: Keyed>(items: &[T]) -> bool {
    items.windows(2).all(|w| w[0].key() <= w[1].key())
}

/// Merges two sorted runs into a new vector.
///
/// On equal keys every element of `left` precedes every element of `right`.
pub fn merge_runs<T: Keyed>(left: &[T], right: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(left.len() + right.len());
    out.extend_from_slice(left);
    out.extend_from_slice(right);
    merge_into(left, right, &mut out);
    out
}

/// Stable merge of `left` and `right` into `out`, which must hold exactly
/// `left.len() + right.len()` slots.
pub(crate) fn merge_into<T: Keyed>(left: &[T], right: &[T], out: &mut [T]) {
    debug_assert_eq!(out.len(), left.len() + right.len());
    let (mut i, mut j) = (0, 0);
    for slot in out.iter_mut() {
        // Take from the left on ties.
        if j == right.len() || (i < left.len() && left[i].key() <= right[j].key()) {
            *slot = left[i];
            i += 1;
        } else {
            *slot = right[j];
            j += 1;
        }
    }
}

#[inline]
fn compare_swap<T: Keyed>(items: &mut [T], a: usize, b: usize) {
    if items[b].key() < items[a].key() {
        items.swap(a, b);
    }
}

/// Top-down merge sort. Splits into halves `[0, mid)` and `[mid, n)` until
/// runs hold two elements or fewer, then merges back up through one
/// auxiliary buffer of the input's size.
pub fn sort_merge_recursive<T: Keyed>(items: &mut [T]) {
    if items.len() <= 1 {
        return;
    }
    let mut buf = items.to_vec();
    merge_recursive(items, &mut buf);
}

fn merge_recursive<T: Keyed>(items: &mut [T], buf: &mut [T]) {
    let n = items.len();
    match n {
        0 | 1 => return,
        2 => {
            compare_swap(items, 0, 1);
            return;
        }
        _ => {}
    }
    let mid = n / 2;
    {
        let (lo, hi) = items.split_at_mut(mid);
        let (lo_buf, hi_buf) = buf.split_at_mut(mid);
        merge_recursive(lo, lo_buf);
        merge_recursive(hi, hi_buf);
    }
    merge_into(&items[..mid], &items[mid..], &mut buf[..n]);
    items.copy_from_slice(&buf[..n]);
}

/// Bottom-up merge sort: compare-swap every pair, then merge runs of width
/// 2, 4, 8, ... ping-ponging between the input and one auxiliary buffer.
/// A trailing partial run is carried along at every width.
pub fn sort_merge_iterative<T: Keyed>(items: &mut [T]) {
    let n = items.len();
    if n <= 1 {
        return;
    }
    for pair in (0..n - 1).step_by(2) {
        compare_swap(items, pair, pair + 1);
    }
    if n <= 2 {
        return;
    }
    let mut buf = items.to_vec();
    let mut in_buf = false;
    let mut width = 2;
    while width < n {
        let (src, dst): (&[T], &mut [T]) = if in_buf {
            (&buf, &mut *items)
        } else {
            (&*items, &mut buf)
        };
        merge_pass(src, dst, width);
        in_buf = !in_buf;
        width *= 2;
    }
    if in_buf {
        items.copy_from_slice(&buf);
    }
}

fn merge_pass<T: Keyed>(src: &[T], dst: &mut [T], width: usize) {
    let n = src.len();
    for (chunk, out) in dst.chunks_mut(2 * width).enumerate() {
        let start = chunk * 2 * width;
        let mid = (start + width).min(n);
        let end = start + out.len();
        merge_into(&src[start..mid], &src[mid..end], out);
    }
}

/// In-place quicksort with a median-of-three pivot and three-way
/// partitioning. Recurses into the smaller side and loops on the larger one,
/// so stack depth stays within log2(n) + 1 frames.
pub fn sort_quick<T: Keyed>(items: &mut [T]) {
    quick_with_depth(items);
}

/// Runs [`sort_quick`] and reports the deepest recursion level reached.
pub(crate) fn quick_with_depth<T: Keyed>(items: &mut [T]) -> usize {
    let mut deepest = 0;
    quick(items, 1, &mut deepest);
    deepest
}

fn quick<T: Keyed>(mut items: &mut [T], depth: usize, deepest: &mut usize) {
    *deepest = (*deepest).max(depth);
    loop {
        let n = items.len();
        if n <= 1 {
            return;
        }
        let pivot = median_of_three(items[0].key(), items[n / 2].key(), items[n - 1].key());
        let (lt, gt) = partition3(items, pivot);

        let whole = std::mem::take(&mut items);
        let (left, rest) = whole.split_at_mut(lt);
        let right = &mut rest[gt - lt..];
        if left.len() < right.len() {
            quick(left, depth + 1, deepest);
            items = right;
        } else {
            quick(right, depth + 1, deepest);
            items = left;
        }
    }
}

fn median_of_three(a: u64, b: u64, c: u64) -> u64 {
    a.max(b).min(a.min(b).max(c))
}

/// Dutch-flag partition. Returns `(lt, gt)` with keys below the pivot in
/// `[0, lt)`, equal in `[lt, gt)` and above in `[gt, n)`.
fn partition3<T: Keyed>(items: &mut [T], pivot: u64) -> (usize, usize) {
    let (mut lt, mut i, mut gt) = (0, 0, items.len());
    while i < gt {
        let k = items[i].key();
        if k < pivot {
            items.swap(lt, i);
            lt += 1;
            i += 1;
        } else if k > pivot {
            gt -= 1;
            items.swap(i, gt);
        } else {
            i += 1;
        }
    }
    (lt, gt)
}
