use std::fmt;

use crate::item::{Key, Keyed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Yes,
    No,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub sorted: bool,
    pub permutation: bool,
    pub stable: Stability,
    /// First index whose key is smaller than its predecessor, or, for a
    /// sorted output that is not a permutation, the first index where it
    /// differs from the sorted input.
    pub first_violation: Option<usize>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.sorted && self.permutation && self.stable != Stability::No
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stable = match self.stable {
            Stability::Yes => "yes",
            Stability::No => "no",
            Stability::NotApplicable => "n/a",
        };
        write!(
            f,
            "sorted={} permutation={} stable={}",
            self.sorted, self.permutation, stable
        )?;
        if let Some(i) = self.first_violation {
            write!(f, " first_violation={i}")?;
        }
        Ok(())
    }
}

/// Checks that `output` is a non-decreasing permutation of `input`.
///
/// With `check_stability`, tagged outputs are also checked for strictly
/// increasing tags within each run of equal keys; untagged outputs report
/// [`Stability::NotApplicable`].
pub fn verify<T: Keyed>(input: &[Key], output: &[T], check_stability: bool) -> VerifyReport {
    let inversion = output
        .windows(2)
        .position(|w| w[1].key() < w[0].key())
        .map(|i| i + 1);
    let sorted = inversion.is_none();

    let mut expected = input.to_vec();
    expected.sort_unstable();
    let mut got: Vec<Key> = output.iter().map(Keyed::key).collect();
    if !sorted {
        got.sort_unstable();
    }
    let permutation = expected == got;
    let mismatch = if sorted && !permutation {
        expected
            .iter()
            .zip(&got)
            .position(|(a, b)| a != b)
            .or(Some(expected.len().min(got.len())))
    } else {
        None
    };

    let stable = if !check_stability {
        Stability::NotApplicable
    } else {
        stability(output)
    };

    VerifyReport {
        sorted,
        permutation,
        stable,
        first_violation: inversion.or(mismatch),
    }
}

fn stability<T: Keyed>(output: &[T]) -> Stability {
    let mut stable = true;
    for w in output.windows(2) {
        match (w[0].tag(), w[1].tag()) {
            (Some(a), Some(b)) => {
                if w[0].key() == w[1].key() && a >= b {
                    stable = false;
                }
            }
            _ => return Stability::NotApplicable,
        }
    }
    if output.first().is_none_or(|x| x.tag().is_none()) {
        return Stability::NotApplicable;
    }
    if stable {
        Stability::Yes
    } else {
        Stability::No
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::item::SortItem;
    use crate::seq::sort_quick;

    #[test]
    fn examples() {
        let r = verify(&[2, 1], &[1u64, 2], false);
        assert!(r.sorted && r.permutation && r.passed());
        assert_eq!(r.stable, Stability::NotApplicable);

        let r = verify(&[1, 2], &[1u64, 1], false);
        assert!(r.sorted && !r.permutation && !r.passed());
        assert_eq!(r.first_violation, Some(1));

        let r = verify(&[1, 3, 2], &[1u64, 3, 2], false);
        assert!(!r.sorted && r.permutation);
        assert_eq!(r.first_violation, Some(2));

        let r = verify(&[1, 2], &[1u64, 2, 3], false);
        assert!(!r.permutation);
        assert_eq!(r.first_violation, Some(2));
    }

    #[test]
    fn stability_from_tags() {
        let keys: Vec<u64> = (0..2000).map(|i| i % 3).collect();
        let mut items = SortItem::tag_positions(&keys);
        sort_quick(&mut items);
        let r = verify(&keys, &items, true);
        assert!(r.sorted && r.permutation);
        // Three-way partitioning scrambles equal keys on this input.
        assert_eq!(r.stable, Stability::No);
        assert!(!r.passed());
        assert_eq!(
            verify(&keys, &items, false).stable,
            Stability::NotApplicable
        );

        items.sort_by_key(|i| (i.key, i.tag));
        assert_eq!(verify(&keys, &items, true).stable, Stability::Yes);

        assert_eq!(verify(&[1], &[1u64], true).stable, Stability::NotApplicable);
    }
}
