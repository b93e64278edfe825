/// Sort key. Every algorithm in this crate orders unsigned 64-bit integers.
pub type Key = u64;

/// Anything that can be sorted by the kernels: a bare [`Key`] or a key
/// carrying a tag.
///
/// Ordering consults [`Keyed::key`] only.
pub trait Keyed: Copy + Send + Sync {
    fn key(&self) -> Key;

    /// Original-position marker, when the item carries one.
    fn tag(&self) -> Option<u64> {
        None
    }
}

impl Keyed for Key {
    #[inline]
    fn key(&self) -> Key {
        *self
    }
}

/// A key plus an opaque order tag used to observe stability.
///
/// The tag never influences comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SortItem {
    pub key: Key,
    pub tag: u64,
}

impl SortItem {
    pub fn new(key: Key, tag: u64) -> Self {
        Self { key, tag }
    }

    /// Tags each key with its input position.
    pub fn tag_positions(keys: &[Key]) -> Vec<SortItem> {
        keys.iter()
            .enumerate()
            .map(|(i, &key)| SortItem::new(key, i as u64))
            .collect()
    }
}

impl Keyed for SortItem {
    #[inline]
    fn key(&self) -> Key {
        self.key
    }

    #[inline]
    fn tag(&self) -> Option<u64> {
        Some(self.tag)
    }
}

/// Key projection of an item sequence.
pub fn keys_of<T: Keyed>(items: &[T]) -> Vec<Key> {
    items.iter().map(Keyed::key).collect()
}
