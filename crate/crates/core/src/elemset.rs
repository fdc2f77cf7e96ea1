//! Dense element subsets keyed by element index.

use std::fmt;

use serde::{Serialize, Serializer};

/// Largest carrier an [`ElemSet`] can address.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{0, .., n-1}` stored as a bitmask. Ordering is by bitmask
/// value, which is the canonical order used for listings of subsets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The full carrier `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        ElemSet(1u64 << x)
    }

    pub fn contains(self, x: usize) -> bool {
        x < MAX_ELEMENTS && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    pub fn with(mut self, x: usize) -> Self {
        self.insert(x);
        self
    }

    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1u64 << x);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: ElemSet) -> bool {
        self.is_subset(other) && self != other
    }

    /// Members in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(x)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = ElemSet::EMPTY;
        for x in iter {
            set.insert(x);
        }
        set
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElemSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_is_sorted() {
        let s: ElemSet = [5, 0, 3].into_iter().collect();
        assert_eq!(s.to_vec(), vec![0, 3, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(4));
    }

    #[test]
    fn full_and_subsets() {
        let full = ElemSet::full(6);
        assert_eq!(full.len(), 6);
        assert!(ElemSet::singleton(2).is_proper_subset(full));
        assert!(!full.is_proper_subset(full));
        assert_eq!(ElemSet::full(64).len(), 64);
    }
}
