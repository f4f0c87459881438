//! Vertex subsets as 64-bit masks.
//!
//! Every vertex-set symbol of the solver (separators, components, carvers,
//! solution sets, …) is a [`VertexSet`]. Graphs are capped at
//! [`MAX_VERTICES`] vertices, so a single machine word suffices and set
//! algebra is branch-free.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub, SubAssign};

/// Hard cap on the number of vertices of any graph handled by this crate.
pub const MAX_VERTICES: usize = 64;

/// A subset of `{0, …, 63}` stored as a bit mask.
///
/// The derived `Ord` compares raw masks; it is only used for deterministic
/// container ordering, never for the solution quasi-orders.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    /// The empty set.
    pub const EMPTY: VertexSet = VertexSet(0);

    /// Builds a set from a raw mask.
    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// The raw mask.
    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{v}`.
    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u64 << v)
    }

    /// `{0, …, n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_proper_subset(self, other: VertexSet) -> bool {
        self.is_subset(other) && self != other
    }

    #[inline]
    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member, if any.
    #[inline]
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest member, if any.
    #[inline]
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Members in increasing order.
    #[inline]
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self` with at most `max_size` members, in increasing
    /// size and then mask order. The empty set is always first.
    pub fn subsets_up_to(self, max_size: usize) -> Vec<VertexSet> {
        let elems: Vec<usize> = self.iter().collect();
        let mut out = vec![VertexSet::EMPTY];
        let mut layer = vec![(VertexSet::EMPTY, 0usize)];
        for _ in 0..max_size.min(elems.len()) {
            let mut next = Vec::new();
            for &(set, start) in &layer {
                for (i, &v) in elems.iter().enumerate().skip(start) {
                    next.push((set.with(v), i + 1));
                }
            }
            out.extend(next.iter().map(|&(s, _)| s));
            layer = next;
        }
        out
    }

    /// Every subset of `self` (2^|self| of them).
    pub fn all_subsets(self) -> impl Iterator<Item = VertexSet> {
        let mask = self.0;
        let mut cur = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = cur;
            cur = cur.wrapping_sub(mask) & mask;
            if cur == 0 {
                done = true;
            }
            Some(VertexSet(out))
        })
    }

    /// Comma-separated member list, as used by the family and CLI formats.
    pub fn to_csv(self) -> String {
        self.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// The members as a vector.
    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

/// Iterator over the members of a [`VertexSet`].
#[derive(Clone)]
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl BitOr for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for VertexSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: VertexSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for VertexSet {
    #[inline]
    fn bitand_assign(&mut self, rhs: VertexSet) {
        self.0 &= rhs.0;
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl SubAssign for VertexSet {
    #[inline]
    fn sub_assign(&mut self, rhs: VertexSet) {
        self.0 &= !rhs.0;
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_csv())
    }
}

/// Shorthand for building a set from a slice of vertices.
pub fn vset(vs: &[usize]) -> VertexSet {
    vs.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let a = vset(&[0, 2, 5]);
        let b = vset(&[2, 3]);
        assert_eq!(a | b, vset(&[0, 2, 3, 5]));
        assert_eq!(a & b, vset(&[2]));
        assert_eq!(a - b, vset(&[0, 5]));
        assert!(vset(&[2]).is_subset(a));
        assert!(!a.is_subset(b));
        assert_eq!(a.min(), Some(0));
        assert_eq!(a.max(), Some(5));
        assert_eq!(a.len(), 3);
        assert_eq!(a.to_vec(), vec![0, 2, 5]);
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(VertexSet::EMPTY.min(), None);
    }

    #[test]
    fn subset_enumerations() {
        let a = vset(&[1, 4, 6, 7]);
        let all: Vec<_> = a.all_subsets().collect();
        assert_eq!(all.len(), 16);
        assert!(all.iter().all(|s| s.is_subset(a)));
        let small = a.subsets_up_to(2);
        assert_eq!(small.len(), 1 + 4 + 6);
        assert_eq!(small[0], VertexSet::EMPTY);
        assert!(small.iter().all(|s| s.len() <= 2));
        assert_eq!(VertexSet::EMPTY.all_subsets().count(), 1);
        assert_eq!(a.subsets_up_to(10).len(), 16);
    }
}
