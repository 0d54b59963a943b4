//! Fixed-capacity bit sets over node indices.

use core::fmt;

/// Largest graph size any structure in this crate accepts.
pub const MAX_NODES: usize = 64;

/// A set of node indices below [`MAX_NODES`], stored as a single word.
///
/// Iteration is always in increasing index order, which is the canonical
/// node order used throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_NODES);
        NodeSet(1u64 << v)
    }

    /// The set {0, .., n-1}.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_NODES);
        if n == MAX_NODES {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_NODES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_NODES);
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < MAX_NODES {
            self.0 &= !(1u64 << v);
        }
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        let mut s = self;
        s.insert(v);
        s
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        let mut s = self;
        s.remove(v);
        s
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn union(self, other: Self) -> Self {
        NodeSet(self.0 | other.0)
    }

    #[inline]
    pub const fn intersection(self, other: Self) -> Self {
        NodeSet(self.0 & other.0)
    }

    #[inline]
    pub const fn difference(self, other: Self) -> Self {
        NodeSet(self.0 & !other.0)
    }

    #[inline]
    pub const fn symmetric_difference(self, other: Self) -> Self {
        NodeSet(self.0 ^ other.0)
    }

    #[inline]
    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Largest member, if any.
    #[inline]
    pub fn last(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros() as usize)
        }
    }

    #[inline]
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, by increasing size and then lexicographically
    /// on the sorted member lists.
    pub fn subsets(self) -> Subsets {
        Subsets::new(self)
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = NodeSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for NodeSet {
    fn from_iter<T: IntoIterator<Item = &'a usize>>(iter: T) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl IntoIterator for NodeSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl core::ops::BitOr for NodeSet {
    type Output = NodeSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl core::ops::BitAnd for NodeSet {
    type Output = NodeSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl core::ops::Sub for NodeSet {
    type Output = NodeSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl core::ops::BitOrAssign for NodeSet {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

#[derive(Clone, Debug)]
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

/// Subset iterator in (size, lexicographic) order.
///
/// For each size k the combinations of the pool's members are produced
/// in lexicographic order of their sorted index lists.
#[derive(Clone, Debug)]
pub struct Subsets {
    pool: [u8; MAX_NODES],
    m: usize,
    k: usize,
    idx: [u8; MAX_NODES],
    done: bool,
}

impl Subsets {
    fn new(pool: NodeSet) -> Self {
        let mut arr = [0u8; MAX_NODES];
        let mut m = 0;
        for v in pool.iter() {
            arr[m] = v as u8;
            m += 1;
        }
        Subsets {
            pool: arr,
            m,
            k: 0,
            idx: [0; MAX_NODES],
            done: false,
        }
    }

    fn current(&self) -> NodeSet {
        let mut s = NodeSet::EMPTY;
        for t in 0..self.k {
            s.insert(self.pool[self.idx[t] as usize] as usize);
        }
        s
    }

    fn advance(&mut self) {
        // next combination of size k, or first of size k + 1
        let (m, k) = (self.m, self.k);
        let mut t = k;
        while t > 0 {
            t -= 1;
            if (self.idx[t] as usize) < m - k + t {
                self.idx[t] += 1;
                for u in t + 1..k {
                    self.idx[u] = self.idx[u - 1] + 1;
                }
                return;
            }
        }
        if k == m {
            self.done = true;
            return;
        }
        self.k = k + 1;
        for u in 0..self.k {
            self.idx[u] = u as u8;
        }
    }
}

impl Iterator for Subsets {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        if self.done {
            return None;
        }
        let s = self.current();
        self.advance();
        Some(s)
    }
}
