use serde::ser::{Serialize, SerializeSeq, Serializer};
use smallvec::SmallVec;
use std::fmt;

/// Subset of the vertices `0..n` of a fixed host graph, packed into 64-bit
/// words. Graphs up to 64 vertices use a single inline word; larger products
/// spill into more words with the same semantics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: SmallVec<[u64; 2]>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: smallvec::smallvec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let bits_here = (n - i * 64).min(64);
            *w = if bits_here == 64 {
                u64::MAX
            } else {
                (1u64 << bits_here) - 1
            };
        }
        s
    }

    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Self {
        let mut s = Self::empty(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    /// Size of the host vertex set, not the number of members.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} outside universe 0..{}", self.n);
        self.words[v / 64] |= 1u64 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} outside universe 0..{}", self.n);
        self.words[v / 64] &= !(1u64 << (v % 64));
    }

    /// Drops every member smaller than `v`.
    pub fn remove_below(&mut self, v: usize) {
        let cut = v.min(self.n);
        for w in self.words.iter_mut().take(cut / 64) {
            *w = 0;
        }
        if let Some(w) = self.words.get_mut(cut / 64) {
            *w &= !((1u64 << (cut % 64)) - 1);
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> Members<'_> {
        Members {
            set: self,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_check(&self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n, "sets from different host graphs");
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.zip_check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.zip_check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.zip_check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet::full(self.n);
        s.difference_with(self);
        s
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.zip_check(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.zip_check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.zip_check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }
}

pub struct Members<'a> {
    set: &'a VertexSet,
    word_idx: usize,
    current: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.set.words.len() {
                return None;
            }
            self.current = self.set.words[self.word_idx];
        }
    }
}

/// Orders sets as their ascending member sequences, so `{0,1} < {0,2} < {1}`
/// and an enumeration emitting sets in this order is reproducible.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let mut s = VertexSet::empty(70);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(63);
        s.insert(69);
        assert_eq!(s.len(), 3);
        assert!(s.contains(63));
        assert!(!s.contains(62));
        assert_eq!(s.to_vec(), vec![0, 63, 69]);
        s.remove(63);
        assert_eq!(s.to_vec(), vec![0, 69]);
    }

    #[test]
    fn full_and_complement() {
        let s = VertexSet::full(66);
        assert_eq!(s.len(), 66);
        let t = VertexSet::from_members(66, [0, 65]).complement();
        assert_eq!(t.len(), 64);
        assert!(!t.contains(0));
        assert!(!t.contains(65));
        assert!(t.contains(64));
    }

    #[test]
    fn remove_below_crosses_words() {
        let mut s = VertexSet::full(130);
        s.remove_below(65);
        assert_eq!(s.first(), Some(65));
        assert_eq!(s.len(), 65);
        let mut t = VertexSet::full(64);
        t.remove_below(64);
        assert!(t.is_empty());
        let mut u = VertexSet::full(10);
        u.remove_below(0);
        assert_eq!(u.len(), 10);
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_members(10, [1, 3, 5]);
        let b = VertexSet::from_members(10, [3, 5, 7]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 3, 5, 7]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3, 5]);
        assert_eq!(a.difference(&b).to_vec(), vec![1]);
        assert_eq!(a.intersection_len(&b), 2);
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!a.is_disjoint(&b));
        assert!(a.difference(&b).is_disjoint(&b));
    }

    #[test]
    fn order_is_member_sequence_order() {
        let mk = |vs: &[usize]| VertexSet::from_members(8, vs.iter().copied());
        assert!(mk(&[0, 1]) < mk(&[0, 2]));
        assert!(mk(&[0, 2]) < mk(&[1]));
        assert!(mk(&[]) < mk(&[0]));
        assert!(mk(&[1]) < mk(&[1, 2]));
        let mut sets = [mk(&[1]), mk(&[0, 2]), mk(&[0, 1]), mk(&[])];
        sets.sort();
        assert_eq!(
            sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
            vec![vec![], vec![0, 1], vec![0, 2], vec![1]]
        );
    }

    #[test]
    fn serializes_as_member_list() {
        let s = VertexSet::from_members(6, [4, 0, 2]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,2,4]");
    }
}
