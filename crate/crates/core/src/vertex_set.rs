//! Bit-mask vertex sets.
//!
//! A [`VertexSet`] stores its members as a little-endian sequence of 64-bit
//! words. Up to 128 vertices the words live inline; larger ground sets spill
//! onto the heap as a multi-word mask. Trailing zero words are always
//! trimmed so that equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

const WORD: usize = 64;

type Words = SmallVec<[u64; 2]>;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Words,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::new();
        s.insert(v);
        s
    }

    /// `{0, 1, ..., n - 1}`.
    pub fn full(n: usize) -> Self {
        let mut words: Words = SmallVec::from_elem(u64::MAX, n / WORD);
        if !n.is_multiple_of(WORD) {
            words.push((1u64 << (n % WORD)) - 1);
        }
        Self { words }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.word(v / WORD) >> (v % WORD) & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / WORD;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (v % WORD);
    }

    pub fn remove(&mut self, v: usize) {
        let w = v / WORD;
        if w < self.words.len() {
            self.words[w] &= !(1 << (v % WORD));
            self.trim();
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest member, if any.
    pub fn max_vertex(&self) -> Option<usize> {
        let last = self.words.len().checked_sub(1)?;
        let w = self.words[last];
        Some(last * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.len() <= other.words.len()
            && self
                .words
                .iter()
                .zip(other.words.iter())
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(short.words.iter()) {
            *w |= s;
        }
        Self { words }
    }

    pub fn union_with(&mut self, other: &Self) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, o) in self.words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Self {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        };
        out.trim();
        out
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Self {
            words: self
                .words
                .iter()
                .enumerate()
                .map(|(i, a)| a & !other.word(i))
                .collect(),
        };
        out.trim();
        out
    }

    /// Size of `self \ other` without allocating.
    pub fn difference_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .enumerate()
            .map(|(i, a)| (a & !other.word(i)).count_ones() as usize)
            .sum()
    }

    /// True if `self \ other ⊆ within`.
    pub fn difference_subset_of(&self, other: &Self, within: &Self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, a)| a & !other.word(i) & !within.word(i) == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.word(0),
        }
    }

    /// All subsets of `self`, in order of the binary counter over members.
    /// Callers bound `self.len()`; this is exponential.
    pub fn subsets(&self) -> impl Iterator<Item = VertexSet> + '_ {
        let members: Vec<usize> = self.iter().collect();
        let k = members.len();
        assert!(k < 64, "subset enumeration of a {k}-element set");
        (0u64..1 << k).map(move |mask| {
            members
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(items: [usize; N]) -> Self {
        items.into_iter().collect()
    }
}

/// Lexicographic order on the ascending member lists: `{} < {0} < {0,1} <
/// {0,2} < {1}`. This is the tie-break order used throughout the crate.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        Ok(members.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn basic_membership() {
        let mut s = VertexSet::from([3, 70, 130]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(70));
        assert_eq!(s.max_vertex(), Some(130));
        s.remove(130);
        assert_eq!(s, VertexSet::from([3, 70]));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 70]);
    }

    #[test]
    fn empty_set_is_canonical() {
        let mut s = VertexSet::singleton(200);
        s.remove(200);
        assert_eq!(s, VertexSet::new());
        assert!(s.is_subset(&VertexSet::new()));
        assert_eq!(s.to_string(), "-");
    }

    #[test]
    fn full_sets() {
        assert_eq!(VertexSet::full(0), VertexSet::new());
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(VertexSet::full(130).len(), 130);
        assert_eq!(VertexSet::full(3), VertexSet::from([0, 1, 2]));
    }

    #[test]
    fn lexicographic_order() {
        let mut sets = [VertexSet::from([1]),
            VertexSet::from([0, 2]),
            VertexSet::new(),
            VertexSet::from([0, 1]),
            VertexSet::from([0])];
        sets.sort();
        let shown: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["-", "0", "0 1", "0 2", "1"]);
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s = VertexSet::from([2, 5, 9]);
        let all: BTreeSet<VertexSet> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|t| t.is_subset(&s)));
    }

    fn arb_set() -> impl Strategy<Value = BTreeSet<usize>> {
        prop::collection::btree_set(0usize..200, 0..12)
    }

    proptest! {
        #[test]
        fn agrees_with_btreeset(a in arb_set(), b in arb_set()) {
            let va: VertexSet = a.iter().copied().collect();
            let vb: VertexSet = b.iter().copied().collect();
            let as_vs = |s: BTreeSet<usize>| s.into_iter().collect::<VertexSet>();
            prop_assert_eq!(va.union(&vb), as_vs(a.union(&b).copied().collect()));
            prop_assert_eq!(va.intersection(&vb), as_vs(a.intersection(&b).copied().collect()));
            prop_assert_eq!(va.difference(&vb), as_vs(a.difference(&b).copied().collect()));
            prop_assert_eq!(va.difference_len(&vb), a.difference(&b).count());
            prop_assert_eq!(va.intersection_len(&vb), a.intersection(&b).count());
            prop_assert_eq!(va.is_subset(&vb), a.is_subset(&b));
            prop_assert_eq!(va.is_disjoint(&vb), a.is_disjoint(&b));
            prop_assert_eq!(va.cmp(&vb), a.iter().cmp(b.iter()));
            let mut u = va.clone();
            u.union_with(&vb);
            prop_assert_eq!(u, va.union(&vb));
        }

        #[test]
        fn difference_subset_matches_definition(a in arb_set(), b in arb_set(), c in arb_set()) {
            let [va, vb, vc] = [a, b, c].map(|s| s.into_iter().collect::<VertexSet>());
            prop_assert_eq!(
                va.difference_subset_of(&vb, &vc),
                va.difference(&vb).is_subset(&vc)
            );
        }
    }
}
