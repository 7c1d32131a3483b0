use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest vertex label we support; sets are backed by a single `u64`.
pub const MAX_VERTICES: usize = 64;

/// A set of vertex labels (1-based), stored as a bitmask.
///
/// Iteration and the derived orderings follow ascending label order, so
/// `{1,3} < {2}` and `{1} < {1,3}` (sequence-lexicographic).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        VertexSet(1u64 << (v - 1))
    }

    /// The full set {1, .., n}.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 0 {
            VertexSet(0)
        } else {
            VertexSet(u64::MAX >> (64 - n))
        }
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        self.0 |= 1u64 << (v - 1);
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        self.0 &= !(1u64 << (v - 1));
    }

    pub fn contains(&self, v: usize) -> bool {
        v >= 1 && v <= MAX_VERTICES && self.0 & (1u64 << (v - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Smallest label in the set.
    pub fn min_label(&self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    pub fn is_subset(&self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(&self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                Some(v)
            }
        })
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

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0;
        let mut b = other.0;
        loop {
            match (a == 0, b == 0) {
                (true, true) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                (false, false) => {
                    let ta = a.trailing_zeros();
                    let tb = b.trailing_zeros();
                    if ta != tb {
                        return ta.cmp(&tb);
                    }
                    a &= a - 1;
                    b &= b - 1;
                }
            }
        }
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(de)?;
        let mut s = VertexSet::EMPTY;
        for v in labels {
            if !(1..=MAX_VERTICES).contains(&v) {
                return Err(D::Error::custom(format!("vertex label {v} out of range")));
            }
            if s.contains(v) {
                return Err(D::Error::custom(format!("duplicate vertex label {v}")));
            }
            s.insert(v);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: VertexSet = [1, 3, 5].into_iter().collect();
        assert_eq!(a.len(), 3);
        assert_eq!(a.min_label(), Some(1));
        assert!(a.contains(3));
        assert!(!a.contains(2));
        let b: VertexSet = [3, 4].into_iter().collect();
        assert_eq!((a & b).iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!((a | b).len(), 4);
        assert_eq!((a - b).iter().collect::<Vec<_>>(), vec![1, 5]);
        assert!(VertexSet::singleton(3).is_subset(a));
        assert!(VertexSet::EMPTY.is_empty());
        assert_eq!(VertexSet::full(3).iter().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn order_is_sequence_lexicographic() {
        let s = |xs: &[usize]| xs.iter().copied().collect::<VertexSet>();
        assert!(s(&[1, 3]) < s(&[2]));
        assert!(s(&[1]) < s(&[1, 3]));
        assert!(s(&[3]) > s(&[1, 3]));
        assert_eq!(s(&[2, 4]).cmp(&s(&[2, 4])), Ordering::Equal);
    }

    #[test]
    fn serde_round_trip() {
        let a: VertexSet = [2, 7, 9].into_iter().collect();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[2,7,9]");
        let back: VertexSet = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
        assert!(serde_json::from_str::<VertexSet>("[0]").is_err());
        assert!(serde_json::from_str::<VertexSet>("[1,1]").is_err());
    }
}
