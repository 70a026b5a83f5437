//! Half-open stretches of a cyclically labelled sequence.

use crate::params::BridgeParams;

/// `len` consecutive labels starting at `start`, wrapping modulo `modulus`,
/// labels in `1..=modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicInterval {
    start: u32,
    len: u32,
    modulus: u32,
}

impl CyclicInterval {
    pub fn new(start: u32, len: u32, modulus: u32) -> Self {
        debug_assert!(start >= 1 && start <= modulus);
        debug_assert!(len <= modulus);
        CyclicInterval {
            start,
            len,
            modulus,
        }
    }

    /// The stretch from label `from` up to, not including, label `to`.
    pub fn between(from: u32, to: u32, params: &BridgeParams) -> Self {
        let m = params.punctures();
        let len = (to + m - from) % m;
        CyclicInterval::new(from, len, m)
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Last label, if non-empty.
    pub fn last(&self) -> Option<u32> {
        (self.len > 0).then(|| self.label_at(self.len - 1))
    }

    fn offset(&self, label: u32) -> u32 {
        (label + self.modulus - self.start) % self.modulus
    }

    fn label_at(&self, offset: u32) -> u32 {
        (self.start - 1 + offset) % self.modulus + 1
    }

    pub fn contains(&self, label: u32) -> bool {
        self.offset(label) < self.len
    }

    pub fn is_subset_of(&self, other: &CyclicInterval) -> bool {
        if self.len == 0 {
            return true;
        }
        if other.len == other.modulus {
            return true;
        }
        other.offset(self.start) + self.len <= other.len
    }

    pub fn is_disjoint(&self, other: &CyclicInterval) -> bool {
        if self.len == 0 || other.len == 0 {
            return true;
        }
        self.offset(other.start) >= self.len && other.offset(self.start) >= other.len
    }

    /// Neither disjoint nor nested.
    pub fn crosses(&self, other: &CyclicInterval) -> bool {
        !self.is_disjoint(other) && !self.is_subset_of(other) && !other.is_subset_of(self)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).map(move |k| self.label_at(k))
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Shift every label by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        let m = i64::from(self.modulus);
        let start = ((i64::from(self.start) - 1 + k).rem_euclid(m) + 1) as u32;
        CyclicInterval { start, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(start: u32, len: u32) -> CyclicInterval {
        CyclicInterval::new(start, len, 8)
    }

    #[test]
    fn membership_wraps() {
        let a = iv(7, 3);
        assert_eq!(a.to_vec(), vec![7, 8, 1]);
        assert!(a.contains(1) && a.contains(7) && !a.contains(2) && !a.contains(6));
        assert_eq!(a.last(), Some(1));
        assert_eq!(iv(3, 0).last(), None);
    }

    #[test]
    fn relations() {
        assert!(iv(2, 2).is_subset_of(&iv(1, 5)));
        assert!(!iv(1, 5).is_subset_of(&iv(2, 2)));
        assert!(iv(8, 2).is_subset_of(&iv(7, 3)));
        assert!(iv(1, 2).is_disjoint(&iv(3, 4)));
        assert!(iv(7, 3).is_disjoint(&iv(2, 5)));
        assert!(iv(1, 3).crosses(&iv(3, 3)));
        assert!(iv(7, 3).crosses(&iv(1, 2)));
        assert!(!iv(7, 3).crosses(&iv(8, 1)));
        // Two stretches covering the circle and overlapping at both ends.
        assert!(iv(1, 5).crosses(&iv(5, 5)));
    }

    #[test]
    fn shift_wraps() {
        assert_eq!(iv(8, 2).shifted(1), iv(1, 2));
        assert_eq!(iv(1, 2).shifted(-1), iv(8, 2));
    }
}
