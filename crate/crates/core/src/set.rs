use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::state::{check_same, StateVector, HARD_MAX_N};

/// A set of states of {0,1}^n, stored as a bitmap over the integer encodings.
///
/// Iteration is always in increasing encoding order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    n: usize,
    bits: FixedBitSet,
}

impl StateSet {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > HARD_MAX_N {
            return Err(Error::DimensionOutOfRange { n, max: HARD_MAX_N });
        }
        Ok(StateSet {
            n,
            bits: FixedBitSet::with_capacity(1usize << n),
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut set = StateSet::empty(n)?;
        set.bits.insert_range(..);
        Ok(set)
    }

    pub fn from_states<I: IntoIterator<Item = StateVector>>(n: usize, states: I) -> Result<Self> {
        let mut set = StateSet::empty(n)?;
        for s in states {
            set.insert(s)?;
        }
        Ok(set)
    }

    pub(crate) fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Self {
        let mut bits = FixedBitSet::with_capacity(1usize << n);
        bits.extend(indices);
        StateSet { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Returns whether the state was newly inserted.
    pub fn insert(&mut self, s: StateVector) -> Result<bool> {
        check_same(self.n, s.n())?;
        Ok(!self.bits.put(s.bits() as usize))
    }

    pub(crate) fn insert_index(&mut self, index: usize) -> bool {
        !self.bits.put(index)
    }

    pub fn contains(&self, s: StateVector) -> bool {
        s.n() == self.n && self.bits.contains(s.bits() as usize)
    }

    #[inline]
    pub(crate) fn contains_index(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == 1usize << self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = StateVector> + '_ {
        let n = self.n;
        self.bits
            .ones()
            .map(move |i| StateVector::from_raw(n, i as u32))
    }

    pub(crate) fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn first(&self) -> Option<StateVector> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.n == other.n && self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &StateSet) -> Result<StateSet> {
        check_same(self.n, other.n)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(StateSet { n: self.n, bits })
    }

    pub fn intersection(&self, other: &StateSet) -> Result<StateSet> {
        check_same(self.n, other.n)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(StateSet { n: self.n, bits })
    }

    pub fn complement(&self) -> StateSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        StateSet { n: self.n, bits }
    }

    pub fn to_vec(&self) -> Vec<StateVector> {
        self.iter().collect()
    }

    pub fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }
}

/// Formats as a state-set literal, e.g. `{01, 10}`.
impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, s) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateSet{self}")
    }
}

impl Serialize for StateSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|s| s.to_string()))
    }
}

impl PartialOrd for StateSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by dimension, then by the sorted member lists.
impl Ord for StateSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.bits.ones().cmp(other.bits.ones()))
    }
}
