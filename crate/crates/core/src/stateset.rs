//! Dense bit set over state-lattice indices.

/// A set of states, indexed by [`crate::SystemSpec::state_index`] rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    bits: Vec<u64>,
    universe: usize,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            bits: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, index: usize) {
        debug_assert!(index < self.universe);
        self.bits[index / 64] |= 1u64 << (index % 64);
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && self.bits[index / 64] & (1u64 << (index % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn minus(&self, other: &StateSet) -> StateSet {
        debug_assert_eq!(self.universe, other.universe);
        StateSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & !b)
                .collect(),
            universe: self.universe,
        }
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    /// Indices present in the set, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word & (1u64 << b) != 0)
                .map(move |b| w * 64 + b)
        })
    }
}
