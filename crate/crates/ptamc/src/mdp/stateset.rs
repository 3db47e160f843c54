/// Subset of `0..n`, stored as one flag per state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: Vec<bool>,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet { bits: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        StateSet { bits: vec![true; n] }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> bool) -> Self {
        StateSet { bits: (0..n).map(f).collect() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        StateSet { bits }
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn contains(&self, s: usize) -> bool {
        self.bits[s]
    }

    pub fn insert(&mut self, s: usize) {
        self.bits[s] = true;
    }

    pub fn remove(&mut self, s: usize) {
        self.bits[s] = false;
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn complement(&self) -> StateSet {
        StateSet { bits: self.bits.iter().map(|b| !b).collect() }
    }

    pub fn intersect(&self, other: &StateSet) -> StateSet {
        StateSet { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && *b).collect() }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect() }
    }

    pub fn minus(&self, other: &StateSet) -> StateSet {
        StateSet { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && !*b).collect() }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}
