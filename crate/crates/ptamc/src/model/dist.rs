use num_traits::{One, Zero};

use super::Rat;

/// Finite distribution with exact weights, in insertion order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Distribution<T> {
    entries: Vec<(T, Rat)>,
}

impl<T: PartialEq + Clone> Distribution<T> {
    /// Merges repeated outcomes; no validity check.
    pub fn from_entries(entries: impl IntoIterator<Item = (T, Rat)>) -> Self {
        let mut merged: Vec<(T, Rat)> = Vec::new();
        for (t, p) in entries {
            match merged.iter_mut().find(|(u, _)| *u == t) {
                Some((_, q)) => *q += p,
                None => merged.push((t, p)),
            }
        }
        Distribution { entries: merged }
    }

    pub fn dirac(t: T) -> Self {
        Distribution { entries: vec![(t, Rat::one())] }
    }

    pub fn entries(&self) -> &[(T, Rat)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().filter(|(_, p)| !p.is_zero()).map(|(t, _)| t)
    }

    pub fn mass(&self) -> Rat {
        self.entries.iter().fold(Rat::zero(), |acc, (_, p)| acc + p)
    }

    pub fn prob(&self, t: &T) -> Rat {
        self.entries
            .iter()
            .filter(|(u, _)| u == t)
            .fold(Rat::zero(), |acc, (_, p)| acc + p)
    }

    /// Weights in (0,1], summing to one, non-empty.
    pub fn is_valid(&self) -> bool {
        !self.entries.is_empty()
            && self.entries.iter().all(|(_, p)| *p > Rat::zero() && *p <= Rat::one())
            && self.mass() == Rat::one()
    }

    pub fn map<U: PartialEq + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Distribution<U> {
        Distribution::from_entries(self.entries.iter().map(|(t, p)| (f(t), p.clone())))
    }

    pub fn set_weight(&mut self, index: usize, p: Rat) {
        self.entries[index].1 = p;
    }
}
