use std::fmt;

use super::{Interval, Rat};

/// Disjoint, sorted, maximal union of intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn all() -> Self {
        IntervalSet { parts: vec![Interval::all()] }
    }

    pub fn from_intervals(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().collect();
        parts.sort_by(|a, b| a.cmp_lower(b));
        let mut out: Vec<Interval> = Vec::new();
        for p in parts {
            match out.last_mut() {
                Some(last) if touches(last, &p) => *last = hull(last, &p),
                _ => out.push(p),
            }
        }
        IntervalSet { parts: out }
    }

    pub fn single(i: Interval) -> Self {
        IntervalSet { parts: vec![i] }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.parts.iter().any(|p| p.contains(v))
    }

    pub fn contains_int(&self, c: u64) -> bool {
        self.parts.iter().any(|p| p.contains_int(c))
    }

    /// Whether `i` lies entirely inside one part.
    pub fn covers(&self, i: &Interval) -> bool {
        self.parts.iter().any(|p| i.is_subset_of(p))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.parts.iter().chain(other.parts.iter()).copied())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        IntervalSet::from_intervals(out)
    }

    pub fn intersect_interval(&self, i: &Interval) -> IntervalSet {
        self.intersect(&IntervalSet::single(*i))
    }

    /// Complement within the non-negative reals.
    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor: Option<(u64, bool)> = Some((0, true));
        for p in &self.parts {
            if let Some((lo, lo_closed)) = cursor {
                if let Some(gap) = Interval::new(lo, lo_closed, Some(p.lo()), !p.lo_closed()) {
                    out.push(gap);
                }
            }
            cursor = p.hi().map(|h| (h, !p.hi_closed()));
        }
        if let Some((lo, lo_closed)) = cursor {
            out.extend(Interval::new(lo, lo_closed, None, false));
        }
        IntervalSet { parts: out }
    }

    pub fn minus(&self, other: &IntervalSet) -> IntervalSet {
        self.intersect(&other.complement())
    }

    pub fn endpoints(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.parts.iter().flat_map(|p| p.endpoints()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Lower ends of the parts that are unbounded above.
    pub fn right_open_starts(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().filter(|p| p.hi().is_none()).map(|p| p.lo())
    }
}

fn touches(a: &Interval, b: &Interval) -> bool {
    match a.hi() {
        None => true,
        Some(h) => h > b.lo() || (h == b.lo() && (a.hi_closed() || b.lo_closed())),
    }
}

fn hull(a: &Interval, b: &Interval) -> Interval {
    let (hi, hi_closed) = match (a.hi(), b.hi()) {
        (None, _) | (_, None) => (None, false),
        (Some(x), Some(y)) if x > y => (Some(x), a.hi_closed()),
        (Some(x), Some(y)) if y > x => (Some(y), b.hi_closed()),
        (Some(x), Some(_)) => (Some(x), a.hi_closed() || b.hi_closed()),
    };
    Interval::new(a.lo(), a.lo_closed(), hi, hi_closed).expect("hull of non-empty intervals")
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}

/// Per-location satisfaction sets, indexed like the automaton's locations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SatMap {
    pub sets: Vec<IntervalSet>,
}

impl SatMap {
    pub fn new(sets: Vec<IntervalSet>) -> Self {
        SatMap { sets }
    }

    pub fn get(&self, loc: super::LocId) -> &IntervalSet {
        &self.sets[loc.0]
    }

    pub fn max_parts(&self) -> usize {
        self.sets.iter().map(IntervalSet::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: u64, lc: bool, hi: Option<u64>, hc: bool) -> Interval {
        Interval::new(lo, lc, hi, hc).unwrap()
    }

    #[test]
    fn merging_respects_missing_points() {
        let s = IntervalSet::from_intervals([iv(0, false, Some(2), false), iv(2, false, Some(4), false)]);
        assert_eq!(s.len(), 2);
        let t = IntervalSet::from_intervals([iv(0, false, Some(2), true), iv(2, false, Some(4), false)]);
        assert_eq!(t.parts(), &[iv(0, false, Some(4), false)]);
    }

    #[test]
    fn complement_round_trip() {
        let s = IntervalSet::from_intervals([iv(1, false, Some(3), true), iv(5, true, None, false)]);
        let c = s.complement();
        assert_eq!(c.parts(), &[iv(0, true, Some(1), true), iv(3, false, Some(5), false)]);
        assert_eq!(c.complement(), s);
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::all());
    }
}
