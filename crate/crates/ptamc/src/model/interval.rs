use std::cmp::Ordering;
use std::fmt;

use super::Rat;

/// A non-empty interval of clock values with natural endpoints.
///
/// `hi == None` stands for an open upper end at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: u64,
    lo_closed: bool,
    hi: Option<u64>,
    hi_closed: bool,
}

impl Interval {
    /// Returns `None` when the described set is empty.
    pub fn new(lo: u64, lo_closed: bool, hi: Option<u64>, hi_closed: bool) -> Option<Interval> {
        let hi_closed = hi_closed && hi.is_some();
        match hi {
            Some(h) if h < lo => None,
            Some(h) if h == lo && !(lo_closed && hi_closed) => None,
            _ => Some(Interval { lo, lo_closed, hi, hi_closed }),
        }
    }

    pub fn all() -> Interval {
        Interval { lo: 0, lo_closed: true, hi: None, hi_closed: false }
    }

    pub fn point(c: u64) -> Interval {
        Interval { lo: c, lo_closed: true, hi: Some(c), hi_closed: true }
    }

    pub fn open(lo: u64, hi: Option<u64>) -> Option<Interval> {
        Interval::new(lo, false, hi, false)
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi(&self) -> Option<u64> {
        self.hi
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.hi == Some(self.lo)
    }

    pub fn contains(&self, v: &Rat) -> bool {
        let lo = Rat::from_integer(self.lo.into());
        let above = if self.lo_closed { *v >= lo } else { *v > lo };
        let below = match self.hi {
            None => true,
            Some(h) => {
                let h = Rat::from_integer(h.into());
                if self.hi_closed {
                    *v <= h
                } else {
                    *v < h
                }
            }
        };
        above && below
    }

    pub fn contains_int(&self, c: u64) -> bool {
        self.contains(&Rat::from_integer(c.into()))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo, self.lo_closed),
            Ordering::Less => (other.lo, other.lo_closed),
            Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match (self.hi, other.hi) {
            (None, None) => (None, false),
            (Some(h), None) => (Some(h), self.hi_closed),
            (None, Some(h)) => (Some(h), other.hi_closed),
            (Some(a), Some(b)) => match a.cmp(&b) {
                Ordering::Less => (Some(a), self.hi_closed),
                Ordering::Greater => (Some(b), other.hi_closed),
                Ordering::Equal => (Some(a), self.hi_closed && other.hi_closed),
            },
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.intersect(other) == Some(*self)
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.intersect(other).is_some()
    }

    /// Same lower end, unbounded above.
    pub fn upward(&self) -> Interval {
        Interval { lo: self.lo, lo_closed: self.lo_closed, hi: None, hi_closed: false }
    }

    /// Compares lower ends, a closed end sorting before an open one.
    pub fn cmp_lower(&self, other: &Interval) -> Ordering {
        self.lo.cmp(&other.lo).then(other.lo_closed.cmp(&self.lo_closed))
    }

    /// The integer endpoints of the interval.
    pub fn endpoints(&self) -> impl Iterator<Item = u64> {
        std::iter::once(self.lo).chain(self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{};", if self.lo_closed { '[' } else { '(' }, self.lo)?;
        match self.hi {
            Some(h) => write!(f, "{}{}", h, if self.hi_closed { ']' } else { ')' }),
            None => write!(f, "inf)"),
        }
    }
}
