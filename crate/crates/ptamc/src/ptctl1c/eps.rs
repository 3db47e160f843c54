use std::fmt;
use std::ops::Add;

use crate::games::{Duration, GameValue};

/// `k + m·ε` for a formal positive infinitesimal ε, ordered lexicographically.
///
/// Strict constraints make optimal times approached but never attained; the
/// sign of `m` records from which side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Eps {
    pub k: i64,
    pub m: i64,
}

impl Eps {
    pub fn new(k: i64, m: i64) -> Self {
        Eps { k, m }
    }

    pub fn int(k: u64) -> Self {
        Eps { k: k as i64, m: 0 }
    }

    pub fn flag(&self) -> Flag {
        match self.m.cmp(&0) {
            std::cmp::Ordering::Less => Flag::Below,
            std::cmp::Ordering::Equal => Flag::Exact,
            std::cmp::Ordering::Greater => Flag::Above,
        }
    }
}

impl Add for Eps {
    type Output = Eps;

    fn add(self, o: Eps) -> Eps {
        Eps { k: self.k + o.k, m: self.m + o.m }
    }
}

impl Duration for Eps {
    fn zero() -> Self {
        Eps::default()
    }

    fn from_int(c: u64) -> Self {
        Eps::int(c)
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m {
            0 => write!(f, "{}", self.k),
            1 => write!(f, "{}+e", self.k),
            -1 => write!(f, "{}-e", self.k),
            m if m > 0 => write!(f, "{}+{}e", self.k, m),
            m => write!(f, "{}-{}e", self.k, -m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    Below,
    Exact,
    Above,
}

/// A game value with its infinitesimal part reduced to a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedBound {
    NegInf,
    Fin { k: i64, flag: Flag },
    PosInf,
}

impl ExtendedBound {
    pub fn of(v: &GameValue<Eps>) -> Self {
        match v {
            GameValue::NegInf => ExtendedBound::NegInf,
            GameValue::Fin(e) => ExtendedBound::Fin { k: e.k, flag: e.flag() },
            GameValue::PosInf => ExtendedBound::PosInf,
        }
    }

    pub fn le_int(&self, c: u64) -> bool {
        let c = c as i64;
        match *self {
            ExtendedBound::NegInf => true,
            ExtendedBound::PosInf => false,
            ExtendedBound::Fin { k, flag: Flag::Above } => k < c,
            ExtendedBound::Fin { k, .. } => k <= c,
        }
    }

    pub fn ge_int(&self, c: u64) -> bool {
        let c = c as i64;
        match *self {
            ExtendedBound::NegInf => false,
            ExtendedBound::PosInf => true,
            ExtendedBound::Fin { k, flag: Flag::Below } => k > c,
            ExtendedBound::Fin { k, .. } => k >= c,
        }
    }
}

impl fmt::Display for ExtendedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedBound::NegInf => f.write_str("-inf"),
            ExtendedBound::PosInf => f.write_str("inf"),
            ExtendedBound::Fin { k, flag: Flag::Below } => write!(f, "<{}", k),
            ExtendedBound::Fin { k, flag: Flag::Exact } => write!(f, "={}", k),
            ExtendedBound::Fin { k, flag: Flag::Above } => write!(f, ">{}", k),
        }
    }
}
