//! Clock constraints, intervals, distributions and the automaton types.

mod constraint;
mod dist;
mod interval;
mod intervalset;
pub(crate) mod pta;
mod tmdp;

use std::collections::BTreeSet;

pub use constraint::{Atom, ClockConstraint, Cmp, ConstraintDisplay};
pub use dist::Distribution;
pub use interval::Interval;
pub use intervalset::{IntervalSet, SatMap};
pub use pta::{Diagnostic, Edge, Location, Outcome, Pta, Site};
pub use tmdp::{DiscreteTmdp, TmdpTransition, UntimedMdp};

/// Exact rational used for probabilities and clock values.
pub type Rat = num_rational::BigRational;

/// Set of atomic propositions holding in a state.
pub type LabelSet = BTreeSet<String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("not single-clock")]
    NotSingleClock,
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("expected a one-clock automaton, found {0} clocks")]
    ClockCount(usize),
    #[error("automaton is not structurally non-Zeno")]
    Zeno,
    #[error("automaton has deadlocking invariants")]
    Deadlocking,
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("valuation {value} violates the invariant of `{location}`")]
    InvariantViolated { location: String, value: String },
}

/// Parses `"3/4"`, `"0.75"` or `"2"` into an exact rational.
pub fn parse_rat(text: &str) -> Option<Rat> {
    use num_bigint::BigInt;
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int: BigInt = if int.is_empty() { BigInt::from(0) } else { int.parse().ok()? };
        if int < BigInt::from(0) {
            return None;
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().ok()?;
        return Some(Rat::new(int * &scale + frac, scale));
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rat::from_integer(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
