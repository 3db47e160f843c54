use std::fmt;

use super::interval::Interval;
use super::{ClockId, ModelError, Rat};

/// Comparison operator of a clock atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Ge,
    Gt,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }

    pub fn holds(self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }
}

/// `clock cmp bound`, e.g. `x < 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub clock: ClockId,
    pub cmp: Cmp,
    pub bound: u64,
}

impl Atom {
    pub fn new(clock: ClockId, cmp: Cmp, bound: u64) -> Self {
        Atom { clock, cmp, bound }
    }

    pub fn eval(&self, v: &[Rat]) -> bool {
        self.cmp.holds(&v[self.clock.0], &Rat::from_integer(self.bound.into()))
    }

    fn interval(&self) -> Option<Interval> {
        match self.cmp {
            Cmp::Lt => Interval::new(0, true, Some(self.bound), false),
            Cmp::Le => Interval::new(0, true, Some(self.bound), true),
            Cmp::Ge => Interval::new(self.bound, true, None, false),
            Cmp::Gt => Interval::new(self.bound, false, None, false),
        }
    }
}

/// A conjunction of single-clock atoms, kept sorted and deduplicated.
///
/// The empty conjunction is `true`; `false` is carried as an explicit flag
/// because the reset quotient can produce it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ClockConstraint {
    atoms: Vec<Atom>,
    falsum: bool,
}

impl ClockConstraint {
    pub fn truth() -> Self {
        ClockConstraint::default()
    }

    pub fn falsity() -> Self {
        ClockConstraint { atoms: Vec::new(), falsum: true }
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort();
        atoms.dedup();
        ClockConstraint { atoms, falsum: false }
    }

    /// Both `x >= c` and `x <= c`.
    pub fn equals(clock: ClockId, bound: u64) -> Self {
        Self::from_atoms([Atom::new(clock, Cmp::Ge, bound), Atom::new(clock, Cmp::Le, bound)])
    }

    pub fn atom(clock: ClockId, cmp: Cmp, bound: u64) -> Self {
        Self::from_atoms([Atom::new(clock, cmp, bound)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_syntactically_false(&self) -> bool {
        self.falsum
    }

    pub fn is_true(&self) -> bool {
        !self.falsum && self.atoms.is_empty()
    }

    pub fn and(&self, other: &ClockConstraint) -> ClockConstraint {
        if self.falsum || other.falsum {
            return Self::falsity();
        }
        Self::from_atoms(self.atoms.iter().chain(other.atoms.iter()).copied())
    }

    pub fn constants(&self) -> impl Iterator<Item = u64> + '_ {
        self.atoms.iter().map(|a| a.bound)
    }

    pub fn max_constant(&self) -> u64 {
        self.constants().max().unwrap_or(0)
    }

    pub fn clocks(&self) -> Vec<ClockId> {
        let mut cs: Vec<ClockId> = self.atoms.iter().map(|a| a.clock).collect();
        cs.dedup();
        cs
    }

    pub fn eval(&self, v: &[Rat]) -> bool {
        !self.falsum && self.atoms.iter().all(|a| a.eval(v))
    }

    /// Replaces `x < c` by `x > c-1 && x < c` and `x <= c` by `x >= c && x <= c`.
    pub fn upper_closure(&self) -> ClockConstraint {
        if self.falsum {
            return self.clone();
        }
        let mut out = Vec::new();
        for a in &self.atoms {
            match a.cmp {
                Cmp::Lt if a.bound >= 1 => {
                    out.push(Atom::new(a.clock, Cmp::Gt, a.bound - 1));
                    out.push(*a);
                }
                Cmp::Le => {
                    out.push(Atom::new(a.clock, Cmp::Ge, a.bound));
                    out.push(*a);
                }
                _ => out.push(*a),
            }
        }
        Self::from_atoms(out)
    }

    /// Lower-bound atoms on reset clocks become `false`, except `x >= 0`.
    pub fn reset_quotient(&self, resets: &[ClockId]) -> ClockConstraint {
        if self.falsum {
            return self.clone();
        }
        let kills = self.atoms.iter().any(|a| {
            resets.contains(&a.clock)
                && match a.cmp {
                    Cmp::Gt => true,
                    Cmp::Ge => a.bound >= 1,
                    _ => false,
                }
        });
        if kills {
            Self::falsity()
        } else {
            self.clone()
        }
    }

    /// Satisfying set of one clock, ignoring atoms on other clocks.
    pub fn project(&self, clock: ClockId) -> Option<Interval> {
        if self.falsum {
            return None;
        }
        let mut acc = Interval::all();
        for a in self.atoms.iter().filter(|a| a.clock == clock) {
            acc = acc.intersect(&a.interval()?)?;
        }
        Some(acc)
    }

    /// The satisfying interval of a constraint over at most one clock.
    pub fn to_interval(&self) -> Result<Option<Interval>, ModelError> {
        let clocks = self.clocks();
        if clocks.len() > 1 {
            return Err(ModelError::NotSingleClock);
        }
        Ok(match clocks.first() {
            Some(c) => self.project(*c),
            None if self.falsum => None,
            None => Some(Interval::all()),
        })
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> ConstraintDisplay<'a> {
        ConstraintDisplay { constraint: self, names }
    }
}

pub struct ConstraintDisplay<'a> {
    constraint: &'a ClockConstraint,
    names: &'a [String],
}

impl fmt::Display for ConstraintDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constraint.falsum {
            return write!(f, "false");
        }
        if self.constraint.atoms.is_empty() {
            return write!(f, "true");
        }
        for (i, a) in self.constraint.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " && ")?;
            }
            let name = self
                .names
                .get(a.clock.0)
                .cloned()
                .unwrap_or_else(|| format!("c{}", a.clock.0));
            write!(f, "{} {} {}", name, a.cmp.symbol(), a.bound)?;
        }
        Ok(())
    }
}
