use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::model::{Atom, ClockConstraint, Cmp, Rat};

/// Clock region: integer parts plus the order of the non-zero fractional parts.
///
/// A clock whose integer part exceeds its cap is "beyond" and carries no
/// fractional information. `classes` lists the clocks with a non-zero
/// fractional part, grouped by equal fraction, smallest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    pub ints: Vec<u64>,
    pub classes: Vec<Vec<usize>>,
}

/// The caps of each clock, which fix the region equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSpace {
    pub caps: Vec<u64>,
}

impl RegionSpace {
    pub fn new(caps: Vec<u64>) -> Self {
        RegionSpace { caps }
    }

    pub fn clocks(&self) -> usize {
        self.caps.len()
    }

    pub fn beyond(&self, r: &Region, c: usize) -> bool {
        r.ints[c] > self.caps[c]
    }

    fn frac_zero(&self, r: &Region, c: usize) -> bool {
        !self.beyond(r, c) && !r.classes.iter().any(|k| k.contains(&c))
    }

    pub fn zero(&self) -> Region {
        Region { ints: vec![0; self.clocks()], classes: Vec::new() }
    }

    pub fn of_valuation(&self, v: &[Rat]) -> Region {
        let mut ints = Vec::with_capacity(v.len());
        let mut fracs: Vec<(Rat, usize)> = Vec::new();
        for (c, x) in v.iter().enumerate() {
            let cap = Rat::from_integer(self.caps[c].into());
            if *x > cap {
                ints.push(self.caps[c] + 1);
                continue;
            }
            let floor = x.numer().div_floor(x.denom());
            ints.push(floor.to_u64().expect("clock value fits"));
            let f = x - Rat::from_integer(floor);
            if !f.is_zero() {
                fracs.push((f, c));
            }
        }
        fracs.sort();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut last: Option<Rat> = None;
        for (f, c) in fracs {
            if last.as_ref() == Some(&f) {
                classes.last_mut().expect("class exists").push(c);
            } else {
                classes.push(vec![c]);
                last = Some(f);
            }
        }
        Region { ints, classes }
    }

    /// Some clock sits exactly on an integer, so any delay leaves the region.
    pub fn is_instant(&self, r: &Region) -> bool {
        (0..self.clocks()).any(|c| self.frac_zero(r, c))
    }

    /// The immediate time successor; `None` once every clock is beyond its cap.
    pub fn successor(&self, r: &Region) -> Option<Region> {
        let zeros: Vec<usize> = (0..self.clocks()).filter(|&c| self.frac_zero(r, c)).collect();
        let mut next = r.clone();
        if !zeros.is_empty() {
            let mut moving = Vec::new();
            for c in zeros {
                if r.ints[c] == self.caps[c] {
                    next.ints[c] = self.caps[c] + 1;
                } else {
                    moving.push(c);
                }
            }
            if !moving.is_empty() {
                next.classes.insert(0, moving);
            }
            return Some(next);
        }
        let top = next.classes.pop()?;
        for c in top {
            next.ints[c] += 1;
        }
        Some(next)
    }

    pub fn reset(&self, r: &Region, clocks: &[usize]) -> Region {
        let mut next = r.clone();
        for &c in clocks {
            next.ints[c] = 0;
        }
        for k in &mut next.classes {
            k.retain(|c| !clocks.contains(c));
        }
        next.classes.retain(|k| !k.is_empty());
        next
    }

    /// Drops every clock with index `keep` or above.
    pub fn project(&self, r: &Region, keep: usize) -> Region {
        let mut classes: Vec<Vec<usize>> =
            r.classes.iter().map(|k| k.iter().copied().filter(|&c| c < keep).collect()).collect();
        classes.retain(|k: &Vec<usize>| !k.is_empty());
        Region { ints: r.ints[..keep].to_vec(), classes }
    }

    pub fn sat_atom(&self, r: &Region, a: &Atom) -> bool {
        let c = a.clock.0;
        assert!(a.bound <= self.caps[c], "constant {} above region cap {}", a.bound, self.caps[c]);
        if self.beyond(r, c) {
            return matches!(a.cmp, Cmp::Gt | Cmp::Ge);
        }
        let (i, k) = (r.ints[c], a.bound);
        let exact = self.frac_zero(r, c);
        match a.cmp {
            Cmp::Lt => i < k,
            Cmp::Le => if exact { i <= k } else { i < k },
            Cmp::Gt => if exact { i > k } else { i >= k },
            Cmp::Ge => i >= k,
        }
    }

    pub fn sat(&self, r: &Region, g: &ClockConstraint) -> bool {
        !g.is_syntactically_false() && g.atoms().iter().all(|a| self.sat_atom(r, a))
    }

    /// Short text such as `x=1 1<y<2 y<x` (fraction order last).
    pub fn describe(&self, r: &Region) -> String {
        let name = |c: usize| ["x", "y", "z"].get(c).map(|s| s.to_string()).unwrap_or(format!("c{}", c));
        let mut parts = Vec::new();
        for c in 0..self.clocks() {
            let i = r.ints[c];
            parts.push(if self.beyond(r, c) {
                format!("{}>{}", name(c), self.caps[c])
            } else if self.frac_zero(r, c) {
                format!("{}={}", name(c), i)
            } else {
                format!("{}<{}<{}", i, name(c), i + 1)
            });
        }
        for w in r.classes.windows(2) {
            parts.push(format!("{}<{}", name(w[0][0]), name(w[1][0])));
        }
        for k in &r.classes {
            for p in k.windows(2) {
                parts.push(format!("{}~{}", name(p[0]), name(p[1])));
            }
        }
        parts.join(" ")
    }

    /// Every region of the space.
    pub fn enumerate(&self) -> Vec<Region> {
        let n = self.clocks();
        let mut out = Vec::new();
        let mut ints = vec![0u64; n];
        self.enum_ints(0, &mut ints, &mut out);
        out
    }

    fn enum_ints(&self, c: usize, ints: &mut Vec<u64>, out: &mut Vec<Region>) {
        if c == self.clocks() {
            // clocks below their cap may carry a fraction; choose which are non-zero
            let free: Vec<usize> = (0..c).filter(|&k| ints[k] < self.caps[k]).collect();
            for mask in 0..(1u32 << free.len()) {
                let nonzero: Vec<usize> =
                    free.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &k)| k).collect();
                for classes in ordered_partitions(&nonzero) {
                    out.push(Region { ints: ints.clone(), classes });
                }
            }
            return;
        }
        for i in 0..=self.caps[c] + 1 {
            ints[c] = i;
            self.enum_ints(c + 1, ints, out);
        }
    }
}

fn ordered_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let n = items.len();
    // choose the first block as any non-empty subset, recurse on the rest
    for mask in 1..(1u32 << n) {
        let first: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| items[j]).collect();
        let rest: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 0).map(|j| items[j]).collect();
        for mut tail in ordered_partitions(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}
