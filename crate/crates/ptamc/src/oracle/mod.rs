//! Brute-force region-graph model checking, used as ground truth in tests.

mod region;

use std::collections::HashMap;

use crate::dsl::{Formula, ProbCmp, TimeRel, Timing};
use crate::mdp::{until_sat, StateSet};
use crate::model::{Atom, ClockId, Cmp, Distribution, LocId, ModelError, Pta, Rat, UntimedMdp};

pub use region::{Region, RegionSpace};

pub const DEFAULT_CAP: u64 = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("the oracle handles at most 2 clocks, found {0}")]
    TooManyClocks(usize),
    #[error("constant {constant} exceeds the oracle cap {cap}")]
    CapExceeded { constant: u64, cap: u64 },
    #[error("valuation has {got} components, expected {expected}")]
    Valuation { got: usize, expected: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest constant accepted in the automaton or a time bound.
    pub cap: u64,
    /// Added to every region cap; answers must not depend on it.
    pub refine: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { cap: DEFAULT_CAP, refine: 0 }
    }
}

/// Region MDP of a PTA, optionally with a formula clock that is never reset.
#[derive(Clone, Debug)]
pub struct RegionMdp {
    pub space: RegionSpace,
    pub mdp: UntimedMdp,
    pub states: Vec<(LocId, Region)>,
}

fn clock_caps(pta: &Pta, refine: u64) -> Vec<u64> {
    let mut caps = vec![0u64; pta.clocks.len()];
    let atoms = pta
        .locations
        .iter()
        .flat_map(|l| l.invariant.atoms().iter())
        .chain(pta.edges.iter().flat_map(|e| e.guard.atoms().iter()));
    for a in atoms {
        caps[a.clock.0] = caps[a.clock.0].max(a.bound);
    }
    caps.into_iter().map(|c| c + refine).collect()
}

fn check_caps(pta: &Pta, f: Option<&Formula>, cfg: &OracleConfig) -> Result<(), OracleError> {
    if pta.clocks.len() > 2 {
        return Err(OracleError::TooManyClocks(pta.clocks.len()));
    }
    let mut worst = pta.max_constant();
    if let Some(f) = f {
        worst = worst.max(max_time_bound(f));
    }
    if worst > cfg.cap {
        return Err(OracleError::CapExceeded { constant: worst, cap: cfg.cap });
    }
    Ok(())
}

fn max_time_bound(f: &Formula) -> u64 {
    let own = match f {
        Formula::Prob { timing: Some(t), .. } => t.bound,
        _ => 0,
    };
    f.children().into_iter().map(max_time_bound).fold(own, u64::max)
}

fn with_zero_clock(r: &Region) -> Region {
    let mut ext = r.clone();
    ext.ints.push(0);
    ext
}

/// Moves available from `(l, r)`: the time successor if the invariant allows it,
/// then every enabled edge whose outcomes all satisfy their target invariant.
fn moves(pta: &Pta, space: &RegionSpace, l: LocId, r: &Region) -> (Option<Region>, Vec<Distribution<(LocId, Region)>>) {
    let delay = space.successor(r).filter(|s| space.sat(s, pta.invariant(l)));
    let mut edges = Vec::new();
    for (_, e) in pta.edges_from(l) {
        if !space.sat(r, &e.guard) {
            continue;
        }
        let mut entries = Vec::new();
        let mut ok = true;
        for (o, p) in e.dist.entries() {
            let resets: Vec<usize> = o.resets.iter().map(|c| c.0).collect();
            let next = space.reset(r, &resets);
            if !space.sat(&next, pta.invariant(o.target)) {
                ok = false;
                break;
            }
            entries.push(((o.target, next), p.clone()));
        }
        if ok {
            edges.push(Distribution::from_entries(entries));
        }
    }
    (delay, edges)
}

/// States are `(location, region)` pairs reachable from every admissible
/// region of every location, with the formula clock (if any) at zero.
pub fn build_region_mdp(pta: &Pta, formula_clock: Option<u64>, cfg: &OracleConfig) -> Result<RegionMdp, OracleError> {
    check_caps(pta, None, cfg)?;
    if let Some(c) = formula_clock {
        if c > cfg.cap {
            return Err(OracleError::CapExceeded { constant: c, cap: cfg.cap });
        }
    }
    let base = RegionSpace::new(clock_caps(pta, cfg.refine));
    let mut caps = base.caps.clone();
    if let Some(c) = formula_clock {
        caps.push(c + cfg.refine);
    }
    let space = RegionSpace::new(caps);
    let mut index: HashMap<(LocId, Region), usize> = HashMap::new();
    let mut states: Vec<(LocId, Region)> = Vec::new();
    let mut stack = Vec::new();
    let mut visit = |key: (LocId, Region), states: &mut Vec<(LocId, Region)>, stack: &mut Vec<usize>| -> usize {
        *index.entry(key.clone()).or_insert_with(|| {
            states.push(key);
            stack.push(states.len() - 1);
            states.len() - 1
        })
    };
    for l in 0..pta.locations.len() {
        for r in base.enumerate() {
            if base.sat(&r, pta.invariant(LocId(l))) {
                let r = if formula_clock.is_some() { with_zero_clock(&r) } else { r };
                visit((LocId(l), r), &mut states, &mut stack);
            }
        }
    }
    let mut choices: Vec<Vec<Distribution<usize>>> = Vec::new();
    while let Some(i) = stack.pop() {
        let (l, r) = states[i].clone();
        let (delay, edges) = moves(pta, &space, l, &r);
        let mut cs = Vec::new();
        if let Some(s) = delay {
            cs.push(Distribution::dirac(visit((l, s), &mut states, &mut stack)));
        }
        for d in edges {
            cs.push(d.map(|k| visit(k.clone(), &mut states, &mut stack)));
        }
        if choices.len() < states.len() {
            choices.resize(states.len(), Vec::new());
        }
        choices[i] = cs;
    }
    choices.resize(states.len(), Vec::new());
    let names = states.iter().map(|(l, r)| format!("{}@{}", pta.location(*l).name, space.describe(r))).collect();
    let labels = states.iter().map(|(l, _)| pta.labels(*l).clone()).collect();
    Ok(RegionMdp { mdp: UntimedMdp { names, initial: 0, choices, labels }, space, states })
}

/// Evaluates PTCTL formulae on the regions of one PTA.
pub struct RegionOracle<'a> {
    pta: &'a Pta,
    space: RegionSpace,
    domain: Vec<(LocId, Region)>,
    index: HashMap<(LocId, Region), usize>,
}

impl<'a> RegionOracle<'a> {
    pub fn new(pta: &'a Pta, cfg: &OracleConfig) -> Result<Self, OracleError> {
        check_caps(pta, None, cfg)?;
        let space = RegionSpace::new(clock_caps(pta, cfg.refine));
        let mut domain = Vec::new();
        for l in 0..pta.locations.len() {
            for r in space.enumerate() {
                if space.sat(&r, pta.invariant(LocId(l))) {
                    domain.push((LocId(l), r));
                }
            }
        }
        let index = domain.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(RegionOracle { pta, space, domain, index })
    }

    pub fn space(&self) -> &RegionSpace {
        &self.space
    }

    pub fn domain(&self) -> &[(LocId, Region)] {
        &self.domain
    }

    /// Truth of `f` on every admissible `(location, region)`.
    pub fn sat(&self, f: &Formula) -> Vec<bool> {
        let seeds: Vec<usize> = (0..self.domain.len()).collect();
        self.sat_on(f, &seeds)
    }

    /// Truth of `f` at the given domain entries only.
    fn sat_on(&self, f: &Formula, seeds: &[usize]) -> Vec<bool> {
        match f {
            Formula::True => vec![true; seeds.len()],
            Formula::Atom(a) => seeds.iter().map(|&i| self.pta.labels(self.domain[i].0).contains(a)).collect(),
            Formula::Not(g) => self.sat_on(g, seeds).into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => {
                let x = self.sat_on(a, seeds);
                let y = self.sat_on(b, seeds);
                x.into_iter().zip(y).map(|(p, q)| p && q).collect()
            }
            Formula::Prob { cmp, bound, left, right, timing } => {
                let s1 = self.sat(left);
                let s2 = self.sat(right);
                self.until(&s1, &s2, *timing, *cmp, bound, seeds)
            }
        }
    }

    pub fn check_at(&self, f: &Formula, l: LocId, v: &[Rat]) -> Result<bool, OracleError> {
        let n = self.space.clocks();
        if v.len() != n {
            return Err(OracleError::Valuation { got: v.len(), expected: n });
        }
        if !self.pta.invariant(l).eval(v) {
            return Err(ModelError::InvariantViolated {
                location: self.pta.location(l).name.clone(),
                value: v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            }
            .into());
        }
        let r = self.space.of_valuation(v);
        let i = self.index[&(l, r)];
        Ok(self.sat_on(f, &[i])[0])
    }

    /// Decides `P cmp bound (S1 U~c S2)` at each seed on the product with a
    /// fresh formula clock.
    ///
    /// A product state remembers whether it was entered by an edge. On an
    /// open region entered by delay the witness needs S1 and S2 together,
    /// because earlier positions of that region precede it.
    fn until(
        &self,
        s1: &[bool],
        s2: &[bool],
        timing: Option<Timing>,
        cmp: ProbCmp,
        bound: &Rat,
        seeds: &[usize],
    ) -> Vec<bool> {
        let n = self.space.clocks();
        let mut caps = self.space.caps.clone();
        if let Some(t) = timing {
            caps.push(t.bound);
        }
        let ext = RegionSpace::new(caps);
        let z = ClockId(n);
        let z_ok = |r: &Region| match timing {
            None => true,
            Some(t) => {
                let le = ext.sat_atom(r, &Atom::new(z, Cmp::Le, t.bound));
                let ge = ext.sat_atom(r, &Atom::new(z, Cmp::Ge, t.bound));
                match t.rel {
                    TimeRel::Le => le,
                    TimeRel::Ge => ge,
                    TimeRel::Eq => le && ge,
                }
            }
        };
        // once past the bound a <= or = deadline can no longer be met
        let expired = |r: &Region| match timing {
            Some(Timing { rel: TimeRel::Le | TimeRel::Eq, bound }) => ext.sat_atom(r, &Atom::new(z, Cmp::Gt, bound)),
            _ => false,
        };

        type Key = (LocId, Region, bool);
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut keys: Vec<Key> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut visit = |k: Key, keys: &mut Vec<Key>, stack: &mut Vec<usize>| -> usize {
            *index.entry(k.clone()).or_insert_with(|| {
                keys.push(k);
                stack.push(keys.len() - 1);
                keys.len() - 1
            })
        };
        let roots: Vec<usize> = seeds
            .iter()
            .map(|&i| {
                let (l, r) = &self.domain[i];
                let r = if timing.is_some() { with_zero_clock(r) } else { r.clone() };
                visit((*l, r, true), &mut keys, &mut stack)
            })
            .collect();
        let mut choices: Vec<Vec<Distribution<usize>>> = Vec::new();
        let mut target: Vec<bool> = Vec::new();
        while let Some(i) = stack.pop() {
            let (l, r, fresh) = keys[i].clone();
            let di = self.index[&(l, ext.project(&r, n))];
            let hit = z_ok(&r) && s2[di] && (fresh || ext.is_instant(&r) || s1[di]);
            let go_on = !hit && s1[di] && !expired(&r);
            let mut cs = Vec::new();
            if go_on {
                let (delay, edges) = moves(self.pta, &ext, l, &r);
                if let Some(s) = delay {
                    cs.push(Distribution::dirac(visit((l, s, false), &mut keys, &mut stack)));
                }
                for d in edges {
                    cs.push(d.map(|(l2, r2)| visit((*l2, r2.clone(), true), &mut keys, &mut stack)));
                }
            }
            if cs.is_empty() {
                cs.push(Distribution::dirac(i));
            }
            if choices.len() <= i {
                choices.resize(i + 1, Vec::new());
                target.resize(i + 1, false);
            }
            choices[i] = cs;
            target[i] = hit;
        }
        let m = keys.len();
        choices.resize(m, Vec::new());
        target.resize(m, false);
        let mdp = UntimedMdp {
            names: vec![String::new(); m],
            initial: 0,
            choices,
            labels: vec![Default::default(); m],
        };
        let t = StateSet::from_bits(target);
        let verdicts = until_sat(&mdp, &StateSet::full(m), &t, cmp, bound);
        roots.into_iter().map(|i| verdicts.contains(i)).collect()
    }
}

/// Decides `f` at `(l, v)` on the region graph.
pub fn oracle_check_ptctl(
    pta: &Pta,
    f: &Formula,
    at: (LocId, &[Rat]),
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    check_caps(pta, Some(f), cfg)?;
    RegionOracle::new(pta, cfg)?.check_at(f, at.0, at.1)
}
