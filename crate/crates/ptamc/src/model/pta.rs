use std::fmt;

use num_traits::{One, Zero};

use super::{ClockConstraint, ClockId, Distribution, LabelSet, LocId, ModelError, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub name: String,
    pub invariant: ClockConstraint,
    pub labels: LabelSet,
}

/// One branch of a probabilistic edge: clocks to reset and the target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    pub resets: Vec<ClockId>,
    pub target: LocId,
}

impl Outcome {
    pub fn new(mut resets: Vec<ClockId>, target: LocId) -> Self {
        resets.sort();
        resets.dedup();
        Outcome { resets, target }
    }

    pub fn resets_clock(&self, c: ClockId) -> bool {
        self.resets.contains(&c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: LocId,
    pub guard: ClockConstraint,
    pub dist: Distribution<Outcome>,
}

/// A probabilistic timed automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pta {
    pub clocks: Vec<String>,
    pub locations: Vec<Location>,
    pub initial: LocId,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    Automaton,
    Location(String),
    Edge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub site: Site,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.site {
            Site::Automaton => write!(f, "{}", self.message),
            Site::Location(l) => write!(f, "location `{}`: {}", l, self.message),
            Site::Edge(i) => write!(f, "edge #{}: {}", i, self.message),
        }
    }
}

impl Pta {
    pub fn location(&self, id: LocId) -> &Location {
        &self.locations[id.0]
    }

    pub fn location_id(&self, name: &str) -> Option<LocId> {
        self.locations.iter().position(|l| l.name == name).map(LocId)
    }

    pub fn edges_from(&self, l: LocId) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.source == l)
    }

    pub fn invariant(&self, l: LocId) -> &ClockConstraint {
        &self.locations[l.0].invariant
    }

    pub fn labels(&self, l: LocId) -> &LabelSet {
        &self.locations[l.0].labels
    }

    /// All constants in invariants and guards, sorted and deduplicated.
    pub fn constants(&self) -> Vec<u64> {
        let mut cs: Vec<u64> = self
            .locations
            .iter()
            .flat_map(|l| l.invariant.constants())
            .chain(self.edges.iter().flat_map(|e| e.guard.constants()))
            .collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    pub fn max_constant(&self) -> u64 {
        self.constants().last().copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |site: Site, message: &str| out.push(Diagnostic { site, message: message.to_string() });
        if self.clocks.is_empty() {
            push(Site::Automaton, "no clocks declared");
        }
        if self.clocks.len() > 2 {
            push(Site::Automaton, "clock count > 2");
        }
        if self.initial.0 >= self.locations.len() {
            push(Site::Automaton, "initial location missing");
        }
        for (i, l) in self.locations.iter().enumerate() {
            if self.locations[..i].iter().any(|m| m.name == l.name) {
                push(Site::Location(l.name.clone()), "duplicate location name");
            }
            if l.invariant.clocks().iter().any(|c| c.0 >= self.clocks.len()) {
                push(Site::Location(l.name.clone()), "invariant mentions an undeclared clock");
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.source.0 >= self.locations.len() {
                push(Site::Edge(i), "unknown source location");
            }
            if e.guard.clocks().iter().any(|c| c.0 >= self.clocks.len()) {
                push(Site::Edge(i), "guard mentions an undeclared clock");
            }
            if e.dist.entries().is_empty() {
                push(Site::Edge(i), "empty distribution");
                continue;
            }
            for (o, p) in e.dist.entries() {
                if o.target.0 >= self.locations.len() {
                    push(Site::Edge(i), "unknown target location");
                }
                if o.resets.iter().any(|c| c.0 >= self.clocks.len()) {
                    push(Site::Edge(i), "reset of an undeclared clock");
                }
                if *p <= Rat::zero() || *p > Rat::from_integer(1.into()) {
                    push(Site::Edge(i), "probability outside (0,1]");
                }
            }
            if e.dist.mass() != Rat::from_integer(1.into()) {
                push(Site::Edge(i), "distribution mass ≠ 1");
            }
        }
        if self.initial.0 < self.locations.len() {
            let zero = vec![Rat::zero(); self.clocks.len()];
            let inv = &self.locations[self.initial.0].invariant;
            if inv.clocks().iter().all(|c| c.0 < zero.len()) && !inv.eval(&zero) {
                push(
                    Site::Location(self.locations[self.initial.0].name.clone()),
                    "initial invariant excludes the zero valuation",
                );
            }
        }
        out
    }

    fn arcs(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut arcs = Vec::new();
        for (ei, e) in self.edges.iter().enumerate() {
            for (oi, (o, _)) in e.dist.entries().iter().enumerate() {
                arcs.push((e.source.0, o.target.0, ei, oi));
            }
        }
        arcs
    }

    fn guard_forces_unit(&self, edge: usize, c: ClockId) -> bool {
        match self.edges[edge].guard.project(c) {
            None => true,
            Some(i) => i.lo() >= 1,
        }
    }

    /// Every cycle of the support graph resets some clock `x` and crosses a guard implying `x >= 1`.
    ///
    /// A violating cycle exists iff, for some choice per clock of "never reset" or
    /// "never guarded by x >= 1", the arcs respecting that choice contain a cycle.
    pub fn is_structurally_non_zeno(&self) -> bool {
        let arcs = self.arcs();
        let k = self.clocks.len();
        for mask in 0..(1usize << k) {
            let allowed: Vec<(usize, usize)> = arcs
                .iter()
                .filter(|&&(_, _, ei, oi)| {
                    (0..k).all(|c| {
                        let clock = ClockId(c);
                        if mask & (1 << c) == 0 {
                            !self.edges[ei].dist.entries()[oi].0.resets_clock(clock)
                        } else {
                            !self.guard_forces_unit(ei, clock)
                        }
                    })
                })
                .map(|&(s, t, _, _)| (s, t))
                .collect();
            if has_cycle(self.locations.len(), &allowed) {
                return false;
            }
        }
        true
    }

    /// Brute-force variant enumerating every simple cycle of the support multigraph.
    pub fn is_structurally_non_zeno_by_cycles(&self) -> bool {
        let arcs = self.arcs();
        let n = self.locations.len();
        let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, a) in arcs.iter().enumerate() {
            out_arcs[a.0].push(i);
        }
        let cycle_ok = |path: &[usize]| {
            (0..self.clocks.len()).any(|c| {
                let clock = ClockId(c);
                path.iter().any(|&a| self.edges[arcs[a].2].dist.entries()[arcs[a].3].0.resets_clock(clock))
                    && path.iter().any(|&a| self.guard_forces_unit(arcs[a].2, clock))
            })
        };
        fn dfs(
            start: usize,
            node: usize,
            arcs: &[(usize, usize, usize, usize)],
            out_arcs: &[Vec<usize>],
            on_path: &mut Vec<bool>,
            path: &mut Vec<usize>,
            ok: &dyn Fn(&[usize]) -> bool,
        ) -> bool {
            for &a in &out_arcs[node] {
                let t = arcs[a].1;
                if t == start {
                    path.push(a);
                    let good = ok(path);
                    path.pop();
                    if !good {
                        return false;
                    }
                } else if t > start && !on_path[t] {
                    on_path[t] = true;
                    path.push(a);
                    let good = dfs(start, t, arcs, out_arcs, on_path, path, ok);
                    path.pop();
                    on_path[t] = false;
                    if !good {
                        return false;
                    }
                }
            }
            true
        }
        (0..n).all(|s| {
            let mut on_path = vec![false; n];
            on_path[s] = true;
            dfs(s, s, &arcs, &out_arcs, &mut on_path, &mut Vec::new(), &cycle_ok)
        })
    }

    /// `upper(inv(l))` implies some edge is enabled with every target invariant
    /// satisfied after reset, checked on a half-integer grid per clock.
    pub fn has_non_deadlocking_invariants(&self) -> bool {
        // constraints compare single clocks with constants, so one point per
        // constant, one inside each gap and one past the top decide everything
        let mut consts = self.constants();
        consts.push(0);
        // upper(x < c) brings in c-1
        consts.extend(self.locations.iter().flat_map(|l| l.invariant.upper_closure().constants().collect::<Vec<_>>()));
        consts.sort_unstable();
        consts.dedup();
        let half = Rat::new(1.into(), 2.into());
        let mut points: Vec<Rat> = Vec::with_capacity(2 * consts.len());
        for (i, &c) in consts.iter().enumerate() {
            let c = Rat::from_integer(c.into());
            let next = consts.get(i + 1).map_or_else(|| &c + Rat::one(), |&d| Rat::from_integer(d.into()));
            points.push(c.clone());
            points.push((c + next) * &half);
        }
        let k = self.clocks.len();
        let mut idx = vec![0usize; k];
        loop {
            let v: Vec<Rat> = idx.iter().map(|&i| points[i].clone()).collect();
            for (li, loc) in self.locations.iter().enumerate() {
                if loc.invariant.upper_closure().eval(&v) && !self.some_edge_enabled(LocId(li), &v) {
                    return false;
                }
            }
            let mut pos = 0;
            loop {
                if pos == k {
                    return true;
                }
                idx[pos] += 1;
                if idx[pos] < points.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    fn some_edge_enabled(&self, l: LocId, v: &[Rat]) -> bool {
        self.edges_from(l).any(|(_, e)| {
            e.guard.eval(v)
                && e.dist.support().all(|o| {
                    let mut after = v.to_vec();
                    for c in &o.resets {
                        after[c.0] = Rat::zero();
                    }
                    self.invariant(o.target).reset_quotient(&o.resets).eval(&after)
                })
        })
    }

    /// Validation plus the one-clock, non-Zeno and non-deadlocking gates.
    pub fn check_one_clock(&self) -> Result<(), ModelError> {
        self.check_gates()?;
        if self.clocks.len() != 1 {
            return Err(ModelError::ClockCount(self.clocks.len()));
        }
        Ok(())
    }

    pub fn check_gates(&self) -> Result<(), ModelError> {
        let diags = self.validate();
        if let Some(d) = diags.first() {
            return Err(ModelError::Invalid(d.to_string()));
        }
        if !self.is_structurally_non_zeno() {
            return Err(ModelError::Zeno);
        }
        if !self.has_non_deadlocking_invariants() {
            return Err(ModelError::Deadlocking);
        }
        Ok(())
    }
}

pub(crate) fn has_cycle(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut succ = vec![Vec::new(); n];
    for &(s, t) in arcs {
        if s == t {
            return true;
        }
        succ[s].push(t);
    }
    // 0 = unseen, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        color[root] = 1;
        while let Some((node, next)) = stack.pop() {
            if next < succ[node].len() {
                stack.push((node, next + 1));
                let t = succ[node][next];
                match color[t] {
                    1 => return true,
                    0 => {
                        color[t] = 1;
                        stack.push((t, 0));
                    }
                    _ => {}
                }
            } else {
                color[node] = 2;
            }
        }
    }
    false
}
