//! The interval abstraction `M[P]` of a one-clock PTA and PCTL checking on it.

use std::collections::HashMap;

use crate::dsl::{Formula, FormulaClass};
use crate::mdp::{self, Objective, StateSet};
use crate::model::{
    ClockId, Distribution, Interval, IntervalSet, LabelSet, LocId, ModelError, Pta, Rat, SatMap, UntimedMdp,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbstractionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("formula is {0}, expected PCTL")]
    WrongClass(FormulaClass),
    #[error("abstract state {0} has no enabled transition")]
    Deadlock(String),
}

/// Sorted boundary constants `{0} ∪ constants(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryList {
    consts: Vec<u64>,
}

impl BoundaryList {
    pub fn new(extra: impl IntoIterator<Item = u64>) -> Self {
        let mut consts: Vec<u64> = std::iter::once(0).chain(extra).collect();
        consts.sort_unstable();
        consts.dedup();
        BoundaryList { consts }
    }

    pub fn of_pta(pta: &Pta) -> Self {
        BoundaryList::new(pta.constants())
    }

    pub fn constants(&self) -> &[u64] {
        &self.consts
    }

    /// Number of basic intervals, `2(k+1)`.
    pub fn interval_count(&self) -> usize {
        2 * self.consts.len()
    }

    /// Even indices are points `[b_i;b_i]`, odd ones the open gaps after them.
    pub fn interval(&self, idx: usize) -> Interval {
        let i = idx / 2;
        if idx % 2 == 0 {
            Interval::point(self.consts[i])
        } else {
            Interval::open(self.consts[i], self.consts.get(i + 1).copied()).expect("boundaries strictly increase")
        }
    }

    pub fn intervals(&self) -> Vec<Interval> {
        (0..self.interval_count()).map(|i| self.interval(i)).collect()
    }

    /// Index of the basic interval containing `v`.
    pub fn index_of(&self, v: &Rat) -> usize {
        let mut idx = 0;
        for (i, &b) in self.consts.iter().enumerate() {
            let b = Rat::from_integer(b.into());
            if *v == b {
                return 2 * i;
            }
            if *v > b {
                idx = 2 * i + 1;
            }
        }
        idx
    }
}

/// A location paired with an index into the basic intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractState {
    pub location: LocId,
    pub interval: usize,
}

pub fn abstract_state(pta: &Pta, bounds: &BoundaryList, l: LocId, v: &Rat) -> Result<AbstractState, ModelError> {
    if !pta.invariant(l).eval(std::slice::from_ref(v)) {
        return Err(ModelError::InvariantViolated { location: pta.location(l).name.clone(), value: v.to_string() });
    }
    Ok(AbstractState { location: l, interval: bounds.index_of(v) })
}

/// One way of leaving a state: wait until interval `jump`, then take `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub jump: usize,
    pub edge: usize,
}

/// `M[P]` together with the data needed to map results back to the automaton.
#[derive(Clone, Debug)]
pub struct PctlAbstraction {
    pub bounds: BoundaryList,
    pub states: Vec<AbstractState>,
    pub mdp: UntimedMdp,
    /// Every move of every state before deduplication, with its distribution.
    pub moves: Vec<Vec<(Move, Distribution<usize>)>>,
    index: HashMap<AbstractState, usize>,
}

impl PctlAbstraction {
    pub fn state_index(&self, s: &AbstractState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Per-location union of the intervals of the given states.
    pub fn to_satmap(&self, pta: &Pta, set: &StateSet) -> SatMap {
        let mut per_loc = vec![Vec::new(); pta.locations.len()];
        for (i, s) in self.states.iter().enumerate() {
            if set.contains(i) {
                per_loc[s.location.0].push(self.bounds.interval(s.interval));
            }
        }
        SatMap::new(per_loc.into_iter().map(IntervalSet::from_intervals).collect())
    }
}

fn interval_within(i: &Interval, c: &crate::model::ClockConstraint) -> bool {
    match c.project(ClockId(0)) {
        Some(sat) => i.is_subset_of(&sat),
        None => false,
    }
}

/// Builds `M[P]` exactly as in the polynomial construction for one clock.
pub fn build_pctl_mdp(pta: &Pta) -> Result<PctlAbstraction, AbstractionError> {
    pta.check_one_clock()?;
    let bounds = BoundaryList::of_pta(pta);
    let intervals = bounds.intervals();
    let mut states = Vec::new();
    let mut index = HashMap::new();
    for (l, loc) in pta.locations.iter().enumerate() {
        for (k, i) in intervals.iter().enumerate() {
            if interval_within(i, &loc.invariant) {
                let s = AbstractState { location: LocId(l), interval: k };
                index.insert(s, states.len());
                states.push(s);
            }
        }
    }
    let zero = Interval::point(0);
    let mut moves = Vec::with_capacity(states.len());
    let mut choices = Vec::with_capacity(states.len());
    for s in &states {
        let inv = pta.invariant(s.location);
        let mut own: Vec<(Move, Distribution<usize>)> = Vec::new();
        for jump in s.interval..intervals.len() {
            let b = &intervals[jump];
            if !interval_within(b, inv) {
                break;
            }
            for (e, edge) in pta.edges_from(s.location) {
                if !interval_within(b, &edge.guard) {
                    continue;
                }
                let mut entries = Vec::new();
                let mut ok = true;
                for (o, p) in edge.dist.entries() {
                    let reset = !o.resets.is_empty();
                    let landing = if reset { zero } else { *b };
                    if !interval_within(&landing, pta.invariant(o.target)) {
                        ok = false;
                        break;
                    }
                    let target = AbstractState { location: o.target, interval: if reset { 0 } else { jump } };
                    entries.push((index[&target], p.clone()));
                }
                if ok {
                    own.push((Move { jump, edge: e }, Distribution::from_entries(entries)));
                }
            }
        }
        let mut distinct: Vec<Distribution<usize>> = Vec::new();
        for (_, d) in &own {
            debug_assert_eq!(d.mass(), Rat::from_integer(1.into()));
            if !distinct.contains(d) {
                distinct.push(d.clone());
            }
        }
        moves.push(own);
        choices.push(distinct);
    }
    let names = states
        .iter()
        .map(|s| format!("{}@{}", pta.location(s.location).name, bounds.interval(s.interval)))
        .collect();
    let labels: Vec<LabelSet> = states.iter().map(|s| pta.labels(s.location).clone()).collect();
    let initial = index[&AbstractState { location: pta.initial, interval: 0 }];
    let mdp = UntimedMdp { names, initial, choices, labels };
    Ok(PctlAbstraction { bounds, states, mdp, moves, index })
}

/// PCTL labelling of a one-clock PTA through `M[P]`.
///
/// Each until is decided on a copy of `M[P]` whose moves also inspect the
/// intervals crossed while waiting, so that a witness or a violation strictly
/// inside a delay is seen.
pub fn check_pctl_1c(
    pta: &Pta,
    f: &Formula,
    at: Option<(LocId, &Rat)>,
) -> Result<(SatMap, Option<bool>), AbstractionError> {
    let class = f.classify();
    if class != FormulaClass::Pctl {
        return Err(AbstractionError::WrongClass(class));
    }
    let abs = build_pctl_mdp(pta)?;
    if let Some(i) = abs.mdp.choices.iter().position(Vec::is_empty) {
        return Err(AbstractionError::Deadlock(abs.mdp.names[i].clone()));
    }
    let set = sat(&abs, f);
    let verdict = match at {
        Some((l, v)) => {
            let s = abstract_state(pta, &abs.bounds, l, v)?;
            Some(set.contains(abs.state_index(&s).expect("abstract state exists")))
        }
        None => None,
    };
    Ok((abs.to_satmap(pta, &set), verdict))
}

fn sat(abs: &PctlAbstraction, f: &Formula) -> StateSet {
    let n = abs.states.len();
    match f {
        Formula::True => StateSet::full(n),
        Formula::Atom(a) => StateSet::from_fn(n, |s| abs.mdp.labels[s].contains(a)),
        Formula::Not(g) => sat(abs, g).complement(),
        Formula::And(a, b) => sat(abs, a).intersect(&sat(abs, b)),
        Formula::Prob { cmp, bound, left, right, .. } => {
            let s1 = sat(abs, left);
            let s2 = sat(abs, right);
            let objective = if cmp.uses_min() { Objective::Min } else { Objective::Max };
            let probs = until_with_path(abs, &s1, &s2, objective);
            StateSet::from_fn(n, |s| cmp.holds(&probs[s], bound))
        }
    }
}

/// Probability of `S1 U S2` where positions passed during delays count.
pub fn until_with_path(abs: &PctlAbstraction, s1: &StateSet, s2: &StateSet, objective: Objective) -> Vec<Rat> {
    let n = abs.states.len();
    let (win, lose) = (n, n + 1);
    let lookup = |l: LocId, k: usize| abs.state_index(&AbstractState { location: l, interval: k });
    let mut choices = Vec::with_capacity(n + 2);
    for (i, s) in abs.states.iter().enumerate() {
        if s2.contains(i) || !s1.contains(i) {
            choices.push(vec![Distribution::dirac(i)]);
            continue;
        }
        let mut distinct: Vec<Distribution<usize>> = Vec::new();
        for (mv, d) in &abs.moves[i] {
            let mut outcome = None;
            for k in s.interval + 1..=mv.jump {
                let here = lookup(s.location, k).expect("waiting stays inside the invariant");
                let point = k % 2 == 0;
                if s2.contains(here) && (point || s1.contains(here)) {
                    outcome = Some(win);
                    break;
                }
                if !s1.contains(here) {
                    outcome = Some(lose);
                    break;
                }
            }
            let d = match outcome {
                Some(t) => Distribution::dirac(t),
                None => d.clone(),
            };
            if !distinct.contains(&d) {
                distinct.push(d);
            }
        }
        choices.push(distinct);
    }
    choices.push(vec![Distribution::dirac(win)]);
    choices.push(vec![Distribution::dirac(lose)]);
    let m = UntimedMdp {
        names: (0..n + 2).map(|i| i.to_string()).collect(),
        initial: abs.mdp.initial,
        choices,
        labels: vec![LabelSet::new(); n + 2],
    };
    let target = StateSet::from_fn(n + 2, |i| i == win || (i < n && s2.contains(i)));
    let mut probs = mdp::reach_prob(&m, &target, objective);
    probs.truncate(n);
    probs
}
