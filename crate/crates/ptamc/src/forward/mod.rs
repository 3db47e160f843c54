//! Forward exploration of a one-clock PTA over location-interval pairs, and
//! its comparison with the interval abstraction.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::abstraction::{build_pctl_mdp, AbstractState, AbstractionError, BoundaryList, PctlAbstraction};
use crate::mdp::{reach_prob, Objective, StateSet};
use crate::model::{ClockId, Distribution, Edge, Interval, LabelSet, LocId, ModelError, Pta, Rat, UntimedMdp};

const X: ClockId = ClockId(0);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForwardError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
    #[error("initial location `{0}` admits no clock value")]
    EmptyInitial(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrState {
    pub location: LocId,
    pub interval: Interval,
}

impl fmt::Display for FrState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(l{}, {})", self.location.0, self.interval)
    }
}

fn invariant(pta: &Pta, l: LocId) -> Option<Interval> {
    pta.invariant(l).project(X)
}

/// `<b;inf)` cut by the invariant of `l`, keeping the lower end of `i`.
pub fn timesucc(pta: &Pta, i: &Interval, l: LocId) -> Option<Interval> {
    i.upward().intersect(&invariant(pta, l)?)
}

/// Location-interval pair reached by taking `edge` from `pair` with outcome
/// `(resets, target)` and then letting time pass; `None` when the guard misses
/// the interval or nothing of the result fits the target invariant.
pub fn post(pta: &Pta, pair: &FrState, edge: &Edge, reset: bool, target: LocId) -> Option<FrState> {
    let hit = pair.interval.intersect(&edge.guard.project(X)?)?;
    let landed = if reset { Interval::point(0) } else { hit };
    Some(FrState { location: target, interval: timesucc(pta, &landed, target)? })
}

/// The forward reachability MDP with, per choice, the edge it came from.
#[derive(Clone, Debug)]
pub struct FrMdp {
    pub states: Vec<FrState>,
    pub mdp: UntimedMdp,
    pub edges: Vec<Vec<usize>>,
    index: HashMap<FrState, usize>,
}

impl FrMdp {
    pub fn state_index(&self, s: &FrState) -> Option<usize> {
        self.index.get(s).copied()
    }
}

pub fn build_fr_mdp(pta: &Pta) -> Result<FrMdp, ForwardError> {
    pta.check_one_clock()?;
    let init = FrState {
        location: pta.initial,
        interval: timesucc(pta, &Interval::point(0), pta.initial)
            .ok_or_else(|| ForwardError::EmptyInitial(pta.location(pta.initial).name.clone()))?,
    };
    let mut states = vec![init];
    let mut index = HashMap::from([(init, 0)]);
    let mut queue = VecDeque::from([0]);
    let mut choices: Vec<Vec<Distribution<usize>>> = vec![Vec::new()];
    let mut edges: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(si) = queue.pop_front() {
        let here = states[si];
        for (ei, e) in pta.edges_from(here.location) {
            let Some(hit) = e.guard.project(X).and_then(|g| here.interval.intersect(&g)) else { continue };
            let mut entries = Vec::new();
            let mut enabled = true;
            for (o, p) in e.dist.entries() {
                let reset = o.resets_clock(X);
                let landed = if reset { Interval::point(0) } else { hit };
                if !invariant(pta, o.target).is_some_and(|inv| landed.overlaps(&inv)) {
                    enabled = false;
                }
                if let Some(t) = post(pta, &here, e, reset, o.target) {
                    let ti = *index.entry(t).or_insert_with(|| {
                        states.push(t);
                        choices.push(Vec::new());
                        edges.push(Vec::new());
                        queue.push_back(states.len() - 1);
                        states.len() - 1
                    });
                    entries.push((ti, p.clone()));
                }
            }
            if enabled {
                let d = Distribution::from_entries(entries);
                if !choices[si].contains(&d) {
                    choices[si].push(d);
                    edges[si].push(ei);
                }
            }
        }
    }
    let names = states.iter().map(|s| format!("{}@{}", pta.location(s.location).name, s.interval)).collect();
    let labels: Vec<LabelSet> = states.iter().map(|s| pta.labels(s.location).clone()).collect();
    let mdp = UntimedMdp { names, initial: 0, choices, labels };
    Ok(FrMdp { states, mdp, edges, index })
}

/// Index of the least basic interval inside `i`.
pub fn first_int(bounds: &BoundaryList, i: &Interval) -> usize {
    let lo = Rat::from_integer(i.lo().into());
    let k = bounds.index_of(&lo) + usize::from(!i.lo_closed());
    assert!(bounds.interval(k).is_subset_of(i), "{} contains no basic interval", i);
    k
}

/// `M[P]` restricted to the images of the forward states, keeping the moves
/// that jump to the first basic interval of `I ∩ g`.
#[derive(Clone, Debug)]
pub struct FirstMdp {
    pub abstraction: PctlAbstraction,
    /// Indices into the abstraction's states.
    pub states: Vec<usize>,
    pub mdp: UntimedMdp,
    /// Choices whose support left the restricted state set, as `(state, choice)`.
    pub escaping: Vec<(usize, Distribution<usize>)>,
}

pub fn build_first_mdp(pta: &Pta) -> Result<FirstMdp, ForwardError> {
    let fr = build_fr_mdp(pta)?;
    first_from(pta, &fr)
}

fn first_from(pta: &Pta, fr: &FrMdp) -> Result<FirstMdp, ForwardError> {
    let abs = build_pctl_mdp(pta)?;
    let mut states = Vec::new();
    let mut sources = Vec::new();
    let mut local: HashMap<usize, usize> = HashMap::new();
    for s in &fr.states {
        let key = AbstractState { location: s.location, interval: first_int(&abs.bounds, &s.interval) };
        let m = abs.state_index(&key).expect("first interval lies in the invariant");
        if let Entry::Vacant(e) = local.entry(m) {
            e.insert(states.len());
            states.push(m);
            sources.push(*s);
        }
    }
    let mut choices = Vec::with_capacity(states.len());
    let mut escaping = Vec::new();
    for (k, (&m, src)) in states.iter().zip(&sources).enumerate() {
        let mut own: Vec<Distribution<usize>> = Vec::new();
        for (mv, d) in &abs.moves[m] {
            let g = pta.edges[mv.edge].guard.project(X);
            let Some(hit) = g.and_then(|g| src.interval.intersect(&g)) else { continue };
            if mv.jump != first_int(&abs.bounds, &hit) {
                continue;
            }
            match d.entries().iter().map(|(t, p)| local.get(t).map(|&u| (u, p.clone()))).collect::<Option<Vec<_>>>() {
                Some(e) => {
                    let d = Distribution::from_entries(e);
                    if !own.contains(&d) {
                        own.push(d);
                    }
                }
                None => escaping.push((k, d.clone())),
            }
        }
        choices.push(own);
    }
    let names = states.iter().map(|&m| abs.mdp.names[m].clone()).collect();
    let labels = states.iter().map(|&m| abs.mdp.labels[m].clone()).collect();
    let initial = local[&abs.mdp.initial];
    let mdp = UntimedMdp { names, initial, choices, labels };
    Ok(FirstMdp { abstraction: abs, states, mdp, escaping })
}

/// Outcome of comparing `FR[P]` with `1st[P]` under `(l, I) -> (l, 1stInt(I))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// `bijection[i]` is the image of forward state `i`.
    pub bijection: Vec<usize>,
    pub witness: Option<String>,
}

impl Isomorphism {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn check_isomorphic(fr: &FrMdp, first: &FirstMdp) -> Isomorphism {
    let bounds = &first.abstraction.bounds;
    let local: HashMap<usize, usize> = first.states.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let mut bijection = Vec::with_capacity(fr.states.len());
    let fail = |bijection: Vec<usize>, w: String| Isomorphism { bijection, witness: Some(w) };
    for s in &fr.states {
        let key = AbstractState { location: s.location, interval: first_int(bounds, &s.interval) };
        match first.abstraction.state_index(&key).and_then(|m| local.get(&m)) {
            Some(&k) => bijection.push(k),
            None => return fail(bijection, format!("{} has no image", s)),
        }
    }
    let mut hit = vec![false; first.states.len()];
    for (i, &k) in bijection.iter().enumerate() {
        if std::mem::replace(&mut hit[k], true) {
            return fail(bijection, format!("{} shares its image", fr.states[i]));
        }
    }
    if let Some(k) = hit.iter().position(|h| !h) {
        return fail(bijection, format!("{} has no preimage", first.mdp.names[k]));
    }
    if let Some((k, d)) = first.escaping.first() {
        return fail(bijection, format!("{} has a move leaving the image: {:?}", first.mdp.names[*k], d));
    }
    if bijection[fr.mdp.initial] != first.mdp.initial {
        return fail(bijection, "initial states differ".into());
    }
    for (i, &k) in bijection.iter().enumerate() {
        let name = &fr.mdp.names[i];
        if fr.mdp.labels[i] != first.mdp.labels[k] {
            return fail(bijection, format!("{} is labelled differently", name));
        }
        let mapped: Vec<Distribution<usize>> = fr.mdp.choices[i].iter().map(|d| d.map(|&t| bijection[t])).collect();
        let theirs = &first.mdp.choices[k];
        if let Some(d) = mapped.iter().find(|d| !theirs.contains(d)) {
            return fail(bijection, format!("{}: {:?} has no counterpart", name, d));
        }
        if let Some(d) = theirs.iter().find(|d| !mapped.contains(d)) {
            return fail(bijection, format!("{}: counterpart {:?} is missing", name, d));
        }
    }
    Isomorphism { bijection, witness: None }
}

pub fn check_isomorphic_fr_first(pta: &Pta) -> Result<Isomorphism, ForwardError> {
    let fr = build_fr_mdp(pta)?;
    let first = first_from(pta, &fr)?;
    Ok(check_isomorphic(&fr, &first))
}

fn labelled(m: &UntimedMdp, a: &str) -> StateSet {
    StateSet::from_fn(m.len(), |s| m.labels[s].contains(a))
}

/// Optimal probability of reaching a location labelled `a`, from the start.
pub fn fr_reach_prob(pta: &Pta, a: &str, objective: Objective) -> Result<Rat, ForwardError> {
    let fr = build_fr_mdp(pta)?;
    Ok(reach_prob(&fr.mdp, &labelled(&fr.mdp, a), objective).swap_remove(fr.mdp.initial))
}

/// The same probability computed on the interval abstraction.
pub fn abstraction_reach_prob(pta: &Pta, a: &str, objective: Objective) -> Result<Rat, ForwardError> {
    let abs = build_pctl_mdp(pta)?;
    Ok(reach_prob(&abs.mdp, &labelled(&abs.mdp, a), objective).swap_remove(abs.mdp.initial))
}
