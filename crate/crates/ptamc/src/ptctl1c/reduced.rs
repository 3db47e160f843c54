use std::collections::HashMap;

use super::Eps;
use crate::games::{Duration, DurationGame};
use crate::mdp::StateSet;
use crate::model::{ClockId, Distribution, Interval, LabelSet, LocId, Pta, SatMap, UntimedMdp};

const X: ClockId = ClockId(0);

/// Boundary constants for one until: 0, the automaton's constants, the
/// endpoints of both operand sets, and `b+c+1` after every right-open `[b;inf)`.
pub fn build_boundaries(pta: &Pta, sat1: &SatMap, sat2: &SatMap, c: u64) -> Vec<u64> {
    let mut out = vec![0];
    out.extend(pta.constants());
    for set in sat1.sets.iter().chain(&sat2.sets) {
        out.extend(set.endpoints());
        out.extend(set.right_open_starts().map(|b| b + c + 1));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Where a state sits relative to the boundaries: on `b_i`, just after it,
/// or just before it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Point(usize),
    After(usize),
    Before(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndpointState {
    pub location: LocId,
    pub position: Position,
}

/// The reduced timed MDP of one until, with `Eps` durations.
///
/// Edges take no time. Waiting moves `b -> b+ -> b'- -> b'` cost ε, the gap
/// minus 2ε, and ε. Entering a segment by waiting where Φ2 holds but Φ1 does
/// not leads to `sink`: no point of it can witness the until.
#[derive(Clone, Debug)]
pub struct GameTmdp {
    pub bounds: Vec<u64>,
    pub states: Vec<EndpointState>,
    pub sink: usize,
    pub game: DurationGame<Eps>,
    pub s1: StateSet,
    pub s2: StateSet,
    /// States without a move, given a unit self-loop.
    pub padded: Vec<bool>,
    index: HashMap<EndpointState, usize>,
}

impl GameTmdp {
    pub fn state(&self, location: LocId, position: Position) -> Option<usize> {
        self.index.get(&EndpointState { location, position }).copied()
    }

    pub fn len(&self) -> usize {
        self.sink + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The open segment `(b_i;b_{i+1})`, unbounded after the last boundary.
    pub fn segment(&self, i: usize) -> Interval {
        segment(&self.bounds, i)
    }

    pub fn interval_of(&self, p: Position) -> Interval {
        interval_of(&self.bounds, p)
    }
}

fn segment(bounds: &[u64], i: usize) -> Interval {
    Interval::open(bounds[i], bounds.get(i + 1).copied()).expect("boundaries strictly increase")
}

fn interval_of(bounds: &[u64], p: Position) -> Interval {
    match p {
        Position::Point(i) => Interval::point(bounds[i]),
        Position::After(i) => segment(bounds, i),
        Position::Before(j) => segment(bounds, j - 1),
    }
}

fn position_name(bounds: &[u64], p: Position) -> String {
    match p {
        Position::Point(i) => bounds[i].to_string(),
        Position::After(i) => format!("{}+", bounds[i]),
        Position::Before(j) => format!("{}-", bounds[j]),
    }
}

pub fn build_game_tmdp(pta: &Pta, sat1: &SatMap, sat2: &SatMap, c: u64) -> GameTmdp {
    let bounds = build_boundaries(pta, sat1, sat2, c);
    let nb = bounds.len();
    let mut states = Vec::new();
    for l in 0..pta.locations.len() {
        let l = LocId(l);
        let Some(inv) = pta.invariant(l).project(X) else { continue };
        for i in 0..nb {
            let mut here = vec![Position::Point(i), Position::After(i)];
            if i + 1 < nb {
                here.push(Position::Before(i + 1));
            }
            for p in here {
                if interval_of(&bounds, p).is_subset_of(&inv) {
                    states.push(EndpointState { location: l, position: p });
                }
            }
        }
    }
    let index: HashMap<EndpointState, usize> = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let sink = states.len();
    let member = |sat: &SatMap, s: &EndpointState| sat.get(s.location).covers(&interval_of(&bounds, s.position));
    let s1 = StateSet::from_fn(sink + 1, |i| i < sink && member(sat1, &states[i]));
    let s2 = StateSet::from_fn(sink + 1, |i| i < sink && member(sat2, &states[i]));

    let mut choices = Vec::with_capacity(sink + 1);
    let mut durations = Vec::with_capacity(sink + 1);
    let mut padded = vec![false; sink + 1];
    for (si, st) in states.iter().enumerate() {
        let (l, p) = (st.location, st.position);
        let iv = interval_of(&bounds, p);
        let mut cs: Vec<Distribution<usize>> = Vec::new();
        let mut ds: Vec<Eps> = Vec::new();
        for (_, e) in pta.edges_from(l) {
            if !e.guard.project(X).is_some_and(|g| iv.is_subset_of(&g)) {
                continue;
            }
            let targets: Option<Vec<(usize, _)>> = e
                .dist
                .entries()
                .iter()
                .map(|(o, pr)| {
                    let position = if o.resets_clock(X) { Position::Point(0) } else { p };
                    index.get(&EndpointState { location: o.target, position }).map(|&t| (t, pr.clone()))
                })
                .collect();
            if let Some(t) = targets {
                cs.push(Distribution::from_entries(t));
                ds.push(Eps::zero());
            }
        }
        let find = |position| index.get(&EndpointState { location: l, position }).copied();
        match p {
            Position::Point(i) => {
                if let Some(t) = find(Position::After(i)) {
                    let seg = segment(&bounds, i);
                    let dead = sat2.get(l).covers(&seg) && !sat1.get(l).covers(&seg);
                    cs.push(Distribution::dirac(if dead { sink } else { t }));
                    ds.push(Eps::new(0, 1));
                }
            }
            Position::After(i) if i + 1 < nb => {
                let t = find(Position::Before(i + 1)).expect("both ends of a segment exist together");
                cs.push(Distribution::dirac(t));
                ds.push(Eps::new((bounds[i + 1] - bounds[i]) as i64, -2));
            }
            Position::After(_) => {}
            Position::Before(j) => {
                if let Some(t) = find(Position::Point(j)) {
                    cs.push(Distribution::dirac(t));
                    ds.push(Eps::new(0, 1));
                }
            }
        }
        if cs.is_empty() {
            padded[si] = true;
            cs.push(Distribution::dirac(si));
            ds.push(Eps::int(1));
        }
        choices.push(cs);
        durations.push(ds);
    }
    choices.push(vec![Distribution::dirac(sink)]);
    durations.push(vec![Eps::int(1)]);

    let mut names: Vec<String> = states
        .iter()
        .map(|s| format!("{}@{}", pta.location(s.location).name, position_name(&bounds, s.position)))
        .collect();
    names.push("sink".into());
    let labels = (0..=sink)
        .map(|i| {
            let mut ls = LabelSet::new();
            if s1.contains(i) {
                ls.insert("phi1".into());
            }
            if s2.contains(i) {
                ls.insert("phi2".into());
            }
            ls
        })
        .collect();
    let unbounded =
        (0..=sink).map(|i| i < sink && matches!(states[i].position, Position::After(k) if k + 1 == nb)).collect();
    let game = DurationGame { mdp: UntimedMdp { names, initial: 0, choices, labels }, durations, unbounded };
    GameTmdp { bounds, states, sink, game, s1, s2, padded, index }
}
