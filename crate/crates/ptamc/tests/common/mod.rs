//! Random instances shared by the integration suites.
#![allow(dead_code)]

pub mod games;

use num_traits::One;
use ptamc::dsl::{Formula, ProbCmp, TimeRel, Timing};
use ptamc::model::{
    Atom, ClockConstraint, ClockId, Cmp, Distribution, Edge, LabelSet, LocId, Location, Outcome, Pta, Rat,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

const X: ClockId = ClockId(0);

fn random_guard(rng: &mut ChaCha8Rng, max_const: u64) -> ClockConstraint {
    let lo = rng.gen_range(0..=max_const);
    let hi = rng.gen_range(lo..=max_const);
    let mut atoms = Vec::new();
    if lo > 0 || rng.gen_bool(0.3) {
        atoms.push(Atom::new(X, if rng.gen_bool(0.5) { Cmp::Ge } else { Cmp::Gt }, lo));
    }
    if rng.gen_bool(0.7) {
        let strict = hi > lo && rng.gen_bool(0.5);
        atoms.push(Atom::new(X, if strict { Cmp::Lt } else { Cmp::Le }, hi));
    }
    if atoms.iter().any(|a| a.cmp == Cmp::Gt && a.bound == hi) && atoms.iter().any(|a| a.cmp == Cmp::Le) {
        atoms.retain(|a| a.cmp != Cmp::Le);
    }
    ClockConstraint::from_atoms(atoms)
}

fn branch_probs(rng: &mut ChaCha8Rng) -> Vec<Rat> {
    match rng.gen_range(0..4) {
        0 | 1 => vec![Rat::one()],
        2 => {
            let p = [r(1, 2), r(1, 3), r(3, 4), r(1, 5)][rng.gen_range(0..4)].clone();
            vec![p.clone(), Rat::one() - p]
        }
        _ => vec![r(1, 2), r(1, 4), r(1, 4)],
    }
}

/// Valid one-clock automaton: bounded invariants with a forced exit edge per
/// location, non-reset branches only go forward, and every reset branch sits
/// on an edge whose guard implies `x >= 1`, so each cycle takes a time unit.
pub fn random_pta_1c(rng: &mut ChaCha8Rng, max_locs: usize, max_const: u64) -> Pta {
    let n = rng.gen_range(1..=max_locs);
    let mut locations = Vec::new();
    let mut bounds = Vec::new();
    for i in 0..n {
        let k = rng.gen_range(2..=max_const.max(2));
        let strict = rng.gen_bool(0.4);
        let inv = ClockConstraint::atom(X, if strict { Cmp::Lt } else { Cmp::Le }, k);
        let mut labels = LabelSet::new();
        for a in ["a", "b"] {
            if rng.gen_bool(0.4) {
                labels.insert(a.to_string());
            }
        }
        locations.push(Location { name: format!("l{}", i), invariant: inv, labels });
        bounds.push((k, strict));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        // exit edge: enabled on the upper closure of the invariant, always resets
        let (k, strict) = bounds[i];
        let guard = if strict {
            ClockConstraint::from_atoms([Atom::new(X, Cmp::Gt, k - 1)])
        } else {
            ClockConstraint::equals(X, k)
        };
        let probs = branch_probs(rng);
        let dist = probs.into_iter().map(|p| (Outcome::new(vec![X], LocId(rng.gen_range(0..n))), p));
        edges.push(Edge { source: LocId(i), guard, dist: Distribution::from_entries(dist) });
        for _ in 0..rng.gen_range(0..=2) {
            let guard = random_guard(rng, max_const);
            let unit = guard.project(X).is_none_or(|iv| iv.lo() >= 1);
            if !unit && i + 1 == n {
                continue;
            }
            let dist = branch_probs(rng).into_iter().map(|p| {
                let o = if !unit || (i + 1 < n && rng.gen_bool(0.5)) {
                    Outcome::new(vec![], LocId(rng.gen_range(i + 1..n)))
                } else {
                    Outcome::new(vec![X], LocId(rng.gen_range(0..n)))
                };
                (o, p)
            });
            edges.push(Edge { source: LocId(i), guard, dist: Distribution::from_entries(dist) });
        }
    }
    Pta { clocks: vec!["x".into()], locations, initial: LocId(0), edges }
}

/// A valid random one-clock automaton; retries until the gates accept one.
pub fn valid_pta_1c(rng: &mut ChaCha8Rng, max_locs: usize, max_const: u64) -> Pta {
    loop {
        let p = random_pta_1c(rng, max_locs, max_const);
        if p.check_one_clock().is_ok() {
            return p;
        }
    }
}

fn random_atom(rng: &mut ChaCha8Rng) -> Formula {
    match rng.gen_range(0..5) {
        0 => Formula::True,
        1 | 2 => Formula::atom("a"),
        _ => Formula::atom("b"),
    }
}

const CMPS: [ProbCmp; 4] = [ProbCmp::Lt, ProbCmp::Le, ProbCmp::Ge, ProbCmp::Gt];

pub fn random_pctl(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 {
        return random_atom(rng);
    }
    match rng.gen_range(0..6) {
        0 => random_atom(rng),
        1 => Formula::not(random_pctl(rng, depth - 1)),
        2 => Formula::and(random_pctl(rng, depth - 1), random_pctl(rng, depth - 1)),
        _ => {
            let cmp = CMPS[rng.gen_range(0..4)];
            let bound = [r(0, 1), r(1, 1), r(1, 2), r(1, 3), r(4, 5)][rng.gen_range(0..5)].clone();
            let left = if rng.gen_bool(0.5) { Formula::True } else { random_pctl(rng, depth - 1) };
            Formula::until(cmp, bound, left, random_pctl(rng, depth - 1), None)
        }
    }
}

fn qualitative_threshold(rng: &mut ChaCha8Rng) -> (ProbCmp, Rat) {
    match rng.gen_range(0..4) {
        0 => (ProbCmp::Gt, r(0, 1)),
        1 => (ProbCmp::Ge, r(1, 1)),
        2 => (ProbCmp::Lt, r(1, 1)),
        _ => (ProbCmp::Le, r(0, 1)),
    }
}

/// Thresholds 0 or 1 and time bounds `<= c` or `>= c` only.
pub fn random_ptctl01(rng: &mut ChaCha8Rng, depth: usize, max_c: u64) -> Formula {
    if depth == 0 {
        return random_atom(rng);
    }
    match rng.gen_range(0..6) {
        0 => random_atom(rng),
        1 => Formula::not(random_ptctl01(rng, depth - 1, max_c)),
        2 => Formula::and(random_ptctl01(rng, depth - 1, max_c), random_ptctl01(rng, depth - 1, max_c)),
        _ => {
            let (cmp, bound) = qualitative_threshold(rng);
            let timing = match rng.gen_range(0..3) {
                0 => None,
                1 => Some(Timing { rel: TimeRel::Le, bound: rng.gen_range(0..=max_c) }),
                _ => Some(Timing { rel: TimeRel::Ge, bound: rng.gen_range(0..=max_c) }),
            };
            let left = if rng.gen_bool(0.5) { Formula::True } else { random_ptctl01(rng, depth - 1, max_c) };
            Formula::until(cmp, bound, left, random_ptctl01(rng, depth - 1, max_c), timing)
        }
    }
}

/// Random countdown game; some states may have no transition.
pub fn random_game(rng: &mut ChaCha8Rng, max_states: usize, max_dur: u64) -> ptamc::countdown::CountdownGame {
    let n = rng.gen_range(1..=max_states);
    let states = (0..n).map(|i| format!("s{}", i)).collect();
    let mut transitions = Vec::new();
    for s in 0..n {
        for _ in 0..rng.gen_range(0..=3) {
            transitions.push((s, rng.gen_range(1..=max_dur), rng.gen_range(0..n)));
        }
    }
    ptamc::countdown::CountdownGame::new(states, transitions)
}

/// Adds absorbing locations `goal` (labelled `g`) and `dead`, and sends half
/// the mass of some edges there, so reachability probabilities fall strictly between 0 and 1.
pub fn with_traps(rng: &mut ChaCha8Rng, mut pta: Pta) -> Pta {
    let k = pta.max_constant().max(1);
    let n = pta.locations.len();
    for (name, label) in [("goal", Some("g")), ("dead", None)] {
        let l = LocId(pta.locations.len());
        pta.locations.push(Location {
            name: name.into(),
            invariant: ClockConstraint::atom(X, Cmp::Le, k),
            labels: label.into_iter().map(String::from).collect(),
        });
        let dist = Distribution::dirac(Outcome::new(vec![X], l));
        pta.edges.push(Edge { source: l, guard: ClockConstraint::equals(X, k), dist });
    }
    let half = r(1, 2);
    for e in pta.edges.iter_mut().filter(|e| e.source.0 < n) {
        if rng.gen_bool(0.4) {
            continue;
        }
        let trap = LocId(n + rng.gen_range(0..2));
        let entries = e.dist.entries().iter().map(|(o, p)| (o.clone(), p * &half));
        e.dist = Distribution::from_entries(entries.chain([(Outcome::new(vec![X], trap), half.clone())]));
    }
    pta
}

/// Fixed ten-location automaton with every constant multiplied by `k`.
pub fn scaled_pta(k: u64) -> Pta {
    let n = 10;
    let cap = |i: usize| (3 + (i % 4) as u64) * k;
    let mut locations = Vec::new();
    let mut edges = Vec::new();
    for i in 0..n {
        let mut labels = LabelSet::new();
        if i % 3 == 0 {
            labels.insert("a".into());
        }
        if i % 4 == 1 {
            labels.insert("b".into());
        }
        let strict = i % 5 == 2;
        let inv = ClockConstraint::atom(X, if strict { Cmp::Lt } else { Cmp::Le }, cap(i));
        locations.push(Location { name: format!("l{}", i), invariant: inv, labels });
        let exit = if strict {
            ClockConstraint::from_atoms([Atom::new(X, Cmp::Gt, cap(i) - k)])
        } else {
            ClockConstraint::equals(X, cap(i))
        };
        let half = r(1, 2);
        edges.push(Edge {
            source: LocId(i),
            guard: exit,
            dist: Distribution::from_entries([
                (Outcome::new(vec![X], LocId((i + 1) % n)), half.clone()),
                (Outcome::new(vec![X], LocId((i + 3) % n)), half),
            ]),
        });
        let lo = (i % 3 + 1) as u64 * k;
        edges.push(Edge {
            source: LocId(i),
            guard: ClockConstraint::from_atoms([Atom::new(X, Cmp::Ge, lo), Atom::new(X, Cmp::Lt, cap(i))]),
            dist: Distribution::from_entries([
                // the last one resets so the non-reset branches form no cycle
                (Outcome::new(if i + 1 == n { vec![X] } else { vec![] }, LocId((i + 1) % n)), r(2, 3)),
                (Outcome::new(vec![X], LocId((i + 5) % n)), r(1, 3)),
            ]),
        });
    }
    Pta { clocks: vec!["x".into()], locations, initial: LocId(0), edges }
}

/// Qualitative timed formulas over `scaled_pta(k)`, bounds multiplied by `k`.
pub fn scaled_formulas(k: u64) -> Vec<Formula> {
    [
        format!("P{{>0}}[ F[<={}] \"a\" ]", 5 * k),
        format!("P{{>=1}}[ \"a\" U[>={}] \"b\" ]", 3 * k),
        format!("P{{<1}}[ true U[<={}] P{{>0}}[ F[>={}] \"b\" ] ]", 7 * k, 2 * k),
        format!("P{{<=0}}[ !\"b\" U[>={}] P{{>=1}}[ F[<={}] \"a\" ] ]", k, 4 * k),
        format!("P{{>0}}[ G[<={}] !\"a\" ]", 2 * k),
    ]
    .iter()
    .map(|s| ptamc::dsl::parse_formula(s).unwrap())
    .collect()
}
