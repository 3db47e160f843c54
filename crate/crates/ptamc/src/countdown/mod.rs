//! Countdown games and their reductions to timed models.
//!
//! From `(s, c)` player 1 names a duration `d <= c` offered by some
//! transition of `s`, player 2 picks one of the transitions of that duration,
//! and play continues from `(s', c - d)`. Player 1 wins on reaching `c = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::dsl::{Formula, ProbCmp, TimeRel, Timing};
use crate::model::{
    ClockConstraint, ClockId, Cmp, DiscreteTmdp, Distribution, Edge, LabelSet, LocId, Location, Outcome, Pta,
    Rat, TmdpTransition,
};

/// Weighted graph with strictly positive durations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountdownGame {
    pub states: Vec<String>,
    pub transitions: Vec<(usize, u64, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CountdownError {
    #[error("transition from `{0}` has duration 0")]
    ZeroDuration(String),
    #[error("state index {0} out of range")]
    UnknownState(usize),
    #[error("no state named `{0}`")]
    UnknownName(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    Player1,
    Player2,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Player1 => "player1",
            Winner::Player2 => "player2",
        })
    }
}

impl CountdownGame {
    pub fn new(states: Vec<String>, transitions: Vec<(usize, u64, usize)>) -> Self {
        CountdownGame { states, transitions }
    }

    pub fn state_id(&self, name: &str) -> Result<usize, CountdownError> {
        self.states.iter().position(|s| s == name).ok_or_else(|| CountdownError::UnknownName(name.to_string()))
    }

    pub fn validate(&self) -> Result<(), CountdownError> {
        for &(s, d, t) in &self.transitions {
            for u in [s, t] {
                if u >= self.states.len() {
                    return Err(CountdownError::UnknownState(u));
                }
            }
            if d == 0 {
                return Err(CountdownError::ZeroDuration(self.states[s].clone()));
            }
        }
        Ok(())
    }

    /// Successors of `s` grouped by duration, each sorted and deduplicated.
    pub fn moves(&self, s: usize) -> BTreeMap<u64, Vec<usize>> {
        let mut out: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for &(a, d, b) in &self.transitions {
            if a == s {
                out.entry(d).or_default().push(b);
            }
        }
        for succ in out.values_mut() {
            succ.sort_unstable();
            succ.dedup();
        }
        out
    }

    /// Moves of `s`, with a self-loop too long for budget `c` when `s` has none.
    fn padded_moves(&self, s: usize, c: u64) -> BTreeMap<u64, Vec<usize>> {
        let mut m = self.moves(s);
        if m.is_empty() {
            m.insert(c + 1, vec![s]);
        }
        m
    }
}

pub fn solve_countdown(game: &CountdownGame, s: usize, c: u64) -> Result<Winner, CountdownError> {
    game.validate()?;
    if s >= game.states.len() {
        return Err(CountdownError::UnknownState(s));
    }
    let n = game.states.len();
    let moves: Vec<_> = (0..n).map(|u| game.moves(u)).collect();
    // win[r][u]: player 1 wins from (u, r)
    let mut win: Vec<Vec<bool>> = vec![vec![true; n]];
    for r in 1..=c {
        let row = (0..n)
            .map(|u| moves[u].iter().any(|(&d, succ)| d <= r && succ.iter().all(|&v| win[(r - d) as usize][v])))
            .collect();
        win.push(row);
    }
    Ok(if win[c as usize][s] { Winner::Player1 } else { Winner::Player2 })
}

fn uniform(succ: &[usize], f: impl Fn(usize) -> Outcome) -> Distribution<Outcome> {
    let p = Rat::new(1.into(), (succ.len() as i64).into());
    Distribution::from_entries(succ.iter().map(|&v| (f(v), p.clone())))
}

/// One transition per `(state, duration)`, uniform over the successors; every
/// state is labelled `t`.
pub fn game_to_tmdp(game: &CountdownGame, s: usize, c: u64) -> Result<DiscreteTmdp, CountdownError> {
    game.validate()?;
    if s >= game.states.len() {
        return Err(CountdownError::UnknownState(s));
    }
    let transitions = (0..game.states.len())
        .map(|u| {
            game.padded_moves(u, c)
                .into_iter()
                .map(|(duration, succ)| {
                    let p = Rat::new(1.into(), (succ.len() as i64).into());
                    let dist = Distribution::from_entries(succ.into_iter().map(|v| (v, p.clone())));
                    TmdpTransition { duration, dist }
                })
                .collect()
        })
        .collect();
    Ok(DiscreteTmdp {
        names: game.states.clone(),
        initial: s,
        transitions,
        labels: vec![LabelSet::from(["t".to_string()]); game.states.len()],
    })
}

const X: ClockId = ClockId(0);
const Y: ClockId = ClockId(1);

fn first(game: &CountdownGame, u: usize) -> String {
    format!("{}_1", game.states[u])
}

fn second(game: &CountdownGame, u: usize) -> String {
    format!("{}_2", game.states[u])
}

/// Two locations per state: `s_1` (labelled `a`, no dwelling) hands over to
/// `s_2`, whose edges `x = d` are the moves of duration `d`. Paired with
/// `not P<1 [F=c a]`.
pub fn game_to_1cpta(game: &CountdownGame, s: usize, c: u64) -> Result<(Pta, Formula), CountdownError> {
    game.validate()?;
    if s >= game.states.len() {
        return Err(CountdownError::UnknownState(s));
    }
    let n = game.states.len();
    let mut locations = Vec::with_capacity(2 * n);
    for u in 0..n {
        locations.push(Location {
            name: first(game, u),
            invariant: ClockConstraint::atom(X, Cmp::Le, 0),
            labels: LabelSet::from(["a".to_string()]),
        });
        let invariant = ClockConstraint::truth();
        locations.push(Location { name: second(game, u), invariant, labels: LabelSet::new() });
    }
    let mut edges = Vec::new();
    for u in 0..n {
        edges.push(Edge {
            source: LocId(2 * u),
            guard: ClockConstraint::equals(X, 0),
            dist: Distribution::dirac(Outcome::new(vec![X], LocId(2 * u + 1))),
        });
        for (d, succ) in game.padded_moves(u, c) {
            edges.push(Edge {
                source: LocId(2 * u + 1),
                guard: ClockConstraint::equals(X, d),
                dist: uniform(&succ, |v| Outcome::new(vec![X], LocId(2 * v))),
            });
        }
    }
    let pta = Pta { clocks: vec!["x".into()], locations, initial: LocId(2 * s), edges };
    let f = Formula::not(Formula::eventually(
        ProbCmp::Lt,
        Rat::one(),
        Formula::atom("a"),
        Some(Timing { rel: TimeRel::Eq, bound: c }),
    ));
    Ok((pta, f))
}

/// The one-clock image plus a clock `y` that is never reset and an absorbing
/// `star` location, entered from any `s_1` when `y = c`. Only `star` is
/// labelled. Paired with `not P<1 [F a]`.
pub fn game_to_2cpta(game: &CountdownGame, s: usize, c: u64) -> Result<(Pta, Formula), CountdownError> {
    let (mut pta, _) = game_to_1cpta(game, s, c)?;
    pta.clocks.push("y".into());
    for l in &mut pta.locations {
        l.labels.clear();
    }
    let star = LocId(pta.locations.len());
    pta.locations.push(Location {
        name: "star".into(),
        invariant: ClockConstraint::truth(),
        labels: LabelSet::from(["a".to_string()]),
    });
    for u in 0..game.states.len() {
        pta.edges.push(Edge {
            source: LocId(2 * u),
            guard: ClockConstraint::equals(Y, c),
            dist: Distribution::dirac(Outcome::new(vec![], star)),
        });
    }
    let dist = Distribution::dirac(Outcome::new(vec![], star));
    pta.edges.push(Edge { source: star, guard: ClockConstraint::truth(), dist });
    let f = Formula::not(Formula::eventually(ProbCmp::Lt, Rat::one(), Formula::atom("a"), None));
    Ok((pta, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_game;

    const PARITY: &str = include_str!("../../../../models/parity.cdg");

    fn game(text: &str) -> CountdownGame {
        parse_game(text).unwrap()
    }

    #[test]
    fn unit_self_loop_always_wins() {
        let g = game("game { states s; trans s -1-> s; }");
        for c in 0..20 {
            assert_eq!(solve_countdown(&g, 0, c).unwrap(), Winner::Player1);
        }
    }

    #[test]
    fn parity_obstruction() {
        let g = game("game { states s; trans s -2-> s; }");
        assert_eq!(solve_countdown(&g, 0, 3).unwrap(), Winner::Player2);
        assert_eq!(solve_countdown(&g, 0, 4).unwrap(), Winner::Player1);
    }

    #[test]
    fn player2_strands_the_count() {
        let g = game(PARITY);
        let s = g.state_id("s").unwrap();
        assert_eq!(solve_countdown(&g, s, 2).unwrap(), Winner::Player2);
        assert_eq!(solve_countdown(&g, s, 1).unwrap(), Winner::Player1);
        assert_eq!(solve_countdown(&g, s, 0).unwrap(), Winner::Player1);
    }

    #[test]
    fn durations_beyond_the_budget_lose() {
        let g = game("game { states s t; trans s -5-> t; }");
        assert_eq!(solve_countdown(&g, 0, 4).unwrap(), Winner::Player2);
        assert_eq!(solve_countdown(&g, 0, 5).unwrap(), Winner::Player1);
        assert_eq!(solve_countdown(&g, 1, 3).unwrap(), Winner::Player2);
    }

    #[test]
    fn tmdp_groups_by_duration() {
        let g = game("game { states s a b; trans s -1-> a; trans s -1-> b; trans s -2-> a; trans a -1-> a; }");
        let t = game_to_tmdp(&g, 0, 3).unwrap();
        assert_eq!(t.transitions[0].len(), 2);
        let one = &t.transitions[0][0];
        assert_eq!(one.duration, 1);
        assert_eq!(one.dist.prob(&1), Rat::new(1.into(), 2.into()));
        assert_eq!(one.dist.prob(&2), Rat::new(1.into(), 2.into()));
        assert_eq!(t.transitions[1][0].dist, Distribution::dirac(1));
        // b has no moves: padded with a loop longer than the budget
        assert_eq!(t.transitions[2], vec![TmdpTransition { duration: 4, dist: Distribution::dirac(2) }]);
        assert!(t.validate().is_empty());
        assert!(t.labels.iter().all(|l| l.contains("t")));
    }

    #[test]
    fn one_clock_image_has_two_locations_per_state() {
        let g = game(PARITY);
        let (pta, f) = game_to_1cpta(&g, 0, 2).unwrap();
        assert_eq!(pta.locations.len(), 2 * g.states.len());
        assert!(pta.validate().is_empty());
        assert!(pta.is_structurally_non_zeno());
        // s_2 may idle where no guard holds, so the deadlock gate rejects it
        assert!(!pta.has_non_deadlocking_invariants());
        assert_eq!(pta.location(LocId(0)).invariant, ClockConstraint::atom(X, Cmp::Le, 0));
        assert_eq!(f.to_string(), crate::dsl::parse_formula("!P{<1}[ F[=2] \"a\" ]").unwrap().to_string());
    }

    #[test]
    fn two_clock_image_adds_one_absorbing_location() {
        let g = game(PARITY);
        let (pta, _) = game_to_2cpta(&g, 0, 2).unwrap();
        assert_eq!(pta.locations.len(), 2 * g.states.len() + 1);
        assert_eq!(pta.clocks.len(), 2);
        let star = pta.location_id("star").unwrap();
        let own: Vec<_> = pta.edges_from(star).collect();
        assert_eq!(own.len(), 1);
        assert_eq!(own[0].1.dist, Distribution::dirac(Outcome::new(vec![], star)));
        assert!(pta.locations.iter().filter(|l| !l.labels.is_empty()).count() == 1);
        assert!(pta.validate().is_empty());
    }

    #[test]
    fn zero_durations_are_rejected() {
        let g = CountdownGame::new(vec!["s".into()], vec![(0, 0, 0)]);
        assert!(matches!(solve_countdown(&g, 0, 1), Err(CountdownError::ZeroDuration(_))));
    }
}
