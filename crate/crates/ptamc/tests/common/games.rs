//! Small timed MDPs and brute-force evaluators for the duration games.

use std::collections::HashMap;

use ptamc::dsl::{TimeRel, Timing};
use ptamc::games::{GameKind, GameValue};
use ptamc::mdp::{qual_almost_until, qual_exists_until, qual_positive_until, qual_possible_almost_until, StateSet};
use ptamc::model::{DiscreteTmdp, Distribution, Rat, TmdpTransition};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_tmdp(rng: &mut ChaCha8Rng) -> DiscreteTmdp {
    loop {
        let n = rng.gen_range(1..=5);
        let transitions: Vec<Vec<TmdpTransition>> = (0..n)
            .map(|_| {
                (0..rng.gen_range(1..=2))
                    .map(|_| {
                        let k = rng.gen_range(1..=3.min(n));
                        let mut targets: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
                        targets.sort();
                        targets.dedup();
                        let p = Rat::new(1.into(), (targets.len() as i64).into());
                        TmdpTransition {
                            duration: rng.gen_range(0..=4),
                            dist: Distribution::from_entries(targets.into_iter().map(|t| (t, p.clone()))),
                        }
                    })
                    .collect()
            })
            .collect();
        let t = DiscreteTmdp {
            names: (0..n).map(|i| format!("s{}", i)).collect(),
            initial: 0,
            transitions,
            labels: vec![Default::default(); n],
        };
        if t.is_structurally_non_zeno() {
            return t;
        }
    }
}

pub fn random_set(rng: &mut ChaCha8Rng, n: usize, p: f64) -> StateSet {
    StateSet::from_fn(n, |_| rng.gen_bool(p))
}

/// Which of the four qualitative thresholds is checked.
#[derive(Clone, Copy, Debug)]
pub enum Q {
    Pos,
    Lt1,
    Zero,
    One,
}

/// Decides the timed until by unfolding (state, elapsed time) up to the bound.
///
/// Below the bound, probability 0 or 1 only depends on finitely many branches,
/// so the adversary and the branching become the two players of a finite game.
/// Past a `>= c` bound the rest is an untimed until, taken from the graph sets.
pub struct Unfold<'a> {
    t: &'a DiscreteTmdp,
    s1: &'a StateSet,
    s2: &'a StateSet,
    q: Q,
    timing: Timing,
    tail: StateSet,
    memo: HashMap<(usize, u64), bool>,
}

impl<'a> Unfold<'a> {
    pub fn new(t: &'a DiscreteTmdp, s1: &'a StateSet, s2: &'a StateSet, q: Q, timing: Timing) -> Self {
        let m = t.untimed();
        let tail = match q {
            Q::Pos => qual_positive_until(&m, s1, s2),
            Q::Lt1 => qual_possible_almost_until(&m, s1, s2),
            Q::Zero => qual_exists_until(&m, s1, s2),
            Q::One => qual_almost_until(&m, s1, s2),
        };
        Unfold { t, s1, s2, q, timing, tail, memo: HashMap::new() }
    }

    /// Whether the player aiming for the witness wins from `(s, time)`:
    /// for `Pos` and `One` that is "every adversary", for `Lt1` and `Zero` "some adversary".
    fn win(&mut self, s: usize, time: u64) -> bool {
        let c = self.timing.bound;
        if let Some(&w) = self.memo.get(&(s, time)) {
            return w;
        }
        let w = match self.timing.rel {
            TimeRel::Le => {
                if time > c {
                    false
                } else if self.s2.contains(s) {
                    true
                } else {
                    self.s1.contains(s) && self.step(s, time)
                }
            }
            TimeRel::Ge => {
                if time >= c {
                    self.tail.contains(s)
                } else {
                    self.s1.contains(s) && self.step(s, time)
                }
            }
            TimeRel::Eq => unreachable!(),
        };
        self.memo.insert((s, time), w);
        w
    }

    fn step(&mut self, s: usize, time: u64) -> bool {
        let cap = self.timing.bound + 1;
        let moves: Vec<(u64, Vec<usize>)> = self.t.transitions[s]
            .iter()
            .map(|tr| ((time + tr.duration).min(cap), tr.dist.support().copied().collect()))
            .collect();
        let q = self.q;
        let mut outcome = |d: u64, succ: &[usize], all: bool| {
            let mut res = succ.iter().map(|&u| self.win(u, d)).collect::<Vec<_>>().into_iter();
            if all { res.all(|b| b) } else { res.any(|b| b) }
        };
        match q {
            Q::Pos => moves.iter().all(|(d, su)| outcome(*d, su, false)),
            Q::Lt1 => moves.iter().any(|(d, su)| outcome(*d, su, true)),
            Q::Zero => moves.iter().any(|(d, su)| outcome(*d, su, false)),
            Q::One => moves.iter().all(|(d, su)| outcome(*d, su, true)),
        }
    }

    /// Truth of the formula itself at `s`.
    pub fn holds(&mut self, s: usize) -> bool {
        match self.q {
            Q::Pos | Q::One => self.win(s, 0),
            Q::Lt1 | Q::Zero => !self.win(s, 0),
        }
    }
}

/// Plain minimax over the game tree cut after `k` rounds (two turns each).
///
/// Plays that are still undecided at the cut count as +inf.
pub fn tree_value(
    t: &DiscreteTmdp,
    rules: &[Option<GameValue>],
    s: usize,
    k: usize,
    pn_max: bool,
    pp_max: bool,
) -> GameValue {
    if let Some(v) = &rules[s] {
        return v.clone();
    }
    if k == 0 {
        return GameValue::PosInf;
    }
    let per_choice = t.transitions[s].iter().map(|tr| {
        let succ = tr.dist.support().map(|&u| tree_value(t, rules, u, k - 1, pn_max, pp_max));
        let v = if pp_max { succ.max().unwrap() } else { succ.min().unwrap() };
        match v {
            GameValue::Fin(x) => GameValue::Fin(x + tr.duration),
            other => other,
        }
    });
    if pn_max { per_choice.max().unwrap() } else { per_choice.min().unwrap() }
}

/// Fixed values and player directions defining each game kind on a tree.
///
/// Entries are `(kind, fixed values, nondeterminism maximises, branching maximises)`.
pub type TreeRule = (GameKind, Vec<Option<GameValue>>, bool, bool);

pub fn tree_rules(t: &DiscreteTmdp, s1: &StateSet, s2: &StateSet) -> [TreeRule; 4] {
    let n = t.len();
    let m = t.untimed();
    let reach: Vec<Option<GameValue>> = (0..n)
        .map(|s| {
            if s2.contains(s) {
                Some(GameValue::Fin(0))
            } else if !s1.contains(s) {
                Some(GameValue::PosInf)
            } else {
                None
            }
        })
        .collect();
    let late = |b0: &StateSet, b1: &StateSet| -> Vec<Option<GameValue>> {
        (0..n)
            .map(|s| {
                if !b0.contains(s) {
                    Some(GameValue::NegInf)
                } else if !b1.contains(s) {
                    Some(GameValue::Fin(0))
                } else {
                    None
                }
            })
            .collect()
    };
    // base sets written out from their definitions
    let pos = qual_positive_until(&m, s1, s2);
    let gamma_b1 = StateSet::from_fn(n, |s| {
        s1.contains(s) && t.transitions[s].iter().all(|tr| tr.dist.support().any(|&u| pos.contains(u)))
    });
    let almost = qual_possible_almost_until(&m, s1, s2);
    let delta_b1 = StateSet::from_fn(n, |s| {
        s1.contains(s) && t.transitions[s].iter().any(|tr| tr.dist.support().all(|&u| almost.contains(u)))
    });
    [
        (GameKind::Alpha, reach.clone(), true, false),
        (GameKind::Beta, reach, false, true),
        (GameKind::Gamma, late(&pos, &gamma_b1), false, true),
        (GameKind::Delta, late(&almost, &delta_b1), true, false),
    ]
}
