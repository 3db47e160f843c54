//! Duration games on timed MDPs and the qualitative timed-until checker.
//!
//! Player Pn resolves nondeterminism (picks a transition), player Pp picks a
//! successor in the support. The four game values and their TCTL variants
//! share one solver, parameterised by which player minimises.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use num_traits::{One, Zero};

use crate::dsl::{Formula, ProbCmp, TimeRel, Timing};
use crate::mdp::{
    qual_almost_until, qual_exists_until, qual_positive_until, qual_possible_almost_until, qual_until_step1,
    until_sat, StateSet, Step1Mode,
};
use crate::model::{DiscreteTmdp, Rat, UntimedMdp};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("timed MDP is not structurally non-Zeno")]
    Zeno,
    #[error("invalid timed MDP: {0}")]
    Invalid(String),
    #[error("formula `{0}` is outside PTCTL01_NONPUNCTUAL")]
    WrongClass(String),
    #[error("punctual time bounds are not supported here")]
    Punctual,
    #[error("transition with duration 0 from state `{0}`")]
    ZeroDuration(String),
}

/// Durations the solver can add and compare with integer bounds.
pub trait Duration: Clone + Ord + fmt::Debug + Add<Output = Self> {
    fn zero() -> Self;
    fn from_int(c: u64) -> Self;
}

impl Duration for u64 {
    fn zero() -> Self {
        0
    }

    fn from_int(c: u64) -> Self {
        c
    }
}

/// `-inf < finite < +inf`, ordered by the derived variant order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GameValue<D = u64> {
    NegInf,
    Fin(D),
    PosInf,
}

impl<D: Duration> GameValue<D> {
    fn plus(&self, d: &D) -> GameValue<D> {
        match self {
            GameValue::Fin(v) => GameValue::Fin(v.clone() + d.clone()),
            other => other.clone(),
        }
    }

    pub fn le_int(&self, c: u64) -> bool {
        *self <= GameValue::Fin(D::from_int(c))
    }

    pub fn ge_int(&self, c: u64) -> bool {
        *self >= GameValue::Fin(D::from_int(c))
    }
}

impl<D: fmt::Display> fmt::Display for GameValue<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameValue::NegInf => f.write_str("-inf"),
            GameValue::Fin(d) => write!(f, "{}", d),
            GameValue::PosInf => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Opt {
    Min,
    Max,
}

impl Opt {
    fn pick<D: Duration>(self, vals: impl Iterator<Item = GameValue<D>>) -> Option<GameValue<D>> {
        match self {
            Opt::Min => vals.min(),
            Opt::Max => vals.max(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameKind {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

/// A timed MDP whose durations live in `D`.
///
/// A state marked `unbounded` lets Pn wait as long as it likes before taking
/// one of its transitions, with the labelling unchanged meanwhile.
#[derive(Clone, Debug)]
pub struct DurationGame<D> {
    pub mdp: UntimedMdp,
    pub durations: Vec<Vec<D>>,
    pub unbounded: Vec<bool>,
}

impl DurationGame<u64> {
    pub fn from_tmdp(t: &DiscreteTmdp) -> Result<Self, GameError> {
        if let Some(e) = t.validate().into_iter().next() {
            return Err(GameError::Invalid(e));
        }
        if !t.is_structurally_non_zeno() {
            return Err(GameError::Zeno);
        }
        Ok(DurationGame {
            mdp: t.untimed(),
            durations: t.transitions.iter().map(|ts| ts.iter().map(|tr| tr.duration).collect()).collect(),
            unbounded: vec![false; t.len()],
        })
    }
}

/// Per-state rule of one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule<D> {
    Fixed(GameValue<D>),
    Step,
}

/// How a game value at a state turns into a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueTest {
    Always(bool),
    AtMost { c: u64, negate: bool },
    AtLeast { c: u64, negate: bool },
}

impl ValueTest {
    pub fn holds<D: Duration>(&self, v: &GameValue<D>) -> bool {
        match *self {
            ValueTest::Always(b) => b,
            ValueTest::AtMost { c, negate } => v.le_int(c) != negate,
            ValueTest::AtLeast { c, negate } => v.ge_int(c) != negate,
        }
    }
}

/// The game deciding one qualitative timed until.
#[derive(Clone, Debug)]
pub struct Plan<D> {
    pub rules: Vec<Rule<D>>,
    pub trans: Opt,
    pub succ: Opt,
    pub test: ValueTest,
}

impl<D: Duration> DurationGame<D> {
    pub fn len(&self) -> usize {
        self.mdp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mdp.is_empty()
    }

    /// One round at state `s`, given the current values of its successors.
    pub fn step_value(&self, s: usize, value: impl Fn(usize) -> GameValue<D>, trans: Opt, succ: Opt) -> GameValue<D> {
        if self.unbounded[s] && trans == Opt::Max {
            return GameValue::PosInf;
        }
        let options = self.mdp.choices[s].iter().zip(&self.durations[s]).map(|(dist, d)| {
            succ.pick(dist.support().map(|&t| value(t))).expect("non-empty support").plus(d)
        });
        trans.pick(options).unwrap_or(GameValue::PosInf)
    }

    fn round(&self, rules: &[Rule<D>], cur: &[GameValue<D>], trans: Opt, succ: Opt) -> Vec<GameValue<D>> {
        (0..self.len())
            .map(|s| match &rules[s] {
                Rule::Fixed(v) => v.clone(),
                Rule::Step => self.step_value(s, |t| cur[t].clone(), trans, succ),
            })
            .collect()
    }

    /// Runs `rounds` rounds from +inf on stepping states, or until nothing changes when `rounds` is `None`.
    fn iterate(&self, rules: &[Rule<D>], trans: Opt, succ: Opt, rounds: Option<usize>) -> Vec<GameValue<D>> {
        let mut cur: Vec<GameValue<D>> = rules
            .iter()
            .map(|r| match r {
                Rule::Fixed(v) => v.clone(),
                Rule::Step => GameValue::PosInf,
            })
            .collect();
        let mut i = 0;
        loop {
            if rounds == Some(i) {
                return cur;
            }
            let next = self.round(rules, &cur, trans, succ);
            if rounds.is_none() && next == cur {
                return cur;
            }
            cur = next;
            i += 1;
        }
    }

    /// 0 on S2, +inf outside S1 and S2, a step elsewhere.
    pub fn reach_rules(&self, s1: &StateSet, s2: &StateSet) -> Vec<Rule<D>> {
        (0..self.len())
            .map(|s| {
                if s2.contains(s) {
                    Rule::Fixed(GameValue::Fin(D::zero()))
                } else if !s1.contains(s) {
                    Rule::Fixed(GameValue::PosInf)
                } else {
                    Rule::Step
                }
            })
            .collect()
    }

    /// -inf outside B0, 0 on B0 minus B1, a step on B1.
    pub fn late_rules(&self, b0: &StateSet, b1: &StateSet) -> Vec<Rule<D>> {
        (0..self.len())
            .map(|s| {
                if !b0.contains(s) {
                    Rule::Fixed(GameValue::NegInf)
                } else if !b1.contains(s) {
                    Rule::Fixed(GameValue::Fin(D::zero()))
                } else {
                    Rule::Step
                }
            })
            .collect()
    }

    /// Reach-time game: `trans` over transitions of `d + succ` over the support.
    pub fn reach_time(
        &self,
        s1: &StateSet,
        s2: &StateSet,
        trans: Opt,
        succ: Opt,
        rounds: Option<usize>,
    ) -> Vec<GameValue<D>> {
        self.iterate(&self.reach_rules(s1, s2), trans, succ, rounds)
    }

    /// Latest-witness game on the base sets B0 and B1.
    pub fn late_witness(
        &self,
        b0: &StateSet,
        b1: &StateSet,
        trans: Opt,
        succ: Opt,
        rounds: Option<usize>,
    ) -> Vec<GameValue<D>> {
        self.iterate(&self.late_rules(b0, b1), trans, succ, rounds)
    }

    /// Base sets of the gamma game: `P>0(S1 U S2)` and its one-step version.
    pub fn gamma_sets(&self, s1: &StateSet, s2: &StateSet) -> (StateSet, StateSet) {
        (qual_positive_until(&self.mdp, s1, s2), qual_until_step1(&self.mdp, s1, s2, Step1Mode::ExistsPos))
    }

    /// Base sets of the delta game: `!P<1(S1 U S2)` and `!P<1(S1 U>=1 S2)`.
    pub fn delta_sets(&self, s1: &StateSet, s2: &StateSet) -> (StateSet, StateSet) {
        (
            qual_possible_almost_until(&self.mdp, s1, s2),
            qual_until_step1(&self.mdp, s1, s2, Step1Mode::AllPosLt1).complement(),
        )
    }

    /// Some path stays in S1 and reaches S2; B1 additionally needs a first step.
    pub fn exists_sets(&self, s1: &StateSet, s2: &StateSet) -> (StateSet, StateSet) {
        let b0 = qual_exists_until(&self.mdp, s1, s2);
        let b1 = StateSet::from_fn(self.len(), |s| {
            s1.contains(s) && self.mdp.choices[s].iter().any(|d| d.support().any(|&t| b0.contains(t)))
        });
        (b0, b1)
    }

    /// `P>=1(S1 U S2)`; B1 keeps every successor of every transition inside it.
    pub fn sure_sets(&self, s1: &StateSet, s2: &StateSet) -> (StateSet, StateSet) {
        let b0 = qual_almost_until(&self.mdp, s1, s2);
        let b1 = StateSet::from_fn(self.len(), |s| {
            s1.contains(s) && self.mdp.choices[s].iter().all(|d| d.support().all(|&t| b0.contains(t)))
        });
        (b0, b1)
    }

    pub fn values(&self, kind: GameKind, s1: &StateSet, s2: &StateSet, rounds: Option<usize>) -> Vec<GameValue<D>> {
        match kind {
            GameKind::Alpha => self.reach_time(s1, s2, Opt::Max, Opt::Min, rounds),
            GameKind::Beta => self.reach_time(s1, s2, Opt::Min, Opt::Max, rounds),
            GameKind::Gamma => {
                let (b0, b1) = self.gamma_sets(s1, s2);
                self.late_witness(&b0, &b1, Opt::Min, Opt::Max, rounds)
            }
            GameKind::Delta => {
                let (b0, b1) = self.delta_sets(s1, s2);
                self.late_witness(&b0, &b1, Opt::Max, Opt::Min, rounds)
            }
        }
    }

    /// The game for `P cmp bound (S1 U~c S2)` with a 0/1 threshold.
    ///
    /// An untimed until is read as `U>=0`. `P<=0` and `P>=1` put both players
    /// on the same side: an existential or universal path property.
    pub fn plan(
        &self,
        s1: &StateSet,
        s2: &StateSet,
        cmp: ProbCmp,
        bound: &Rat,
        timing: Option<Timing>,
    ) -> Result<Plan<D>, GameError> {
        let timing = timing.unwrap_or(Timing { rel: TimeRel::Ge, bound: 0 });
        let c = timing.bound;
        let le = match timing.rel {
            TimeRel::Le => true,
            TimeRel::Ge => false,
            TimeRel::Eq => return Err(GameError::Punctual),
        };
        let test = |negate| if le { ValueTest::AtMost { c, negate } } else { ValueTest::AtLeast { c, negate } };
        let late = |(b0, b1): (StateSet, StateSet)| self.late_rules(&b0, &b1);
        let (rules, trans, succ, test) = match (cmp, bound.is_zero(), bound.is_one()) {
            (ProbCmp::Ge, true, _) | (ProbCmp::Le, _, true) => (vec![], Opt::Min, Opt::Min, ValueTest::Always(true)),
            (ProbCmp::Lt, true, _) | (ProbCmp::Gt, _, true) => (vec![], Opt::Min, Opt::Min, ValueTest::Always(false)),
            (ProbCmp::Gt, true, _) if le => (self.reach_rules(s1, s2), Opt::Max, Opt::Min, test(false)),
            (ProbCmp::Gt, true, _) => (late(self.gamma_sets(s1, s2)), Opt::Min, Opt::Max, test(false)),
            (ProbCmp::Lt, _, true) if le => (self.reach_rules(s1, s2), Opt::Min, Opt::Max, test(true)),
            (ProbCmp::Lt, _, true) => (late(self.delta_sets(s1, s2)), Opt::Max, Opt::Min, test(true)),
            (ProbCmp::Le, true, _) if le => (self.reach_rules(s1, s2), Opt::Min, Opt::Min, test(true)),
            (ProbCmp::Le, true, _) => (late(self.exists_sets(s1, s2)), Opt::Max, Opt::Max, test(true)),
            (ProbCmp::Ge, _, true) if le => (self.reach_rules(s1, s2), Opt::Max, Opt::Max, test(false)),
            (ProbCmp::Ge, _, true) => (late(self.sure_sets(s1, s2)), Opt::Min, Opt::Min, test(false)),
            _ => return Err(GameError::WrongClass(format!("P{}{}", cmp.symbol(), bound))),
        };
        let rules = if rules.is_empty() { vec![Rule::Fixed(GameValue::NegInf); self.len()] } else { rules };
        Ok(Plan { rules, trans, succ, test })
    }

    pub fn solve(&self, plan: &Plan<D>, rounds: Option<usize>) -> Vec<GameValue<D>> {
        self.iterate(&plan.rules, plan.trans, plan.succ, rounds)
    }

    /// States satisfying `P cmp bound (S1 U~c S2)` for a 0/1 threshold.
    pub fn timed_until(
        &self,
        s1: &StateSet,
        s2: &StateSet,
        cmp: ProbCmp,
        bound: &Rat,
        timing: Timing,
    ) -> Result<StateSet, GameError> {
        let plan = self.plan(s1, s2, cmp, bound, Some(timing))?;
        let vals = self.solve(&plan, None);
        Ok(StateSet::from_fn(self.len(), |s| plan.test.holds(&vals[s])))
    }

    /// `E` or `A` of `S1 U~c S2` with probabilistic branching read as choice.
    ///
    /// The universal `>=` case decides `A(S1 U>=c P>=1(S1 U S2))`.
    pub fn tctl_until(
        &self,
        s1: &StateSet,
        s2: &StateSet,
        quant: Quant,
        timing: Timing,
    ) -> Result<StateSet, GameError> {
        match quant {
            Quant::Exists => Ok(self.timed_until(s1, s2, ProbCmp::Le, &Rat::zero(), timing)?.complement()),
            Quant::All => self.timed_until(s1, s2, ProbCmp::Ge, &Rat::one(), timing),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Exists,
    All,
}

fn tmdp_game(tmdp: &DiscreteTmdp) -> Result<DurationGame<u64>, GameError> {
    DurationGame::from_tmdp(tmdp)
}

pub fn compute_alpha(tmdp: &DiscreteTmdp, s1: &StateSet, s2: &StateSet) -> Result<Vec<GameValue>, GameError> {
    Ok(tmdp_game(tmdp)?.values(GameKind::Alpha, s1, s2, None))
}

pub fn compute_beta(tmdp: &DiscreteTmdp, s1: &StateSet, s2: &StateSet) -> Result<Vec<GameValue>, GameError> {
    Ok(tmdp_game(tmdp)?.values(GameKind::Beta, s1, s2, None))
}

pub fn compute_gamma(tmdp: &DiscreteTmdp, s1: &StateSet, s2: &StateSet) -> Result<Vec<GameValue>, GameError> {
    Ok(tmdp_game(tmdp)?.values(GameKind::Gamma, s1, s2, None))
}

pub fn compute_delta(tmdp: &DiscreteTmdp, s1: &StateSet, s2: &StateSet) -> Result<Vec<GameValue>, GameError> {
    Ok(tmdp_game(tmdp)?.values(GameKind::Delta, s1, s2, None))
}

/// The `n`-th iterate of a game value, from the textbook initialisation.
pub fn game_iterates(
    tmdp: &DiscreteTmdp,
    kind: GameKind,
    s1: &StateSet,
    s2: &StateSet,
    n: usize,
) -> Result<Vec<GameValue>, GameError> {
    Ok(tmdp_game(tmdp)?.values(kind, s1, s2, Some(n)))
}

pub fn tctl_until(
    tmdp: &DiscreteTmdp,
    s1: &StateSet,
    s2: &StateSet,
    quant: Quant,
    timing: Timing,
) -> Result<StateSet, GameError> {
    tmdp_game(tmdp)?.tctl_until(s1, s2, quant, timing)
}

/// Satisfaction sets of every subformula that was checked.
#[derive(Clone, Debug, Default)]
pub struct TmdpSatMap {
    pub entries: HashMap<Formula, StateSet>,
}

impl TmdpSatMap {
    pub fn get(&self, f: &Formula) -> Option<&StateSet> {
        self.entries.get(f)
    }
}

/// Timed operators must have threshold 0 or 1 and a `<=` or `>=` bound.
pub fn check_ptctl01_class(f: &Formula) -> Result<(), GameError> {
    if let Formula::Prob { bound, timing: Some(t), .. } = f {
        if t.rel == TimeRel::Eq {
            return Err(GameError::WrongClass(f.to_string()));
        }
        if !(bound.is_zero() || bound.is_one()) {
            return Err(GameError::WrongClass(f.to_string()));
        }
    }
    f.children().into_iter().try_for_each(check_ptctl01_class)
}

pub fn check_ptctl01_noneq(tmdp: &DiscreteTmdp, f: &Formula) -> Result<TmdpSatMap, GameError> {
    check_ptctl01_class(f)?;
    let game = tmdp_game(tmdp)?;
    let mut map = TmdpSatMap::default();
    label(&game, f, &mut map)?;
    Ok(map)
}

fn label(game: &DurationGame<u64>, f: &Formula, map: &mut TmdpSatMap) -> Result<StateSet, GameError> {
    if let Some(s) = map.get(f) {
        return Ok(s.clone());
    }
    let n = game.len();
    let set = match f {
        Formula::True => StateSet::full(n),
        Formula::Atom(a) => StateSet::from_fn(n, |s| game.mdp.labels[s].contains(a)),
        Formula::Not(g) => label(game, g, map)?.complement(),
        Formula::And(a, b) => label(game, a, map)?.intersect(&label(game, b, map)?),
        Formula::Prob { cmp, bound, left, right, timing } => {
            let s1 = label(game, left, map)?;
            let s2 = label(game, right, map)?;
            match timing {
                None => until_sat(&game.mdp, &s1, &s2, *cmp, bound),
                Some(t) => game.timed_until(&s1, &s2, *cmp, bound, *t)?,
            }
        }
    };
    map.entries.insert(f.clone(), set.clone());
    Ok(set)
}

/// Whether some adversary hits `target` at exactly time `c` with probability 1.
pub fn punctual_reach_as1(tmdp: &DiscreteTmdp, c: u64, target: &StateSet) -> Result<bool, GameError> {
    if let Some(e) = tmdp.validate().into_iter().next() {
        return Err(GameError::Invalid(e));
    }
    for (s, ts) in tmdp.transitions.iter().enumerate() {
        if ts.iter().any(|t| t.duration == 0) {
            return Err(GameError::ZeroDuration(tmdp.names[s].clone()));
        }
    }
    let n = tmdp.len();
    // win[r][s]: from s, exactly r time units remain
    let mut win: Vec<Vec<bool>> = Vec::with_capacity(c as usize + 1);
    win.push((0..n).map(|s| target.contains(s)).collect());
    for r in 1..=c {
        let row = (0..n)
            .map(|s| {
                tmdp.transitions[s]
                    .iter()
                    .any(|t| t.duration <= r && t.dist.support().all(|&u| win[(r - t.duration) as usize][u]))
            })
            .collect();
        win.push(row);
    }
    Ok(win[c as usize][tmdp.initial])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_formula, parse_tmdp};

    fn set(n: usize, xs: &[usize]) -> StateSet {
        StateSet::from_fn(n, |s| xs.contains(&s))
    }

    // s has (d=2, {t1:1/2, t2:1/2}) and (d=5, {t1:1}); t1 in S2, t2 outside S1 and S2
    const THREE: &str = "tmdp {
        state s init; state t1 labels \"goal\"; state t2;
        trans s -> 2 { t1: 1/2, t2: 1/2 };
        trans s -> 5 { t1: 1/1 };
        trans t1 -> 1 { t1: 1/1 };
        trans t2 -> 1 { t2: 1/1 };
    }";

    #[test]
    fn alpha_and_beta_on_three_states() {
        let t = parse_tmdp(THREE).unwrap();
        let (s1, s2) = (set(3, &[0]), set(3, &[1]));
        let a = compute_alpha(&t, &s1, &s2).unwrap();
        assert_eq!(a, vec![GameValue::Fin(5), GameValue::Fin(0), GameValue::PosInf]);
        let b = compute_beta(&t, &s1, &s2).unwrap();
        assert_eq!(b[0], GameValue::Fin(5));
    }

    #[test]
    fn beta_takes_the_shorter_dirac() {
        let t = parse_tmdp(
            "tmdp { state s init; state g labels \"goal\";
               trans s -> 2 { g: 1/1 }; trans s -> 7 { g: 1/1 }; trans g -> 1 { g: 1/1 }; }",
        )
        .unwrap();
        let b = compute_beta(&t, &set(2, &[0]), &set(2, &[1])).unwrap();
        assert_eq!(b[0], GameValue::Fin(2));
    }

    #[test]
    fn gamma_cases() {
        // s in S1 \ S2 -4-> t in S2 \ S1, t only leads outside S2
        let t = parse_tmdp(
            "tmdp { state s init; state t; state u;
               trans s -> 4 { t: 1/1 }; trans t -> 1 { u: 1/1 }; trans u -> 1 { u: 1/1 }; }",
        )
        .unwrap();
        let g = compute_gamma(&t, &set(3, &[0]), &set(3, &[1])).unwrap();
        assert_eq!(g, vec![GameValue::Fin(4), GameValue::Fin(0), GameValue::NegInf]);
        let d = compute_delta(&t, &set(3, &[0]), &set(3, &[1])).unwrap();
        assert_eq!(d, vec![GameValue::Fin(4), GameValue::Fin(0), GameValue::NegInf]);
        // a state in S1 and S2 with a unit self-loop keeps the witness forever
        let loop1 = parse_tmdp("tmdp { state s init; trans s -> 1 { s: 1/1 }; }").unwrap();
        let g = compute_gamma(&loop1, &set(1, &[0]), &set(1, &[0])).unwrap();
        assert_eq!(g, vec![GameValue::PosInf]);
    }

    #[test]
    fn delta_first_two_rules() {
        // s -1-> {g:1/2, bad:1/2}: P<1(true U goal) holds at s, so delta is -inf
        let t = parse_tmdp(
            "tmdp { state s init; state g labels \"goal\"; state bad;
               trans s -> 1 { g: 1/2, bad: 1/2 }; trans g -> 1 { bad: 1/1 }; trans bad -> 1 { bad: 1/1 }; }",
        )
        .unwrap();
        let (s1, s2) = (StateSet::full(3), set(3, &[1]));
        let d = compute_delta(&t, &s1, &s2).unwrap();
        assert_eq!(d[0], GameValue::NegInf);
        assert_eq!(d[1], GameValue::Fin(0));
    }

    #[test]
    fn tctl_examples() {
        let t = parse_tmdp(
            "tmdp { state s init; state t labels \"goal\"; state u;
               trans s -> 3 { t: 1/1 }; trans t -> 1 { u: 1/1 }; trans u -> 1 { u: 1/1 }; }",
        )
        .unwrap();
        let (all, goal) = (StateSet::full(3), set(3, &[1]));
        let le = |c| Timing { rel: TimeRel::Le, bound: c };
        let ge = |c| Timing { rel: TimeRel::Ge, bound: c };
        assert!(tctl_until(&t, &all, &goal, Quant::Exists, le(0)).unwrap().contains(1));
        assert!(!tctl_until(&t, &all, &goal, Quant::Exists, ge(4)).unwrap().contains(0));
        assert!(tctl_until(&t, &all, &goal, Quant::Exists, ge(3)).unwrap().contains(0));
        assert!(!tctl_until(&t, &all, &goal, Quant::All, le(2)).unwrap().contains(0));
        assert!(tctl_until(&t, &all, &goal, Quant::All, le(3)).unwrap().contains(0));
        let punctual = Timing { rel: TimeRel::Eq, bound: 3 };
        assert_eq!(tctl_until(&t, &all, &goal, Quant::All, punctual), Err(GameError::Punctual));
    }

    #[test]
    fn threshold_equivalences_on_a_chain() {
        // a goal state reached after exactly 5 time units along every path
        let t = parse_tmdp(
            "tmdp { state s init; state a labels \"a\"; state z;
               trans s -> 5 { a: 1/1 }; trans a -> 1 { z: 1/1 }; trans z -> 1 { z: 1/1 }; }",
        )
        .unwrap();
        let holds = |f: &str| {
            let f = parse_formula(f).unwrap();
            check_ptctl01_noneq(&t, &f).unwrap().get(&f).unwrap().contains(0)
        };
        assert!(holds("P{>0}[ true U[<=5] \"a\" ]"));
        assert!(!holds("P{<1}[ true U[<=5] \"a\" ]"));
        assert!(holds("P{<1}[ true U[<=4] \"a\" ]"));
        assert!(!holds("P{>0}[ true U[>=6] \"a\" ]"));
        assert!(holds("P{>0}[ true U[>=5] \"a\" ]"));
        assert!(holds("P{>=1}[ F[<=5] \"a\" ]"));
        assert!(holds("P{<=0}[ F[>=6] \"a\" ]"));
    }

    #[test]
    fn wrong_class_is_rejected() {
        let t = parse_tmdp("tmdp { state s init; trans s -> 1 { s: 1/1 }; }").unwrap();
        for f in ["P{>=0.5}[ F[<=2] \"a\" ]", "P{>0}[ F[=2] \"a\" ]"] {
            let f = parse_formula(f).unwrap();
            assert!(matches!(check_ptctl01_noneq(&t, &f), Err(GameError::WrongClass(_))));
        }
    }

    #[test]
    fn zeno_is_rejected() {
        let t = parse_tmdp("tmdp { state s init; trans s -> 0 { s: 1/1 }; }").unwrap();
        assert_eq!(compute_alpha(&t, &StateSet::full(1), &StateSet::empty(1)), Err(GameError::Zeno));
    }

    #[test]
    fn punctual_examples() {
        let t = parse_tmdp("tmdp { state s init; trans s -> 1 { s: 1/1 }; }").unwrap();
        for c in 0..6 {
            assert!(punctual_reach_as1(&t, c, &StateSet::full(1)).unwrap());
        }
        let t = parse_tmdp("tmdp { state s init labels \"a\"; trans s -> 2 { s: 1/1 }; }").unwrap();
        assert!(!punctual_reach_as1(&t, 3, &StateSet::full(1)).unwrap());
        assert!(punctual_reach_as1(&t, 4, &StateSet::full(1)).unwrap());
    }
}
