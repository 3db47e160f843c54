//! PTCTL with 0/1 thresholds and `<=`/`>=` time bounds on one-clock PTAs.
//!
//! Each until is decided on a reduced timed MDP over the boundary points and
//! the ends of the open segments between them. Values found there are then
//! extended to the segment interiors and cut at the time bound.

mod eps;
mod lift;
mod reduced;

use std::collections::HashMap;

use num_traits::{One, Zero};

pub use eps::{Eps, ExtendedBound, Flag};
pub use lift::{lift_values, threshold_to_satset, ExactValue, PiecewiseValue, Profile};
pub use reduced::{build_boundaries, build_game_tmdp, EndpointState, GameTmdp, Position};

use crate::dsl::{Formula, FormulaClass, ProbCmp, TimeRel, Timing};
use crate::games::{GameError, GameValue, Opt, Rule, ValueTest};
use crate::model::{ClockId, IntervalSet, LocId, ModelError, Pta, Rat, SatMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Ptctl1cError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("formula is {0}; expected thresholds 0 or 1 and no punctual bounds")]
    WrongClass(FormulaClass),
}

/// Size of the probabilistic edge relation: one per edge branch.
pub fn prob_size(pta: &Pta) -> usize {
    pta.edges.iter().map(|e| e.dist.entries().len()).sum::<usize>().max(1)
}

/// The largest number of intervals `Sat[l,f]` may need in any location.
pub fn interval_bound(pta: &Pta, f: &Formula) -> usize {
    2 * f.size() * prob_size(pta)
}

fn in_class(f: &Formula) -> bool {
    let here = match f {
        Formula::Prob { bound, timing, .. } => {
            (bound.is_zero() || bound.is_one()) && timing.is_none_or(|t| t.rel != TimeRel::Eq)
        }
        _ => true,
    };
    here && f.children().into_iter().all(in_class)
}

/// Result of labelling: every subformula's sets, and the verdict if asked.
#[derive(Clone, Debug)]
pub struct Labelling {
    pub sat: HashMap<Formula, SatMap>,
    pub top: SatMap,
    pub verdict: Option<bool>,
}

pub fn check_ptctl01_noneq_1c(pta: &Pta, f: &Formula, at: Option<(LocId, &Rat)>) -> Result<Labelling, Ptctl1cError> {
    if !in_class(f) {
        return Err(Ptctl1cError::WrongClass(f.classify()));
    }
    pta.check_one_clock()?;
    let inv = SatMap::new(
        (0..pta.locations.len())
            .map(|l| pta.invariant(LocId(l)).project(ClockId(0)).map_or_else(IntervalSet::empty, IntervalSet::single))
            .collect(),
    );
    let mut sat = HashMap::new();
    let top = label(pta, &inv, f, &mut sat)?;
    let verdict = match at {
        Some((l, v)) => {
            if !inv.get(l).contains(v) {
                let location = pta.location(l).name.clone();
                return Err(ModelError::InvariantViolated { location, value: v.to_string() }.into());
            }
            Some(top.get(l).contains(v))
        }
        None => None,
    };
    Ok(Labelling { sat, top, verdict })
}

fn label(pta: &Pta, inv: &SatMap, f: &Formula, memo: &mut HashMap<Formula, SatMap>) -> Result<SatMap, Ptctl1cError> {
    if let Some(s) = memo.get(f) {
        return Ok(s.clone());
    }
    let per_loc = |g: &dyn Fn(usize, &IntervalSet) -> IntervalSet| {
        SatMap::new(inv.sets.iter().enumerate().map(|(l, i)| g(l, i)).collect())
    };
    let set = match f {
        Formula::True => inv.clone(),
        Formula::Atom(a) => {
            per_loc(&|l, i| if pta.labels(LocId(l)).contains(a) { i.clone() } else { IntervalSet::empty() })
        }
        Formula::Not(g) => {
            let s = label(pta, inv, g, memo)?;
            per_loc(&|l, i| i.minus(&s.sets[l]))
        }
        Formula::And(a, b) => {
            let (x, y) = (label(pta, inv, a, memo)?, label(pta, inv, b, memo)?);
            per_loc(&|l, _| x.sets[l].intersect(&y.sets[l]))
        }
        Formula::Prob { cmp, bound, left, right, timing } => {
            let s1 = label(pta, inv, left, memo)?;
            let s2 = label(pta, inv, right, memo)?;
            until_satmap(pta, inv, &s1, &s2, *cmp, bound, *timing)?
        }
    };
    debug_assert!(
        set.max_parts() <= interval_bound(pta, f),
        "{} needs {} intervals, over the bound {}",
        f,
        set.max_parts(),
        interval_bound(pta, f)
    );
    memo.insert(f.clone(), set.clone());
    Ok(set)
}

/// `Sat` of `P cmp bound (Φ1 U~c Φ2)` given `Sat[Φ1]` and `Sat[Φ2]`.
pub fn until_satmap(
    pta: &Pta,
    inv: &SatMap,
    sat1: &SatMap,
    sat2: &SatMap,
    cmp: ProbCmp,
    bound: &Rat,
    timing: Option<Timing>,
) -> Result<SatMap, Ptctl1cError> {
    let g = build_game_tmdp(pta, sat1, sat2, timing.map_or(0, |t| t.bound));
    let mut plan = g.game.plan(&g.s1, &g.s2, cmp, bound, timing)?;
    match plan.test {
        ValueTest::Always(true) => return Ok(inv.clone()),
        ValueTest::Always(false) => return Ok(SatMap::new(vec![IntervalSet::empty(); inv.sets.len()])),
        _ => {}
    }
    if plan.trans == Opt::Max && matches!(plan.test, ValueTest::AtLeast { .. }) {
        // waiting for ever where both operands hold keeps witnessing
        for s in 0..g.sink {
            if g.game.unbounded[s] && g.s1.contains(s) && g.s2.contains(s) {
                plan.rules[s] = Rule::Fixed(GameValue::PosInf);
            }
        }
    }
    let vals = g.game.solve(&plan, None);
    let pw = lift_values(&g, &plan, &vals, pta.locations.len());
    Ok(threshold_to_satset(&pw, plan.test))
}
