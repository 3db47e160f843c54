use std::collections::HashMap;

use super::{Eps, GameTmdp, Position};
use crate::games::{Duration, GameValue, Opt, Plan, Rule, ValueTest};
use crate::model::{Interval, IntervalSet, LocId, Rat, SatMap};

/// A game value as a function of the clock inside one open segment.
///
/// Every move out of a segment interior either acts at once or waits until
/// just before the right end, so values are built from constants, `anchor - v`,
/// the value of another location at the same clock, and min/max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Profile {
    Const(GameValue<Eps>),
    Slope(Eps),
    Loc(LocId),
    Opt(Opt, Vec<Profile>),
}

/// Game values over all clock values: exact at the boundaries, profiles between.
#[derive(Clone, Debug)]
pub struct PiecewiseValue {
    pub bounds: Vec<u64>,
    /// `[location][i]`: value at `b_i`, `None` outside the invariant.
    pub points: Vec<Vec<Option<GameValue<Eps>>>>,
    /// `[location][i]`: profile on `(b_i;b_{i+1})`.
    pub segments: Vec<Vec<Option<Profile>>>,
}

/// A value with a rational standard part and an infinitesimal multiple.
pub type ExactValue = GameValue<(Rat, i64)>;

fn to_exact(v: &GameValue<Eps>) -> ExactValue {
    match v {
        GameValue::NegInf => GameValue::NegInf,
        GameValue::Fin(e) => GameValue::Fin((Rat::from_integer(e.k.into()), e.m)),
        GameValue::PosInf => GameValue::PosInf,
    }
}

fn pick<T: Ord>(opt: Opt, vals: impl Iterator<Item = T>) -> T {
    match opt {
        Opt::Min => vals.min(),
        Opt::Max => vals.max(),
    }
    .expect("non-empty option list")
}

fn segment_profile(g: &GameTmdp, plan: &Plan<Eps>, vals: &[GameValue<Eps>], i: usize, s: usize) -> Profile {
    match &plan.rules[s] {
        Rule::Fixed(v) => Profile::Const(v.clone()),
        Rule::Step if g.padded[s] => Profile::Const(vals[s].clone()),
        Rule::Step if g.game.unbounded[s] && plan.trans == Opt::Max => Profile::Const(GameValue::PosInf),
        Rule::Step => {
            let options = g.game.mdp.choices[s].iter().zip(&g.game.durations[s]).map(|(dist, d)| {
                if *d != Eps::zero() {
                    // the only timed move from b+ waits until just before the next boundary
                    let t = *dist.support().next().expect("non-empty support");
                    return match &vals[t] {
                        GameValue::Fin(x) => Profile::Slope(*x + Eps::new(g.bounds[i + 1] as i64, -1)),
                        other => Profile::Const(other.clone()),
                    };
                }
                let outcomes = dist
                    .support()
                    .map(|&t| match g.states.get(t) {
                        Some(st) if st.position == Position::After(i) => Profile::Loc(st.location),
                        _ => Profile::Const(vals[t].clone()),
                    })
                    .collect();
                Profile::Opt(plan.succ, outcomes)
            });
            Profile::Opt(plan.trans, options.collect())
        }
    }
}

/// Extends the values of the reduced game from its states to every clock value.
pub fn lift_values(g: &GameTmdp, plan: &Plan<Eps>, vals: &[GameValue<Eps>], locations: usize) -> PiecewiseValue {
    let nb = g.bounds.len();
    let points = (0..locations)
        .map(|l| (0..nb).map(|i| g.state(LocId(l), Position::Point(i)).map(|s| vals[s].clone())).collect())
        .collect();
    let segments = (0..locations)
        .map(|l| {
            (0..nb)
                .map(|i| g.state(LocId(l), Position::After(i)).map(|s| segment_profile(g, plan, vals, i, s)))
                .collect()
        })
        .collect();
    PiecewiseValue { bounds: g.bounds.clone(), points, segments }
}

impl PiecewiseValue {
    fn segment_of(&self, v: &Rat) -> Result<usize, usize> {
        let mut seg = 0;
        for (i, &b) in self.bounds.iter().enumerate() {
            let b = Rat::from_integer(b.into());
            if *v == b {
                return Err(i);
            }
            if *v > b {
                seg = i;
            }
        }
        Ok(seg)
    }

    /// The value at `(l, v)`, or `None` outside the invariant.
    pub fn eval(&self, l: LocId, v: &Rat) -> Option<ExactValue> {
        match self.segment_of(v) {
            Err(i) => self.points[l.0][i].as_ref().map(to_exact),
            Ok(i) => {
                let p = self.segments[l.0][i].as_ref()?;
                Some(self.eval_profile(p, i, v, &mut HashMap::new()))
            }
        }
    }

    fn eval_profile(&self, p: &Profile, i: usize, v: &Rat, memo: &mut HashMap<LocId, ExactValue>) -> ExactValue {
        match p {
            Profile::Const(c) => to_exact(c),
            Profile::Slope(a) => GameValue::Fin((Rat::from_integer(a.k.into()) - v, a.m)),
            Profile::Loc(l) => {
                if let Some(x) = memo.get(l) {
                    return x.clone();
                }
                let q = self.segments[l.0][i].as_ref().expect("successor lies in the invariant");
                let x = self.eval_profile(q, i, v, memo);
                memo.insert(*l, x.clone());
                x
            }
            Profile::Opt(o, ps) => {
                let xs: Vec<ExactValue> = ps.iter().map(|q| self.eval_profile(q, i, v, memo)).collect();
                pick(*o, xs.into_iter())
            }
        }
    }

    /// Clock values in segment `i` of `l` where the value is `<= c` (`le`) or `>= c`.
    fn region(&self, l: LocId, i: usize, le: bool, c: u64, memo: &mut HashMap<LocId, IntervalSet>) -> IntervalSet {
        if let Some(r) = memo.get(&l) {
            return r.clone();
        }
        let seg = Interval::open(self.bounds[i], self.bounds.get(i + 1).copied()).expect("boundaries increase");
        let p = self.segments[l.0][i].clone().expect("segment lies in the invariant");
        let r = self.profile_region(&p, &seg, i, le, c, memo);
        memo.insert(l, r.clone());
        r
    }

    fn profile_region(
        &self,
        p: &Profile,
        seg: &Interval,
        i: usize,
        le: bool,
        c: u64,
        memo: &mut HashMap<LocId, IntervalSet>,
    ) -> IntervalSet {
        let whole = IntervalSet::single(*seg);
        match p {
            Profile::Const(v) => {
                if (le && v.le_int(c)) || (!le && v.ge_int(c)) {
                    whole
                } else {
                    IntervalSet::empty()
                }
            }
            Profile::Slope(a) => {
                // anchor - v compared with c: the crossing is at v = k - c
                let t = a.k - c as i64;
                let part = match (le, t < 0) {
                    (true, true) => Some(Interval::all()),
                    (false, true) => None,
                    (true, false) => Interval::new(t as u64, a.m <= 0, None, false),
                    (false, false) => Interval::new(0, true, Some(t as u64), a.m >= 0),
                };
                part.map_or_else(IntervalSet::empty, |iv| whole.intersect_interval(&iv))
            }
            Profile::Loc(l) => self.region(*l, i, le, c, memo),
            Profile::Opt(o, ps) => {
                let parts = ps.iter().map(|q| self.profile_region(q, seg, i, le, c, memo));
                // {min <= c} and {max >= c} are unions, the other two intersections
                if (*o == Opt::Min) == le {
                    parts.fold(IntervalSet::empty(), |a, b| a.union(&b))
                } else {
                    parts.fold(whole.clone(), |a, b| a.intersect(&b))
                }
            }
        }
    }
}

/// Per-location sets of clock values whose value passes `test`.
pub fn threshold_to_satset(pw: &PiecewiseValue, test: ValueTest) -> SatMap {
    let sets = (0..pw.points.len())
        .map(|l| {
            let mut parts = Vec::new();
            for (i, v) in pw.points[l].iter().enumerate() {
                if v.as_ref().is_some_and(|v| test.holds(v)) {
                    parts.push(Interval::point(pw.bounds[i]));
                }
            }
            let mut set = IntervalSet::from_intervals(parts);
            for i in 0..pw.bounds.len() {
                if pw.segments[l][i].is_none() {
                    continue;
                }
                let seg = Interval::open(pw.bounds[i], pw.bounds.get(i + 1).copied()).expect("boundaries increase");
                let inside = match test {
                    ValueTest::Always(true) => IntervalSet::single(seg),
                    ValueTest::Always(false) => IntervalSet::empty(),
                    ValueTest::AtMost { c, negate } | ValueTest::AtLeast { c, negate } => {
                        let le = matches!(test, ValueTest::AtMost { .. });
                        let raw = pw.region(LocId(l), i, le, c, &mut HashMap::new());
                        if negate {
                            IntervalSet::single(seg).minus(&raw)
                        } else {
                            raw
                        }
                    }
                };
                set = set.union(&inside);
            }
            set
        })
        .collect();
    SatMap::new(sets)
}
