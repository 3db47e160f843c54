//! Qualitative and quantitative until analysis on finite MDPs.

mod linear;
mod stateset;

use num_traits::{One, Zero};

use crate::dsl::{Formula, FormulaClass, ProbCmp};
use crate::model::{Distribution, Rat, UntimedMdp};

pub use linear::solve_dense;
pub use stateset::StateSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MdpError {
    #[error("formula is {0}, expected PCTL")]
    NotPctl(FormulaClass),
    #[error("state {0} has no enabled choice")]
    Deadlock(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Max,
    Min,
}

/// Which `U^{>=1}` operator `qual_until_step1` decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step1Mode {
    /// `P>0(phi1 U^{>=1} phi2)`: positive under every adversary.
    ExistsPos,
    /// `P<1(phi1 U^{>=1} phi2)`: below one under every adversary.
    AllPosLt1,
}

fn predecessors(mdp: &UntimedMdp) -> Vec<Vec<usize>> {
    let mut pre = vec![Vec::new(); mdp.len()];
    for (s, cs) in mdp.choices.iter().enumerate() {
        for d in cs {
            for &t in d.support() {
                if !pre[t].contains(&s) {
                    pre[t].push(s);
                }
            }
        }
    }
    pre
}

/// `Pmax(S1 U S2) > 0`: backward reachability through S1 into S2.
pub fn qual_exists_until(mdp: &UntimedMdp, s1: &StateSet, s2: &StateSet) -> StateSet {
    let pre = predecessors(mdp);
    let mut out = s2.clone();
    let mut stack: Vec<usize> = s2.iter().collect();
    while let Some(t) = stack.pop() {
        for &s in &pre[t] {
            if !out.contains(s) && s1.contains(s) {
                out.insert(s);
                stack.push(s);
            }
        }
    }
    out
}

/// `Pmin(S1 U S2) > 0`: every adversary reaches S2 with positive probability.
pub fn qual_positive_until(mdp: &UntimedMdp, s1: &StateSet, s2: &StateSet) -> StateSet {
    let mut out = s2.clone();
    loop {
        let mut changed = false;
        for s in 0..mdp.len() {
            if out.contains(s) || !s1.contains(s) {
                continue;
            }
            if mdp.choices[s].iter().all(|d| d.support().any(|&t| out.contains(t))) {
                out.insert(s);
                changed = true;
            }
        }
        if !changed {
            return out;
        }
    }
}

/// `Pmax(S1 U S2) = 1`: some adversary reaches S2 almost surely.
pub fn qual_possible_almost_until(mdp: &UntimedMdp, s1: &StateSet, s2: &StateSet) -> StateSet {
    let mut z = StateSet::full(mdp.len());
    loop {
        let mut y = s2.clone();
        loop {
            let mut changed = false;
            for s in 0..mdp.len() {
                if y.contains(s) || !s1.contains(s) || !z.contains(s) {
                    continue;
                }
                let ok = mdp.choices[s]
                    .iter()
                    .any(|d| d.support().all(|&t| z.contains(t)) && d.support().any(|&t| y.contains(t)));
                if ok {
                    y.insert(s);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if y == z {
            return z;
        }
        z = y;
    }
}

/// `Pmin(S1 U S2) = 1`: every adversary reaches S2 almost surely.
pub fn qual_almost_until(mdp: &UntimedMdp, s1: &StateSet, s2: &StateSet) -> StateSet {
    let never = qual_positive_until(mdp, s1, s2).complement();
    let waiting = s1.minus(s2);
    qual_exists_until(mdp, &waiting, &never).complement()
}

/// One-step composition giving the `U^{>=1}` operators.
pub fn qual_until_step1(mdp: &UntimedMdp, s1: &StateSet, s2: &StateSet, mode: Step1Mode) -> StateSet {
    match mode {
        Step1Mode::ExistsPos => {
            let pos = qual_positive_until(mdp, s1, s2);
            StateSet::from_fn(mdp.len(), |s| {
                s1.contains(s) && mdp.choices[s].iter().all(|d| d.support().any(|&t| pos.contains(t)))
            })
        }
        Step1Mode::AllPosLt1 => {
            let one = qual_possible_almost_until(mdp, s1, s2);
            StateSet::from_fn(mdp.len(), |s| {
                !(s1.contains(s) && mdp.choices[s].iter().any(|d| d.support().all(|&t| one.contains(t))))
            })
        }
    }
}

/// Exact optimal probabilities of reaching `target`.
///
/// States with value 0 and 1 are found by graph analysis; the rest are solved by
/// policy iteration, each policy evaluated by exact elimination.
pub fn reach_prob(mdp: &UntimedMdp, target: &StateSet, objective: Objective) -> Vec<Rat> {
    let n = mdp.len();
    let all = StateSet::full(n);
    let (positive, one) = match objective {
        Objective::Max => (qual_exists_until(mdp, &all, target), qual_possible_almost_until(mdp, &all, target)),
        Objective::Min => (qual_positive_until(mdp, &all, target), qual_almost_until(mdp, &all, target)),
    };
    let mut value = vec![Rat::zero(); n];
    for s in one.iter() {
        value[s] = Rat::one();
    }
    let maybe: Vec<usize> = (0..n).filter(|&s| positive.contains(s) && !one.contains(s)).collect();
    if maybe.is_empty() {
        return value;
    }
    let mut index = vec![usize::MAX; n];
    for (i, &s) in maybe.iter().enumerate() {
        index[s] = i;
    }
    let mut policy: Vec<usize> = match objective {
        Objective::Min => maybe.iter().map(|_| 0).collect(),
        Objective::Max => proper_policy(mdp, &maybe, &one),
    };
    loop {
        let sol = evaluate(mdp, &maybe, &index, &policy, &one);
        for (i, &s) in maybe.iter().enumerate() {
            value[s] = sol[i].clone();
        }
        let mut changed = false;
        for (i, &s) in maybe.iter().enumerate() {
            let score = |d: &Distribution<usize>| -> Rat {
                d.entries().iter().fold(Rat::zero(), |acc, (t, p)| acc + p * &value[*t])
            };
            let mut best = score(&mdp.choices[s][policy[i]]);
            for (c, d) in mdp.choices[s].iter().enumerate() {
                let v = score(d);
                let better = match objective {
                    Objective::Max => v > best,
                    Objective::Min => v < best,
                };
                if better {
                    best = v;
                    policy[i] = c;
                    changed = true;
                }
            }
        }
        if !changed {
            return value;
        }
    }
}

/// Lowest-index choice that moves closer to the states known to reach the target.
fn proper_policy(mdp: &UntimedMdp, maybe: &[usize], one: &StateSet) -> Vec<usize> {
    let mut rank = vec![usize::MAX; mdp.len()];
    let mut policy = vec![usize::MAX; maybe.len()];
    for s in one.iter() {
        rank[s] = 0;
    }
    let mut level = 0;
    loop {
        level += 1;
        let mut newly = Vec::new();
        for (i, &s) in maybe.iter().enumerate() {
            if rank[s] != usize::MAX {
                continue;
            }
            if let Some(c) = mdp.choices[s].iter().position(|d| d.support().any(|&t| rank[t] < level)) {
                newly.push((s, i, c));
            }
        }
        if newly.is_empty() {
            break;
        }
        for (s, i, c) in newly {
            rank[s] = level;
            policy[i] = c;
        }
    }
    debug_assert!(maybe.iter().all(|&s| rank[s] != usize::MAX));
    policy.into_iter().map(|c| if c == usize::MAX { 0 } else { c }).collect()
}

fn evaluate(mdp: &UntimedMdp, maybe: &[usize], index: &[usize], policy: &[usize], one: &StateSet) -> Vec<Rat> {
    let m = maybe.len();
    let succ: Vec<Vec<usize>> = maybe
        .iter()
        .enumerate()
        .map(|(i, &s)| mdp.choices[s][policy[i]].support().map(|&t| index[t]).filter(|&j| j != usize::MAX).collect())
        .collect();
    let mut value: Vec<Option<Rat>> = vec![None; m];
    // Tarjan yields components sinks first, so successors outside a component are already solved.
    for comp in sccs(&succ) {
        let k = comp.len();
        let mut local = vec![usize::MAX; m];
        for (j, &i) in comp.iter().enumerate() {
            local[i] = j;
        }
        let mut a = vec![vec![Rat::zero(); k]; k];
        let mut b = vec![Rat::zero(); k];
        for (j, &i) in comp.iter().enumerate() {
            a[j][j] = Rat::one();
            for (t, p) in mdp.choices[maybe[i]][policy[i]].entries() {
                if one.contains(*t) {
                    b[j] += p;
                } else if index[*t] == usize::MAX {
                    continue;
                } else if local[index[*t]] != usize::MAX {
                    a[j][local[index[*t]]] -= p;
                } else {
                    b[j] += p * value[index[*t]].as_ref().expect("successor component solved");
                }
            }
        }
        let sol = solve_dense(a, b).expect("policy evaluation system is regular");
        for (j, &i) in comp.iter().enumerate() {
            value[i] = Some(sol[j].clone());
        }
    }
    value.into_iter().map(|v| v.expect("every state evaluated")).collect()
}

/// Strongly connected components in reverse topological order (iterative Tarjan).
fn sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            if *k < succ[v].len() {
                let w = succ[v][*k];
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// `S1 U S2` probabilities: states outside S1 \ S2 become absorbing.
pub fn until_prob(mdp: &UntimedMdp, s1: &StateSet, s2: &StateSet, objective: Objective) -> Vec<Rat> {
    let restricted = restrict_until(mdp, s1, s2);
    reach_prob(&restricted, s2, objective)
}

fn restrict_until(mdp: &UntimedMdp, s1: &StateSet, s2: &StateSet) -> UntimedMdp {
    let mut m = mdp.clone();
    for s in 0..m.len() {
        if !s1.contains(s) || s2.contains(s) {
            m.choices[s] = vec![Distribution::dirac(s)];
        }
    }
    m
}

/// Bottom-up PCTL labelling with universal quantification over adversaries.
pub fn check_pctl(mdp: &UntimedMdp, f: &Formula) -> Result<StateSet, MdpError> {
    let class = f.classify();
    if class != FormulaClass::Pctl {
        return Err(MdpError::NotPctl(class));
    }
    if let Some(s) = (0..mdp.len()).find(|&s| mdp.choices[s].is_empty()) {
        return Err(MdpError::Deadlock(s));
    }
    Ok(sat(mdp, f))
}

fn sat(mdp: &UntimedMdp, f: &Formula) -> StateSet {
    let n = mdp.len();
    match f {
        Formula::True => StateSet::full(n),
        Formula::Atom(a) => StateSet::from_fn(n, |s| mdp.labels[s].contains(a)),
        Formula::Not(g) => sat(mdp, g).complement(),
        Formula::And(a, b) => sat(mdp, a).intersect(&sat(mdp, b)),
        Formula::Prob { cmp, bound, left, right, .. } => until_sat(mdp, &sat(mdp, left), &sat(mdp, right), *cmp, bound),
    }
}

/// States satisfying `P cmp bound (S1 U S2)`; 0/1 thresholds use graph analysis only.
pub fn until_sat(mdp: &UntimedMdp, s1: &StateSet, s2: &StateSet, cmp: ProbCmp, bound: &Rat) -> StateSet {
    let n = mdp.len();
    match (cmp, bound.is_zero(), bound.is_one()) {
        (ProbCmp::Ge, true, _) | (ProbCmp::Le, _, true) => StateSet::full(n),
        (ProbCmp::Lt, true, _) | (ProbCmp::Gt, _, true) => StateSet::empty(n),
        (ProbCmp::Gt, true, _) => qual_positive_until(mdp, s1, s2),
        (ProbCmp::Ge, _, true) => qual_almost_until(mdp, s1, s2),
        (ProbCmp::Le, true, _) => qual_exists_until(mdp, s1, s2).complement(),
        (ProbCmp::Lt, _, true) => qual_possible_almost_until(mdp, s1, s2).complement(),
        _ => {
            let objective = if cmp.uses_min() { Objective::Min } else { Objective::Max };
            let probs = until_prob(mdp, s1, s2, objective);
            StateSet::from_fn(n, |s| cmp.holds(&probs[s], bound))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rat, LabelSet};

    pub(crate) fn mdp(choices: Vec<Vec<Vec<(usize, Rat)>>>, labels: Vec<&[&str]>) -> UntimedMdp {
        UntimedMdp {
            names: (0..choices.len()).map(|i| format!("s{}", i)).collect(),
            initial: 0,
            choices: choices.into_iter().map(|cs| cs.into_iter().map(Distribution::from_entries).collect()).collect(),
            labels: labels.into_iter().map(|ls| ls.iter().map(|s| s.to_string()).collect::<LabelSet>()).collect(),
        }
    }

    #[test]
    fn components_come_sinks_first() {
        let comps = sccs(&[vec![1], vec![0, 2], vec![]]);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], vec![2]);
    }

    fn choice_example() -> UntimedMdp {
        // s0 chooses between {t:1/2,u:1/2} and {t:9/10,u:1/10}; t = s1 target, u = s2 sink
        mdp(
            vec![
                vec![vec![(1, rat(1, 2)), (2, rat(1, 2))], vec![(1, rat(9, 10)), (2, rat(1, 10))]],
                vec![vec![(1, rat(1, 1))]],
                vec![vec![(2, rat(1, 1))]],
            ],
            vec![&[], &["t"], &[]],
        )
    }

    #[test]
    fn max_and_min_reachability() {
        let m = choice_example();
        let target = StateSet::from_fn(3, |s| s == 1);
        assert_eq!(reach_prob(&m, &target, Objective::Max)[0], rat(9, 10));
        assert_eq!(reach_prob(&m, &target, Objective::Min)[0], rat(1, 2));
    }

    #[test]
    fn single_distribution_half() {
        let m = mdp(
            vec![vec![vec![(1, rat(1, 2)), (2, rat(1, 2))]], vec![vec![(1, rat(1, 1))]], vec![vec![(2, rat(1, 1))]]],
            vec![&[], &[], &[]],
        );
        let target = StateSet::from_fn(3, |s| s == 1);
        assert_eq!(reach_prob(&m, &target, Objective::Max)[0], rat(1, 2));
        assert_eq!(reach_prob(&m, &target, Objective::Min)[0], rat(1, 2));
        let own = StateSet::from_fn(3, |s| s == 0);
        assert_eq!(reach_prob(&m, &own, Objective::Min)[0], rat(1, 1));
    }

    #[test]
    fn pctl_threshold_uses_min() {
        let m = choice_example();
        let f = crate::dsl::parse_formula("P{>=3/5}[ F \"t\" ]").unwrap();
        assert!(!check_pctl(&m, &f).unwrap().contains(0));
        let g = crate::dsl::parse_formula("P{>=1}[ F \"t\" ]").unwrap();
        assert!(check_pctl(&m, &g).unwrap().contains(1));
        let h = crate::dsl::parse_formula("P{<=0}[ F \"t\" ]").unwrap();
        assert!(!check_pctl(&m, &h).unwrap().contains(0));
    }

    #[test]
    fn qualitative_examples() {
        // s0 -> s1 (Dirac), s2 self-loop only
        let m = mdp(
            vec![vec![vec![(1, rat(1, 1))]], vec![vec![(1, rat(1, 1))]], vec![vec![(2, rat(1, 1))]]],
            vec![&[], &[], &[]],
        );
        let s1 = StateSet::from_fn(3, |s| s == 0);
        let s2 = StateSet::from_fn(3, |s| s == 1);
        let e = qual_exists_until(&m, &s1, &s2);
        assert!(e.contains(0) && e.contains(1) && !e.contains(2));
        let all = StateSet::full(3);
        assert_eq!(qual_exists_until(&m, &s1, &all), all);
        let a = qual_almost_until(&m, &all, &s2);
        assert!(a.contains(0) && !a.contains(2));
    }

    #[test]
    fn escape_to_sink_breaks_almost_sure() {
        // s0 may go to target s1 or to sink s2
        let m = mdp(
            vec![
                vec![vec![(1, rat(1, 1))], vec![(2, rat(1, 1))]],
                vec![vec![(1, rat(1, 1))]],
                vec![vec![(2, rat(1, 1))]],
            ],
            vec![&[], &[], &[]],
        );
        let all = StateSet::full(3);
        let s2 = StateSet::from_fn(3, |s| s == 1);
        assert!(!qual_almost_until(&m, &all, &s2).contains(0));
        assert!(qual_possible_almost_until(&m, &all, &s2).contains(0));
    }

    #[test]
    fn step_one_operators() {
        // s0 in phi2 only, no successor satisfying the until
        let m = mdp(
            vec![vec![vec![(1, rat(1, 1))]], vec![vec![(1, rat(1, 1))]], vec![vec![(0, rat(1, 1))]]],
            vec![&[], &[], &[]],
        );
        let s1 = StateSet::from_fn(3, |s| s == 2);
        let s2 = StateSet::from_fn(3, |s| s == 0);
        let pos = qual_until_step1(&m, &s1, &s2, Step1Mode::ExistsPos);
        assert!(!pos.contains(0));
        assert!(pos.contains(2));
        // s0 in phi1 and phi2, successor s1 satisfies P>=1(phi1 U phi2)
        let m2 = mdp(
            vec![vec![vec![(1, rat(1, 1))]], vec![vec![(1, rat(1, 1))]], vec![vec![(2, rat(1, 1))]]],
            vec![&[], &[], &[]],
        );
        let s1 = StateSet::from_fn(3, |s| s <= 1);
        let s2 = StateSet::from_fn(3, |s| s <= 1);
        assert!(!qual_until_step1(&m2, &s1, &s2, Step1Mode::AllPosLt1).contains(0));
    }
}
