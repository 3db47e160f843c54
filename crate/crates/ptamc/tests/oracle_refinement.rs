mod common;

use common::*;
use ptamc::dsl::{Formula, ProbCmp, TimeRel, Timing};
use ptamc::model::{Atom, ClockConstraint, Distribution, Edge, LocId, Location, Pta};
use ptamc::oracle::{OracleConfig, RegionOracle};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Full PTCTL: any threshold, any of `<=`, `>=`, `=`.
fn random_ptctl(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::atom(["a", "b"][rng.gen_range(0..2)]);
    }
    match rng.gen_range(0..4) {
        0 => Formula::not(random_ptctl(rng, depth - 1)),
        1 => Formula::and(random_ptctl(rng, depth - 1), random_ptctl(rng, depth - 1)),
        _ => {
            let cmp = [ProbCmp::Lt, ProbCmp::Le, ProbCmp::Ge, ProbCmp::Gt][rng.gen_range(0..4)];
            let bound = [r(0, 1), r(1, 1), r(1, 2), r(1, 3)][rng.gen_range(0..4)].clone();
            let rel = [TimeRel::Le, TimeRel::Ge, TimeRel::Eq][rng.gen_range(0..3)];
            let timing = rng.gen_bool(0.8).then(|| Timing { rel, bound: rng.gen_range(0..=4) });
            let left = if rng.gen_bool(0.5) { Formula::True } else { random_ptctl(rng, depth - 1) };
            Formula::until(cmp, bound, left, random_ptctl(rng, depth - 1), timing)
        }
    }
}

fn double(g: &ClockConstraint) -> ClockConstraint {
    ClockConstraint::from_atoms(g.atoms().iter().map(|a| Atom::new(a.clock, a.cmp, 2 * a.bound)))
}

/// Same automaton on a grid twice as fine: every constant doubled.
fn double_pta(pta: &Pta) -> Pta {
    Pta {
        clocks: pta.clocks.clone(),
        initial: pta.initial,
        locations: pta
            .locations
            .iter()
            .map(|l| Location { name: l.name.clone(), invariant: double(&l.invariant), labels: l.labels.clone() })
            .collect(),
        edges: pta
            .edges
            .iter()
            .map(|e| Edge {
                source: e.source,
                guard: double(&e.guard),
                dist: Distribution::from_entries(e.dist.entries().to_vec()),
            })
            .collect(),
    }
}

fn double_formula(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(double_formula(g)),
        Formula::And(a, b) => Formula::and(double_formula(a), double_formula(b)),
        Formula::Prob { cmp, bound, left, right, timing } => Formula::until(
            *cmp,
            bound.clone(),
            double_formula(left),
            double_formula(right),
            timing.map(|t| Timing { rel: t.rel, bound: 2 * t.bound }),
        ),
    }
}

#[test]
fn answers_survive_spurious_boundaries() {
    let mut rng = rng(31);
    let cases: Vec<(Pta, Vec<Formula>)> =
        (0..20).map(|_| (valid_pta_1c(&mut rng, 3, 4), (0..3).map(|_| random_ptctl(&mut rng, 2)).collect())).collect();
    let counts: Vec<(usize, usize)> = cases
        .par_iter()
        .enumerate()
        .map(|(case, (pta, fs))| {
            let plain = RegionOracle::new(pta, &OracleConfig::default()).unwrap();
            let padded = RegionOracle::new(pta, &OracleConfig { refine: 5, ..Default::default() }).unwrap();
            let fine_pta = double_pta(pta);
            let fine = RegionOracle::new(&fine_pta, &OracleConfig::default()).unwrap();
            let (mut yes, mut no) = (0, 0);
            for f in fs {
                let f2 = double_formula(f);
                for l in 0..pta.locations.len() {
                    for h in 0..=10 {
                        let v = [r(h, 2)];
                        if !pta.invariant(LocId(l)).eval(&v) {
                            continue;
                        }
                        let want = plain.check_at(f, LocId(l), &v).unwrap();
                        let got = padded.check_at(f, LocId(l), &v).unwrap();
                        assert_eq!(got, want, "case {}: {} at l{} x={}", case, f, l, v[0]);
                        let got = fine.check_at(&f2, LocId(l), &[r(h, 1)]).unwrap();
                        assert_eq!(got, want, "case {}: {} doubled at l{} x={}", case, f, l, v[0]);
                        if want {
                            yes += 1;
                        } else {
                            no += 1;
                        }
                    }
                }
            }
            (yes, no)
        })
        .collect();
    let (yes, no) = counts.iter().fold((0, 0), |(a, b), (y, n)| (a + y, b + n));
    assert!(yes > 20 && no > 20, "degenerate split {}/{}", yes, no);
}
