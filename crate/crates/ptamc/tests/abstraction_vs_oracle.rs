mod common;

use common::*;
use ptamc::abstraction::check_pctl_1c;
use ptamc::oracle::{oracle_check_ptctl, OracleConfig};

#[test]
fn generator_yields_valid_automata() {
    let mut rng = rng(1);
    let mut ok = 0;
    for _ in 0..200 {
        if random_pta_1c(&mut rng, 4, 5).check_one_clock().is_ok() {
            ok += 1;
        }
    }
    assert!(ok > 100, "only {} of 200 accepted", ok);
}

#[test]
fn pctl_at_initial_state_matches_oracle() {
    let mut rng = rng(7);
    let zero = [r(0, 1)];
    for case in 0..200 {
        let pta = valid_pta_1c(&mut rng, 4, 5);
        let f = random_pctl(&mut rng, 3);
        let (_, fast) = check_pctl_1c(&pta, &f, Some((pta.initial, &zero[0]))).unwrap();
        let slow = oracle_check_ptctl(&pta, &f, (pta.initial, &zero), &OracleConfig::default()).unwrap();
        assert_eq!(fast, Some(slow), "case {}: {} on\n{}", case, f, ptamc::dsl::export::pta_to_dsl(&pta));
    }
}

#[test]
fn pctl_sat_sets_match_oracle_on_a_half_integer_grid() {
    use ptamc::model::LocId;
    use ptamc::oracle::RegionOracle;
    let mut rng = rng(11);
    let (mut yes, mut no) = (0, 0);
    for case in 0..100 {
        let pta = valid_pta_1c(&mut rng, 4, 5);
        let f = random_pctl(&mut rng, 3);
        let (sat, _) = check_pctl_1c(&pta, &f, None).unwrap();
        let oracle = RegionOracle::new(&pta, &OracleConfig::default()).unwrap();
        for l in 0..pta.locations.len() {
            for h in 0..=12 {
                let v = [r(h, 2)];
                if !pta.invariant(LocId(l)).eval(&v) {
                    continue;
                }
                let want = oracle.check_at(&f, LocId(l), &v).unwrap();
                if want {
                    yes += 1;
                } else {
                    no += 1;
                }
                assert_eq!(sat.get(LocId(l)).contains(&v[0]), want, "case {}: {} at l{} x={}", case, f, l, v[0]);
            }
        }
    }
    assert!(yes > 100 && no > 100, "degenerate split {}/{}", yes, no);
}
