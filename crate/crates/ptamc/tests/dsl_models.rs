mod common;

use common::*;
use ptamc::dsl::export::{game_to_dsl, pta_to_dot, pta_to_json, tmdp_to_dot, tmdp_to_dsl};
use ptamc::dsl::{
    parse_formula, parse_game, parse_model, parse_pta, parse_tmdp, DslError, Formula, FormulaClass, Model, TimeRel,
    Timing,
};
use ptamc::oracle::{oracle_check_ptctl, OracleConfig};
use rand::Rng;

const RETRY: &str = include_str!("../../../models/retry.ppta");

#[test]
fn retry_shape() {
    let pta = parse_pta(RETRY).unwrap();
    assert_eq!(pta.locations.len(), 3);
    assert_eq!(pta.clocks.len(), 1);
    assert_eq!(pta.edges.len(), 4);
    let wait = pta.location_id("wait").unwrap();
    assert_eq!(pta.edges_from(wait).count(), 2);
    assert!(pta.edges_from(wait).all(|(_, e)| e.dist.entries().len() == 2));
    pta.check_one_clock().unwrap();
}

#[test]
fn retry_dot_has_a_node_per_location_and_distribution() {
    let dot = pta_to_dot(&parse_pta(RETRY).unwrap());
    assert_eq!(dot.matches("circle,").count(), 3);
    assert_eq!(dot.matches("shape=point").count(), 4);
    assert_eq!(dot, pta_to_dot(&parse_pta(RETRY).unwrap()));
    assert_eq!(pta_to_json(&parse_pta(RETRY).unwrap())["schema"], "ptamc/1");
}

#[test]
fn one_state_tmdp() {
    let t = parse_tmdp("tmdp { state s init; trans s -> 1 { s: 1/1 }; }").unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t.transitions[0].len(), 1);
    assert_eq!(t.transitions[0][0].duration, 1);
    let dot = tmdp_to_dot(&t);
    assert_eq!(dot.matches("label=\"d=1\"").count(), 1);
    assert!(dot.contains("s0 -> s0"));
}

#[test]
fn bad_mass_is_reported() {
    let text = RETRY
        .replace("0.8 -> reset {x} goto init;", "8/10 -> reset {x} goto init;")
        .replace("0.2 -> goto error;", "3/10 -> goto error;");
    let err = parse_model(&text).unwrap_err();
    assert!(err.to_string().contains("distribution mass ≠ 1"), "{}", err);
}

#[test]
fn syntax_errors_carry_a_position() {
    match parse_model("pta p {\n  clocks x;\n}") {
        Err(DslError::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("{:?}", other),
    }
}

#[test]
fn formula_examples() {
    let f = parse_formula("P{>0}[ F[<=9] \"error\" ]").unwrap();
    match &f {
        Formula::Prob { left, right, timing, .. } => {
            assert_eq!(**left, Formula::True);
            assert_eq!(**right, Formula::atom("error"));
            assert_eq!(*timing, Some(Timing { rel: TimeRel::Le, bound: 9 }));
        }
        _ => panic!("{}", f),
    }
    assert_eq!(f.classify(), FormulaClass::Ptctl01NonPunctual);
    match parse_formula("P{>=0.99}[ F \"response\" ]").unwrap() {
        Formula::Prob { bound, timing: None, .. } => assert_eq!(bound, r(99, 100)),
        g => panic!("{}", g),
    }
    assert!(matches!(parse_formula("P{<=1.5}[ F a ]"), Err(DslError::Threshold(_))));
    assert_eq!(parse_formula("P{<1}[ F[=4] \"a\" ]").unwrap().classify(), FormulaClass::Ptctl01);
    // quantitative but not punctual: the least class is the non-punctual one
    assert_eq!(parse_formula("P{>=0.1}[ F[<=6] \"error\" ]").unwrap().classify(), FormulaClass::PtctlNonPunctual);
    assert_eq!(parse_formula("P{>=0.1}[ F[=6] \"error\" ]").unwrap().classify(), FormulaClass::Ptctl);
}

#[test]
fn models_round_trip() {
    let mut rng = rng(81);
    for _ in 0..100 {
        let g = random_game(&mut rng, 5, 6);
        assert_eq!(parse_game(&game_to_dsl(&g)).unwrap(), g);
        let t = ptamc::countdown::game_to_tmdp(&g, 0, rng.gen_range(0..10)).unwrap();
        assert_eq!(parse_tmdp(&tmdp_to_dsl(&t)).unwrap(), t);
    }
    assert!(matches!(parse_model(RETRY).unwrap(), Model::Pta(_)));
}

/// `(timed, punctual, quantitative-and-timed)` flags; a class is below another
/// when its flags are.
fn features(c: FormulaClass) -> [bool; 3] {
    match c {
        FormulaClass::Pctl => [false, false, false],
        FormulaClass::Ptctl01NonPunctual => [true, false, false],
        FormulaClass::Ptctl01 => [true, true, false],
        FormulaClass::PtctlNonPunctual => [true, false, true],
        FormulaClass::Ptctl => [true, true, true],
    }
}

fn strictly_below(a: FormulaClass, b: FormulaClass) -> bool {
    let (x, y) = (features(a), features(b));
    a != b && x.iter().zip(&y).all(|(p, q)| !p || *q)
}

fn rewrite(f: &Formula, op: &dyn Fn(&mut Formula)) -> Formula {
    let mut g = match f {
        Formula::Not(a) => Formula::not(rewrite(a, op)),
        Formula::And(a, b) => Formula::and(rewrite(a, op), rewrite(b, op)),
        Formula::Prob { cmp, bound, left, right, timing } => {
            Formula::until(*cmp, bound.clone(), rewrite(left, op), rewrite(right, op), *timing)
        }
        other => other.clone(),
    };
    op(&mut g);
    g
}

#[test]
fn classification_is_monotone() {
    let mut rng = rng(83);
    let punctual = |g: &mut Formula| {
        if let Formula::Prob { timing: Some(t), .. } = g {
            t.rel = TimeRel::Eq;
        }
    };
    let quantitative = |g: &mut Formula| {
        if let Formula::Prob { bound, .. } = g {
            *bound = r(1, 2);
        }
    };
    for _ in 0..300 {
        let f = random_ptctl01(&mut rng, 3, 6);
        for g in [rewrite(&f, &punctual), rewrite(&f, &quantitative)] {
            assert!(!strictly_below(g.classify(), f.classify()), "{} -> {}", f, g);
        }
    }
}

#[test]
fn always_is_the_mirrored_eventually() {
    for (g, f) in [
        ("P{>=1}[ G[<=3] \"a\" ]", "P{<=0}[ F[<=3] !\"a\" ]"),
        ("P{>0}[ G[>=2] \"a\" ]", "P{<1}[ F[>=2] !\"a\" ]"),
        ("P{>=0.3}[ G \"a\" ]", "P{<=0.7}[ F !\"a\" ]"),
    ] {
        assert_eq!(parse_formula(g).unwrap(), parse_formula(f).unwrap());
    }
}

/// The negated form `!P{>1-z}[F !phi]` only asks for one good adversary, so
/// it follows from the universal reading and is strictly weaker.
#[test]
fn negated_dual_is_implied_but_weaker() {
    let mut rng = rng(89);
    let cfg = OracleConfig::default();
    let zero = [r(0, 1)];
    let (mut checked, mut strict) = (0, 0);
    for _ in 0..40 {
        let pta = valid_pta_1c(&mut rng, 3, 4);
        let phi = ["\"a\"", "!\"b\"", "\"a\" | \"b\""][rng.gen_range(0..3)];
        let c = rng.gen_range(0..=5);
        let pairs = [(">=", "1", ">", "0"), (">", "0", ">=", "1"), (">=", "0.5", ">", "0.5")];
        let (op, z, dual_op, dual_z) = pairs[rng.gen_range(0..3)];
        let rel = ["<=", ">="][rng.gen_range(0..2)];
        let g = parse_formula(&format!("P{{{}{}}}[ G[{}{}] {} ]", op, z, rel, c, phi)).unwrap();
        let dual = parse_formula(&format!("!P{{{}{}}}[ F[{}{}] !({}) ]", dual_op, dual_z, rel, c, phi)).unwrap();
        for l in 0..pta.locations.len() {
            let at = (ptamc::model::LocId(l), &zero[..]);
            if !pta.invariant(at.0).eval(&zero) {
                continue;
            }
            let a = oracle_check_ptctl(&pta, &g, at, &cfg).unwrap();
            let b = oracle_check_ptctl(&pta, &dual, at, &cfg).unwrap();
            assert!(!a || b, "{} holds but {} does not", g, dual);
            checked += 1;
            if b && !a {
                strict += 1;
            }
        }
    }
    assert!(strict > 0 && checked > 40, "{} strict of {}", strict, checked);
}
