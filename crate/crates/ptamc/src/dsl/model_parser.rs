use std::collections::BTreeSet;

use super::formula::rational;
use super::lexer::{Cursor, Tok};
use super::DslError;
use crate::countdown::CountdownGame;
use crate::model::{
    Atom, ClockConstraint, ClockId, Cmp, DiscreteTmdp, Distribution, Edge, LocId, Location, Outcome, Pta, Rat,
    TmdpTransition,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Pta(Pta),
    Tmdp(DiscreteTmdp),
    Game(CountdownGame),
}

pub fn parse_model(text: &str) -> Result<Model, DslError> {
    let mut cur = Cursor::new(text)?;
    let model = if cur.is_kw("pta") {
        Model::Pta(pta(&mut cur)?)
    } else if cur.is_kw("tmdp") {
        Model::Tmdp(tmdp(&mut cur)?)
    } else if cur.is_kw("game") {
        Model::Game(game(&mut cur)?)
    } else {
        return Err(cur.error("expected `pta`, `tmdp` or `game`"));
    };
    if !cur.at_eof() {
        return Err(cur.error("trailing input after model"));
    }
    Ok(model)
}

pub fn parse_pta(text: &str) -> Result<Pta, DslError> {
    match parse_model(text)? {
        Model::Pta(p) => Ok(p),
        _ => Err(DslError::WrongKind("pta")),
    }
}

pub fn parse_tmdp(text: &str) -> Result<DiscreteTmdp, DslError> {
    match parse_model(text)? {
        Model::Tmdp(t) => Ok(t),
        _ => Err(DslError::WrongKind("tmdp")),
    }
}

pub fn parse_game(text: &str) -> Result<CountdownGame, DslError> {
    match parse_model(text)? {
        Model::Game(g) => Ok(g),
        _ => Err(DslError::WrongKind("game")),
    }
}

fn optional_name(cur: &mut Cursor) {
    if matches!(cur.peek(), Tok::Ident(_)) {
        cur.next();
    }
}

fn labels(cur: &mut Cursor) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    while let Tok::Str(s) = cur.peek().clone() {
        cur.next();
        out.insert(s);
    }
    out
}

struct RawEdge {
    source: String,
    guard: ClockConstraint,
    branches: Vec<(Rat, Vec<String>, String)>,
}

fn pta(cur: &mut Cursor) -> Result<Pta, DslError> {
    cur.expect_kw("pta")?;
    optional_name(cur);
    cur.expect_sym("{")?;
    let mut clocks: Vec<String> = Vec::new();
    let mut locations: Vec<Location> = Vec::new();
    let mut initial: Option<String> = None;
    let mut raw_edges: Vec<RawEdge> = Vec::new();
    let mut raw_invariants: Vec<Vec<(String, Cmp, u64)>> = Vec::new();
    let mut raw_guards: Vec<Vec<(String, Cmp, u64)>> = Vec::new();
    while !cur.eat_sym("}") {
        if cur.eat_kw("clocks") {
            cur.expect_sym(":")?;
            while let Tok::Ident(_) = cur.peek() {
                clocks.push(cur.ident()?);
                cur.eat_sym(",");
            }
            cur.expect_sym(";")?;
        } else if cur.eat_kw("initial") {
            cur.expect_sym(":")?;
            initial = Some(cur.ident()?);
            cur.expect_sym(";")?;
        } else if cur.eat_kw("location") {
            let name = cur.ident()?;
            cur.expect_sym("{")?;
            let mut inv = Vec::new();
            let mut labs = BTreeSet::new();
            while !cur.eat_sym("}") {
                if cur.eat_kw("inv") {
                    cur.expect_sym(":")?;
                    inv = constraint(cur)?;
                    cur.expect_sym(";")?;
                } else if cur.eat_kw("labels") {
                    cur.expect_sym(":")?;
                    labs = labels(cur);
                    cur.expect_sym(";")?;
                } else {
                    return Err(cur.error("expected `inv` or `labels`"));
                }
            }
            locations.push(Location { name, invariant: ClockConstraint::truth(), labels: labs });
            raw_invariants.push(inv);
        } else if cur.eat_kw("edge") {
            cur.expect_kw("from")?;
            let source = cur.ident()?;
            let guard_atoms = if cur.eat_kw("guard") { constraint(cur)? } else { Vec::new() };
            cur.expect_sym("{")?;
            let mut branches = Vec::new();
            while !cur.eat_sym("}") {
                let p = rational(cur)?;
                cur.expect_sym("->")?;
                let mut resets = Vec::new();
                if cur.eat_kw("reset") {
                    cur.expect_sym("{")?;
                    while !cur.eat_sym("}") {
                        resets.push(cur.ident()?);
                        cur.eat_sym(",");
                    }
                }
                cur.expect_kw("goto")?;
                let target = cur.ident()?;
                cur.expect_sym(";")?;
                branches.push((p, resets, target));
            }
            raw_guards.push(guard_atoms);
            raw_edges.push(RawEdge { source, guard: ClockConstraint::truth(), branches });
        } else {
            return Err(cur.error("expected `clocks`, `initial`, `location` or `edge`"));
        }
    }
    let resolve_clock = |name: &str| -> Result<ClockId, DslError> {
        clocks
            .iter()
            .position(|c| c == name)
            .map(ClockId)
            .ok_or_else(|| DslError::Invalid(vec![format!("unknown clock `{}`", name)]))
    };
    let to_constraint = |raw: &[(String, Cmp, u64)]| -> Result<ClockConstraint, DslError> {
        if raw.iter().any(|(c, _, _)| c == "false") {
            return Ok(ClockConstraint::falsity());
        }
        let atoms: Result<Vec<Atom>, DslError> = raw
            .iter()
            .filter(|(c, _, _)| c != "true")
            .map(|(c, cmp, b)| Ok(Atom::new(resolve_clock(c)?, *cmp, *b)))
            .collect();
        Ok(ClockConstraint::from_atoms(atoms?))
    };
    for (loc, raw) in locations.iter_mut().zip(&raw_invariants) {
        loc.invariant = to_constraint(raw)?;
    }
    let loc_id = |name: &str| -> Result<LocId, DslError> {
        locations
            .iter()
            .position(|l| l.name == name)
            .map(LocId)
            .ok_or_else(|| DslError::Invalid(vec![format!("unknown location `{}`", name)]))
    };
    let mut edges = Vec::new();
    for (raw, guard) in raw_edges.iter_mut().zip(&raw_guards) {
        raw.guard = to_constraint(guard)?;
        let mut entries = Vec::new();
        for (p, resets, target) in &raw.branches {
            let resets: Result<Vec<ClockId>, DslError> = resets.iter().map(|c| resolve_clock(c)).collect();
            entries.push((Outcome::new(resets?, loc_id(target)?), p.clone()));
        }
        let source = loc_id(&raw.source)?;
        edges.push(Edge { source, guard: raw.guard.clone(), dist: Distribution::from_entries(entries) });
    }
    let initial = match initial {
        Some(name) => loc_id(&name)?,
        None => LocId(0),
    };
    let pta = Pta { clocks, locations, initial, edges };
    let diags = pta.validate();
    if !diags.is_empty() {
        return Err(DslError::Invalid(diags.iter().map(|d| d.to_string()).collect()));
    }
    Ok(pta)
}

/// `true`, `false`, or atoms such as `x < 3` and `x = 5` joined by `&&`.
fn constraint(cur: &mut Cursor) -> Result<Vec<(String, Cmp, u64)>, DslError> {
    let mut out = Vec::new();
    loop {
        if cur.eat_kw("true") {
            out.push(("true".to_string(), Cmp::Ge, 0));
        } else if cur.eat_kw("false") {
            out.push(("false".to_string(), Cmp::Ge, 0));
        } else {
            let clock = cur.ident()?;
            let op = cur.next();
            let bound = cur.natural()?;
            match op {
                Tok::Sym("<") => out.push((clock, Cmp::Lt, bound)),
                Tok::Sym("<=") => out.push((clock, Cmp::Le, bound)),
                Tok::Sym(">") => out.push((clock, Cmp::Gt, bound)),
                Tok::Sym(">=") => out.push((clock, Cmp::Ge, bound)),
                Tok::Sym("=") | Tok::Sym("==") => {
                    out.push((clock.clone(), Cmp::Ge, bound));
                    out.push((clock, Cmp::Le, bound));
                }
                _ => return Err(cur.error("expected clock comparison")),
            }
        }
        if !(cur.eat_sym("&&") || cur.eat_sym("&")) {
            return Ok(out);
        }
    }
}

fn tmdp(cur: &mut Cursor) -> Result<DiscreteTmdp, DslError> {
    cur.expect_kw("tmdp")?;
    optional_name(cur);
    cur.expect_sym("{")?;
    let mut names = Vec::new();
    let mut labs = Vec::new();
    let mut initial = None;
    let mut raw: Vec<(String, u64, Vec<(String, Rat)>)> = Vec::new();
    while !cur.eat_sym("}") {
        if cur.eat_kw("state") {
            let name = cur.ident()?;
            if cur.eat_kw("init") {
                initial = Some(names.len());
            }
            let l = if cur.eat_kw("labels") {
                cur.eat_sym(":");
                labels(cur)
            } else {
                BTreeSet::new()
            };
            cur.expect_sym(";")?;
            names.push(name);
            labs.push(l);
        } else if cur.eat_kw("trans") {
            let src = cur.ident()?;
            cur.expect_sym("->")?;
            let d = cur.natural()?;
            cur.expect_sym("{")?;
            let mut entries = Vec::new();
            while !cur.eat_sym("}") {
                let t = cur.ident()?;
                cur.expect_sym(":")?;
                entries.push((t, rational(cur)?));
                cur.eat_sym(",");
            }
            cur.expect_sym(";")?;
            raw.push((src, d, entries));
        } else {
            return Err(cur.error("expected `state` or `trans`"));
        }
    }
    let id = |n: &str| -> Result<usize, DslError> {
        names
            .iter()
            .position(|m| m == n)
            .ok_or_else(|| DslError::Invalid(vec![format!("unknown state `{}`", n)]))
    };
    let mut transitions = vec![Vec::new(); names.len()];
    for (src, d, entries) in raw {
        let entries: Result<Vec<(usize, Rat)>, DslError> =
            entries.into_iter().map(|(t, p)| Ok((id(&t)?, p))).collect();
        transitions[id(&src)?].push(TmdpTransition { duration: d, dist: Distribution::from_entries(entries?) });
    }
    let t = DiscreteTmdp { names, initial: initial.unwrap_or(0), transitions, labels: labs };
    let diags = t.validate();
    if !diags.is_empty() {
        return Err(DslError::Invalid(diags));
    }
    Ok(t)
}

fn game(cur: &mut Cursor) -> Result<CountdownGame, DslError> {
    cur.expect_kw("game")?;
    optional_name(cur);
    cur.expect_sym("{")?;
    let mut states: Vec<String> = Vec::new();
    let mut raw = Vec::new();
    while !cur.eat_sym("}") {
        if cur.eat_kw("states") {
            while let Tok::Ident(_) = cur.peek() {
                states.push(cur.ident()?);
                cur.eat_sym(",");
            }
            cur.expect_sym(";")?;
        } else if cur.eat_kw("trans") {
            let s = cur.ident()?;
            cur.expect_sym("-")?;
            let d = cur.natural()?;
            cur.expect_sym("->")?;
            let t = cur.ident()?;
            cur.expect_sym(";")?;
            raw.push((s, d, t));
        } else {
            return Err(cur.error("expected `states` or `trans`"));
        }
    }
    let id = |n: &str| -> Result<usize, DslError> {
        states
            .iter()
            .position(|m| m == n)
            .ok_or_else(|| DslError::Invalid(vec![format!("unknown state `{}`", n)]))
    };
    let mut transitions = Vec::new();
    for (s, d, t) in raw {
        if d == 0 {
            return Err(DslError::Invalid(vec![format!("transition from `{}` has duration 0", s)]));
        }
        transitions.push((id(&s)?, d, id(&t)?));
    }
    Ok(CountdownGame::new(states, transitions))
}
