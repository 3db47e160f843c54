use std::fmt::Write;

use num_traits::One;
use serde_json::{json, Map, Value};

use crate::countdown::CountdownGame;
use crate::model::{ClockConstraint, DiscreteTmdp, Pta, Rat, SatMap, UntimedMdp};

pub const SCHEMA: &str = "ptamc/1";

fn rat_text(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn quote_labels<'a>(labels: impl Iterator<Item = &'a String>) -> String {
    labels.map(|l| format!("\"{}\"", l)).collect::<Vec<_>>().join(" ")
}

fn constraint_text(c: &ClockConstraint, clocks: &[String]) -> String {
    c.display_with(clocks).to_string()
}

/// Serialises a PTA in the model language.
pub fn pta_to_dsl(pta: &Pta) -> String {
    let mut s = String::from("pta {\n");
    let _ = writeln!(s, "  clocks: {};", pta.clocks.join(" "));
    let _ = writeln!(s, "  initial: {};", pta.location(pta.initial).name);
    for l in &pta.locations {
        let _ = writeln!(
            s,
            "  location {} {{ inv: {}; labels: {}; }}",
            l.name,
            constraint_text(&l.invariant, &pta.clocks),
            quote_labels(l.labels.iter())
        );
    }
    for e in &pta.edges {
        let _ = writeln!(
            s,
            "  edge from {} guard {} {{",
            pta.location(e.source).name,
            constraint_text(&e.guard, &pta.clocks)
        );
        for (o, p) in e.dist.entries() {
            let reset = if o.resets.is_empty() {
                String::new()
            } else {
                let names: Vec<&str> = o.resets.iter().map(|c| pta.clocks[c.0].as_str()).collect();
                format!("reset {{{}}} ", names.join(" "))
            };
            let _ = writeln!(s, "    {} -> {}goto {};", rat_text(p), reset, pta.location(o.target).name);
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}

pub fn tmdp_to_dsl(t: &DiscreteTmdp) -> String {
    let mut s = String::from("tmdp {\n");
    for (i, n) in t.names.iter().enumerate() {
        let init = if i == t.initial { " init" } else { "" };
        let labels = if t.labels[i].is_empty() {
            String::new()
        } else {
            format!(" labels {}", quote_labels(t.labels[i].iter()))
        };
        let _ = writeln!(s, "  state {}{}{};", n, init, labels);
    }
    for (i, ts) in t.transitions.iter().enumerate() {
        for tr in ts {
            let body: Vec<String> =
                tr.dist.entries().iter().map(|(u, p)| format!("{}: {}", t.names[*u], rat_text(p))).collect();
            let _ = writeln!(s, "  trans {} -> {} {{ {} }};", t.names[i], tr.duration, body.join(", "));
        }
    }
    s.push_str("}\n");
    s
}

pub fn game_to_dsl(g: &CountdownGame) -> String {
    let mut s = String::from("game {\n");
    let _ = writeln!(s, "  states {};", g.states.join(" "));
    for (a, d, b) in &g.transitions {
        let _ = writeln!(s, "  trans {} -{}-> {};", g.states[*a], d, g.states[*b]);
    }
    s.push_str("}\n");
    s
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per location and one point node per probabilistic edge.
pub fn pta_to_dot(pta: &Pta) -> String {
    let mut s = String::from("digraph pta {\n");
    for (i, l) in pta.locations.iter().enumerate() {
        let shape = if i == pta.initial.0 { "doublecircle" } else { "circle" };
        let _ = writeln!(
            s,
            "  l{} [shape={}, label=\"{}\\ninv: {}\"];",
            i,
            shape,
            dot_escape(&l.name),
            dot_escape(&constraint_text(&l.invariant, &pta.clocks))
        );
    }
    for (k, e) in pta.edges.iter().enumerate() {
        let _ = writeln!(s, "  e{} [shape=point];", k);
        let _ = writeln!(
            s,
            "  l{} -> e{} [label=\"{}\"];",
            e.source.0,
            k,
            dot_escape(&constraint_text(&e.guard, &pta.clocks))
        );
        for (o, p) in e.dist.entries() {
            let reset: Vec<&str> = o.resets.iter().map(|c| pta.clocks[c.0].as_str()).collect();
            let _ = writeln!(
                s,
                "  e{} -> l{} [label=\"{} {{{}}}\"];",
                k,
                o.target.0,
                rat_text(p),
                reset.join(",")
            );
        }
    }
    s.push_str("}\n");
    s
}

/// Dirac transitions become direct arcs; others go through a point node.
pub fn tmdp_to_dot(t: &DiscreteTmdp) -> String {
    let mut s = String::from("digraph tmdp {\n");
    for (i, n) in t.names.iter().enumerate() {
        let _ = writeln!(s, "  s{} [label=\"{}\"];", i, dot_escape(n));
    }
    let mut k = 0;
    for (i, ts) in t.transitions.iter().enumerate() {
        for tr in ts {
            match tr.dist.entries() {
                [(u, p)] if p.is_one() => {
                    let _ = writeln!(s, "  s{} -> s{} [label=\"d={}\"];", i, u, tr.duration);
                }
                entries => {
                    let _ = writeln!(s, "  t{} [shape=point];", k);
                    let _ = writeln!(s, "  s{} -> t{} [label=\"d={}\"];", i, k, tr.duration);
                    for (u, p) in entries {
                        let _ = writeln!(s, "  t{} -> s{} [label=\"{}\"];", k, u, rat_text(p));
                    }
                    k += 1;
                }
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn mdp_to_dot(m: &UntimedMdp) -> String {
    let mut s = String::from("digraph mdp {\n");
    for (i, n) in m.names.iter().enumerate() {
        let _ = writeln!(s, "  s{} [label=\"{}\"];", i, dot_escape(n));
    }
    let mut k = 0;
    for (i, cs) in m.choices.iter().enumerate() {
        for d in cs {
            let _ = writeln!(s, "  c{} [shape=point];", k);
            let _ = writeln!(s, "  s{} -> c{};", i, k);
            for (u, p) in d.entries() {
                let _ = writeln!(s, "  c{} -> s{} [label=\"{}\"];", k, u, rat_text(p));
            }
            k += 1;
        }
    }
    s.push_str("}\n");
    s
}

pub fn pta_to_json(pta: &Pta) -> Value {
    let locations: Vec<Value> = pta
        .locations
        .iter()
        .map(|l| {
            json!({
                "name": l.name,
                "invariant": constraint_text(&l.invariant, &pta.clocks),
                "labels": l.labels.iter().collect::<Vec<_>>(),
            })
        })
        .collect();
    let edges: Vec<Value> = pta
        .edges
        .iter()
        .map(|e| {
            let branches: Vec<Value> = e
                .dist
                .entries()
                .iter()
                .map(|(o, p)| {
                    json!({
                        "probability": rat_text(p),
                        "reset": o.resets.iter().map(|c| pta.clocks[c.0].clone()).collect::<Vec<_>>(),
                        "target": pta.location(o.target).name,
                    })
                })
                .collect();
            json!({
                "source": pta.location(e.source).name,
                "guard": constraint_text(&e.guard, &pta.clocks),
                "branches": branches,
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "kind": "pta",
        "clocks": pta.clocks,
        "initial": pta.location(pta.initial).name,
        "locations": locations,
        "edges": edges,
    })
}

pub fn tmdp_to_json(t: &DiscreteTmdp) -> Value {
    let states: Vec<Value> = t
        .names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let trans: Vec<Value> = t.transitions[i]
                .iter()
                .map(|tr| {
                    let dist: Map<String, Value> = tr
                        .dist
                        .entries()
                        .iter()
                        .map(|(u, p)| (t.names[*u].clone(), Value::String(rat_text(p))))
                        .collect();
                    json!({ "duration": tr.duration, "distribution": dist })
                })
                .collect();
            json!({ "name": n, "labels": t.labels[i].iter().collect::<Vec<_>>(), "transitions": trans })
        })
        .collect();
    json!({ "schema": SCHEMA, "kind": "tmdp", "initial": t.names[t.initial], "states": states })
}

/// Location name to list of interval strings; no locations gives `{}`.
pub fn satmap_to_json(names: &[String], sat: &SatMap) -> Value {
    let map: Map<String, Value> = names
        .iter()
        .zip(&sat.sets)
        .map(|(n, set)| (n.clone(), Value::Array(set.parts().iter().map(|p| Value::String(p.to_string())).collect())))
        .collect();
    Value::Object(map)
}

pub fn values_to_json(names: &[String], values: &[String]) -> Value {
    let map: Map<String, Value> =
        names.iter().zip(values).map(|(n, v)| (n.clone(), Value::String(v.clone()))).collect();
    json!({ "schema": SCHEMA, "kind": "values", "values": map })
}
