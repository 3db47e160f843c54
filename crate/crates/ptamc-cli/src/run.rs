use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use ptamc::abstraction::check_pctl_1c;
use ptamc::countdown::{game_to_1cpta, game_to_2cpta, game_to_tmdp, solve_countdown, CountdownGame, Winner};
use ptamc::dsl::export::{
    game_to_dsl, mdp_to_dot, pta_to_dot, pta_to_dsl, pta_to_json, satmap_to_json, tmdp_to_dot, tmdp_to_dsl,
    tmdp_to_json,
};
use ptamc::dsl::{parse_formula, parse_model, Formula, FormulaClass, Model};
use ptamc::forward::build_fr_mdp;
use ptamc::mdp::{reach_prob, Objective, StateSet};
use ptamc::model::{parse_rat, LocId, Pta, Rat};
use ptamc::oracle::{oracle_check_ptctl, OracleConfig};
use ptamc::ptctl1c::check_ptctl01_noneq_1c;

use crate::report::{Engine, InputDigest, RunReport};

/// Anything that ends a run with exit code 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(msg.into()))
}

/// Polynomial engines only for the classes they are proven for; the oracle for the rest.
pub fn choose_engine(class: FormulaClass, clocks: usize) -> Engine {
    match (class, clocks) {
        (FormulaClass::Pctl, 1) => Engine::IntervalAbstraction,
        (FormulaClass::Ptctl01NonPunctual, 1) => Engine::Ptctl1c,
        _ => Engine::RegionOracle,
    }
}

pub fn read_model(path: &Path, report: &mut RunReport) -> Result<Model, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure(format!("cannot read {}: {}", path.display(), e)))?;
    report.inputs.push(InputDigest::of_path(path, &bytes));
    let text = String::from_utf8(bytes).map_err(|_| Failure(format!("{} is not UTF-8", path.display())))?;
    Ok(parse_model(&text)?)
}

fn read_pta(path: &Path, report: &mut RunReport) -> Result<Pta, Failure> {
    match read_model(path, report)? {
        Model::Pta(p) => Ok(p),
        _ => fail(format!("{} does not hold a PTA", path.display())),
    }
}

fn read_game(path: &Path, report: &mut RunReport) -> Result<CountdownGame, Failure> {
    match read_model(path, report)? {
        Model::Game(g) => Ok(g),
        _ => fail(format!("{} does not hold a countdown game", path.display())),
    }
}

fn read_formula(text: &str, report: &mut RunReport) -> Result<Formula, Failure> {
    report.inputs.push(InputDigest::of("--formula", text.as_bytes()));
    Ok(parse_formula(text)?)
}

/// `l,v` or `l,v1,v2`; the initial location at zero when absent.
pub fn parse_at(pta: &Pta, at: Option<&str>) -> Result<(LocId, Vec<Rat>), Failure> {
    let n = pta.clocks.len();
    let Some(at) = at else { return Ok((pta.initial, vec![Rat::zero(); n])) };
    let mut parts = at.split(',').map(str::trim);
    let name = parts.next().unwrap_or_default();
    let l = pta.location_id(name).ok_or_else(|| Failure(format!("unknown location `{}`", name)))?;
    let v: Vec<Rat> = parts
        .map(|p| parse_rat(p).filter(|r| *r >= Rat::zero()).ok_or_else(|| Failure(format!("bad clock value `{}`", p))))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return fail(format!("--at gives {} clock values, the automaton has {} clocks", v.len(), n));
    }
    Ok((l, v))
}

fn query_text(pta: &Pta, l: LocId, v: &[Rat]) -> String {
    let vals: Vec<String> = v.iter().map(Rat::to_string).collect();
    format!("({}, {})", pta.location(l).name, vals.join(","))
}

fn location_names(pta: &Pta) -> Vec<String> {
    pta.locations.iter().map(|l| l.name.clone()).collect()
}

pub struct CheckArgs<'a> {
    pub formula: &'a str,
    pub at: Option<&'a str>,
    pub oracle: OracleConfig,
    pub force_oracle: bool,
    pub emit_dot: bool,
}

fn check_pta(pta: &Pta, f: &Formula, args: &CheckArgs, report: &mut RunReport) -> Result<(), Failure> {
    let class = f.classify();
    let engine = if args.force_oracle { Engine::RegionOracle } else { choose_engine(class, pta.clocks.len()) };
    report.class = Some(class.name().to_string());
    report.engine = Some(engine);
    let (l, v) = parse_at(pta, args.at)?;
    report.query = Some(query_text(pta, l, &v));
    match engine {
        Engine::IntervalAbstraction => {
            let (sat, verdict) = check_pctl_1c(pta, f, Some((l, &v[0])))?;
            report.sat = Some(satmap_to_json(&location_names(pta), &sat));
            report.verdict = verdict;
        }
        Engine::Ptctl1c => {
            let out = check_ptctl01_noneq_1c(pta, f, Some((l, &v[0])))?;
            report.sat = Some(satmap_to_json(&location_names(pta), &out.top));
            report.verdict = out.verdict;
        }
        Engine::RegionOracle => {
            if !args.force_oracle {
                report.notice = Some(format!(
                    "{} on a {}-clock automaton is outside the polynomial classes; \
                     using the oracle (exponential) engine",
                    class.name(),
                    pta.clocks.len()
                ));
            }
            if let Some(d) = pta.validate().first() {
                return fail(format!("invalid model: {}", d));
            }
            report.verdict = Some(oracle_check_ptctl(pta, f, (l, &v), &args.oracle)?);
        }
    }
    Ok(())
}

pub fn check(model: &Path, args: &CheckArgs) -> RunReport {
    let command = if args.force_oracle { "oracle-check" } else { "check" };
    timed(command, |report| {
        let pta = read_pta(model, report)?;
        if args.emit_dot {
            report.dot = Some(pta_to_dot(&pta));
        }
        let f = read_formula(args.formula, report)?;
        check_pta(&pta, &f, args, report)
    })
}

/// Every regular file of `dir`, in name order, checked in parallel.
pub fn check_batch(dir: &Path, args: &CheckArgs) -> Result<Vec<RunReport>, Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure(format!("cannot read {}: {}", dir.display(), e)))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files.par_iter().map(|p| check(p, args)).collect())
}

pub fn solve(path: &Path, state: &str, count: u64) -> RunReport {
    timed("solve-countdown", |report| {
        let game = read_game(path, report)?;
        let s = game.state_id(state)?;
        let w = solve_countdown(&game, s, count)?;
        report.query = Some(format!("({}, {})", state, count));
        report.verdict = Some(w == Winner::Player1);
        report.result = Some(json!({ "winner": w.to_string() }));
        Ok(())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Tmdp,
    OneClock,
    TwoClock,
}

/// The reduction image as model text; PTAs carry their formula in a leading comment.
pub fn generate(path: &Path, target: Target, state: &str, count: u64, as_json: bool) -> RunReport {
    timed("generate", |report| {
        let game = read_game(path, report)?;
        let s = game.state_id(state)?;
        let (text, model, formula) = match target {
            Target::Tmdp => {
                let t = game_to_tmdp(&game, s, count)?;
                (tmdp_to_dsl(&t), tmdp_to_json(&t), None)
            }
            Target::OneClock | Target::TwoClock => {
                let (pta, f) = match target {
                    Target::OneClock => game_to_1cpta(&game, s, count)?,
                    _ => game_to_2cpta(&game, s, count)?,
                };
                (format!("// formula: {}\n{}", f, pta_to_dsl(&pta)), pta_to_json(&pta), Some(f.to_string()))
            }
        };
        report.result = Some(if as_json {
            json!({ "model": model, "formula": formula })
        } else {
            Value::String(text.trim_end().to_string())
        });
        Ok(())
    })
}

pub fn forward(path: &Path, target: &str, objective: Objective, emit_dot: bool) -> RunReport {
    timed("forward-reach", |report| {
        let pta = read_pta(path, report)?;
        let fr = build_fr_mdp(&pta)?;
        let goal = StateSet::from_bits(fr.mdp.labelled(target));
        let p = reach_prob(&fr.mdp, &goal, objective).swap_remove(fr.mdp.initial);
        let objective = if objective == Objective::Max { "max" } else { "min" };
        report.result = Some(json!({
            "objective": objective,
            "target": target,
            "probability": p.to_string(),
            "states": fr.mdp.len().to_string(),
        }));
        if emit_dot {
            report.dot = Some(mdp_to_dot(&fr.mdp));
        }
        Ok(())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dsl,
    Json,
    Dot,
}

pub fn export(path: &Path, format: Format) -> RunReport {
    timed("export", |report| {
        let model = read_model(path, report)?;
        let text = match (&model, format) {
            (Model::Pta(p), Format::Dsl) => pta_to_dsl(p),
            (Model::Pta(p), Format::Json) => pretty(&pta_to_json(p)),
            (Model::Pta(p), Format::Dot) => pta_to_dot(p),
            (Model::Tmdp(t), Format::Dsl) => tmdp_to_dsl(t),
            (Model::Tmdp(t), Format::Json) => pretty(&tmdp_to_json(t)),
            (Model::Tmdp(t), Format::Dot) => tmdp_to_dot(t),
            (Model::Game(g), Format::Dsl) => game_to_dsl(g),
            (Model::Game(g), Format::Json) => pretty(&game_json(g)),
            (Model::Game(_), Format::Dot) => return fail("countdown games have no DOT form"),
        };
        report.result = Some(Value::String(text.trim_end().to_string()));
        Ok(())
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise")
}

fn game_json(g: &CountdownGame) -> Value {
    let trans: Vec<Value> = g
        .transitions
        .iter()
        .map(|&(s, d, t)| json!({ "source": g.states[s], "duration": d, "target": g.states[t] }))
        .collect();
    json!({ "schema": ptamc::dsl::export::SCHEMA, "kind": "game", "states": g.states, "transitions": trans })
}

fn timed(command: &'static str, body: impl FnOnce(&mut RunReport) -> Result<(), Failure>) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new(command);
    if let Err(e) = body(&mut report) {
        report.error = Some(e.0);
        report.verdict = None;
    }
    report.wall = start.elapsed();
    report
}
