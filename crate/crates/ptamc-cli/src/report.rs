use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ptamc::dsl::export::SCHEMA;

/// Which engine answered a `check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    IntervalAbstraction,
    Ptctl1c,
    RegionOracle,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::IntervalAbstraction => "interval-abstraction",
            Engine::Ptctl1c => "ptctl-1c",
            Engine::RegionOracle => "region-oracle",
        }
    }
}

/// SHA-256 of some input, with where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(source: &str, bytes: &[u8]) -> Self {
        InputDigest { source: source.to_string(), sha256: format!("{:x}", Sha256::digest(bytes)) }
    }

    pub fn of_path(path: &Path, bytes: &[u8]) -> Self {
        Self::of(&path.display().to_string(), bytes)
    }
}

/// What one invocation did. `wall` is the only field that varies between runs.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: &'static str,
    pub inputs: Vec<InputDigest>,
    pub class: Option<String>,
    pub engine: Option<Engine>,
    pub notice: Option<String>,
    pub verdict: Option<bool>,
    pub query: Option<String>,
    pub sat: Option<Value>,
    pub result: Option<Value>,
    pub error: Option<String>,
    /// A graph of the model, when asked for.
    pub dot: Option<String>,
    pub wall: Duration,
}

impl RunReport {
    pub fn new(command: &'static str) -> Self {
        RunReport { command, ..Default::default() }
    }

    /// 0 when the query holds (or there is nothing to decide), 1 when it does not, 2 on error.
    pub fn exit_code(&self) -> i32 {
        match (&self.error, self.verdict) {
            (Some(_), _) => 2,
            (None, Some(false)) => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> Value {
        let inputs: Vec<Value> =
            self.inputs.iter().map(|d| json!({ "source": d.source, "sha256": d.sha256 })).collect();
        let mut out = json!({
            "schema": SCHEMA,
            "command": self.command,
            "inputs": inputs,
            "exit": self.exit_code(),
            "wall_ms": self.wall.as_secs_f64() * 1000.0,
        });
        let map = out.as_object_mut().expect("object literal");
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        };
        put("class", self.class.clone().map(Value::String));
        put("algorithm", self.engine.map(|e| Value::String(e.name().into())));
        put("notice", self.notice.clone().map(Value::String));
        put("verdict", self.verdict.map(Value::Bool));
        put("query", self.query.clone().map(Value::String));
        put("sat", self.sat.clone());
        put("result", self.result.clone());
        put("error", self.error.clone().map(Value::String));
        put("dot", self.dot.clone().map(Value::String));
        out
    }

    pub fn to_text(&self) -> String {
        if let Some(e) = &self.error {
            return format!("error: {}\n", e);
        }
        let mut s = String::new();
        if let (Some(class), Some(engine)) = (&self.class, self.engine) {
            s += &format!("class: {}\nalgorithm: {}\n", class, engine.name());
        }
        if let Some(v) = self.verdict {
            match &self.query {
                Some(q) => s += &format!("verdict: {} at {}\n", v, q),
                None => s += &format!("verdict: {}\n", v),
            }
        }
        if let Some(Value::Object(sat)) = &self.sat {
            s += "sat:\n";
            for (loc, parts) in sat {
                let parts: Vec<&str> = parts.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                let text = if parts.is_empty() { "{}".to_string() } else { parts.join(" u ") };
                s += &format!("  {}: {}\n", loc, text);
            }
        }
        if let Some(r) = &self.result {
            match r {
                Value::String(t) => s += &format!("{}\n", t),
                Value::Object(m) => {
                    for (k, v) in m {
                        s += &format!("{}: {}\n", k, v.as_str().map_or_else(|| v.to_string(), str::to_string));
                    }
                }
                other => s += &format!("{}\n", other),
            }
        }
        s
    }
}
