use super::pta::has_cycle;
use super::{Distribution, LabelSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmdpTransition {
    pub duration: u64,
    pub dist: Distribution<usize>,
}

/// Discrete timed MDP: transitions carry natural durations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteTmdp {
    pub names: Vec<String>,
    pub initial: usize,
    pub transitions: Vec<Vec<TmdpTransition>>,
    pub labels: Vec<LabelSet>,
}

impl DiscreteTmdp {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.initial >= self.len() {
            out.push("initial state missing".to_string());
        }
        for (s, ts) in self.transitions.iter().enumerate() {
            if ts.is_empty() {
                out.push(format!("state `{}` has no outgoing transition", self.names[s]));
            }
            for t in ts {
                if !t.dist.is_valid() {
                    out.push(format!("state `{}`: distribution mass ≠ 1", self.names[s]));
                }
                if t.dist.support().any(|&u| u >= self.len()) {
                    out.push(format!("state `{}`: unknown successor", self.names[s]));
                }
            }
        }
        out
    }

    /// No cycle of the transition graph has total duration zero.
    pub fn is_structurally_non_zeno(&self) -> bool {
        let arcs: Vec<(usize, usize)> = self
            .transitions
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| {
                ts.iter()
                    .filter(|t| t.duration == 0)
                    .flat_map(move |t| t.dist.support().map(move |&u| (s, u)))
            })
            .collect();
        !has_cycle(self.len(), &arcs)
    }

    /// The untimed MDP obtained by dropping durations.
    pub fn untimed(&self) -> UntimedMdp {
        UntimedMdp {
            names: self.names.clone(),
            initial: self.initial,
            choices: self
                .transitions
                .iter()
                .map(|ts| ts.iter().map(|t| t.dist.clone()).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Finite MDP without durations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UntimedMdp {
    pub names: Vec<String>,
    pub initial: usize,
    pub choices: Vec<Vec<Distribution<usize>>>,
    pub labels: Vec<LabelSet>,
}

impl UntimedMdp {
    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn transition_count(&self) -> usize {
        self.choices.iter().map(Vec::len).sum()
    }

    pub fn labelled(&self, a: &str) -> Vec<bool> {
        self.labels.iter().map(|l| l.contains(a)).collect()
    }
}
