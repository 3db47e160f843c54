//! Text formats: the model language, formulae, and DOT/JSON export.

pub mod export;
pub mod formula;
mod lexer;
mod model_parser;

pub use formula::{parse_formula, Formula, FormulaClass, ProbCmp, TimeRel, Timing};
pub use model_parser::{parse_game, parse_model, parse_pta, parse_tmdp, Model};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("threshold outside [0,1]: {0}")]
    Threshold(String),
    #[error("{}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("expected a {0} model")]
    WrongKind(&'static str),
}

impl DslError {
    pub(crate) fn syntax(line: usize, col: usize, msg: &str) -> Self {
        DslError::Syntax { line, col, msg: msg.to_string() }
    }
}
