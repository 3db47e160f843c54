//! Model checking for probabilistic timed automata with one or two clocks.

pub mod abstraction;
pub mod countdown;
pub mod dsl;
pub mod forward;
pub mod games;
pub mod mdp;
pub mod model;
pub mod oracle;
pub mod ptctl1c;
