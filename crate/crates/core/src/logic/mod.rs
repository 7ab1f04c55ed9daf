//! First-order logic over `(N, +, <)` extended with indexing into automatic
//! sequences, and its compiler to multi-track automata.

mod ast;
mod cache;
mod compile;
mod parser;

use thiserror::Error;

pub use ast::{Atom, Formula, Rel, Term};
pub use cache::CompileCache;
pub use compile::{atom_automaton, CompileStats, Compiler, PredicateStore};
pub use parser::{parse_formula, parse_script, Command, ParseError};

use crate::automata::AutomataError;

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` takes {expected} arguments, got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("predicate `{0}` is already defined")]
    Duplicate(String),
    #[error("formula has free variables: {}", .0.join(", "))]
    FreeVariables(Vec<String>),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("cache: {0}")]
    Cache(String),
}
