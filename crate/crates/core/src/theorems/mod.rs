//! Exponent predicates and theorems as ready-made pipelines.

mod catalog;
mod prover;
mod report;

use thiserror::Error;

pub use catalog::{
    factor_exponents, greatest_exponents, least_exponents, pf_factor_exponents, pf_greatest_exponents,
    pf_least_exponents, pf_prefix_exponents, prefix_exponents, suffix, AceEncoding,
};
pub use prover::{Pred, Prover, CREP};
pub use report::{run_theorem, theorem_sequence, Outcome, RunOptions, TheoremReport, THEOREMS, TM_THEOREMS};

use crate::automata::AutomataError;
use crate::logic::{LogicError, ParseError};
use crate::oracle::OracleError;

#[derive(Debug, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("unknown theorem `{0}`")]
    Unknown(String),
    #[error("theorem `{0}` needs the {1} sequence")]
    WrongSequence(String, String),
    #[error("{0}")]
    Io(String),
}

impl From<ParseError> for TheoremError {
    fn from(e: ParseError) -> Self {
        TheoremError::Logic(e.into())
    }
}

impl TheoremError {
    /// The resource ceiling was hit somewhere underneath.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            TheoremError::Automata(AutomataError::ResourceLimit { .. })
                | TheoremError::Logic(LogicError::Automata(AutomataError::ResourceLimit { .. }))
        )
    }
}
