//! Decision procedures for circular critical exponents of factors of
//! base-2 automatic sequences, centred on the Thue–Morse word.
//!
//! * [`oracle`]: brute-force word combinatorics used as ground truth.
//! * [`sequences`]: Thue–Morse and regular paperfolding, arithmetically and
//!   as DFAOs.
//! * [`automata`]: synchronized multi-track automata and DFAOs.
//! * [`logic`]: a first-order language over the naturals with sequence
//!   indexing, a script parser, and its compiler to automata.
//! * [`theorems`]: the named predicates and theorem pipelines.
//! * [`cli`]: the command-line surface.

pub mod automata;
pub mod cli;
pub mod logic;
pub mod oracle;
pub mod rational;
pub mod sequences;
pub mod theorems;

pub use rational::Rational;
