//! Translation of LTL formulas into chains of co-Büchi automata (COCOA).
//!
//! The pipeline runs formula → weak alternating automaton → obligation graphs
//! → canonical suffix-language tracking machine → floating automata per level
//! → history-deterministic co-Büchi automata, and every stage can be checked
//! against a brute-force LTL evaluator on lasso words.

pub mod alphabet;
pub mod awa;
pub mod cocoa;
pub mod budget;
pub mod error;
pub mod fixtures;
pub mod floating;
pub mod formula;
pub mod hoa;
pub mod obligation;
pub mod scc;
pub mod sltm;
pub mod stateset;

pub use alphabet::{Alphabet, LassoWord, Letter};
pub use budget::Budget;
pub use error::{Error, Result};
pub use formula::Formula;
