//! De Bruijn sequences from cycle-joining successor rules on the cycling and
//! summing shift registers.

pub mod anf;
pub mod bench;
pub mod census;
pub mod error;
pub mod fsr;
pub mod generator;
pub mod graph;
pub mod rules;
pub mod table;
pub mod word;

pub use anf::{rule_feedback, to_anf, AnfPolynomial};
pub use census::{run_census, CensusFamily, CensusReport};
pub use error::{Error, Result};
pub use fsr::{CycleRecord, FeedbackFunction, FeedbackKind};
pub use generator::{generate, BitStream, GeneratedSequence};
pub use graph::{adjacency_graph, induced_tree, CycleOrder, SpanningTree};
pub use rules::{Family, Rule, RuleSpec};
pub use table::TruthTable;
pub use word::{BitWord, ShiftClass, ZeroRun};
