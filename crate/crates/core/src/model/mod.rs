//! The PA(m; n) model: graph types, the generator, admissibility and the
//! `pag v1` text format.

mod enumerate;
mod format;
mod graph;
mod multigraph;

pub use enumerate::{admissible_count, for_each_admissible, AdmissibleOdometer};
pub use format::{decode_graph, encode_graph};
pub use graph::{
    generate, generate_sequence, generate_sequence_with, generate_trial, ChoiceSequence, DegreeView, PaGraph, Vertex,
    WeightMode,
};
pub use multigraph::{admissible_check, Multigraph};
