//! Exact two-variable Kauffman and Jones polynomials, Montesinos mutants and
//! grid-diagram bounds on the arc index.

pub mod laurent;
pub mod diagram;
pub mod kauffman;
pub mod jones;
pub mod montesinos;
pub mod grid;
pub mod harness;

#[cfg(test)]
mod properties;

pub use diagram::{Diagram, DiagramError};
pub use grid::{arc_count, arc_index_bounds, template, GridDiagram};
pub use harness::{ingest_golden, verify_theorem, GoldenCorpus, TheoremReport};
pub use jones::{jones, semi_alternating_obstruction, ObstructionReport, Verdict};
pub use kauffman::{kauffman_f, lambda, lambda_bracket, SkeinConfig};
pub use laurent::{BiLaurent, BracketForm, LaurentPoly};
pub use montesinos::{build_diagram, classify_equal, Fraction, MontesinosSpec};
