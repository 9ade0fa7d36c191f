//! Family verification pipelines and reference data.

pub mod golden;
pub mod recurrence;
pub mod verify;

use thiserror::Error;

use crate::diagram::DiagramError;
use crate::grid::GridError;
use crate::jones::JonesError;
use crate::kauffman::KauffmanError;
use crate::laurent::LaurentError;
use crate::montesinos::MontesinosError;

pub use golden::{ingest_golden, BracketTemplate, GoldenCorpus, GoldenError};
pub use recurrence::{jones_recurrence, lambda_recurrence, reduce_twist_box, BoxReduction};
pub use verify::{table1, verify_n, verify_theorem, NRecord, Status, Table1Report, TheoremReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Golden(#[from] GoldenError),
    #[error(transparent)]
    Kauffman(#[from] KauffmanError),
    #[error(transparent)]
    Jones(#[from] JonesError),
    #[error(transparent)]
    Montesinos(#[from] MontesinosError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("{0}")]
    Invalid(String),
}
