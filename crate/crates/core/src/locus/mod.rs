//! Realizable rank tuples `(h, k; v, c)`: the bounding sequence, the rule
//! classifier, witness construction, and locus tables.

mod classify;
mod table;
mod witness;

use thiserror::Error;

use crate::lattice::{LatticeError, RankProfile};
use crate::sampler::SampleError;
use crate::words::WordError;

pub use classify::{a_sequence, classify, Classification, Rule, Verdict};
pub use table::{locus_table, LocusCell, LocusTable};
pub use witness::{
    apply_operation, base_search, construct_witness, fixture, BaseSearchConfig, Operation, Provenance,
    WitnessRecord, WitnessStore, DEFAULT_STORE_PATH, STORE_ENV_VAR,
};

#[derive(Debug, Error)]
pub enum LocusError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is not realizable by the known constructions ({1})")]
    NotRealizable(RankProfile, String),
    #[error(
        "no witness for {profile} within the search budget of {budget} pairs (this is not a refutation)"
    )]
    BudgetExhausted { profile: RankProfile, budget: usize },
    #[error("witness check failed: expected {expected}, the generators give {actual}")]
    Mismatch {
        expected: RankProfile,
        actual: RankProfile,
    },
    #[error("witness store {path}, line {line}: {message}")]
    Store {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}
