//! Classes of spaces omitting a finite set of forbidden subspaces.

mod forbidden;
mod parity;
mod path_ext;
mod semimetric;

use thiserror::Error;

use crate::eppa::EppaError;
use crate::monoid::MonoidError;
use crate::space::SpaceError;

pub use forbidden::{
    check_closed_under_path_extensions, free_witness_search, is_free, odd_perimeter_triangles, ClosureCounterexample,
    ClosureReport, ForbiddenClass,
};
pub use parity::{verify_parity, ParityReport};
pub use path_ext::{enumerate_path_extensions, path_length_bound, PathExtension};
pub use semimetric::{sigma_pattern, weak_embedding_exists, weak_homomorphism_exists, PartialSemimetric};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmissionError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("the generated submonoid is not archimedean")]
    NonArchimedean,
    #[error("{0} does not have dominated spectrum")]
    NotDominated(String),
    #[error("the base contains a forbidden subspace")]
    BaseNotFree,
    #[error("host {0} contains a forbidden subspace")]
    HostNotFree(usize),
    #[error("parity checks need a truncated monoid R_m")]
    NotTruncated,
    #[error(transparent)]
    Eppa(#[from] EppaError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}
