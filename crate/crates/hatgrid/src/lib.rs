//! Direct construction of aperiodic hat-monotile tilings.
//!
//! The pipeline builds a tiling from two rational parameters: a triangular
//! dual grid is indexed by projection-method Fibonacci indices, every
//! vertex (one per unflipped hat) is classified by reducing its cube
//! realisation into a periodic triangle pattern, hat orientations are
//! resolved either by constraint propagation over kites or by iterating
//! the self-similarity maps of the orientation pattern, and tiles are
//! assembled kite by kite with an exact coverage verifier.
//!
//! All geometry runs on exact ℚ(√5) arithmetic; no floating point is
//! involved in any decision.

pub mod assemble;
pub mod classify;
pub mod exactnum;
pub mod fibline;
pub mod io;
pub mod orient;
pub mod realise;
pub mod trigrid;

pub use exactnum::GoldenNumber;
pub use fibline::{FibParams, GapLabel};
pub use trigrid::VertexId;

use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

/// Which of the two mirror-image tilings is being built. The mirrored
/// tiling swaps line families 1 and 2 and flips the embedding angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Roles {
    Standard,
    Mirrored,
}

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("malformed rational: {0}")]
    MalformedRational(String),
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("orientation resolution failed: {0}")]
    ResolutionFailure(String),
    #[error("tiling verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
