//! Brooks quasi-cocycles on the free group `F2 = <a, b>`.
//!
//! The crate is organized around four layers:
//!
//! * [`words`]: exact combinatorics of reduced words: the group law,
//!   geodesics, oriented occurrence scanning, enumeration and the special
//!   word families used by the experiments.
//! * [`spaces`]: coefficient backends for a unitary representation: the
//!   trivial one-dimensional action, the left regular representation on
//!   `l^p(F2)` over exact rationals, and finite-dimensional unitary
//!   matrices, together with norming functionals and uniform-convexity
//!   constants.
//! * [`brooks`]: the quasi-cocycle `H_{w,e}` itself: evaluation, defect
//!   estimation, exact cocycles, antisymmetrization, finite averaging and
//!   the diagonal `l^inf` coboundary.
//! * [`analysis`]: experiment-level procedures: growth probes, the greedy
//!   norm-growth search, vanishing checks, independence evidence and the
//!   convexity inequality property test.

pub mod analysis;
pub mod brooks;
pub mod exact;
pub mod spaces;
pub mod words;

/// Crate-wide error type.
///
/// The split between variants mirrors how the CLI maps failures to exit
/// codes: everything except [`Error::Invariant`] is a usage or input
/// problem, while `Invariant` means a mathematical property the library
/// promises was observed to fail (a bug, or a falsified bound).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed text input (word syntax, vector literals, descriptors).
    #[error("parse error: {0}")]
    Parse(String),

    /// An operation's precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested combination is not supported (e.g. exact norming
    /// functionals for p = 1 or p = infinity).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A retry or resampling budget was exhausted before the requested
    /// object could be constructed.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// A mathematical invariant the library guarantees failed to hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
