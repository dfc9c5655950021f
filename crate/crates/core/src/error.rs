use thiserror::Error;

/// A computed quantity contradicted a theorem it is supposed to satisfy.
///
/// These never occur on valid input; each one signals an implementation bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossCheckError {
    #[error("branch count at `{vertex}` is {value}, not a nonnegative integer")]
    BranchCount { vertex: String, value: String },
    #[error("delta evaluates to {0}, not a nonnegative integer")]
    Delta(String),
    #[error("cannot pair polar branches at `{vertex}`: {detail}")]
    Pairing { vertex: String, detail: String },
    #[error("polar multiplicity {found} differs from 2m - 2 = {expected}")]
    PolarMultiplicity { found: u64, expected: u64 },
    #[error("canonical cycle does not satisfy its defining equations")]
    CanonicalCycle,
}
