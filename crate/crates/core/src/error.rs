use thiserror::Error;

/// Errors raised by the toolkit. Variants carry enough context for a report line.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {re}+{im}i is not inside the open disk (|z| must be < 1 - 1e-12)")]
    OutsideDisk { re: f64, im: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero within {distance:e} of the unit circle; boundary trace is ill-conditioned")]
    IllConditionedBoundary { distance: f64 },

    #[error("quadrature did not resolve an integer count (last estimate {estimate}, grid {grid})")]
    Resolution { estimate: f64, grid: usize },

    #[error("construction exhausted after placing {placed} radii: {reason}")]
    ConstructionExhausted { placed: usize, reason: String },

    #[error("cardinality mismatch: {left} zeros vs {right} zeros")]
    Cardinality { left: usize, right: usize },

    #[error("grid too coarse: conjugation residual {residual:e} exceeds {limit:e}")]
    GridTooCoarse { residual: f64, limit: f64 },

    #[error("refinement exhausted after {rounds} halvings of alpha (worst step norm {worst:e}, target {target:e})")]
    RefinementExhausted {
        rounds: usize,
        worst: f64,
        target: f64,
    },

    #[error("contour passes through (or too close to) a zero: |f| = {modulus:e} near {re}+{im}i")]
    ContourThroughZero { modulus: f64, re: f64, im: f64 },

    #[error("ambiguous level-set topology: {0}")]
    AmbiguousTopology(String),

    #[error("harmonic-measure atlas inconsistent: {0}")]
    AtlasInconsistent(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("logarithm branch inconsistent: max |exp(log) - ratio| = {residual:e}")]
    Branch { residual: f64 },

    #[error("sample region is empty")]
    RegionEmpty,
}

pub type Result<T> = std::result::Result<T, Error>;
