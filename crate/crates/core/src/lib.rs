//! Exact certification, tracing and numerical cross-checking of the
//! semi-cubic hyponormality region for weighted shifts with weights
//! `1, (1, sqrt(x), sqrt(y))^` (Stampfli completion).
//!
//! Coordinates follow `x = 1 + h`, `y = 1 + h + k`. The region is cut out by
//! `p(h, k) >= 0` and its boundary is parametrised by `k = t h`.

pub mod arith;
pub mod completion;
pub mod oracle;
pub mod polys;
pub mod region;

pub use arith::{
    ExactRational, MultiPoly, Multiplicity, RationalInterval, RootError, RootInterval, UniPoly, Var,
};
pub use completion::{psi_constants, CompletionError, WeightSequence};
pub use polys::{Certificate, CertificateStatus, Derivation, CoefficientTables, Witness};
pub use oracle::{OracleError, OracleOptions, OracleReport, TruncatedShift, Verdict};
pub use region::{BoundarySample, Curve, Extremum, RegionError, RegionVerdict, Status};
