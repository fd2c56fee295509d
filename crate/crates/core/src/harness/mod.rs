//! Manifest runner, proof runner, probes and witness search.

pub mod expr;
pub mod manifest;
pub mod probe;
pub mod proofrun;
pub mod search;

pub use expr::{ExprError, MonoidExpr, Resolved};
pub use manifest::{
    parse_manifest, run_manifest, Claim, ClaimKind, ClaimObject, ClaimResult, ClaimVerdict,
    Manifest, ManifestError, ManifestReport,
};
pub use probe::{probe_isoterm, probe_properties};
pub use proofrun::{family_names_of, run_proof, ProofRun, ProofRunError};
pub use search::{
    count_monoids, count_monoids_naive, enumerate_monoids, witness_search, EnumerationEnd,
    SearchError, SearchOutcome, SearchSpec,
};
