//! Computing with monoid identities and finite monoids.
//!
//! The crate covers words and identities, direct deducibility and proof
//! chains, finite monoids given by tables, Rees quotients or presentations,
//! satisfaction of identities, relatively free objects and isoterms, a
//! curated catalog of small J-trivial monoids with their identity bases, and
//! a claim-manifest runner used by the `varcross` command line tool.

pub mod catalog;
pub mod freeobject;
pub mod harness;
pub mod identities;
pub mod monoids;
pub mod satisfaction;
pub mod words;

pub use identities::{ident, parse_identity, AxiomSet, Identity, WordSubstitution};
pub use monoids::FiniteMonoid;
pub use words::{parse_word, w, NaturalForm, Variable, Word};
