//! Identities between words, substitutions, direct deducibility and proof chains.

mod family;
mod matching;
mod proof;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::words::{parse_word, Variable, Word, WordParseError};

pub use family::{
    family_identity, l_chain_word, permutations, FamilyError, FamilyKind, FamilySpec,
};
pub use matching::{
    directly_deducible, verify_witness, Deducibility, DeductionWitness, DEFAULT_NODE_BUDGET,
};
pub use proof::{
    verify_proof_script, verify_with_budget, ProofError, ProofReport, ProofScript, ProofStep,
    StepJustification, StepReport, StepVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityParseError {
    #[error("identity needs exactly one '=' or '≈' separator")]
    MissingSeparator,
    #[error("left side: {0}")]
    Lhs(WordParseError),
    #[error("right side: {0}")]
    Rhs(WordParseError),
}

/// An identity `lhs ≈ rhs`, optionally labelled.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
    pub label: Option<String>,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Identity {
            lhs,
            rhs,
            label: None,
        }
    }

    pub fn labelled(lhs: Word, rhs: Word, label: impl Into<String>) -> Self {
        Identity {
            lhs,
            rhs,
            label: Some(label.into()),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn content(&self) -> BTreeSet<Variable> {
        let mut c = self.lhs.content();
        c.extend(self.rhs.content());
        c
    }

    /// Both sides reversed; the label gains a `~` marker.
    pub fn dualize(&self) -> Identity {
        Identity {
            lhs: self.lhs.reverse(),
            rhs: self.rhs.reverse(),
            label: self.label.as_ref().map(|l| dual_label(l)),
        }
    }

    /// Equality as unordered pairs of words, ignoring labels.
    pub fn same_pair(&self, other: &Identity) -> bool {
        (self.lhs == other.lhs && self.rhs == other.rhs)
            || (self.lhs == other.rhs && self.rhs == other.lhs)
    }

    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.to_string())
    }
}

fn dual_label(label: &str) -> String {
    match label.strip_suffix('~') {
        Some(base) => base.to_string(),
        None => format!("{label}~"),
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = IdentityParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s)
    }
}

pub fn parse_identity(text: &str) -> Result<Identity, IdentityParseError> {
    let parts: Vec<&str> = text.split(['=', '≈']).collect();
    if parts.len() != 2 {
        return Err(IdentityParseError::MissingSeparator);
    }
    let lhs = parse_word(parts[0]).map_err(IdentityParseError::Lhs)?;
    let rhs = parse_word(parts[1]).map_err(IdentityParseError::Rhs)?;
    Ok(Identity::new(lhs, rhs))
}

/// Panicking shorthand for literals in tests and tables.
pub fn ident(text: &str) -> Identity {
    parse_identity(text).unwrap_or_else(|e| panic!("bad identity {text:?}: {e}"))
}

/// A map from variables to words; unassigned variables map to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordSubstitution(BTreeMap<Variable, Word>);

impl WordSubstitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: Variable, image: Word) {
        self.0.insert(v, image);
    }

    pub fn with(mut self, v: Variable, image: Word) -> Self {
        self.set(v, image);
        self
    }

    pub fn get(&self, v: Variable) -> Option<&Word> {
        self.0.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Word)> {
        self.0.iter()
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut letters = Vec::new();
        for &v in w.letters() {
            match self.0.get(&v) {
                Some(image) => letters.extend_from_slice(image.letters()),
                None => letters.push(v),
            }
        }
        Word::from_letters(letters)
    }
}

impl FromIterator<(Variable, Word)> for WordSubstitution {
    fn from_iter<I: IntoIterator<Item = (Variable, Word)>>(iter: I) -> Self {
        WordSubstitution(iter.into_iter().collect())
    }
}

impl fmt::Display for WordSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, image) in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}=\"{image}\"")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomSetError {
    #[error("duplicate axiom label {0:?}")]
    DuplicateLabel(String),
    #[error("axiom {0} has no label")]
    Unlabelled(String),
}

/// A finite list of labelled identities with unique labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomSet {
    axioms: Vec<Identity>,
}

impl AxiomSet {
    pub fn new(axioms: Vec<Identity>) -> Result<Self, AxiomSetError> {
        let mut seen = BTreeSet::new();
        for ax in &axioms {
            let label = ax
                .label
                .clone()
                .ok_or_else(|| AxiomSetError::Unlabelled(ax.to_string()))?;
            if !seen.insert(label.clone()) {
                return Err(AxiomSetError::DuplicateLabel(label));
            }
        }
        Ok(AxiomSet { axioms })
    }

    pub fn axioms(&self) -> &[Identity] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&Identity> {
        self.axioms
            .iter()
            .find(|a| a.label.as_deref() == Some(label))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.axioms.iter().filter_map(|a| a.label.as_deref())
    }

    pub fn dualize(&self) -> AxiomSet {
        AxiomSet {
            axioms: self.axioms.iter().map(Identity::dualize).collect(),
        }
    }

    pub fn push(&mut self, ax: Identity) -> Result<(), AxiomSetError> {
        let label = ax
            .label
            .clone()
            .ok_or_else(|| AxiomSetError::Unlabelled(ax.to_string()))?;
        if self.get(&label).is_some() {
            return Err(AxiomSetError::DuplicateLabel(label));
        }
        self.axioms.push(ax);
        Ok(())
    }
}
