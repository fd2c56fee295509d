//! Proof scripts: an axiom list plus a chain of words, each step justified by
//! one axiom.
//!
//! ```text
//! axioms:
//!   L: x^2 h x = x h x
//!   s: x^3 = x
//! chain:
//!   x y h x y
//!   -> (x y)^2 h x y   by L
//!   -> (y x)^2 h x y   by c_2   via a="1" b="h x y" phi: x="x" y="y"
//! ```
//!
//! Labels not declared under `axioms:` may name family instances (`a_2`,
//! `c_2`, `R_7`, `I_2_1`). A `via` clause is checked as given, never searched.

use rayon::prelude::*;
use thiserror::Error;

use crate::words::{parse_word, Variable, Word, WordParseError};

use super::family::{family_identity, FamilySpec};
use super::matching::{
    directly_deducible, verify_witness, Deducibility, DeductionWitness, DEFAULT_NODE_BUDGET,
};
use super::{
    parse_identity, AxiomSet, AxiomSetError, Identity, IdentityParseError, WordSubstitution,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: bad word: {source}")]
    Word { line: usize, source: WordParseError },
    #[error("line {line}: bad identity: {source}")]
    Identity {
        line: usize,
        source: IdentityParseError,
    },
    #[error("line {line}: {source}")]
    Axioms { line: usize, source: AxiomSetError },
    #[error("line {line}: unknown axiom label {label:?}")]
    UnknownAxiom { line: usize, label: String },
    #[error("the chain is empty")]
    EmptyChain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepJustification {
    pub label: String,
    /// Explicit `(a, b, φ)`; orientation is inferred.
    pub via: Option<(Word, Word, WordSubstitution)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub justification: StepJustification,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub axioms: AxiomSet,
    pub chain: Vec<Word>,
    pub steps: Vec<ProofStep>,
    /// Resolved axioms, including family instances named in `by`.
    resolved: Vec<Identity>,
}

impl ProofScript {
    pub fn new(
        axioms: AxiomSet,
        chain: Vec<Word>,
        steps: Vec<StepJustification>,
    ) -> Result<Self, ProofError> {
        if chain.is_empty() {
            return Err(ProofError::EmptyChain);
        }
        if steps.len() + 1 != chain.len() {
            return Err(ProofError::Syntax {
                line: 0,
                message: format!(
                    "{} words need {} justifications",
                    chain.len(),
                    chain.len() - 1
                ),
            });
        }
        let mut resolved = Vec::new();
        let mut out = Vec::new();
        for (i, j) in steps.into_iter().enumerate() {
            resolved.push(resolve_label(&axioms, &j.label, i + 1)?);
            out.push(ProofStep {
                justification: j,
                line: 0,
            });
        }
        Ok(ProofScript {
            axioms,
            chain,
            steps: out,
            resolved,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ProofError> {
        parse_script(text)
    }

    pub fn first(&self) -> &Word {
        &self.chain[0]
    }

    pub fn last(&self) -> &Word {
        self.chain.last().expect("nonempty chain")
    }

    /// The identity proved by the chain.
    pub fn conclusion(&self) -> Identity {
        Identity::new(self.first().clone(), self.last().clone())
    }

    /// The axiom used at step `i` (zero-based).
    pub fn step_axiom(&self, i: usize) -> &Identity {
        &self.resolved[i]
    }

    /// Distinct axioms actually used, in first-use order.
    pub fn used_axioms(&self) -> Vec<Identity> {
        let mut out: Vec<Identity> = Vec::new();
        for ax in &self.resolved {
            if !out.iter().any(|a| a.label == ax.label) {
                out.push(ax.clone());
            }
        }
        out
    }
}

fn resolve_label(axioms: &AxiomSet, label: &str, line: usize) -> Result<Identity, ProofError> {
    if let Some(ax) = axioms.get(label) {
        return Ok(ax.clone());
    }
    FamilySpec::parse_ref(label)
        .and_then(|spec| family_identity(&spec).ok())
        .ok_or_else(|| ProofError::UnknownAxiom {
            line,
            label: label.to_string(),
        })
}

fn parse_script(text: &str) -> Result<ProofScript, ProofError> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Axioms,
        Chain,
    }
    let mut section = Section::None;
    let mut axioms = AxiomSet::default();
    let mut chain = Vec::new();
    let mut steps = Vec::new();
    let mut resolved = Vec::new();
    let mut pending = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match content {
            "axioms:" => {
                section = Section::Axioms;
                continue;
            }
            "chain:" => {
                section = Section::Chain;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None => {
                return Err(ProofError::Syntax {
                    line,
                    message: "expected 'axioms:' or 'chain:'".into(),
                })
            }
            Section::Axioms => {
                let (label, body) = content.split_once(':').ok_or_else(|| ProofError::Syntax {
                    line,
                    message: "axiom lines look like 'label: u = v'".into(),
                })?;
                let idy = parse_identity(body)
                    .map_err(|source| ProofError::Identity { line, source })?
                    .with_label(label.trim());
                axioms
                    .push(idy)
                    .map_err(|source| ProofError::Axioms { line, source })?;
            }
            Section::Chain => {
                if let Some(rest) = content.strip_prefix("->") {
                    if chain.is_empty() {
                        return Err(ProofError::Syntax {
                            line,
                            message: "a step needs a starting word".into(),
                        });
                    }
                    let (word_text, just) =
                        rest.split_once(" by ").ok_or_else(|| ProofError::Syntax {
                            line,
                            message: "steps look like '-> word by LABEL'".into(),
                        })?;
                    let word = parse_word(word_text)
                        .map_err(|source| ProofError::Word { line, source })?;
                    let justification = parse_justification(just.trim(), line)?;
                    pending.push((justification.label.clone(), line));
                    chain.push(word);
                    steps.push(ProofStep {
                        justification,
                        line,
                    });
                } else {
                    if !chain.is_empty() {
                        return Err(ProofError::Syntax {
                            line,
                            message: "only the first chain line may omit '->'".into(),
                        });
                    }
                    chain.push(
                        parse_word(content).map_err(|source| ProofError::Word { line, source })?,
                    );
                }
            }
        }
    }
    if chain.is_empty() {
        return Err(ProofError::EmptyChain);
    }
    for (label, line) in pending {
        resolved.push(resolve_label(&axioms, &label, line)?);
    }
    Ok(ProofScript {
        axioms,
        chain,
        steps,
        resolved,
    })
}

fn parse_justification(text: &str, line: usize) -> Result<StepJustification, ProofError> {
    let (label, via) = match text.split_once(" via ") {
        Some((l, v)) => (l.trim(), Some(v.trim())),
        None => (text, None),
    };
    if label.is_empty() || label.contains(char::is_whitespace) {
        return Err(ProofError::Syntax {
            line,
            message: format!("bad axiom label {label:?}"),
        });
    }
    let via = match via {
        None => None,
        Some(v) => Some(parse_via(v, line)?),
    };
    Ok(StepJustification {
        label: label.to_string(),
        via,
    })
}

/// Parses `a="..." b="..." phi: x="..." y="..."`.
fn parse_via(text: &str, line: usize) -> Result<(Word, Word, WordSubstitution), ProofError> {
    let syntax = |m: &str| ProofError::Syntax {
        line,
        message: m.to_string(),
    };
    let (ctx, phi_text) = match text.split_once("phi:") {
        Some((c, p)) => (c, p),
        None => (text, ""),
    };
    let mut prefix = Word::empty();
    let mut suffix = Word::empty();
    for (key, value) in key_values(ctx).ok_or_else(|| syntax("malformed via clause"))? {
        let word = parse_word(&value).map_err(|source| ProofError::Word { line, source })?;
        match key.as_str() {
            "a" => prefix = word,
            "b" => suffix = word,
            _ => return Err(syntax("via takes a=\"..\" and b=\"..\" before phi:")),
        }
    }
    let mut phi = WordSubstitution::new();
    for (key, value) in key_values(phi_text).ok_or_else(|| syntax("malformed phi assignment"))? {
        let v: Variable = key
            .parse()
            .map_err(|source| ProofError::Word { line, source })?;
        let word = parse_word(&value).map_err(|source| ProofError::Word { line, source })?;
        phi.set(v, word);
    }
    Ok((prefix, suffix, phi))
}

fn key_values(text: &str) -> Option<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (key, after) = rest.split_once('=')?;
        let after = after.trim_start().strip_prefix('"')?;
        let (value, tail) = after.split_once('"')?;
        out.push((key.trim().to_string(), value.to_string()));
        rest = tail.trim_start();
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepVerdict {
    Verified(DeductionWitness),
    /// The explicit `via` witness does not reproduce the two words.
    WitnessRejected,
    NotDeducible,
    Inconclusive {
        nodes: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub index: usize,
    pub line: usize,
    pub from: Word,
    pub to: Word,
    pub label: String,
    pub verdict: StepVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub steps: Vec<StepReport>,
    /// Pairs `(i, j)`, `i < j`, with equal chain words.
    pub repeated: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
    pub valid: bool,
}

impl ProofReport {
    pub fn first_failure(&self) -> Option<&StepReport> {
        self.steps
            .iter()
            .find(|s| !matches!(s.verdict, StepVerdict::Verified(_)))
    }

    pub fn inconclusive(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(s.verdict, StepVerdict::Inconclusive { .. }))
    }
}

/// Verifies every step. With `lax`, repeated non-adjacent words become
/// warnings; adjacent repeats are always errors.
pub fn verify_proof_script(ps: &ProofScript, lax: bool) -> ProofReport {
    verify_with_budget(ps, lax, DEFAULT_NODE_BUDGET)
}

pub fn verify_with_budget(ps: &ProofScript, lax: bool, budget: u64) -> ProofReport {
    let steps: Vec<StepReport> = (0..ps.steps.len())
        .into_par_iter()
        .map(|i| {
            let from = &ps.chain[i];
            let to = &ps.chain[i + 1];
            let ax = &ps.resolved[i];
            let step = &ps.steps[i];
            let verdict = match &step.justification.via {
                Some((a, b, phi)) => check_via(from, to, ax, a, b, phi),
                None => match directly_deducible(from, to, ax, budget) {
                    Deducibility::Deducible(w) => StepVerdict::Verified(w),
                    Deducibility::NotDeducible => StepVerdict::NotDeducible,
                    Deducibility::Inconclusive { nodes } => StepVerdict::Inconclusive { nodes },
                },
            };
            StepReport {
                index: i + 1,
                line: step.line,
                from: from.clone(),
                to: to.clone(),
                label: step.justification.label.clone(),
                verdict,
            }
        })
        .collect();

    let mut repeated = Vec::new();
    for i in 0..ps.chain.len() {
        for j in i + 1..ps.chain.len() {
            if ps.chain[i] == ps.chain[j] {
                repeated.push((i, j));
            }
        }
    }
    let mut warnings = Vec::new();
    let mut distinct_ok = true;
    for &(i, j) in &repeated {
        let msg = format!("chain words {i} and {j} coincide: {}", ps.chain[i]);
        if lax && j > i + 1 {
            warnings.push(msg);
        } else {
            distinct_ok = false;
            warnings.push(msg);
        }
    }
    let valid = distinct_ok
        && steps
            .iter()
            .all(|s| matches!(s.verdict, StepVerdict::Verified(_)));
    ProofReport {
        steps,
        repeated,
        warnings,
        valid,
    }
}

fn check_via(
    u: &Word,
    v: &Word,
    ax: &Identity,
    a: &Word,
    b: &Word,
    phi: &WordSubstitution,
) -> StepVerdict {
    for reversed in [false, true] {
        let wit = DeductionWitness {
            prefix: a.clone(),
            suffix: b.clone(),
            phi: phi.clone(),
            reversed,
        };
        if verify_witness(u, v, ax, &wit) {
            return StepVerdict::Verified(wit);
        }
    }
    StepVerdict::WitnessRejected
}
