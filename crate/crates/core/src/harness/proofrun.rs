//! Running proof scripts and rendering per-step witnesses.

use std::fmt;

use thiserror::Error;

use crate::catalog::Catalog;
use crate::identities::{
    family_identity, verify_proof_script, FamilySpec, Identity, ProofError, ProofReport,
    ProofScript, StepVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ProofRunError(#[from] pub ProofError);

#[derive(Debug, Clone)]
pub struct ProofRun {
    pub script: ProofScript,
    pub report: ProofReport,
    /// Catalog names of the proved identity, when a catalog was given.
    pub conclusion_names: Vec<String>,
}

impl ProofRun {
    pub fn conclusion(&self) -> Identity {
        self.script.conclusion()
    }

    /// 0 valid, 1 invalid, 2 a step ran out of budget.
    pub fn exit_code(&self) -> i32 {
        if self.report.valid {
            0
        } else if self.report.inconclusive() {
            2
        } else {
            1
        }
    }
}

/// Small family members (`a_n`, `c_n`, `R_m`) equal to `idy` as a pair of words.
pub fn family_names_of(idy: &Identity) -> Vec<String> {
    let refs = (0..=8)
        .map(|n| format!("a_{n}"))
        .chain((1..=8).map(|n| format!("c_{n}")))
        .chain((2..=9).map(|m| format!("R_{m}")));
    refs.filter(|r| {
        FamilySpec::parse_ref(r)
            .and_then(|spec| family_identity(&spec).ok())
            .is_some_and(|f| f.same_pair(idy))
    })
    .collect()
}

/// Parses and verifies a proof script. With `lax`, repeated non-adjacent
/// chain words are warnings rather than errors.
pub fn run_proof(
    text: &str,
    lax: bool,
    catalog: Option<&Catalog>,
) -> Result<ProofRun, ProofRunError> {
    let script = ProofScript::parse(text)?;
    let report = verify_proof_script(&script, lax);
    let conclusion = script.conclusion();
    let mut conclusion_names = catalog.map(|c| c.names_of(&conclusion)).unwrap_or_default();
    conclusion_names.extend(family_names_of(&conclusion));
    Ok(ProofRun {
        script,
        report,
        conclusion_names,
    })
}

impl fmt::Display for ProofRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.report.steps {
            let (status, detail) = match &s.verdict {
                StepVerdict::Verified(wit) => {
                    let side = if wit.reversed { "rhs->lhs" } else { "lhs->rhs" };
                    (
                        "ok  ",
                        format!(
                            "{side} a=\"{}\" b=\"{}\" {}",
                            wit.prefix, wit.suffix, wit.phi
                        ),
                    )
                }
                StepVerdict::WitnessRejected => (
                    "FAIL",
                    "given witness does not reproduce the step".to_string(),
                ),
                StepVerdict::NotDeducible => ("FAIL", "not directly deducible".to_string()),
                StepVerdict::Inconclusive { nodes } => (
                    "????",
                    format!("search budget exhausted after {nodes} nodes"),
                ),
            };
            writeln!(
                f,
                "{status} step {} (line {}) {} -> {} by {}: {detail}",
                s.index, s.line, s.from, s.to, s.label
            )?;
        }
        for (i, j) in &self.report.repeated {
            writeln!(f, "repeat chain words {i} and {j} are equal")?;
        }
        for w in &self.report.warnings {
            writeln!(f, "warning {w}")?;
        }
        let verdict = if self.report.valid {
            "valid"
        } else if self.report.inconclusive() {
            "inconclusive"
        } else {
            "invalid"
        };
        write!(f, "{verdict}: {}", self.conclusion())?;
        if !self.conclusion_names.is_empty() {
            write!(f, " ({})", self.conclusion_names.join(", "))?;
        }
        Ok(())
    }
}
