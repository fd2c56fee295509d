//! Shipped proof scripts and manifests: validity and identity coverage.

use std::fs;
use std::path::PathBuf;

use varcross::catalog::Catalog;
use varcross::harness::{family_names_of, parse_manifest, run_manifest, run_proof, ClaimObject};
use varcross::identities::ProofScript;
use varcross::Identity;

fn data(sub: &str, ext: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(sub);
    let mut out: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .map(|p| (p.display().to_string(), fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

/// Exactly one catalog name, not counting mirror matches, or one family member.
fn single_name(cat: &Catalog, idy: &Identity) -> Result<String, String> {
    let direct: Vec<String> = cat
        .names_of(idy)
        .into_iter()
        .filter(|n| !n.ends_with('~'))
        .collect();
    let mut names = direct;
    names.extend(family_names_of(idy));
    match names.as_slice() {
        [one] => Ok(one.clone()),
        _ => Err(format!("{idy} has names {names:?}")),
    }
}

#[test]
fn shipped_proofs_verify() {
    let cat = Catalog::builtin().unwrap();
    let proofs = data("proofs", "proof");
    assert!(proofs.len() >= 10);
    for (path, text) in proofs {
        let run = run_proof(&text, false, Some(&cat)).unwrap();
        assert!(run.report.valid, "{path}\n{run}");
    }
}

#[test]
fn shipped_manifests_pass() {
    let cat = Catalog::builtin().unwrap();
    for (path, text) in data("manifests", "manifest") {
        let report = run_manifest(&text, &cat, 0, None).unwrap();
        assert_eq!(report.exit_code(), 0, "{path}\n{report}");
    }
}

#[test]
fn proof_axioms_are_catalog_identities() {
    let cat = Catalog::builtin().unwrap();
    for (path, text) in data("proofs", "proof") {
        let ps = ProofScript::parse(&text).unwrap();
        for ax in ps.axioms.axioms() {
            let label = ax.label.clone().unwrap();
            let name = single_name(&cat, ax).unwrap_or_else(|e| panic!("{path}: {e}"));
            assert_eq!(
                name, label,
                "{path}: axiom {label} is catalog identity {name}"
            );
        }
    }
}

#[test]
fn inline_manifest_identities_are_catalog_identities() {
    let cat = Catalog::builtin().unwrap();
    let mut seen = 0;
    for (path, text) in data("manifests", "manifest") {
        for claim in parse_manifest(&text).unwrap().claims {
            if let ClaimObject::Identities {
                inline: Some(idy), ..
            } = &claim.object
            {
                single_name(&cat, idy)
                    .unwrap_or_else(|e| panic!("{path} line {}: {e}", claim.line));
                seen += 1;
            }
        }
    }
    assert!(seen >= 10, "only {seen} inline identities");
}
