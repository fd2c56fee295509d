//! Validation of every catalog entry.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;

use crate::monoids::find_isomorphism;
use crate::satisfaction::{satisfies_with_budget, Verdict, DEFAULT_BUDGET};

use super::{Catalog, MonoidEntry, MonoidSource};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfcheckItem {
    pub entry: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelfcheckReport {
    pub items: Vec<SelfcheckItem>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SelfcheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}

impl fmt::Display for SelfcheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.items {
            let status = if i.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{status} {:<14} {:<22} {}", i.entry, i.check, i.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.items.len(), failed)
    }
}

fn item(entry: &str, check: &str, passed: bool, detail: impl Into<String>) -> SelfcheckItem {
    SelfcheckItem {
        entry: entry.to_string(),
        check: check.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn monoid_checks(e: &MonoidEntry) -> Vec<SelfcheckItem> {
    let m = &e.monoid;
    let mut out = Vec::new();
    if let Some(order) = e.stated_order {
        out.push(item(
            &e.name,
            "order",
            m.order() == order,
            format!("{} elements, stated {order}", m.order()),
        ));
    }
    if e.j_trivial {
        let zero = m.zero().map(|z| m.label(z).to_string());
        out.push(item(
            &e.name,
            "zero",
            zero.is_some(),
            zero.map_or("no zero".to_string(), |z| format!("zero {z}")),
        ));
    }
    let jt = m.is_j_trivial();
    out.push(item(
        &e.name,
        "j-trivial",
        jt == e.j_trivial,
        format!("J-trivial {jt}, stated {}", e.j_trivial),
    ));
    if jt {
        let ap = m.aperiodic_index();
        out.push(item(
            &e.name,
            "j-trivial=>aperiodic",
            ap.is_ok(),
            format!("{ap:?}"),
        ));
    }
    if let Some(p) = &e.presentation {
        let (passed, detail) = match p.close() {
            Ok(closed) => match find_isomorphism(&closed, m) {
                Some(_) => (
                    true,
                    format!(
                        "closure has {} elements, isomorphic to table",
                        closed.order()
                    ),
                ),
                None => (
                    false,
                    format!(
                        "closure has {} elements, not isomorphic to table",
                        closed.order()
                    ),
                ),
            },
            Err(err) => (false, err.to_string()),
        };
        out.push(item(&e.name, "presentation", passed, detail));
    }
    if let MonoidSource::Mirror(of) = &e.source {
        out.push(item(
            &e.name,
            "mirror",
            m.dual().dual() == *m,
            format!("mirror of {of} round-trips"),
        ));
    }
    out
}

impl Catalog {
    /// Runs every validation: orders, zeros, J-triviality, presentation and
    /// table agreement, mirror round-trips and stated satisfactions.
    pub fn selfcheck(&self) -> SelfcheckReport {
        let monoids: Vec<&MonoidEntry> = self.monoids().collect();
        let mut items: Vec<SelfcheckItem> = monoids
            .par_iter()
            .flat_map_iter(|e| monoid_checks(e))
            .collect();
        let expectations: Vec<SelfcheckItem> = self
            .expectations()
            .par_iter()
            .map(|x| {
                let check = if x.holds { "satisfies" } else { "fails" };
                let entry = match self.monoid(&x.monoid) {
                    Ok(entry) => entry,
                    Err(e) => return item(&x.monoid, check, false, e.to_string()),
                };
                let identities = match self.identities_for(&x.reference) {
                    Ok(ids) => ids,
                    Err(e) => return item(&x.monoid, check, false, e.to_string()),
                };
                let verdicts: Vec<_> = identities
                    .iter()
                    .map(|i| (i, satisfies_with_budget(&entry.monoid, i, DEFAULT_BUDGET)))
                    .collect();
                if let Some((i, v)) = verdicts.iter().find(|(_, v)| v.is_inconclusive()) {
                    return item(
                        &x.monoid,
                        check,
                        false,
                        format!("{} inconclusive: {v:?}", i.name()),
                    );
                }
                let failing = verdicts.iter().find(|(_, v)| v.fails());
                let (passed, detail) = match (x.holds, failing) {
                    (true, None) => (true, format!("{} holds", x.reference)),
                    (true, Some((i, Verdict::Fails(ce)))) => (
                        false,
                        format!("{} fails at {}", i.name(), ce.render(&entry.monoid)),
                    ),
                    (false, Some((i, Verdict::Fails(ce)))) => (
                        true,
                        format!("{} fails at {}", i.name(), ce.render(&entry.monoid)),
                    ),
                    (false, None) => (false, format!("{} holds", x.reference)),
                    _ => unreachable!("failing verdicts are Fails"),
                };
                item(&x.monoid, check, passed, detail)
            })
            .collect();
        items.extend(expectations);
        SelfcheckReport { items }
    }
}

/// Loads a catalog directory and checks it; a load failure is a failed item
/// naming the offending entry.
pub fn selfcheck_dir(dir: impl AsRef<Path>) -> SelfcheckReport {
    match Catalog::from_dir(dir) {
        Ok(c) => c.selfcheck(),
        Err(e) => SelfcheckReport {
            items: vec![item(
                e.entry().unwrap_or("catalog"),
                "load",
                false,
                e.to_string(),
            )],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_passes() {
        let report = Catalog::builtin().unwrap().selfcheck();
        assert!(report.passed(), "{report}");
    }
}
