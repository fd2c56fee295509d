//! Claim manifests: one decidable claim per line, evaluated in parallel and
//! reported in input order.
//!
//! ```text
//! budget 50000000
//! [id:] satisfies | fails | member | not-member  EXPR  REF | "u = v"
//! [id:] jtrivial | not-jtrivial  EXPR
//! [id:] aperiodic  EXPR  [n=K]
//! [id:] isoterm | not-isoterm  EXPR  "word"
//! [id:] iso | not-iso  EXPR vs EXPR
//! ```
//!
//! `REF` is `basis.NAME`, a named identity, a mirrored name `NAME~` or a
//! family reference. Text after `#` is a note. Claims without an id are named
//! `L<line>`.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::Catalog;
use crate::freeobject::{is_isoterm_in_join, IsotermVerdict, DEFAULT_STATE_CAP};
use crate::identities::{parse_identity, Identity};
use crate::monoids::{find_isomorphism, FiniteMonoid};
use crate::satisfaction::{satisfies_with_budget, Verdict, DEFAULT_BUDGET};
use crate::words::{parse_word, Word};

use super::expr::{MonoidExpr, Resolved};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl fmt::Display) -> ManifestError {
    ManifestError {
        line,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimKind {
    Satisfies,
    Fails,
    Member,
    NotMember,
    JTrivial,
    NotJTrivial,
    Aperiodic,
    Isoterm,
    NotIsoterm,
    Iso,
    NotIso,
}

impl ClaimKind {
    fn parse(s: &str) -> Option<ClaimKind> {
        Some(match s {
            "satisfies" => ClaimKind::Satisfies,
            "fails" => ClaimKind::Fails,
            "member" => ClaimKind::Member,
            "not-member" => ClaimKind::NotMember,
            "jtrivial" => ClaimKind::JTrivial,
            "not-jtrivial" => ClaimKind::NotJTrivial,
            "aperiodic" => ClaimKind::Aperiodic,
            "isoterm" => ClaimKind::Isoterm,
            "not-isoterm" => ClaimKind::NotIsoterm,
            "iso" => ClaimKind::Iso,
            "not-iso" => ClaimKind::NotIso,
            _ => return None,
        })
    }

    fn takes_identities(self) -> bool {
        matches!(
            self,
            ClaimKind::Satisfies | ClaimKind::Fails | ClaimKind::Member | ClaimKind::NotMember
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClaimObject {
    None,
    /// A catalog reference or quoted inline identity.
    Identities {
        reference: String,
        inline: Option<Identity>,
    },
    Word(Word),
    Monoid(MonoidExpr),
    Index(Option<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    pub line: usize,
    pub kind: ClaimKind,
    pub subject: MonoidExpr,
    pub object: ClaimObject,
    pub text: String,
    pub note: String,
    pub budget: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub claims: Vec<Claim>,
}

/// Splits off a `#` note outside double quotes.
fn split_note(line: &str) -> (&str, &str) {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return (&line[..i], line[i + 1..].trim()),
            _ => {}
        }
    }
    (line, "")
}

/// Splits `rest` at its last whitespace outside parentheses and brackets.
fn split_last_token(rest: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let mut cut = None;
    for (i, c) in rest.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c.is_whitespace() && depth == 0 => cut = Some(i),
            _ => {}
        }
    }
    let i = cut?;
    Some((rest[..i].trim(), rest[i..].trim()))
}

/// Splits a trailing `"..."` off `rest`.
fn split_quoted(rest: &str) -> Option<(&str, &str)> {
    let body = rest.strip_suffix('"')?;
    let open = body.rfind('"')?;
    Some((body[..open].trim(), &body[open + 1..]))
}

fn parse_budget(s: &str) -> Option<u64> {
    if let Ok(n) = s.replace('_', "").parse::<u64>() {
        return Some(n);
    }
    let (mantissa, exp) = s.split_once(['e', 'E'])?;
    let m: u64 = mantissa.parse().ok()?;
    let e: u32 = exp.parse().ok()?;
    m.checked_mul(10u64.checked_pow(e)?)
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let mut claims = Vec::new();
    let mut budget = DEFAULT_BUDGET;
    let mut ids = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let (body, note) = split_note(raw);
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(b) = body.strip_prefix("budget ") {
            budget = parse_budget(b.trim())
                .ok_or_else(|| err(line, format!("bad budget {:?}", b.trim())))?;
            continue;
        }
        let (first, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let (id, kind_text, rest) = match first.strip_suffix(':') {
            Some(id) => {
                let rest = rest.trim();
                let (k, r) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                (id.to_string(), k, r.trim())
            }
            None => (format!("L{line}"), first, rest.trim()),
        };
        if !ids.insert(id.clone()) {
            return Err(err(line, format!("duplicate claim id {id:?}")));
        }
        let kind = ClaimKind::parse(kind_text)
            .ok_or_else(|| err(line, format!("unknown claim kind {kind_text:?}")))?;
        let expr =
            |s: &str| MonoidExpr::parse(s).map_err(|e| err(line, format!("monoid {s:?}: {e}")));
        let (subject, object) = if kind.takes_identities() {
            if let Some((subject, quoted)) = split_quoted(rest) {
                let idy = parse_identity(quoted)
                    .map_err(|e| err(line, format!("identity {quoted:?}: {e}")))?;
                (
                    expr(subject)?,
                    ClaimObject::Identities {
                        reference: format!("\"{quoted}\""),
                        inline: Some(idy),
                    },
                )
            } else {
                let (subject, reference) = split_last_token(rest)
                    .ok_or_else(|| err(line, "expected a monoid and an identity reference"))?;
                (
                    expr(subject)?,
                    ClaimObject::Identities {
                        reference: reference.to_string(),
                        inline: None,
                    },
                )
            }
        } else {
            match kind {
                ClaimKind::Isoterm | ClaimKind::NotIsoterm => {
                    let (subject, quoted) = split_quoted(rest)
                        .ok_or_else(|| err(line, "expected a monoid and a quoted word"))?;
                    let word = parse_word(quoted)
                        .map_err(|e| err(line, format!("word {quoted:?}: {e}")))?;
                    (expr(subject)?, ClaimObject::Word(word))
                }
                ClaimKind::Iso | ClaimKind::NotIso => {
                    let (a, b) = rest
                        .split_once(" vs ")
                        .ok_or_else(|| err(line, "expected 'A vs B'"))?;
                    (expr(a.trim())?, ClaimObject::Monoid(expr(b.trim())?))
                }
                ClaimKind::Aperiodic => match split_last_token(rest) {
                    Some((subject, last)) if last.starts_with("n=") => {
                        let n = last[2..]
                            .parse()
                            .map_err(|_| err(line, format!("bad index {last:?}")))?;
                        (expr(subject)?, ClaimObject::Index(Some(n)))
                    }
                    _ => (expr(rest)?, ClaimObject::Index(None)),
                },
                _ => (expr(rest)?, ClaimObject::None),
            }
        };
        claims.push(Claim {
            id,
            line,
            kind,
            subject,
            object,
            text: format!("{kind_text} {rest}"),
            note: note.to_string(),
            budget,
        });
    }
    Ok(Manifest { claims })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClaimVerdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for ClaimVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimVerdict::Pass => "pass",
            ClaimVerdict::Fail => "fail",
            ClaimVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimResult {
    pub id: String,
    pub line: usize,
    pub text: String,
    pub verdict: ClaimVerdict,
    pub millis: u128,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ManifestReport {
    pub results: Vec<ClaimResult>,
}

impl ManifestReport {
    pub fn count(&self, v: ClaimVerdict) -> usize {
        self.results.iter().filter(|r| r.verdict == v).count()
    }

    /// 0 when every claim passes, 1 when one fails, 2 when none fails but
    /// some are inconclusive.
    pub fn exit_code(&self) -> i32 {
        if self.count(ClaimVerdict::Fail) > 0 {
            1
        } else if self.count(ClaimVerdict::Inconclusive) > 0 {
            2
        } else {
            0
        }
    }

    /// Machine-readable records `claim-id verdict millis detail`; without
    /// timings the millis column is `-`.
    pub fn records(&self, timings: bool) -> String {
        let mut out = String::new();
        for r in &self.results {
            let millis = if timings {
                r.millis.to_string()
            } else {
                "-".to_string()
            };
            out.push_str(&format!("{} {} {} {}\n", r.id, r.verdict, millis, r.detail));
        }
        out
    }
}

impl fmt::Display for ManifestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{:<12} {:<8} {}", r.verdict.to_string(), r.id, r.text)?;
            writeln!(f, "{:<12} {:<8} {}", "", "", r.detail)?;
        }
        write!(
            f,
            "{} claims: {} passed, {} failed, {} inconclusive",
            self.results.len(),
            self.count(ClaimVerdict::Pass),
            self.count(ClaimVerdict::Fail),
            self.count(ClaimVerdict::Inconclusive)
        )
    }
}

/// A claim with every reference resolved.
struct Prepared<'a> {
    claim: &'a Claim,
    subject: Resolved,
    identities: Vec<Identity>,
    other: Option<Resolved>,
}

enum Search {
    Fails {
        identity: String,
        factor: String,
        detail: String,
    },
    Inconclusive {
        identity: String,
        factor: String,
        products: u64,
    },
    Holds,
}

/// Looks for a failing identity in some factor; the first failure in
/// identity-then-factor order wins.
fn search_failure(subject: &Resolved, identities: &[Identity], budget: u64) -> Search {
    let mut inconclusive = None;
    for i in identities {
        for (name, m) in &subject.factors {
            match satisfies_with_budget(m, i, budget) {
                Verdict::Holds => {}
                Verdict::Fails(ce) => {
                    return Search::Fails {
                        identity: i.name(),
                        factor: name.clone(),
                        detail: ce.render(m),
                    }
                }
                Verdict::Inconclusive { products } => {
                    if inconclusive.is_none() {
                        inconclusive = Some(Search::Inconclusive {
                            identity: i.name(),
                            factor: name.clone(),
                            products,
                        });
                    }
                }
            }
        }
    }
    inconclusive.unwrap_or(Search::Holds)
}

fn j_status(m: &FiniteMonoid) -> bool {
    m.is_j_trivial()
}

fn evaluate(p: &Prepared<'_>, budget: u64) -> (ClaimVerdict, String) {
    use ClaimVerdict::*;
    let c = p.claim;
    match c.kind {
        ClaimKind::Satisfies | ClaimKind::Member | ClaimKind::Fails | ClaimKind::NotMember => {
            let positive = matches!(c.kind, ClaimKind::Satisfies | ClaimKind::Member);
            let reference = match &c.object {
                ClaimObject::Identities { reference, .. } => reference.as_str(),
                _ => unreachable!("identity claims carry identities"),
            };
            match (positive, search_failure(&p.subject, &p.identities, budget)) {
                (true, Search::Holds) => (Pass, format!("{reference} holds ({} identities)", p.identities.len())),
                (false, Search::Holds) => (Fail, format!("{reference} holds ({} identities)", p.identities.len())),
                (_, Search::Fails { identity, factor, detail }) => {
                    let v = if positive { Fail } else { Pass };
                    (v, format!("{identity} fails in {factor} at {detail}"))
                }
                (_, Search::Inconclusive { identity, factor, products }) => (
                    Inconclusive,
                    format!("{identity} in {factor}: budget {budget} exhausted after {products} products"),
                ),
            }
        }
        ClaimKind::JTrivial | ClaimKind::NotJTrivial => {
            let bad = p.subject.factors.iter().find(|(_, m)| !j_status(m));
            let jt = bad.is_none();
            let want = c.kind == ClaimKind::JTrivial;
            let detail = match bad {
                None => "J-trivial".to_string(),
                Some((name, _)) => format!("not J-trivial: factor {name}"),
            };
            (if jt == want { Pass } else { Fail }, detail)
        }
        ClaimKind::Aperiodic => {
            let n = match c.object {
                ClaimObject::Index(n) => n,
                _ => None,
            };
            let mut index = 0;
            for (name, m) in &p.subject.factors {
                match m.aperiodic_index() {
                    Ok(i) => index = index.max(i),
                    Err(_) => return (Fail, format!("factor {name} has a nontrivial subgroup")),
                }
            }
            match n {
                Some(n) if index > n => (
                    Fail,
                    format!("least aperiodicity index {index} exceeds {n}"),
                ),
                _ => (Pass, format!("least aperiodicity index {index}")),
            }
        }
        ClaimKind::Isoterm | ClaimKind::NotIsoterm => {
            let word = match &c.object {
                ClaimObject::Word(w) => w,
                _ => unreachable!("isoterm claims carry a word"),
            };
            let factors: Vec<FiniteMonoid> =
                p.subject.factors.iter().map(|(_, m)| m.clone()).collect();
            let want = c.kind == ClaimKind::Isoterm;
            match is_isoterm_in_join(&factors, word, DEFAULT_STATE_CAP) {
                IsotermVerdict::Isoterm => (
                    if want { Pass } else { Fail },
                    format!("{word} is an isoterm"),
                ),
                IsotermVerdict::NotIsoterm { witness } => (
                    if want { Fail } else { Pass },
                    format!("{word} = {witness} holds"),
                ),
                IsotermVerdict::Inconclusive(e) => (Inconclusive, e.to_string()),
            }
        }
        ClaimKind::Iso | ClaimKind::NotIso => {
            let a = p.subject.monoid();
            let b = p
                .other
                .as_ref()
                .expect("iso claims carry a monoid")
                .monoid();
            let found = find_isomorphism(&a, &b);
            let want = c.kind == ClaimKind::Iso;
            let detail = match &found {
                Some(f) => {
                    let parts: Vec<String> = f
                        .iter()
                        .enumerate()
                        .map(|(x, y)| format!("{}->{}", a.label(x), b.label(*y)))
                        .collect();
                    format!("isomorphic via {}", parts.join(" "))
                }
                None => format!("not isomorphic (orders {} and {})", a.order(), b.order()),
            };
            (if found.is_some() == want { Pass } else { Fail }, detail)
        }
    }
}

impl Manifest {
    /// Resolves every reference; the first failure names its line.
    fn prepare<'a>(&'a self, catalog: &Catalog) -> Result<Vec<Prepared<'a>>, ManifestError> {
        self.claims
            .iter()
            .map(|c| {
                let subject = c.subject.resolve(catalog).map_err(|e| err(c.line, e))?;
                let identities = match &c.object {
                    ClaimObject::Identities {
                        inline: Some(i),
                        reference,
                    } => vec![i.clone().with_label(reference.clone())],
                    ClaimObject::Identities {
                        reference,
                        inline: None,
                    } => catalog
                        .identities_for(reference)
                        .map_err(|e| err(c.line, e))?,
                    _ => Vec::new(),
                };
                let other = match &c.object {
                    ClaimObject::Monoid(e) => Some(e.resolve(catalog).map_err(|e| err(c.line, e))?),
                    _ => None,
                };
                Ok(Prepared {
                    claim: c,
                    subject,
                    identities,
                    other,
                })
            })
            .collect()
    }

    /// Evaluates all claims on `jobs` worker threads (0 means rayon's
    /// default). A given `budget` overrides per-claim budgets.
    pub fn run(
        &self,
        catalog: &Catalog,
        jobs: usize,
        budget: Option<u64>,
    ) -> Result<ManifestReport, ManifestError> {
        let prepared = self.prepare(catalog)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| err(0, e))?;
        let results = pool.install(|| {
            prepared
                .par_iter()
                .map(|p| {
                    let start = Instant::now();
                    let (verdict, detail) = evaluate(p, budget.unwrap_or(p.claim.budget));
                    ClaimResult {
                        id: p.claim.id.clone(),
                        line: p.claim.line,
                        text: p.claim.text.clone(),
                        verdict,
                        millis: start.elapsed().as_millis(),
                        detail,
                    }
                })
                .collect()
        });
        Ok(ManifestReport { results })
    }
}

/// Parses and runs manifest text.
pub fn run_manifest(
    text: &str,
    catalog: &Catalog,
    jobs: usize,
    budget: Option<u64>,
) -> Result<ManifestReport, ManifestError> {
    parse_manifest(text)?.run(catalog, jobs, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> ManifestReport {
        run_manifest(text, &Catalog::builtin().unwrap(), 2, None).unwrap()
    }

    #[test]
    fn empty_manifest_passes() {
        let r = run("# nothing\n\n");
        assert!(r.results.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn parses_claim_shapes() {
        let m = parse_manifest(
            "budget 1e6\n\
             a0: fails A0 \"x^2 y^2 = y^2 x^2\"  # a note\n\
             member A0 x Q basis.H2\n\
             aperiodic rees(x h x) n=2\n\
             isoterm rees(x y) \"x y\"\n\
             iso K/~ vs quotient(K, classes=[[ba,ba2],[ea,ea2]])\n",
        )
        .unwrap();
        assert_eq!(m.claims.len(), 5);
        assert_eq!(m.claims[0].id, "a0");
        assert_eq!(m.claims[0].note, "a note");
        assert_eq!(m.claims[0].budget, 1_000_000);
        assert_eq!(m.claims[1].id, "L3");
        assert_eq!(m.claims[1].subject.to_string(), "A0 x Q");
        assert_eq!(m.claims[2].object, ClaimObject::Index(Some(2)));
    }

    #[test]
    fn reports_errors_with_line() {
        let e = parse_manifest("satisfies A0 basis.A0\nfrobnicate A0\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = run_manifest(
            "satisfies A0 basis.A0\nsatisfies A1 basis.A0\n",
            &Catalog::builtin().unwrap(),
            1,
            None,
        )
        .unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("A0"), "{e}");
        assert!(parse_manifest("x: jtrivial A0\nx: jtrivial Q\n").is_err());
    }

    #[test]
    fn verdicts_and_exit_codes() {
        let r = run(
            "satisfies A0 middle-delete\nfails Q middle-delete\njtrivial A0 x Q\nnot-jtrivial B\n",
        );
        assert_eq!(r.exit_code(), 0, "{r}");
        let r = run("satisfies A0 square-commute\n");
        assert_eq!(r.exit_code(), 1);
        assert!(
            r.results[0]
                .detail
                .starts_with("square-commute fails in A0 at"),
            "{}",
            r.results[0].detail
        );
        let r = run("budget 1\nsatisfies K basis.H\n");
        assert_eq!(r.exit_code(), 2, "{r}");
    }

    #[test]
    fn products_name_the_failing_factor() {
        let r = run("fails Q x A0 square-commute\n");
        assert_eq!(r.results[0].verdict, ClaimVerdict::Pass);
        assert!(
            r.results[0].detail.contains("in A0"),
            "{}",
            r.results[0].detail
        );
    }

    #[test]
    fn records_are_stable() {
        let text = "satisfies A0 basis.A0\nfails A0 square-commute\nisoterm rees(x y) \"x y\"\n";
        let cat = Catalog::builtin().unwrap();
        let a = run_manifest(text, &cat, 1, None).unwrap().records(false);
        let b = run_manifest(text, &cat, 4, None).unwrap().records(false);
        assert_eq!(a, b);
        assert!(a.lines().all(|l| l.split(' ').nth(2) == Some("-")));
    }
}
