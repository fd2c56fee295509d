//! Named monoids, named identities and identity bases, loaded from data files.
//!
//! The shipped catalog is embedded at compile time; [`Catalog::from_dir`]
//! loads the same layout from disk:
//!
//! ```text
//! catalog.toml        monoid entries, citations, stated satisfactions
//! identities.list     `name: lhs = rhs`, one per line
//! bases/NAME.basis    one identity reference or `label: lhs = rhs` per line
//! monoids/*.table     multiplication tables
//! monoids/*.pres      presentations closed for cross-validation
//! ```

mod selfcheck;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use include_dir::{include_dir, Dir};
use serde::Deserialize;
use thiserror::Error;

use crate::identities::{
    family_identity, parse_identity, AxiomSet, AxiomSetError, FamilyError, FamilySpec, Identity,
    IdentityParseError,
};
use crate::monoids::{
    parse_presentation, rees_quotient, FiniteMonoid, MonoidError, Presentation, PresentationError,
};
use crate::words::{parse_word, Word, WordParseError};

pub use selfcheck::{selfcheck_dir, SelfcheckItem, SelfcheckReport};

static BUILTIN: Dir<'_> = include_dir!("$CARGO_MANIFEST_DIR/catalog");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown name {name:?}{}", suggestion_text(.suggestions))]
    Unknown {
        name: String,
        suggestions: Vec<String>,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("catalog.toml: {0}")]
    Toml(String),
    #[error("{entry}: {source}")]
    Monoid { entry: String, source: MonoidError },
    #[error("{entry}: presentation: {source}")]
    Presentation {
        entry: String,
        source: PresentationError,
    },
    #[error("{file} line {line}: {source}")]
    IdentityLine {
        file: String,
        line: usize,
        source: IdentityParseError,
    },
    #[error("{entry}: {message}")]
    Entry { entry: String, message: String },
    #[error("{entry}: rees word: {source}")]
    ReesWord {
        entry: String,
        source: WordParseError,
    },
    #[error("{name}: {source}")]
    Family { name: String, source: FamilyError },
    #[error("{entry}: {source}")]
    Axioms {
        entry: String,
        source: AxiomSetError,
    },
}

fn suggestion_text(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", s.join(", "))
    }
}

impl CatalogError {
    /// Name of the catalog entry the error belongs to, when there is one.
    pub fn entry(&self) -> Option<&str> {
        match self {
            CatalogError::Monoid { entry, .. }
            | CatalogError::Presentation { entry, .. }
            | CatalogError::Entry { entry, .. }
            | CatalogError::ReesWord { entry, .. }
            | CatalogError::Axioms { entry, .. } => Some(entry),
            CatalogError::IdentityLine { file, .. } => Some(file),
            CatalogError::Family { name, .. } => Some(name),
            CatalogError::Unknown { name, .. } => Some(name),
            CatalogError::Io { path, .. } => Some(path),
            CatalogError::Toml(_) => None,
        }
    }
}

/// How a monoid entry is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidSource {
    Table(String),
    Rees(Vec<Word>),
    Quotient {
        of: String,
        classes: Vec<Vec<String>>,
    },
    Cyclic(usize),
    Mirror(String),
}

#[derive(Debug, Clone)]
pub struct MonoidEntry {
    pub name: String,
    pub monoid: FiniteMonoid,
    pub source: MonoidSource,
    pub presentation: Option<Presentation>,
    pub stated_order: Option<usize>,
    pub j_trivial: bool,
    pub self_dual: bool,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct BasisEntry {
    pub name: String,
    pub axioms: AxiomSet,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Citation {
    pub name: String,
    pub note: String,
}

/// A stated satisfaction or failure checked by the self-check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub monoid: String,
    pub reference: String,
    pub holds: bool,
}

/// Result of [`Catalog::lookup`].
#[derive(Debug, Clone)]
pub enum CatalogEntry<'a> {
    Monoid(&'a MonoidEntry),
    Basis(&'a BasisEntry),
    Identity(Identity),
}

#[derive(Debug, Clone)]
pub struct Catalog {
    monoids: BTreeMap<String, MonoidEntry>,
    identities: Vec<Identity>,
    bases: BTreeMap<String, BasisEntry>,
    citations: Vec<Citation>,
    expectations: Vec<Expectation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TomlCatalog {
    #[serde(default)]
    monoid: Vec<TomlMonoid>,
    #[serde(default)]
    citation: Vec<TomlCitation>,
    #[serde(default)]
    expect: Vec<TomlExpect>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TomlMonoid {
    name: String,
    table: Option<String>,
    presentation: Option<String>,
    rees: Option<Vec<String>>,
    quotient_of: Option<String>,
    classes: Option<Vec<Vec<String>>>,
    cyclic: Option<usize>,
    order: Option<usize>,
    j_trivial: bool,
    self_dual: bool,
    #[serde(default)]
    note: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TomlCitation {
    name: String,
    note: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TomlExpect {
    monoid: String,
    #[serde(default)]
    holds: Vec<String>,
    #[serde(default)]
    fails: Vec<String>,
}

enum Source<'a> {
    Embedded(&'a Dir<'a>),
    Disk(PathBuf),
}

impl Source<'_> {
    fn read(&self, path: &str) -> Result<String, CatalogError> {
        let io = |message: String| CatalogError::Io {
            path: path.to_string(),
            message,
        };
        match self {
            Source::Embedded(dir) => dir
                .get_file(path)
                .and_then(|f| f.contents_utf8())
                .map(str::to_string)
                .ok_or_else(|| io("not in the embedded catalog".to_string())),
            Source::Disk(root) => {
                fs::read_to_string(root.join(path)).map_err(|e| io(e.to_string()))
            }
        }
    }

    /// Sorted file names in a subdirectory with the given extension.
    fn list(&self, sub: &str, ext: &str) -> Result<Vec<String>, CatalogError> {
        let mut names: Vec<String> = match self {
            Source::Embedded(dir) => dir
                .get_dir(sub)
                .map(|d| {
                    d.files()
                        .filter_map(|f| f.path().file_name()?.to_str().map(str::to_string))
                        .collect()
                })
                .unwrap_or_default(),
            Source::Disk(root) => {
                let path = root.join(sub);
                match fs::read_dir(&path) {
                    Ok(entries) => entries
                        .filter_map(|e| e.ok()?.file_name().to_str().map(str::to_string))
                        .collect(),
                    Err(_) => Vec::new(),
                }
            }
        };
        names.retain(|n| n.ends_with(ext));
        names.sort();
        Ok(names)
    }
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn builtin() -> Result<Catalog, CatalogError> {
        Catalog::load(Source::Embedded(&BUILTIN))
    }

    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
        Catalog::load(Source::Disk(dir.as_ref().to_path_buf()))
    }

    fn load(src: Source<'_>) -> Result<Catalog, CatalogError> {
        let identities = parse_identity_list(&src.read("identities.list")?, "identities.list")?;
        let mut cat = Catalog {
            monoids: BTreeMap::new(),
            identities,
            bases: BTreeMap::new(),
            citations: Vec::new(),
            expectations: Vec::new(),
        };
        for file in src.list("bases", ".basis")? {
            let name = file.trim_end_matches(".basis").to_string();
            let text = src.read(&format!("bases/{file}"))?;
            let (axioms, note) = cat.parse_basis_with_note(&text, &name)?;
            cat.bases
                .insert(name.clone(), BasisEntry { name, axioms, note });
        }
        let toml_text = src.read("catalog.toml")?;
        let parsed: TomlCatalog =
            toml::from_str(&toml_text).map_err(|e| CatalogError::Toml(e.to_string()))?;
        for m in parsed.monoid {
            let entry = cat.build_monoid(&src, m)?;
            if cat.monoids.contains_key(&entry.name) {
                return Err(CatalogError::Entry {
                    entry: entry.name,
                    message: "duplicate monoid name".to_string(),
                });
            }
            if !entry.self_dual {
                let mirror = MonoidEntry {
                    name: mirror_name(&entry.name),
                    monoid: entry.monoid.dual(),
                    source: MonoidSource::Mirror(entry.name.clone()),
                    presentation: None,
                    stated_order: entry.stated_order,
                    j_trivial: entry.j_trivial,
                    self_dual: false,
                    note: format!("mirror image of {}", entry.name),
                };
                cat.monoids.insert(mirror.name.clone(), mirror);
            }
            cat.monoids.insert(entry.name.clone(), entry);
        }
        cat.citations = parsed
            .citation
            .into_iter()
            .map(|c| Citation {
                name: c.name,
                note: c.note,
            })
            .collect();
        for e in parsed.expect {
            for (refs, holds) in [(e.holds, true), (e.fails, false)] {
                for reference in refs {
                    cat.identities_for(&reference)?;
                    cat.expectations.push(Expectation {
                        monoid: e.monoid.clone(),
                        reference,
                        holds,
                    });
                }
            }
            cat.monoid(&e.monoid)?;
        }
        Ok(cat)
    }

    fn build_monoid(&self, src: &Source<'_>, m: TomlMonoid) -> Result<MonoidEntry, CatalogError> {
        let name = m.name.clone();
        let entry_err = |message: &str| CatalogError::Entry {
            entry: name.clone(),
            message: message.to_string(),
        };
        let presentation = match &m.presentation {
            Some(path) => Some(parse_presentation(&src.read(path)?).map_err(|source| {
                CatalogError::Presentation {
                    entry: name.clone(),
                    source,
                }
            })?),
            None => None,
        };
        let (monoid, source) = match (&m.table, &m.rees, &m.quotient_of, m.cyclic) {
            (Some(path), None, None, None) => {
                let monoid = FiniteMonoid::parse_table(&src.read(path)?).map_err(|source| {
                    CatalogError::Monoid {
                        entry: name.clone(),
                        source,
                    }
                })?;
                (monoid, MonoidSource::Table(path.clone()))
            }
            (None, Some(words), None, None) => {
                let words: Vec<Word> = words
                    .iter()
                    .map(|t| parse_word(t))
                    .collect::<Result<_, _>>()
                    .map_err(|source| CatalogError::ReesWord {
                        entry: name.clone(),
                        source,
                    })?;
                (rees_quotient(&words), MonoidSource::Rees(words))
            }
            (None, None, Some(of), None) => {
                let base = self
                    .monoid(of)
                    .map_err(|_| entry_err("quotient of an entry defined later or unknown"))?;
                let classes = m
                    .classes
                    .clone()
                    .ok_or_else(|| entry_err("quotient needs classes"))?;
                let monoid = quotient_by_labels(&base.monoid, &classes).map_err(|source| {
                    CatalogError::Monoid {
                        entry: name.clone(),
                        source,
                    }
                })?;
                (
                    monoid,
                    MonoidSource::Quotient {
                        of: of.clone(),
                        classes,
                    },
                )
            }
            (None, None, None, Some(n)) if n >= 1 => {
                (FiniteMonoid::cyclic_group(n), MonoidSource::Cyclic(n))
            }
            _ => {
                return Err(entry_err(
                    "exactly one of table, rees, quotient_of, cyclic is required",
                ))
            }
        };
        Ok(MonoidEntry {
            name: m.name,
            monoid,
            source,
            presentation,
            stated_order: m.order,
            j_trivial: m.j_trivial,
            self_dual: m.self_dual,
            note: m.note,
        })
    }

    pub fn monoids(&self) -> impl Iterator<Item = &MonoidEntry> {
        self.monoids.values()
    }

    pub fn bases(&self) -> impl Iterator<Item = &BasisEntry> {
        self.bases.values()
    }

    /// Named identities in file order, each labelled with its name.
    pub fn named_identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn citations(&self) -> &[Citation] {
        &self.citations
    }

    pub fn expectations(&self) -> &[Expectation] {
        &self.expectations
    }

    pub fn monoid(&self, name: &str) -> Result<&MonoidEntry, CatalogError> {
        self.monoids.get(name).ok_or_else(|| self.unknown(name))
    }

    /// `basis.NAME`, or `basis.NAME~` for the mirrored basis.
    pub fn basis(&self, name: &str) -> Result<AxiomSet, CatalogError> {
        let bare = name.strip_prefix("basis.").unwrap_or(name);
        if let Some(entry) = self.bases.get(bare) {
            return Ok(entry.axioms.clone());
        }
        if let Some(entry) = bare.strip_suffix('~').and_then(|b| self.bases.get(b)) {
            return Ok(entry.axioms.dualize());
        }
        Err(self.unknown(name))
    }

    /// A named identity, its mirror `NAME~`, or a family reference such as `R_3`.
    pub fn identity(&self, name: &str) -> Result<Identity, CatalogError> {
        if let Some(found) = self
            .identities
            .iter()
            .find(|i| i.label.as_deref() == Some(name))
        {
            return Ok(found.clone());
        }
        if let Some(base) = name.strip_suffix('~') {
            if let Ok(found) = self.identity(base) {
                return Ok(found.dualize());
            }
        }
        if let Some(spec) = FamilySpec::parse_ref(name) {
            return family_identity(&spec).map_err(|source| CatalogError::Family {
                name: name.to_string(),
                source,
            });
        }
        Err(self.unknown(name))
    }

    /// The identities a reference denotes: all of a basis, or a single identity.
    pub fn identities_for(&self, reference: &str) -> Result<Vec<Identity>, CatalogError> {
        if reference.starts_with("basis.") {
            return Ok(self.basis(reference)?.axioms().to_vec());
        }
        Ok(vec![self.identity(reference)?])
    }

    /// Names of catalog identities equal to `idy` as an unordered pair of words.
    pub fn names_of(&self, idy: &Identity) -> Vec<String> {
        let mut out: Vec<String> = self
            .identities
            .iter()
            .filter(|i| i.same_pair(idy))
            .filter_map(|i| i.label.clone())
            .collect();
        for i in &self.identities {
            if i.dualize().same_pair(idy) && !i.same_pair(idy) {
                out.push(format!("{}~", i.label.as_deref().unwrap_or_default()));
            }
        }
        out
    }

    pub fn lookup(&self, name: &str) -> Result<CatalogEntry<'_>, CatalogError> {
        if let Some(bare) = name.strip_prefix("basis.") {
            return match self.bases.get(bare) {
                Some(b) => Ok(CatalogEntry::Basis(b)),
                None => Err(self.unknown(name)),
            };
        }
        if let Some(m) = self.monoids.get(name) {
            return Ok(CatalogEntry::Monoid(m));
        }
        self.identity(name)
            .map(CatalogEntry::Identity)
            .map_err(|e| match e {
                CatalogError::Unknown { .. } => self.unknown(name),
                other => other,
            })
    }

    fn all_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.monoids.keys().cloned().collect();
        names.extend(self.bases.keys().map(|b| format!("basis.{b}")));
        names.extend(self.identities.iter().filter_map(|i| i.label.clone()));
        names
    }

    fn unknown(&self, name: &str) -> CatalogError {
        let lower = name.to_lowercase();
        let mut scored: Vec<(usize, String)> = self
            .all_names()
            .into_iter()
            .filter_map(|cand| {
                let c = cand.to_lowercase();
                let d = strsim::levenshtein(&lower, &c);
                let close =
                    d <= 2 || (lower.len() >= 2 && (c.contains(&lower) || lower.contains(&c)));
                close.then_some((d, cand))
            })
            .collect();
        scored.sort();
        CatalogError::Unknown {
            name: name.to_string(),
            suggestions: scored.into_iter().take(5).map(|(_, n)| n).collect(),
        }
    }

    /// Parses basis text: each line is a catalog reference or `label: lhs = rhs`.
    pub fn parse_basis(&self, text: &str, file: &str) -> Result<AxiomSet, CatalogError> {
        self.parse_basis_with_note(text, file)
            .map(|(axioms, _)| axioms)
    }

    fn parse_basis_with_note(
        &self,
        text: &str,
        file: &str,
    ) -> Result<(AxiomSet, String), CatalogError> {
        let mut axioms = Vec::new();
        let mut note = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                note.push(comment.trim().to_string());
                continue;
            }
            let line = trimmed.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.contains('=') || line.contains('≈') {
                axioms.push(parse_labelled_identity(line, file, idx + 1)?);
            } else if let Some(bare) = line.strip_prefix("basis.") {
                let nested = self.basis(bare).map_err(|_| self.unknown(line))?;
                axioms.extend(nested.axioms().iter().cloned());
            } else {
                axioms.push(self.identity(line)?.with_label(line));
            }
        }
        let set = AxiomSet::new(axioms).map_err(|source| CatalogError::Axioms {
            entry: file.to_string(),
            source,
        })?;
        Ok((set, note.join(" ")))
    }
}

fn mirror_name(name: &str) -> String {
    format!("{name}~")
}

fn parse_labelled_identity(
    line: &str,
    file: &str,
    line_no: usize,
) -> Result<Identity, CatalogError> {
    let (label, body) = match line.split_once(':') {
        Some((l, b)) => (Some(l.trim()), b),
        None => (None, line),
    };
    let idy = parse_identity(body).map_err(|source| CatalogError::IdentityLine {
        file: file.to_string(),
        line: line_no,
        source,
    })?;
    let label = label.map(str::to_string).unwrap_or_else(|| idy.to_string());
    Ok(idy.with_label(label))
}

fn parse_identity_list(text: &str, file: &str) -> Result<Vec<Identity>, CatalogError> {
    let mut out: Vec<Identity> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !line.contains(':') {
            return Err(CatalogError::Entry {
                entry: file.to_string(),
                message: format!("line {}: expected `name: lhs = rhs`", idx + 1),
            });
        }
        let idy = parse_labelled_identity(line, file, idx + 1)?;
        let name = idy.label.clone().unwrap_or_default();
        if let Some(prev) = out
            .iter()
            .find(|o| o.label == idy.label || o.same_pair(&idy))
        {
            return Err(CatalogError::Entry {
                entry: name,
                message: format!("duplicates {}", prev.name()),
            });
        }
        out.push(idy);
    }
    Ok(out)
}

/// Quotient of `m` by the congruence generated by classes of element labels.
pub fn quotient_by_labels(
    m: &FiniteMonoid,
    classes: &[Vec<String>],
) -> Result<FiniteMonoid, MonoidError> {
    let idx: Vec<Vec<usize>> = classes
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|l| {
                    m.index_of(l)
                        .ok_or_else(|| MonoidError::UnknownLabel(l.clone()))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(m.quotient(&idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::ident;

    fn cat() -> Catalog {
        Catalog::builtin().expect("builtin catalog loads")
    }

    #[test]
    fn lookup_monoid_and_basis() {
        let c = cat();
        match c.lookup("A0").unwrap() {
            CatalogEntry::Monoid(m) => assert_eq!(m.monoid.order(), 5),
            other => panic!("unexpected {other:?}"),
        }
        match c.lookup("basis.L").unwrap() {
            CatalogEntry::Basis(b) => assert_eq!(b.axioms.len(), 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_names_suggest() {
        let c = cat();
        match c.lookup("nope") {
            Err(CatalogError::Unknown { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match c.lookup("A1") {
            Err(CatalogError::Unknown { suggestions, .. }) => {
                assert!(suggestions.contains(&"A0".to_string()))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identities_and_mirrors() {
        let c = cat();
        let l = c.identity("left-absorb").unwrap();
        assert!(l.same_pair(&ident("x^2 h x = x h x")));
        assert!(c
            .identity("left-absorb~")
            .unwrap()
            .same_pair(&c.identity("right-absorb").unwrap()));
        assert!(c.identity("R_3").is_ok());
        assert_eq!(
            c.names_of(&ident("x h x^2 = x h x")),
            vec!["right-absorb", "left-absorb~"]
        );
        let h = c.basis("basis.H~").unwrap();
        assert!(h
            .axioms()
            .iter()
            .any(|a| a.same_pair(&ident("x y^2 x h x = x y^2 h x"))));
    }

    #[test]
    fn mirrored_monoids_exist_for_non_self_dual_entries() {
        let c = cat();
        for m in c.monoids() {
            if !m.self_dual && !matches!(m.source, MonoidSource::Mirror(_)) {
                let mirror = c.monoid(&mirror_name(&m.name)).unwrap();
                assert_eq!(mirror.monoid.dual(), m.monoid);
            }
        }
    }

    #[test]
    fn quotient_of_k_has_ten_elements() {
        assert_eq!(cat().monoid("K/~").unwrap().monoid.order(), 10);
    }

    #[test]
    fn basis_text_accepts_inline_identities() {
        let c = cat();
        let set = c
            .parse_basis("c_2\nmine: x y x = x\n# comment\n", "inline")
            .unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.get("mine").is_some());
        assert!(c.parse_basis("c_2\nc_2\n", "dup").is_err());
    }
}
