//! Monoid presentations `⟨A | u = v, w = 0, ...⟩` closed into tables.
//!
//! Relations are completed into a confluent shortlex rewriting system
//! (Knuth–Bendix) with an adjoined zero symbol; the normal forms are then
//! the elements. Plain rewriting with the given relations is not enough:
//! `aa = 0` in `⟨a, e | ea = a, ae = 0⟩` needs the expansion `aa → a(ea)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::words::{parse_word, Variable, Word, WordParseError};

use super::FiniteMonoid;

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("completion exceeded {0} rules")]
    RuleCapExceeded(usize),
    #[error("more than {0} elements; the presentation may define an infinite monoid")]
    ElementCapExceeded(usize),
    #[error("element mismatch: missing {missing:?}, unexpected {extra:?}")]
    Mismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("relation uses {0}, which is not a generator")]
    UnknownGenerator(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Word { line: usize, source: WordParseError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Variable>,
    /// `(u, Some(v))` for `u = v`, `(u, None)` for `u = 0`.
    pub relations: Vec<(Word, Option<Word>)>,
    pub expected_elements: Option<Vec<String>>,
}

impl Presentation {
    pub fn close(&self) -> Result<FiniteMonoid, PresentationError> {
        close_presentation(self, DEFAULT_CLOSURE_CAP)
    }

    pub fn without_relation(&self, index: usize) -> Presentation {
        let mut p = self.clone();
        p.relations.remove(index);
        p
    }
}

/// Parses
///
/// ```text
/// generators a b e
/// relations
///   a^3 = a^2
///   a^2 b = 0
/// elements 0 a b e a2 ab
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    let mut expected = None;
    let mut in_relations = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let head = parts.next().unwrap_or("");
        match head {
            "generators" => {
                in_relations = false;
                for g in parts {
                    let v: Variable = g
                        .parse()
                        .map_err(|source| PresentationError::Word { line, source })?;
                    generators.push(v);
                }
            }
            "relations" => in_relations = true,
            "elements" => {
                in_relations = false;
                expected = Some(parts.map(str::to_string).collect());
            }
            _ if in_relations => {
                let (l, r) = content
                    .split_once('=')
                    .ok_or_else(|| PresentationError::Format {
                        line,
                        message: "relations look like 'u = v' or 'u = 0'".into(),
                    })?;
                let lhs =
                    parse_word(l).map_err(|source| PresentationError::Word { line, source })?;
                let rhs = if r.trim() == "0" {
                    None
                } else {
                    Some(parse_word(r).map_err(|source| PresentationError::Word { line, source })?)
                };
                relations.push((lhs, rhs));
            }
            _ => {
                return Err(PresentationError::Format {
                    line,
                    message: "expected generators, relations or elements".into(),
                })
            }
        }
    }
    Ok(Presentation {
        generators,
        relations,
        expected_elements: expected,
    })
}

type Str = Vec<u8>;
const ZERO: u8 = 0;

fn shortlex(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn find_factor(hay: &[u8], needle: &[u8]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

struct Rewriter {
    rules: Vec<(Str, Str)>,
}

impl Rewriter {
    fn reduce(&self, w: &[u8]) -> Str {
        let mut cur = w.to_vec();
        'outer: loop {
            for (l, r) in &self.rules {
                if let Some(i) = find_factor(&cur, l) {
                    let mut next = cur[..i].to_vec();
                    next.extend_from_slice(r);
                    next.extend_from_slice(&cur[i + l.len()..]);
                    cur = next;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    fn irreducible(&self, w: &[u8]) -> bool {
        self.rules.iter().all(|(l, _)| find_factor(w, l).is_none())
    }

    fn add(&mut self, a: Str, b: Str, pending: &mut Vec<(Str, Str)>) {
        let (l, r) = if shortlex(&a, &b) == Ordering::Greater {
            (a, b)
        } else {
            (b, a)
        };
        let mut kept = Vec::with_capacity(self.rules.len() + 1);
        for (ol, or) in std::mem::take(&mut self.rules) {
            if find_factor(&ol, &l).is_some() {
                pending.push((ol, or));
            } else {
                kept.push((ol, or));
            }
        }
        self.rules = kept;
        self.rules.push((l, r));
        let normalized: Vec<Str> = self.rules.iter().map(|(_, r)| self.reduce(r)).collect();
        for (rule, r) in self.rules.iter_mut().zip(normalized) {
            rule.1 = r;
        }
    }

    fn critical_pairs(&self) -> Vec<(Str, Str)> {
        let mut out = Vec::new();
        for (l1, r1) in &self.rules {
            for (l2, r2) in &self.rules {
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let mut a = r1.clone();
                        a.extend_from_slice(&l2[k..]);
                        let mut b = l1[..l1.len() - k].to_vec();
                        b.extend_from_slice(r2);
                        let (a, b) = (self.reduce(&a), self.reduce(&b));
                        if a != b {
                            out.push((a, b));
                        }
                    }
                }
            }
        }
        out
    }
}

fn complete(equations: Vec<(Str, Str)>, cap: usize) -> Result<Rewriter, PresentationError> {
    let mut rw = Rewriter { rules: Vec::new() };
    let mut pending = equations;
    loop {
        while let Some((a, b)) = pending.pop() {
            let (a, b) = (rw.reduce(&a), rw.reduce(&b));
            if a != b {
                rw.add(a, b, &mut pending);
                if rw.rules.len() > cap {
                    return Err(PresentationError::RuleCapExceeded(cap));
                }
            }
        }
        pending = rw.critical_pairs();
        if pending.is_empty() {
            return Ok(rw);
        }
    }
}

/// Element label such as `ba2` for `b a a`.
fn label_of(w: &[u8], gens: &[Variable]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    if w == [ZERO] {
        return "0".into();
    }
    let mut s = String::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        s.push_str(&gens[(w[i] - 1) as usize].to_string());
        if j - i > 1 {
            s.push_str(&(j - i).to_string());
        }
        i = j;
    }
    s
}

/// Closes a presentation into a table. Elements are ordered `0`, then
/// nonempty normal forms in shortlex order, then `1`.
pub fn close_presentation(p: &Presentation, cap: usize) -> Result<FiniteMonoid, PresentationError> {
    let encode = |w: &Word| -> Result<Str, PresentationError> {
        w.letters()
            .iter()
            .map(|v| {
                p.generators
                    .iter()
                    .position(|g| g == v)
                    .map(|i| (i + 1) as u8)
                    .ok_or_else(|| PresentationError::UnknownGenerator(v.to_string()))
            })
            .collect()
    };
    let has_zero = p.relations.iter().any(|(_, r)| r.is_none());
    let mut alphabet: Vec<u8> = (1..=p.generators.len() as u8).collect();
    let mut equations = Vec::new();
    if has_zero {
        alphabet.insert(0, ZERO);
        for &g in &alphabet {
            equations.push((vec![ZERO, g], vec![ZERO]));
            equations.push((vec![g, ZERO], vec![ZERO]));
        }
    }
    for (l, r) in &p.relations {
        let l = encode(l)?;
        let r = match r {
            Some(r) => encode(r)?,
            None => vec![ZERO],
        };
        equations.push((l, r));
    }
    let rw = complete(equations, cap)?;

    let mut forms: Vec<Str> = Vec::new();
    let mut queue: VecDeque<Str> = VecDeque::from([Vec::new()]);
    while let Some(w) = queue.pop_front() {
        forms.push(w.clone());
        if forms.len() > cap {
            return Err(PresentationError::ElementCapExceeded(cap));
        }
        for &s in &alphabet {
            let mut next = w.clone();
            next.push(s);
            if rw.irreducible(&next) {
                queue.push_back(next);
            }
        }
    }
    // BFS order is shortlex; move the identity to the end.
    forms.remove(0);
    forms.push(Vec::new());

    let index: HashMap<Str, usize> = forms
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let n = forms.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &forms {
        for b in &forms {
            let mut ab = a.clone();
            ab.extend_from_slice(b);
            table.push(index[&rw.reduce(&ab)]);
        }
    }
    let labels: Vec<String> = forms.iter().map(|w| label_of(w, &p.generators)).collect();
    if let Some(expected) = &p.expected_elements {
        let have: BTreeSet<&String> = labels.iter().collect();
        let want: BTreeSet<&String> = expected.iter().collect();
        if have != want {
            return Err(PresentationError::Mismatch {
                missing: want.difference(&have).map(|s| s.to_string()).collect(),
                extra: have.difference(&want).map(|s| s.to_string()).collect(),
            });
        }
    }
    Ok(FiniteMonoid::from_flat(n, table, n - 1, Some(labels))
        .expect("rewriting system yields a monoid"))
}
