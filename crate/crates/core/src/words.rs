//! Words over an open-ended alphabet of variables.
//!
//! A [`Variable`] is a lowercase ASCII letter with an optional numeric suffix
//! (`x`, `h`, `t1`, `h12`). A [`Word`] is an immutable sequence of variables;
//! the empty sequence is the identity word, written `1`.
//!
//! Text syntax:
//!
//! ```text
//! word   := "1" | atom+
//! atom   := group | var
//! group  := "(" word ")" power?
//! var    := [a-z][0-9]* power?
//! power  := "^" [1-9][0-9]*
//! ```
//!
//! Whitespace between atoms is ignored and powers are expanded eagerly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("empty input where a word was expected")]
    Empty,
    #[error("unexpected character {found:?} at position {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("exponent at position {pos} must be a positive integer")]
    BadExponent { pos: usize },
    #[error("invalid variable name {0:?}")]
    BadVariable(String),
}

/// A variable: one letter `a`..`z` plus an optional index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    letter: u8,
    index: Option<u32>,
}

impl Variable {
    /// Panics if `letter` is not a lowercase ASCII letter.
    pub fn new(letter: char) -> Self {
        assert!(letter.is_ascii_lowercase(), "variable letter must be a-z");
        Variable {
            letter: letter as u8,
            index: None,
        }
    }

    pub fn indexed(letter: char, index: u32) -> Self {
        assert!(letter.is_ascii_lowercase(), "variable letter must be a-z");
        Variable {
            letter: letter as u8,
            index: Some(index),
        }
    }

    pub fn letter(&self) -> char {
        self.letter as char
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}{}", self.letter as char, i),
            None => write!(f, "{}", self.letter as char),
        }
    }
}

impl FromStr for Variable {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WordParseError::BadVariable(s.to_string());
        let mut chars = s.chars();
        let letter = chars
            .next()
            .filter(char::is_ascii_lowercase)
            .ok_or_else(bad)?;
        let rest = chars.as_str();
        if rest.is_empty() {
            return Ok(Variable::new(letter));
        }
        if !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index = rest.parse().map_err(|_| bad())?;
        Ok(Variable::indexed(letter, index))
    }
}

/// The decomposition `u0 h1 u1 ... hm um` of a word, where `h1..hm` are exactly
/// its simple (once-occurring) variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalForm {
    pub blocks: Vec<Word>,
    pub separators: Vec<Variable>,
}

impl NaturalForm {
    pub fn reassemble(&self) -> Word {
        let mut letters = self.blocks[0].0.clone();
        for (h, block) in self.separators.iter().zip(&self.blocks[1..]) {
            letters.push(*h);
            letters.extend_from_slice(&block.0);
        }
        Word(letters)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Variable>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Variable>) -> Self {
        Word(letters)
    }

    pub fn single(v: Variable) -> Self {
        Word(vec![v])
    }

    pub fn letters(&self) -> &[Variable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn content(&self) -> BTreeSet<Variable> {
        self.0.iter().copied().collect()
    }

    /// `|w|_v`.
    pub fn occurrences(&self, v: Variable) -> usize {
        self.0.iter().filter(|&&x| x == v).count()
    }

    pub fn occurrence_counts(&self) -> BTreeMap<Variable, usize> {
        let mut counts = BTreeMap::new();
        for &v in &self.0 {
            *counts.entry(v).or_insert(0) += 1;
        }
        counts
    }

    pub fn is_simple(&self, v: Variable) -> bool {
        self.occurrences(v) == 1
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn natural_form(&self) -> NaturalForm {
        let counts = self.occurrence_counts();
        let mut blocks = vec![Vec::new()];
        let mut separators = Vec::new();
        for &v in &self.0 {
            if counts[&v] == 1 {
                separators.push(v);
                blocks.push(Vec::new());
            } else {
                blocks.last_mut().expect("at least one block").push(v);
            }
        }
        NaturalForm {
            blocks: blocks.into_iter().map(Word).collect(),
            separators,
        }
    }

    /// All factors (contiguous subwords), including the empty word.
    pub fn factors(&self) -> BTreeSet<Word> {
        let n = self.len();
        let mut out = BTreeSet::new();
        out.insert(Word::empty());
        for i in 0..n {
            for j in i + 1..=n {
                out.insert(Word(self.0[i..j].to_vec()));
            }
        }
        out
    }

    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    pub fn starts_with(&self, prefix: &[Variable]) -> bool {
        self.0.starts_with(prefix)
    }

    /// Concatenated letters without separators, e.g. `xh1x`.
    pub fn compact(&self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|v| v.to_string()).collect()
    }

    /// Renames variables by position of first occurrence to `x1, x2, ...`
    /// style targets supplied by the caller.
    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> Word {
        Word(self.0.iter().map(|v| *map.get(v).unwrap_or(v)).collect())
    }
}

impl From<Vec<Variable>> for Word {
    fn from(letters: Vec<Variable>) -> Self {
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

pub fn parse_word(text: &str) -> Result<Word, WordParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(WordParseError::Empty);
    }
    let letters = p.sequence(false)?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(WordParseError::Unexpected {
            pos: p.pos,
            found: c,
        });
    }
    Ok(Word(letters))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn sequence(&mut self, nested: bool) -> Result<Vec<Variable>, WordParseError> {
        let mut out = Vec::new();
        let mut atoms = 0;
        loop {
            self.skip_ws();
            match self.peek() {
                None => {
                    if nested {
                        return Err(WordParseError::UnexpectedEnd { pos: self.pos });
                    }
                    break;
                }
                Some(')') if nested => break,
                Some('(') => {
                    self.pos += 1;
                    let inner = self.sequence(true)?;
                    // consume ')'
                    self.pos += 1;
                    let n = self.power()?;
                    for _ in 0..n {
                        out.extend_from_slice(&inner);
                    }
                }
                Some('1')
                    if !self
                        .chars
                        .get(self.pos + 1)
                        .is_some_and(char::is_ascii_digit) =>
                {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_lowercase() => {
                    self.pos += 1;
                    let start = self.pos;
                    while self.peek().is_some_and(|d| d.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let v = if start == self.pos {
                        Variable::new(c)
                    } else {
                        let digits: String = self.chars[start..self.pos].iter().collect();
                        let index = digits
                            .parse()
                            .map_err(|_| WordParseError::BadVariable(format!("{c}{digits}")))?;
                        Variable::indexed(c, index)
                    };
                    let n = self.power()?;
                    out.extend(std::iter::repeat_n(v, n));
                }
                Some(c) => {
                    return Err(WordParseError::Unexpected {
                        pos: self.pos,
                        found: c,
                    })
                }
            }
            atoms += 1;
        }
        if atoms == 0 {
            return match self.peek() {
                Some(c) => Err(WordParseError::Unexpected {
                    pos: self.pos,
                    found: c,
                }),
                None => Err(WordParseError::Empty),
            };
        }
        Ok(out)
    }

    fn power(&mut self) -> Result<usize, WordParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        while self.peek().is_some_and(|d| d.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        match digits.parse::<usize>() {
            Ok(n) if n > 0 && !digits.starts_with('0') => Ok(n),
            _ => Err(WordParseError::BadExponent { pos: start }),
        }
    }
}

/// Shorthand for tests and data tables; panics on malformed input.
pub fn w(text: &str) -> Word {
    parse_word(text).unwrap_or_else(|e| panic!("bad word {text:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Variable {
        s.parse().unwrap()
    }

    #[test]
    fn parses_identity_word() {
        assert!(w("1").is_empty());
        assert_eq!(w(" 1 ").to_string(), "1");
    }

    #[test]
    fn parses_plain_letters() {
        let word = w("x h x t x");
        assert_eq!(word.len(), 5);
        assert_eq!(word.to_string(), "x h x t x");
        assert_eq!(w("xhxtx"), word);
    }

    #[test]
    fn expands_group_powers() {
        // (x y)^2 h x y, expanded by hand
        let expected: Vec<Variable> = ["x", "y", "x", "y", "h", "x", "y"]
            .iter()
            .map(|s| v(s))
            .collect();
        assert_eq!(w("(x y)^2 h x y").letters(), expected.as_slice());
        assert_eq!(w("x^3"), w("x x x"));
        assert_eq!(w("((x y)^2 z)^2").len(), 10);
    }

    #[test]
    fn indexed_variables() {
        let word = w("x h1 x h2 x");
        assert_eq!(word.letters()[1], Variable::indexed('h', 1));
        assert_eq!(word.compact(), "xh1xh2x");
        assert_eq!(w("t12 x").letters()[0], Variable::indexed('t', 12));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_word(""), Err(WordParseError::Empty));
        assert!(matches!(
            parse_word("x^0"),
            Err(WordParseError::BadExponent { pos: 2 })
        ));
        assert!(matches!(
            parse_word("x^-1"),
            Err(WordParseError::BadExponent { .. })
        ));
        assert!(matches!(
            parse_word("x ^"),
            Err(WordParseError::Unexpected { .. })
        ));
        assert!(matches!(
            parse_word("x Y"),
            Err(WordParseError::Unexpected { pos: 2, found: 'Y' })
        ));
        assert!(matches!(
            parse_word("(x y"),
            Err(WordParseError::UnexpectedEnd { .. })
        ));
        assert!(matches!(
            parse_word("x )"),
            Err(WordParseError::Unexpected { pos: 2, .. })
        ));
        assert!(parse_word("()").is_err());
    }

    #[test]
    fn content_and_occurrences() {
        assert!(Word::empty().content().is_empty());
        let c = w("x h x t x").content();
        assert_eq!(c, [v("x"), v("h"), v("t")].into_iter().collect());
        assert_eq!(
            w("x h x y^2 x").content(),
            [v("x"), v("h"), v("y")].into_iter().collect()
        );
        assert_eq!(w("x h x t x").occurrences(v("x")), 3);
        assert!(w("x h x t x").is_simple(v("h")));
        assert_eq!(w("x^2 y^2").occurrences(v("y")), 2);
    }

    #[test]
    fn reversal() {
        assert_eq!(Word::empty().reverse(), Word::empty());
        assert_eq!(w("x h x y^2 x").reverse(), w("x y^2 x h x"));
    }

    #[test]
    fn natural_forms() {
        let nf = w("x h x t x").natural_form();
        assert_eq!(nf.blocks, vec![w("x"), w("x"), w("x")]);
        assert_eq!(nf.separators, vec![v("h"), v("t")]);

        let nf = w("h1 h2").natural_form();
        assert_eq!(nf.blocks, vec![Word::empty(); 3]);
        assert_eq!(nf.separators, vec![v("h1"), v("h2")]);

        let nf = w("x^2 y^2").natural_form();
        assert_eq!(nf.blocks, vec![w("x^2 y^2")]);
        assert!(nf.separators.is_empty());
    }

    #[test]
    fn natural_form_roundtrip_exhaustive() {
        let alphabet = [v("x"), v("y"), v("z"), v("t")];
        let mut frontier = vec![Word::empty()];
        for _ in 0..8 {
            let mut next = Vec::new();
            for word in &frontier {
                assert_eq!(&word.natural_form().reassemble(), word);
                for &a in &alphabet {
                    let mut letters = word.letters().to_vec();
                    letters.push(a);
                    next.push(Word::from(letters));
                }
            }
            frontier = next;
        }
        for word in &frontier {
            let nf = word.natural_form();
            assert_eq!(&nf.reassemble(), word);
            for h in &nf.separators {
                assert_eq!(word.occurrences(*h), 1);
            }
            for block in &nf.blocks {
                for x in block.letters() {
                    assert!(word.occurrences(*x) >= 2);
                }
            }
        }
    }

    #[test]
    fn factors_of_short_words() {
        assert_eq!(Word::empty().factors().len(), 1);
        // 1, x, y, xy
        assert_eq!(w("x y").factors().len(), 4);
        // 1, x, h, xh, hx, xhx
        assert_eq!(w("x h x").factors().len(), 6);
        assert!(w("h x").is_factor_of(&w("x h x")));
        assert!(!w("x x").is_factor_of(&w("x h x")));
    }

    #[test]
    fn display_roundtrip() {
        for text in ["1", "x", "x h1 x t2 y", "(x y)^3 h"] {
            let word = w(text);
            assert_eq!(w(&word.to_string()), word);
        }
    }
}
