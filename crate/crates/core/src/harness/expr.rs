//! Monoid expressions: catalog names, mirrors, products, Rees quotients and
//! congruence quotients.
//!
//! ```text
//! expr  := term (("x" | "×") term)*
//! term  := "dual(" expr ")" | "rees(" word ("," word)* ")"
//!        | "quotient(" expr ", classes=[[a,b],[c,d]])" | "(" expr ")" | NAME
//! ```

use std::fmt;

use thiserror::Error;

use crate::catalog::{quotient_by_labels, Catalog, CatalogError};
use crate::monoids::{rees_quotient, FiniteMonoid, MonoidError};
use crate::words::{parse_word, Word, WordParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("column {col}: {message}")]
    Syntax { col: usize, message: String },
    #[error("rees word: {0}")]
    Word(#[from] WordParseError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{0}")]
    Monoid(#[from] MonoidError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidExpr {
    Name(String),
    Dual(Box<MonoidExpr>),
    Product(Vec<MonoidExpr>),
    Rees(Vec<Word>),
    Quotient {
        of: Box<MonoidExpr>,
        classes: Vec<Vec<String>>,
    },
}

impl fmt::Display for MonoidExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidExpr::Name(n) => f.write_str(n),
            MonoidExpr::Dual(e) => write!(f, "dual({e})"),
            MonoidExpr::Product(fs) => {
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    match e {
                        MonoidExpr::Product(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
            MonoidExpr::Rees(ws) => {
                let parts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                write!(f, "rees({})", parts.join(", "))
            }
            MonoidExpr::Quotient { of, classes } => {
                let cs: Vec<String> = classes
                    .iter()
                    .map(|c| format!("[{}]", c.join(",")))
                    .collect();
                write!(f, "quotient({of}, classes=[{}])", cs.join(","))
            }
        }
    }
}

/// A resolved expression: the factors of a direct product, each named.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub factors: Vec<(String, FiniteMonoid)>,
}

impl Resolved {
    /// The product of all factors as one table.
    pub fn monoid(&self) -> FiniteMonoid {
        let mut it = self.factors.iter().map(|(_, m)| m);
        let first = it.next().expect("at least one factor").clone();
        it.fold(first, |acc, m| acc.direct_product(m))
    }

    pub fn order(&self) -> usize {
        self.factors.iter().map(|(_, m)| m.order()).product()
    }
}

impl MonoidExpr {
    pub fn parse(text: &str) -> Result<MonoidExpr, ExprError> {
        let mut p = Parser {
            chars: text.chars().collect(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Builds the factors. Products stay factored so that satisfaction can be
    /// decided one factor at a time; a mirror of a product mirrors each factor.
    pub fn resolve(&self, catalog: &Catalog) -> Result<Resolved, ExprError> {
        let factors = match self {
            MonoidExpr::Name(n) => vec![(n.clone(), catalog.monoid(n)?.monoid.clone())],
            MonoidExpr::Dual(e) => e
                .resolve(catalog)?
                .factors
                .into_iter()
                .map(|(n, m)| (format!("dual({n})"), m.dual()))
                .collect(),
            MonoidExpr::Product(es) => {
                let mut out = Vec::new();
                for e in es {
                    out.extend(e.resolve(catalog)?.factors);
                }
                out
            }
            MonoidExpr::Rees(ws) => vec![(self.to_string(), rees_quotient(ws))],
            MonoidExpr::Quotient { of, classes } => {
                let base = of.resolve(catalog)?.monoid();
                vec![(self.to_string(), quotient_by_labels(&base, classes)?)]
            }
        };
        Ok(Resolved { factors })
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '[' | ']' | '=')
}

impl Parser {
    fn err(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            col: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    /// Reads a name without consuming it.
    fn peek_name(&self) -> (String, usize) {
        let mut end = self.pos;
        while end < self.chars.len() && is_name_char(self.chars[end]) {
            end += 1;
        }
        (self.chars[self.pos..end].iter().collect(), end)
    }

    fn expr(&mut self) -> Result<MonoidExpr, ExprError> {
        let mut factors = vec![self.term()?];
        loop {
            self.skip_ws();
            let (tok, end) = self.peek_name();
            if tok == "x" || tok == "×" {
                self.pos = end;
                factors.push(self.term()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            MonoidExpr::Product(factors)
        })
    }

    fn term(&mut self) -> Result<MonoidExpr, ExprError> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let (name, end) = self.peek_name();
        if name.is_empty() {
            return Err(self.err("expected a monoid"));
        }
        self.pos = end;
        let call = self.peek() == Some('(');
        match (name.as_str(), call) {
            ("dual", true) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(MonoidExpr::Dual(Box::new(e)))
            }
            ("rees", true) => {
                self.pos += 1;
                let start = self.pos;
                let mut depth = 0usize;
                while let Some(c) = self.peek() {
                    match c {
                        '(' => depth += 1,
                        ')' if depth == 0 => break,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    self.pos += 1;
                }
                let body: String = self.chars[start..self.pos].iter().collect();
                self.expect(')')?;
                let words = body
                    .split(',')
                    .map(parse_word)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MonoidExpr::Rees(words))
            }
            ("quotient", true) => {
                self.pos += 1;
                let of = self.expr()?;
                self.expect(',')?;
                self.skip_ws();
                let (kw, end) = self.peek_name();
                if kw != "classes" {
                    return Err(self.err("expected 'classes='"));
                }
                self.pos = end;
                self.expect('=')?;
                let classes = self.classes()?;
                self.expect(')')?;
                Ok(MonoidExpr::Quotient {
                    of: Box::new(of),
                    classes,
                })
            }
            (_, true) => Err(self.err(&format!("unknown constructor {name:?}"))),
            _ => Ok(MonoidExpr::Name(name)),
        }
    }

    fn classes(&mut self) -> Result<Vec<Vec<String>>, ExprError> {
        self.expect('[')?;
        let mut out = Vec::new();
        loop {
            self.expect('[')?;
            let mut class = Vec::new();
            loop {
                self.skip_ws();
                let (label, end) = self.peek_name();
                if label.is_empty() {
                    return Err(self.err("expected an element label"));
                }
                self.pos = end;
                class.push(label);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(']') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected ',' or ']'")),
                }
            }
            out.push(class);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ',' or ']'")),
            }
        }
    }
}
