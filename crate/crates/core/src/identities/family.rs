//! Parametrised identity families and the chain words `x h1 x ... hm x`.

use std::fmt;

use thiserror::Error;

use crate::words::{Variable, Word};

use super::Identity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `x^(n+1) ≈ x^n`
    Aperiodicity,
    /// `(xy)^n ≈ (yx)^n`
    EventualCommutativity,
    /// `xy t1a1 ... tmam ≈ yx t1a1 ... tmam` with `a_i` alternating `x, y`
    Restrictive,
    /// `x Π y_π(i) x Π h_i y_i ≈ x² Π y_π(i) Π h_i y_i`
    IScheme,
    /// `x h1 x h2 x ... hm x`
    LChainWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub index: usize,
    /// One-based permutation images, `IScheme` only.
    pub permutation: Option<Vec<usize>>,
}

impl FamilySpec {
    pub fn aperiodicity(n: usize) -> Self {
        FamilySpec {
            kind: FamilyKind::Aperiodicity,
            index: n,
            permutation: None,
        }
    }

    pub fn eventual_commutativity(n: usize) -> Self {
        FamilySpec {
            kind: FamilyKind::EventualCommutativity,
            index: n,
            permutation: None,
        }
    }

    pub fn restrictive(m: usize) -> Self {
        FamilySpec {
            kind: FamilyKind::Restrictive,
            index: m,
            permutation: None,
        }
    }

    pub fn i_scheme(permutation: Vec<usize>) -> Self {
        FamilySpec {
            kind: FamilyKind::IScheme,
            index: permutation.len(),
            permutation: Some(permutation),
        }
    }

    pub fn l_chain(m: usize) -> Self {
        FamilySpec {
            kind: FamilyKind::LChainWord,
            index: m,
            permutation: None,
        }
    }

    /// Parses references such as `a_2`, `c_3`, `R_7`, `I_3_2_1` (the
    /// permutation written as its images) and `x_2`.
    pub fn parse_ref(text: &str) -> Option<FamilySpec> {
        let (head, rest) = text.split_once('_')?;
        if head == "I" {
            let perm: Option<Vec<usize>> = rest.split('_').map(|p| p.parse().ok()).collect();
            return Some(FamilySpec::i_scheme(perm?));
        }
        let n: usize = rest.parse().ok()?;
        match head {
            "a" => Some(FamilySpec::aperiodicity(n)),
            "c" => Some(FamilySpec::eventual_commutativity(n)),
            "R" => Some(FamilySpec::restrictive(n)),
            "x" => Some(FamilySpec::l_chain(n)),
            _ => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Aperiodicity => write!(f, "a_{}", self.index),
            FamilyKind::EventualCommutativity => write!(f, "c_{}", self.index),
            FamilyKind::Restrictive => write!(f, "R_{}", self.index),
            FamilyKind::LChainWord => write!(f, "x_{}", self.index),
            FamilyKind::IScheme => {
                f.write_str("I")?;
                for p in self.permutation.iter().flatten() {
                    write!(f, "_{p}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("restrictive identities need m >= 2, got {0}")]
    RestrictiveTooSmall(usize),
    #[error("permutation has length {len} but the index is {index}")]
    PermutationLength { len: usize, index: usize },
    #[error("{0:?} is not a permutation of 1..m")]
    NotAPermutation(Vec<usize>),
    #[error("the scheme needs m >= 1")]
    EmptyScheme,
    #[error("{0} denotes a word, not an identity")]
    NotAnIdentity(String),
}

fn var(c: char) -> Variable {
    Variable::new(c)
}

fn word(letters: impl IntoIterator<Item = Variable>) -> Word {
    Word::from_letters(letters.into_iter().collect())
}

/// `x h1 x h2 x ... hm x`.
pub fn l_chain_word(m: usize) -> Word {
    let x = var('x');
    let mut letters = vec![x];
    for i in 1..=m as u32 {
        letters.push(Variable::indexed('h', i));
        letters.push(x);
    }
    Word::from_letters(letters)
}

/// Builds the identity named by `spec`, labelled with its reference.
pub fn family_identity(spec: &FamilySpec) -> Result<Identity, FamilyError> {
    let (x, y) = (var('x'), var('y'));
    let n = spec.index;
    let idy = match spec.kind {
        FamilyKind::Aperiodicity => {
            Identity::new(Word::single(x).pow(n + 1), Word::single(x).pow(n))
        }
        FamilyKind::EventualCommutativity => {
            Identity::new(word([x, y]).pow(n), word([y, x]).pow(n))
        }
        FamilyKind::Restrictive => {
            if n < 2 {
                return Err(FamilyError::RestrictiveTooSmall(n));
            }
            let mut tail = Vec::new();
            for i in 1..=n {
                tail.push(Variable::indexed('t', i as u32));
                tail.push(if i % 2 == 1 { x } else { y });
            }
            let tail = Word::from_letters(tail);
            Identity::new(word([x, y]).concat(&tail), word([y, x]).concat(&tail))
        }
        FamilyKind::IScheme => {
            let perm = spec.permutation.clone().unwrap_or_default();
            if perm.len() != n {
                return Err(FamilyError::PermutationLength {
                    len: perm.len(),
                    index: n,
                });
            }
            if n == 0 {
                return Err(FamilyError::EmptyScheme);
            }
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            if sorted != (1..=n).collect::<Vec<_>>() {
                return Err(FamilyError::NotAPermutation(perm));
            }
            let ys = word(perm.iter().map(|&p| Variable::indexed('y', p as u32)));
            let hy = word(
                (1..=n as u32).flat_map(|i| [Variable::indexed('h', i), Variable::indexed('y', i)]),
            );
            let lhs = Word::single(x)
                .concat(&ys)
                .concat(&Word::single(x))
                .concat(&hy);
            let rhs = Word::single(x).pow(2).concat(&ys).concat(&hy);
            Identity::new(lhs, rhs)
        }
        FamilyKind::LChainWord => return Err(FamilyError::NotAnIdentity(spec.to_string())),
    };
    Ok(idy.with_label(spec.to_string()))
}

/// All permutations of `1..=m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for k in 1..=m {
            if !prefix.contains(&k) {
                prefix.push(k);
                go(prefix, m, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, &mut out);
    out
}
