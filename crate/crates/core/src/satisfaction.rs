//! Deciding whether a finite monoid satisfies identities.
//!
//! [`satisfies`] enumerates substitutions depth first. Variables are ordered
//! by descending occurrence count, values by element index, so the first
//! counterexample found is the lexicographically least one in that order.
//! Each side keeps the value of its longest fully assigned prefix; a subtree
//! is skipped once both prefixes evaluate to the zero element.
//!
//! [`q_satisfies`] is an independent combinatorial test for the monoid `Q`
//! based on natural forms.

use std::fmt;

use crate::identities::{family_identity, AxiomSet, FamilyKind, FamilySpec, Identity};
use crate::monoids::FiniteMonoid;
use crate::words::{Variable, Word};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A failing substitution with the two evaluated sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Vec<(Variable, usize)>,
    pub lhs_value: usize,
    pub rhs_value: usize,
}

impl Counterexample {
    pub fn render(&self, m: &FiniteMonoid) -> String {
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|(v, a)| format!("{v}={}", m.label(*a)))
            .collect();
        format!(
            "{} gives {} vs {}",
            parts.join(" "),
            m.label(self.lhs_value),
            m.label(self.rhs_value)
        )
    }

    pub fn value_of(&self, v: Variable) -> Option<usize> {
        self.assignment
            .iter()
            .find(|(x, _)| *x == v)
            .map(|(_, a)| *a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Counterexample),
    /// The product budget ran out after `products` multiplications.
    Inconclusive {
        products: u64,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails(_) => f.write_str("fails"),
            Verdict::Inconclusive { products } => {
                write!(f, "inconclusive after {products} products")
            }
        }
    }
}

/// Evaluates `w` under `value(v)`.
pub fn evaluate(m: &FiniteMonoid, w: &Word, value: impl Fn(Variable) -> usize) -> usize {
    w.letters()
        .iter()
        .fold(m.identity(), |acc, &v| m.mul(acc, value(v)))
}

pub fn satisfies(m: &FiniteMonoid, idy: &Identity) -> Verdict {
    satisfies_with_budget(m, idy, DEFAULT_BUDGET)
}

pub fn satisfies_with_budget(m: &FiniteMonoid, idy: &Identity, budget: u64) -> Verdict {
    if idy.is_trivial() {
        return Verdict::Holds;
    }
    let mut vars: Vec<(usize, Variable)> = idy
        .content()
        .into_iter()
        .map(|v| (idy.lhs.occurrences(v) + idy.rhs.occurrences(v), v))
        .collect();
    vars.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let order: Vec<Variable> = vars.into_iter().map(|(_, v)| v).collect();
    let slot = |v: Variable| {
        order
            .iter()
            .position(|&x| x == v)
            .expect("variable in content")
    };
    let lhs: Vec<usize> = idy.lhs.letters().iter().map(|&v| slot(v)).collect();
    let rhs: Vec<usize> = idy.rhs.letters().iter().map(|&v| slot(v)).collect();

    let mut search = Search {
        m,
        sides: [lhs, rhs],
        values: vec![0; order.len()],
        products: 0,
        budget,
    };
    let start = [(0usize, m.identity()), (0usize, m.identity())];
    match search.descend(0, start) {
        Outcome::Clean => Verdict::Holds,
        Outcome::Budget => Verdict::Inconclusive {
            products: search.products,
        },
        Outcome::Found(l, r) => Verdict::Fails(Counterexample {
            assignment: order
                .iter()
                .copied()
                .zip(search.values.iter().copied())
                .collect(),
            lhs_value: l,
            rhs_value: r,
        }),
    }
}

enum Outcome {
    Clean,
    Found(usize, usize),
    Budget,
}

struct Search<'a> {
    m: &'a FiniteMonoid,
    sides: [Vec<usize>; 2],
    values: Vec<usize>,
    products: u64,
    budget: u64,
}

impl Search<'_> {
    /// `state[s] = (position, value)`: side `s` evaluated up to `position`.
    fn descend(&mut self, depth: usize, state: [(usize, usize); 2]) -> Outcome {
        let n = self.values.len();
        if depth == n {
            return if state[0].1 == state[1].1 {
                Outcome::Clean
            } else {
                Outcome::Found(state[0].1, state[1].1)
            };
        }
        for a in self.m.elements() {
            self.values[depth] = a;
            let mut next = state;
            for (s, side) in self.sides.iter().enumerate() {
                let (mut pos, mut val) = next[s];
                while pos < side.len() && side[pos] <= depth {
                    val = self.m.mul(val, self.values[side[pos]]);
                    pos += 1;
                }
                self.products += (pos - next[s].0) as u64;
                next[s] = (pos, val);
            }
            if self.products > self.budget {
                return Outcome::Budget;
            }
            if let Some(z) = self.m.zero() {
                if next[0].1 == z && next[1].1 == z {
                    continue;
                }
            }
            match self.descend(depth + 1, next) {
                Outcome::Clean => {}
                other => return other,
            }
        }
        Outcome::Clean
    }
}

/// Per-axiom verdicts for membership of `M` in the variety of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisReport {
    pub results: Vec<(Identity, Verdict)>,
}

impl BasisReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|(_, v)| v.holds())
    }

    pub fn first_failure(&self) -> Option<&(Identity, Verdict)> {
        self.results.iter().find(|(_, v)| v.fails())
    }

    pub fn inconclusive(&self) -> bool {
        self.results.iter().any(|(_, v)| v.is_inconclusive())
    }
}

pub fn satisfies_all(m: &FiniteMonoid, basis: &AxiomSet) -> BasisReport {
    satisfies_list(m, basis.axioms(), DEFAULT_BUDGET)
}

pub fn satisfies_list(m: &FiniteMonoid, identities: &[Identity], budget: u64) -> BasisReport {
    BasisReport {
        results: identities
            .iter()
            .map(|idy| (idy.clone(), satisfies_with_budget(m, idy, budget)))
            .collect(),
    }
}

/// Verdicts for each family instance with index in `range`.
///
/// Aperiodicity instances are decided by comparing element powers.
pub fn satisfies_family(
    m: &FiniteMonoid,
    kind: FamilyKind,
    range: std::ops::RangeInclusive<usize>,
) -> Vec<(usize, Verdict)> {
    range
        .map(|n| {
            let verdict = match kind {
                FamilyKind::Aperiodicity => aperiodicity_verdict(m, n),
                _ => {
                    let spec = FamilySpec {
                        kind,
                        index: n,
                        permutation: (kind == FamilyKind::IScheme).then(|| (1..=n).collect()),
                    };
                    match family_identity(&spec) {
                        Ok(idy) => satisfies(m, &idy),
                        Err(_) => Verdict::Inconclusive { products: 0 },
                    }
                }
            };
            (n, verdict)
        })
        .collect()
}

pub fn aperiodicity_verdict(m: &FiniteMonoid, n: usize) -> Verdict {
    for a in m.elements() {
        let (hi, lo) = (m.power(a, n + 1), m.power(a, n));
        if hi != lo {
            return Verdict::Fails(Counterexample {
                assignment: vec![(Variable::new('x'), a)],
                lhs_value: hi,
                rhs_value: lo,
            });
        }
    }
    Verdict::Holds
}

/// The natural-form criterion for `Q`: equal separator sequences and equal
/// block contents at every position.
pub fn q_satisfies(u: &Word, v: &Word) -> bool {
    let (nu, nv) = (u.natural_form(), v.natural_form());
    nu.separators == nv.separators
        && nu
            .blocks
            .iter()
            .zip(&nv.blocks)
            .all(|(a, b)| a.content() == b.content())
}
