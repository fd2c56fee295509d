//! Direct deducibility: `{u, v} = {a·φ(p)·b, a·φ(q)·b}` for an axiom `p ≈ q`.

use std::collections::BTreeMap;

use crate::words::{Variable, Word};

use super::{Identity, WordSubstitution};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// A checked instance of one deduction step.
///
/// `reversed` is false when `u = a·φ(lhs)·b`, true when `u = a·φ(rhs)·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeductionWitness {
    pub prefix: Word,
    pub suffix: Word,
    pub phi: WordSubstitution,
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deducibility {
    Deducible(DeductionWitness),
    NotDeducible,
    /// The node budget ran out before the search space was exhausted.
    Inconclusive {
        nodes: u64,
    },
}

impl Deducibility {
    pub fn is_deducible(&self) -> bool {
        matches!(self, Deducibility::Deducible(_))
    }
}

/// Checks a witness by substitution. Returns true iff it reproduces `u` and `v`.
pub fn verify_witness(u: &Word, v: &Word, ax: &Identity, wit: &DeductionWitness) -> bool {
    let (p, q) = if wit.reversed {
        (&ax.rhs, &ax.lhs)
    } else {
        (&ax.lhs, &ax.rhs)
    };
    let side = |pattern: &Word| {
        wit.prefix
            .concat(&wit.phi.apply(pattern))
            .concat(&wit.suffix)
    };
    &side(p) == u && &side(q) == v
}

/// Decides whether `u ≈ v` is directly deducible from `ax`, within `budget`
/// match nodes.
///
/// Contexts are tried shortest first (by `|a| + |b|`, then `|a|`), the
/// orientation `u ← lhs` before `u ← rhs`, and inside the matcher variables
/// are bound left to right with the empty image tried last.
pub fn directly_deducible(u: &Word, v: &Word, ax: &Identity, budget: u64) -> Deducibility {
    let ul = u.letters();
    let vl = v.letters();
    let lcp = ul.iter().zip(vl).take_while(|(a, b)| a == b).count();
    let lcs = ul
        .iter()
        .rev()
        .zip(vl.iter().rev())
        .take_while(|(a, b)| a == b)
        .count();
    let max_ctx = ul.len().min(vl.len());

    let mut contexts = Vec::new();
    for total in 0..=max_ctx {
        for i in 0..=total.min(lcp) {
            let j = total - i;
            if j <= lcs {
                contexts.push((i, j));
            }
        }
    }

    let mut nodes = 0u64;
    let mut exhausted = false;
    for (i, j) in contexts {
        let cu = &ul[i..ul.len() - j];
        let cv = &vl[i..vl.len() - j];
        for reversed in [false, true] {
            let (p, q) = if reversed {
                (&ax.rhs, &ax.lhs)
            } else {
                (&ax.lhs, &ax.rhs)
            };
            let mut m = Matcher {
                jobs: [(p.letters(), cu), (q.letters(), cv)],
                binding: BTreeMap::new(),
                nodes: &mut nodes,
                budget,
                exhausted: false,
            };
            let found = m.run(0, 0, 0);
            if m.exhausted {
                exhausted = true;
            }
            if found {
                let phi = m
                    .binding
                    .iter()
                    .map(|(v, img)| (*v, Word::from_letters(img.to_vec())))
                    .collect();
                let wit = DeductionWitness {
                    prefix: Word::from_letters(ul[..i].to_vec()),
                    suffix: Word::from_letters(ul[ul.len() - j..].to_vec()),
                    phi,
                    reversed,
                };
                assert!(
                    verify_witness(u, v, ax, &wit),
                    "matcher produced an unsound witness"
                );
                return Deducibility::Deducible(wit);
            }
            if exhausted {
                return Deducibility::Inconclusive { nodes };
            }
        }
    }
    Deducibility::NotDeducible
}

struct Matcher<'a> {
    jobs: [(&'a [Variable], &'a [Variable]); 2],
    binding: BTreeMap<Variable, &'a [Variable]>,
    nodes: &'a mut u64,
    budget: u64,
    exhausted: bool,
}

impl<'a> Matcher<'a> {
    /// Matches pattern `job` from pattern index `pi` against target index `ti`.
    fn run(&mut self, job: usize, pi: usize, ti: usize) -> bool {
        if job == 2 {
            return true;
        }
        *self.nodes += 1;
        if *self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        let (pattern, target) = self.jobs[job];
        if pi == pattern.len() {
            return ti == target.len() && self.run(job + 1, 0, 0);
        }
        let remaining = target.len() - ti;
        let committed: usize = pattern[pi..]
            .iter()
            .filter_map(|v| self.binding.get(v).map(|img| img.len()))
            .sum();
        if committed > remaining {
            return false;
        }
        let var = pattern[pi];
        if let Some(img) = self.binding.get(&var).copied() {
            return target[ti..].starts_with(img) && self.run(job, pi + 1, ti + img.len());
        }
        let slack = remaining - committed;
        for len in (1..=slack).chain(std::iter::once(0)) {
            self.binding.insert(var, &target[ti..ti + len]);
            if self.run(job, pi + 1, ti + len) {
                return true;
            }
            if self.exhausted {
                break;
            }
        }
        self.binding.remove(&var);
        false
    }
}
