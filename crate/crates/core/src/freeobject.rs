//! Relatively free objects of `var(M)` as deterministic automata.
//!
//! A state is the vector of values a word takes under every substitution of
//! the `k` generators into `M`. Two words reach the same state exactly when
//! `M` satisfies the identity between them. When `M` has a zero distinct from
//! its identity, substitutions sending a generator to zero carry no extra
//! information beyond the content of the word: they are dropped and the
//! content is tracked as a bitmask instead.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::monoids::FiniteMonoid;
use crate::words::{Variable, Word};

pub const DEFAULT_STATE_CAP: usize = 200_000;
/// Coordinate vectors longer than this are refused outright.
pub const MAX_COORDINATES: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeObjectError {
    #[error("state cap {cap} exceeded ({coordinates} coordinates per state)")]
    StateCap { cap: usize, coordinates: usize },
    #[error("{coordinates} coordinates per state exceed the limit of {limit}")]
    TooManyCoordinates { coordinates: usize, limit: usize },
    #[error("at most 64 generators are supported")]
    TooManyGenerators,
}

#[derive(Debug, Clone)]
pub struct FreeObjectAutomaton {
    generators: Vec<Variable>,
    coordinates: usize,
    transitions: Vec<Vec<usize>>,
    representatives: Vec<Word>,
}

impl FreeObjectAutomaton {
    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn generators(&self) -> &[Variable] {
        &self.generators
    }

    pub fn coordinates(&self) -> usize {
        self.coordinates
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn step(&self, state: usize, generator: usize) -> usize {
        self.transitions[state][generator]
    }

    /// The state reached by `w`, or `None` if `w` uses a non-generator.
    pub fn run(&self, w: &Word) -> Option<usize> {
        let mut s = 0;
        for v in w.letters() {
            let g = self.generators.iter().position(|x| x == v)?;
            s = self.transitions[s][g];
        }
        Some(s)
    }

    /// Shortlex-least word reaching `state`.
    pub fn representative(&self, state: usize) -> &Word {
        &self.representatives[state]
    }

    /// `state_id [representative] : gen -> state_id ...`, one line per state.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, row) in self.transitions.iter().enumerate() {
            let _ = write!(out, "{s} [{}] :", self.representatives[s]);
            for (g, t) in row.iter().enumerate() {
                let _ = write!(out, " {} -> {t}", self.generators[g]);
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the free object of `var(M)` on the given generators.
pub fn build_free_object_on(
    m: &FiniteMonoid,
    generators: &[Variable],
    cap: usize,
) -> Result<FreeObjectAutomaton, FreeObjectError> {
    let k = generators.len();
    if k > 64 {
        return Err(FreeObjectError::TooManyGenerators);
    }
    let zero = m.zero().filter(|&z| z != m.identity());
    let values: Vec<usize> = m.elements().filter(|&a| Some(a) != zero).collect();
    let coordinates = values
        .len()
        .checked_pow(k as u32)
        .filter(|&c| c <= MAX_COORDINATES)
        .ok_or(FreeObjectError::TooManyCoordinates {
            coordinates: values.len().saturating_pow(k as u32),
            limit: MAX_COORDINATES,
        })?;

    // images[g][c]: value of generator g under coordinate c
    let mut images = vec![vec![0u16; coordinates]; k];
    for c in 0..coordinates {
        let mut rest = c;
        for g in (0..k).rev() {
            images[g][c] = values[rest % values.len()] as u16;
            rest /= values.len();
        }
    }
    let track_mask = zero.is_some();
    let width = coordinates + usize::from(track_mask) * 4;

    let encode_mask = |v: &mut Vec<u16>, mask: u64| {
        if track_mask {
            for i in 0..4 {
                v.push((mask >> (16 * i)) as u16);
            }
        }
    };
    let mut start = vec![m.identity() as u16; coordinates];
    encode_mask(&mut start, 0);

    let mut index: HashMap<Vec<u16>, usize> = HashMap::new();
    let mut states: Vec<(Vec<u16>, u64)> = vec![(start.clone(), 0)];
    let mut representatives = vec![Word::empty()];
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(k);
        for g in 0..k {
            let (vec, mask) = &states[s];
            let mask = mask | (1u64 << g);
            let mut next: Vec<u16> = Vec::with_capacity(width);
            next.extend(
                vec[..coordinates]
                    .iter()
                    .zip(&images[g])
                    .map(|(&a, &b)| m.mul(a as usize, b as usize) as u16),
            );
            encode_mask(&mut next, mask);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    if id >= cap {
                        return Err(FreeObjectError::StateCap { cap, coordinates });
                    }
                    let mut rep = representatives[s].letters().to_vec();
                    rep.push(generators[g]);
                    representatives.push(Word::from_letters(rep));
                    index.insert(next.clone(), id);
                    states.push((next, mask));
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        transitions.push(row);
    }
    Ok(FreeObjectAutomaton {
        generators: generators.to_vec(),
        coordinates,
        transitions,
        representatives,
    })
}

/// Free object on `k` generators named `x1, ..., xk`.
pub fn build_free_object(
    m: &FiniteMonoid,
    k: usize,
    cap: usize,
) -> Result<FreeObjectAutomaton, FreeObjectError> {
    let gens: Vec<Variable> = (1..=k as u32).map(|i| Variable::indexed('x', i)).collect();
    build_free_object_on(m, &gens, cap)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsotermVerdict {
    Isoterm,
    NotIsoterm { witness: Word },
    Inconclusive(FreeObjectError),
}

/// Exponent of a finite group: the least `e ≥ 1` with `g^e = 1` for all `g`.
fn group_exponent(m: &FiniteMonoid) -> Option<usize> {
    let mut e = 1;
    for a in m.elements() {
        let (index, period) = m.index_period(a);
        if index != 0 {
            return None;
        }
        e = lcm(e, period);
    }
    Some(e)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn fresh_variable(w: &Word) -> Variable {
    let used = w.content();
    ('a'..='z')
        .rev()
        .map(Variable::new)
        .find(|v| !used.contains(v))
        .unwrap_or_else(|| {
            (1..)
                .map(|i| Variable::indexed('z', i))
                .find(|v| !used.contains(v))
                .expect("fresh")
        })
}

/// Decides whether `w` is an isoterm for `var(M)`.
///
/// If `M` is a group of exponent `e`, `w ≈ w z^e` holds and `w` is never an
/// isoterm. Otherwise every word equivalent to `w` has the same content, so
/// the automaton on `content(w)` settles the question; the witness is the
/// shortlex-least other word reaching the same state.
pub fn is_isoterm(m: &FiniteMonoid, w: &Word) -> IsotermVerdict {
    is_isoterm_with_cap(m, w, DEFAULT_STATE_CAP)
}

pub fn is_isoterm_with_cap(m: &FiniteMonoid, w: &Word, cap: usize) -> IsotermVerdict {
    if let Some(e) = group_exponent(m) {
        let z = fresh_variable(w);
        return IsotermVerdict::NotIsoterm {
            witness: w.concat(&Word::single(z).pow(e)),
        };
    }
    let gens: Vec<Variable> = w.content().into_iter().collect();
    let fa = match build_free_object_on(m, &gens, cap) {
        Ok(fa) => fa,
        Err(e) => return IsotermVerdict::Inconclusive(e),
    };
    match shortest_other_word(&fa, w) {
        Some(witness) => IsotermVerdict::NotIsoterm { witness },
        None => IsotermVerdict::Isoterm,
    }
}

/// The free object of the join of the factors' varieties: the reachable part
/// of the product of their free objects on the same generators.
pub fn join_free_object(
    factors: &[FreeObjectAutomaton],
    cap: usize,
) -> Result<FreeObjectAutomaton, FreeObjectError> {
    let first = factors.first().expect("at least one factor");
    let generators = first.generators.clone();
    debug_assert!(factors.iter().all(|f| f.generators == generators));
    let k = generators.len();
    let coordinates = factors.iter().map(|f| f.coordinates).sum();
    let start = vec![0usize; factors.len()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut representatives = vec![Word::empty()];
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut s = 0;
    while s < states.len() {
        let mut row = Vec::with_capacity(k);
        for g in 0..k {
            let next: Vec<usize> = states[s]
                .iter()
                .zip(factors)
                .map(|(&q, f)| f.step(q, g))
                .collect();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    if id >= cap {
                        return Err(FreeObjectError::StateCap { cap, coordinates });
                    }
                    let mut rep = representatives[s].letters().to_vec();
                    rep.push(generators[g]);
                    representatives.push(Word::from_letters(rep));
                    index.insert(next.clone(), id);
                    states.push(next);
                    id
                }
            };
            row.push(id);
        }
        transitions.push(row);
        s += 1;
    }
    Ok(FreeObjectAutomaton {
        generators,
        coordinates,
        transitions,
        representatives,
    })
}

/// Decides whether `w` is an isoterm for `var(M1) ∨ ... ∨ var(Mn)`, the
/// variety generated by the product, without building the product table.
///
/// A non-group factor puts the semilattice in the join, so equivalent words
/// share their content and the join's free object on `content(w)` decides.
pub fn is_isoterm_in_join(factors: &[FiniteMonoid], w: &Word, cap: usize) -> IsotermVerdict {
    if let [m] = factors {
        return is_isoterm_with_cap(m, w, cap);
    }
    let exponents: Option<Vec<usize>> = factors.iter().map(group_exponent).collect();
    if let Some(es) = exponents {
        let e = es.into_iter().fold(1, lcm);
        let z = fresh_variable(w);
        return IsotermVerdict::NotIsoterm {
            witness: w.concat(&Word::single(z).pow(e)),
        };
    }
    let gens: Vec<Variable> = w.content().into_iter().collect();
    let automata: Result<Vec<_>, _> = factors
        .iter()
        .map(|m| build_free_object_on(m, &gens, cap))
        .collect();
    let fa = match automata.and_then(|a| join_free_object(&a, cap)) {
        Ok(fa) => fa,
        Err(e) => return IsotermVerdict::Inconclusive(e),
    };
    match shortest_other_word(&fa, w) {
        Some(witness) => IsotermVerdict::NotIsoterm { witness },
        None => IsotermVerdict::Isoterm,
    }
}

/// Shortlex-least word different from `w` reaching the state of `w`.
pub fn shortest_other_word(fa: &FreeObjectAutomaton, w: &Word) -> Option<Word> {
    let target = fa.run(w)?;
    let letters: Vec<usize> = w
        .letters()
        .iter()
        .map(|v| {
            fa.generators
                .iter()
                .position(|g| g == v)
                .expect("generator")
        })
        .collect();
    let off = letters.len() + 1;
    // node = (state, track) with track = matched prefix length, or `off`
    let key = |s: usize, t: usize| s * (off + 1) + t;
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let start = key(0, 0);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    parent.insert(start, (usize::MAX, usize::MAX));
    while let Some((s, t)) = queue.pop_front() {
        if s == target && t == off {
            let mut out = Vec::new();
            let mut node = key(s, t);
            while node != start {
                let (prev, g) = parent[&node];
                out.push(fa.generators[g]);
                node = prev;
            }
            out.reverse();
            return Some(Word::from_letters(out));
        }
        for g in 0..fa.generators.len() {
            let ns = fa.step(s, g);
            let nt = if t < letters.len() && letters[t] == g {
                t + 1
            } else {
                off
            };
            let nk = key(ns, nt);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(nk) {
                e.insert((key(s, t), g));
                queue.push_back((ns, nt));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassCount {
    Finite(u64),
    AtLeast(u64),
    Infinite,
    Inconclusive(FreeObjectError),
}

/// Number of words `u` with `var(M) ⊨ u ≈ w`, saturating at `cap`.
pub fn word_class_count(m: &FiniteMonoid, w: &Word, cap: u64) -> ClassCount {
    if group_exponent(m).is_some() {
        return ClassCount::Infinite;
    }
    let gens: Vec<Variable> = w.content().into_iter().collect();
    let fa = match build_free_object_on(m, &gens, DEFAULT_STATE_CAP) {
        Ok(fa) => fa,
        Err(e) => return ClassCount::Inconclusive(e),
    };
    let target = fa.run(w).expect("w is over its own content");
    count_paths(&fa, target, cap)
}

/// Paths from the start state to `target`, with cycle detection.
pub fn count_paths(fa: &FreeObjectAutomaton, target: usize, cap: u64) -> ClassCount {
    let n = fa.state_count();
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, row) in fa.transitions.iter().enumerate() {
        for &t in row {
            reverse[t].push(s);
        }
    }
    let mut useful = vec![false; n];
    let mut stack = vec![target];
    useful[target] = true;
    while let Some(t) = stack.pop() {
        for &s in &reverse[t] {
            if !useful[s] {
                useful[s] = true;
                stack.push(s);
            }
        }
    }
    // every state is reachable from the start; find a topological order of
    // the useful subgraph, or a cycle in it
    let mut indegree = vec![0usize; n];
    for s in 0..n {
        if useful[s] {
            for &t in &fa.transitions[s] {
                if useful[t] {
                    indegree[t] += 1;
                }
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&s| useful[s] && indegree[s] == 0).collect();
    let mut topo = Vec::new();
    while let Some(s) = ready.pop() {
        topo.push(s);
        for &t in &fa.transitions[s] {
            if useful[t] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(t);
                }
            }
        }
    }
    if topo.len() < useful.iter().filter(|&&u| u).count() {
        return ClassCount::Infinite;
    }
    let mut count = vec![0u64; n];
    count[0] = 1;
    for &s in &topo {
        for &t in &fa.transitions[s] {
            if useful[t] {
                count[t] = count[t].saturating_add(count[s]).min(cap);
            }
        }
    }
    if count[target] >= cap {
        ClassCount::AtLeast(cap)
    } else {
        ClassCount::Finite(count[target])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::Identity;
    use crate::monoids::rees_quotient;
    use crate::satisfaction::satisfies;
    use crate::words::w;

    #[test]
    fn join_matches_materialized_product() {
        let pairs = [
            (rees_quotient(&[w("x y")]), rees_quotient(&[w("x h x")])),
            (rees_quotient(&[w("x")]), FiniteMonoid::cyclic_group(2)),
            (rees_quotient(&[w("x y x")]), rees_quotient(&[w("y x x")])),
        ];
        for (a, b) in pairs {
            let prod = a.direct_product(&b);
            let gens = [Variable::new('x'), Variable::new('y')];
            let fa = build_free_object_on(&a, &gens, 10_000).unwrap();
            let fb = build_free_object_on(&b, &gens, 10_000).unwrap();
            let fp = build_free_object_on(&prod, &gens, 10_000).unwrap();
            assert_eq!(
                join_free_object(&[fa, fb], 10_000).unwrap().state_count(),
                fp.state_count()
            );
            for word in ["x", "x y", "x y x", "x x y", "y x y x"] {
                let factors = [a.clone(), b.clone()];
                assert_eq!(
                    is_isoterm_in_join(&factors, &w(word), 10_000),
                    is_isoterm_with_cap(&prod, &w(word), 10_000),
                    "{word}"
                );
            }
        }
    }

    #[test]
    fn zero_generators_one_state() {
        let m = rees_quotient(&[w("x h x")]);
        assert_eq!(build_free_object(&m, 0, 10).unwrap().state_count(), 1);
        assert_eq!(
            build_free_object(&FiniteMonoid::cyclic_group(3), 0, 10)
                .unwrap()
                .state_count(),
            1
        );
    }

    #[test]
    fn small_free_objects() {
        assert_eq!(
            build_free_object(&rees_quotient(&[w("x")]), 1, 100)
                .unwrap()
                .state_count(),
            3
        );
        assert_eq!(
            build_free_object(&rees_quotient(&[Word::empty()]), 2, 100)
                .unwrap()
                .state_count(),
            4
        );
        // free object of the group C2 on one generator is C2 itself
        assert_eq!(
            build_free_object(&FiniteMonoid::cyclic_group(2), 1, 100)
                .unwrap()
                .state_count(),
            2
        );
    }

    #[test]
    fn isoterm_examples() {
        assert_eq!(
            is_isoterm(&rees_quotient(&[w("x h x")]), &w("x h x")),
            IsotermVerdict::Isoterm
        );
        assert_eq!(
            is_isoterm(&rees_quotient(&[w("x y")]), &w("x y")),
            IsotermVerdict::Isoterm
        );
        assert_eq!(
            is_isoterm(&rees_quotient(&[w("x y")]), &w("x")),
            IsotermVerdict::Isoterm
        );
        assert_eq!(
            is_isoterm(&rees_quotient(&[w("x")]), &w("x y")),
            IsotermVerdict::NotIsoterm { witness: w("y x") }
        );
    }

    #[test]
    fn group_words_never_isoterms() {
        let v = is_isoterm(&FiniteMonoid::cyclic_group(2), &w("x y"));
        assert_eq!(
            v,
            IsotermVerdict::NotIsoterm {
                witness: w("x y z^2")
            }
        );
    }

    #[test]
    fn class_counts() {
        assert_eq!(
            word_class_count(&rees_quotient(&[w("x h x")]), &w("x h x"), 100),
            ClassCount::Finite(1)
        );
        assert_eq!(
            word_class_count(&rees_quotient(&[Word::empty()]), &w("x y"), 100),
            ClassCount::Infinite
        );
        assert_eq!(
            word_class_count(&rees_quotient(&[w("x y")]), &Word::empty(), 100),
            ClassCount::Finite(1)
        );
        // xy ≈ yx in Rq{x}; both words of length two with content {x,y}
        assert_eq!(
            word_class_count(&rees_quotient(&[w("x")]), &w("x y"), 100),
            ClassCount::Finite(2)
        );
    }

    #[test]
    fn states_agree_with_satisfaction() {
        let m = rees_quotient(&[w("x y")]);
        let (x, y) = (Variable::new('x'), Variable::new('y'));
        let fa = build_free_object_on(&m, &[x, y], 1000).unwrap();
        let mut words = vec![Word::empty()];
        for len in 1..=4 {
            let mut next = Vec::new();
            for u in words.iter().filter(|u| u.len() == len - 1) {
                for v in [x, y] {
                    let mut l = u.letters().to_vec();
                    l.push(v);
                    next.push(Word::from_letters(l));
                }
            }
            words.extend(next);
        }
        for u in &words {
            for v in &words {
                let same = fa.run(u) == fa.run(v);
                assert_eq!(
                    same,
                    satisfies(&m, &Identity::new(u.clone(), v.clone())).holds(),
                    "{u} {v}"
                );
            }
        }
    }

    #[test]
    fn dump_lists_states() {
        let fa = build_free_object(&rees_quotient(&[w("x")]), 1, 100).unwrap();
        assert_eq!(
            fa.dump(),
            "0 [1] : x1 -> 1\n1 [x1] : x1 -> 2\n2 [x1 x1] : x1 -> 2\n"
        );
    }

    #[test]
    fn cap_is_inconclusive() {
        let m = rees_quotient(&[w("x h x")]);
        assert!(matches!(
            is_isoterm_with_cap(&m, &w("x h x"), 3),
            IsotermVerdict::Inconclusive(FreeObjectError::StateCap { .. })
        ));
    }
}
