//! Enumeration of small monoids up to isomorphism and witness search.
//!
//! Tables keep the identity at index 0. Cells of the non-identity block are
//! filled in row-major order with values tried in increasing order; a partial
//! table is dropped as soon as it breaks associativity or some permutation
//! fixing 0 already yields a lexicographically smaller flattened table. Each
//! isomorphism class is therefore met exactly once, by its least table.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::identities::{permutations, Identity};
use crate::monoids::FiniteMonoid;
use crate::satisfaction::{satisfies_with_budget, Verdict, DEFAULT_BUDGET};

pub const MAX_SEARCH_ORDER: usize = 7;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

const UNSET: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("max order {0} is above the supported bound {MAX_SEARCH_ORDER}")]
    OrderTooLarge(usize),
}

/// Labels `1, a, b, c, ...` with the identity first.
fn labels(n: usize) -> Vec<String> {
    std::iter::once("1".to_string())
        .chain((0..n - 1).map(|i| ((b'a' + i as u8) as char).to_string()))
        .collect()
}

fn to_monoid(n: usize, table: &[u8]) -> FiniteMonoid {
    let rows = (0..n)
        .map(|i| (0..n).map(|j| table[i * n + j] as usize).collect())
        .collect();
    FiniteMonoid::from_table(rows, 0, Some(labels(n))).expect("enumerated tables are monoids")
}

struct Enumerator<'a> {
    n: usize,
    table: Vec<u8>,
    /// Permutations of `0..n` fixing 0, with their inverses.
    perms: Vec<(Vec<u8>, Vec<u8>)>,
    nodes: u64,
    budget: u64,
    visit: &'a mut dyn FnMut(&FiniteMonoid) -> ControlFlow<()>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Visitor,
    Budget,
}

impl Enumerator<'_> {
    fn get(&self, a: usize, b: usize) -> u8 {
        self.table[a * self.n + b]
    }

    /// Checks every triple whose two bracketings are both defined.
    fn associative_so_far(&self) -> bool {
        let n = self.n;
        for a in 1..n {
            for b in 1..n {
                let ab = self.get(a, b);
                for c in 1..n {
                    let bc = self.get(b, c);
                    if ab == UNSET || bc == UNSET {
                        continue;
                    }
                    let l = self.get(ab as usize, c);
                    let r = self.get(a, bc as usize);
                    if l != UNSET && r != UNSET && l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// False when some relabelling is already known to be smaller.
    fn canonical_so_far(&self) -> bool {
        let n = self.n;
        'perm: for (p, inv) in &self.perms {
            for i in 1..n {
                for j in 1..n {
                    let t = self.get(i, j);
                    let src = self.get(inv[i] as usize, inv[j] as usize);
                    if t == UNSET || src == UNSET {
                        continue 'perm;
                    }
                    let q = p[src as usize];
                    if q < t {
                        return false;
                    }
                    if q > t {
                        continue 'perm;
                    }
                }
            }
        }
        true
    }

    fn fill(&mut self, cell: usize) -> Result<(), Stop> {
        let n = self.n;
        let block = (n - 1) * (n - 1);
        if cell == block {
            let m = to_monoid(n, &self.table);
            return match (self.visit)(&m) {
                ControlFlow::Continue(()) => Ok(()),
                ControlFlow::Break(()) => Err(Stop::Visitor),
            };
        }
        let (i, j) = (1 + cell / (n - 1), 1 + cell % (n - 1));
        for v in 0..n as u8 {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Stop::Budget);
            }
            self.table[i * n + j] = v;
            if self.associative_so_far() && self.canonical_so_far() {
                self.fill(cell + 1)?;
            }
        }
        self.table[i * n + j] = UNSET;
        Ok(())
    }
}

/// How an enumeration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationEnd {
    Complete,
    Stopped,
    BudgetExhausted,
}

/// Visits each monoid of order `n` once per isomorphism class, spending at
/// most `budget` search nodes. Returns how the run ended and the nodes used.
pub fn enumerate_monoids(
    n: usize,
    budget: u64,
    visit: &mut dyn FnMut(&FiniteMonoid) -> ControlFlow<()>,
) -> (EnumerationEnd, u64) {
    assert!(n >= 1, "monoids have at least one element");
    if n == 1 {
        return match visit(&FiniteMonoid::trivial()) {
            ControlFlow::Continue(()) => (EnumerationEnd::Complete, 0),
            ControlFlow::Break(()) => (EnumerationEnd::Stopped, 0),
        };
    }
    let mut table = vec![UNSET; n * n];
    for a in 0..n {
        table[a] = a as u8;
        table[a * n] = a as u8;
    }
    let perms = permutations(n - 1)
        .into_iter()
        .map(|p| {
            let mut fwd = vec![0u8; n];
            let mut inv = vec![0u8; n];
            for (i, &x) in p.iter().enumerate() {
                fwd[i + 1] = x as u8;
                inv[x] = (i + 1) as u8;
            }
            (fwd, inv)
        })
        .collect();
    let mut e = Enumerator {
        n,
        table,
        perms,
        nodes: 0,
        budget,
        visit,
    };
    let end = match e.fill(0) {
        Ok(()) => EnumerationEnd::Complete,
        Err(Stop::Visitor) => EnumerationEnd::Stopped,
        Err(Stop::Budget) => EnumerationEnd::BudgetExhausted,
    };
    (end, e.nodes)
}

/// Number of monoids of order `n` up to isomorphism.
pub fn count_monoids(n: usize) -> usize {
    let mut count = 0;
    let (end, _) = enumerate_monoids(n, u64::MAX, &mut |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    debug_assert_eq!(end, EnumerationEnd::Complete);
    count
}

/// The same count by brute force: every table with the identity at index 0,
/// filtered for associativity and reduced to its least relabelling.
pub fn count_monoids_naive(n: usize) -> usize {
    if n == 1 {
        return 1;
    }
    let free: Vec<(usize, usize)> = (1..n).flat_map(|i| (1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n - 1);
    let total = n.pow(free.len() as u32);
    let mut classes = BTreeSet::new();
    let mut t = vec![0usize; n * n];
    for a in 0..n {
        t[a] = a;
        t[a * n] = a;
    }
    for code in 0..total {
        let mut c = code;
        for &(i, j) in &free {
            t[i * n + j] = c % n;
            c /= n;
        }
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| t[t[a * n + b] * n + c] == t[a * n + t[b * n + c]]))
        });
        if !assoc {
            continue;
        }
        let least = perms
            .iter()
            .map(|p| {
                let f = |x: usize| if x == 0 { 0 } else { p[x - 1] };
                let mut img = vec![0usize; n * n];
                for a in 0..n {
                    for b in 0..n {
                        img[f(a) * n + f(b)] = f(t[a * n + b]);
                    }
                }
                img
            })
            .min()
            .expect("at least one permutation");
        classes.insert(least);
    }
    classes.len()
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub must_satisfy: Vec<Identity>,
    pub must_fail: Vec<Identity>,
    pub max_order: usize,
    /// Enumeration nodes across all orders.
    pub node_budget: u64,
    /// Products per satisfaction check.
    pub product_budget: u64,
}

impl SearchSpec {
    pub fn new(must_satisfy: Vec<Identity>, must_fail: Vec<Identity>, max_order: usize) -> Self {
        SearchSpec {
            must_satisfy,
            must_fail,
            max_order,
            node_budget: DEFAULT_NODE_BUDGET,
            product_budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        monoid: FiniteMonoid,
        examined: usize,
    },
    /// Every monoid up to `max_order` was examined. `undecided` counts those
    /// whose satisfaction checks ran out of budget.
    NoneWithin {
        max_order: usize,
        examined: usize,
        undecided: usize,
    },
    BudgetExhausted {
        order: usize,
        examined: usize,
        nodes: u64,
    },
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Found { monoid, examined } => {
                writeln!(f, "found order {} after {examined} monoids", monoid.order())?;
                write!(f, "{}", monoid.to_table_text().trim_end())
            }
            SearchOutcome::NoneWithin {
                max_order,
                examined,
                undecided,
            } => {
                write!(f, "none up to order {max_order} ({examined} monoids examined")?;
                if *undecided > 0 {
                    write!(f, ", {undecided} undecided within the product budget")?;
                }
                write!(f, ")")
            }
            SearchOutcome::BudgetExhausted { order, examined, nodes } => write!(
                f,
                "node budget exhausted at order {order} after {nodes} nodes ({examined} monoids examined)"
            ),
        }
    }
}

enum Fit {
    Yes,
    No,
    Undecided,
}

fn fits(m: &FiniteMonoid, spec: &SearchSpec) -> Fit {
    let mut undecided = false;
    for i in &spec.must_fail {
        match satisfies_with_budget(m, i, spec.product_budget) {
            Verdict::Fails(_) => {}
            Verdict::Holds => return Fit::No,
            Verdict::Inconclusive { .. } => undecided = true,
        }
    }
    for i in &spec.must_satisfy {
        match satisfies_with_budget(m, i, spec.product_budget) {
            Verdict::Holds => {}
            Verdict::Fails(_) => return Fit::No,
            Verdict::Inconclusive { .. } => undecided = true,
        }
    }
    if undecided {
        Fit::Undecided
    } else {
        Fit::Yes
    }
}

/// Returns the first monoid, by order and then by canonical table, that
/// satisfies every `must_satisfy` identity and fails every `must_fail` one.
pub fn witness_search(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    if spec.max_order > MAX_SEARCH_ORDER {
        return Err(SearchError::OrderTooLarge(spec.max_order));
    }
    let mut examined = 0;
    let mut undecided = 0;
    let mut nodes_left = spec.node_budget;
    for order in 2..=spec.max_order {
        let mut found = None;
        let (end, nodes) = enumerate_monoids(order, nodes_left, &mut |m| {
            examined += 1;
            match fits(m, spec) {
                Fit::Yes => {
                    found = Some(m.clone());
                    ControlFlow::Break(())
                }
                Fit::No => ControlFlow::Continue(()),
                Fit::Undecided => {
                    undecided += 1;
                    ControlFlow::Continue(())
                }
            }
        });
        if let Some(monoid) = found {
            return Ok(SearchOutcome::Found { monoid, examined });
        }
        if end == EnumerationEnd::BudgetExhausted {
            return Ok(SearchOutcome::BudgetExhausted {
                order,
                examined,
                nodes: spec.node_budget,
            });
        }
        nodes_left -= nodes;
    }
    Ok(SearchOutcome::NoneWithin {
        max_order: spec.max_order,
        examined,
        undecided,
    })
}
