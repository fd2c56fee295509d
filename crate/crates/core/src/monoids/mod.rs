//! Finite monoids given by multiplication tables.
//!
//! Elements are dense indices `0..order`. Constructors cover explicit tables,
//! Rees quotients of free monoids, presentations closed by completion, direct
//! products, duals and quotients by generated congruences. The zero element is
//! detected, never declared.

mod green;
mod iso;
mod presentation;
mod rees;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use green::GreenData;
pub use iso::{find_isomorphism, invariant_signature};
pub use presentation::{
    close_presentation, parse_presentation, Presentation, PresentationError, DEFAULT_CLOSURE_CAP,
};
pub use rees::rees_quotient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("a monoid needs at least one element")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    RowLength {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("table has {rows} rows, expected {order}")]
    RowCount { rows: usize, order: usize },
    #[error("entry {row}·{col} = {value} is out of range")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("identity index {0} is out of range")]
    IdentityOutOfRange(usize),
    #[error("identity law fails at element {0}")]
    IdentityLaw(String),
    #[error("not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})")]
    NonAssociative { a: String, b: String, c: String },
    #[error("{given} labels for {order} elements")]
    LabelCount { given: usize, order: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    zero: Option<usize>,
    labels: Vec<String>,
}

impl FiniteMonoid {
    /// Validates and builds a monoid. Without labels, elements are named by index.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        identity: usize,
        labels: Option<Vec<String>>,
    ) -> Result<Self, MonoidError> {
        let order = table.len();
        if order == 0 {
            return Err(MonoidError::Empty);
        }
        let mut flat = Vec::with_capacity(order * order);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(MonoidError::RowLength {
                    row,
                    len: entries.len(),
                    order,
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(MonoidError::OutOfRange { row, col, value });
                }
            }
            flat.extend_from_slice(entries);
        }
        Self::from_flat(order, flat, identity, labels)
    }

    pub(crate) fn from_flat(
        order: usize,
        table: Vec<usize>,
        identity: usize,
        labels: Option<Vec<String>>,
    ) -> Result<Self, MonoidError> {
        if order == 0 {
            return Err(MonoidError::Empty);
        }
        if table.len() != order * order {
            return Err(MonoidError::RowCount {
                rows: table.len() / order,
                order,
            });
        }
        if identity >= order {
            return Err(MonoidError::IdentityOutOfRange(identity));
        }
        let labels = match labels {
            Some(l) if l.len() != order => {
                return Err(MonoidError::LabelCount {
                    given: l.len(),
                    order,
                })
            }
            Some(l) => l,
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(MonoidError::DuplicateLabel(l.clone()));
            }
        }
        let mut m = FiniteMonoid {
            order,
            table,
            identity,
            zero: None,
            labels,
        };
        for a in 0..order {
            if m.mul(identity, a) != a || m.mul(a, identity) != a {
                return Err(MonoidError::IdentityLaw(m.labels[a].clone()));
            }
        }
        if let Some((a, b, c)) = m.associativity_failure() {
            return Err(MonoidError::NonAssociative {
                a: m.labels[a].clone(),
                b: m.labels[b].clone(),
                c: m.labels[c].clone(),
            });
        }
        m.zero = m.detect_zero();
        Ok(m)
    }

    fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    fn detect_zero(&self) -> Option<usize> {
        (0..self.order)
            .find(|&z| (0..self.order).all(|a| self.mul(z, a) == z && self.mul(a, z) == z))
    }

    pub fn trivial() -> Self {
        Self::from_flat(1, vec![0], 0, Some(vec!["1".into()])).expect("trivial monoid")
    }

    /// The cyclic group of order `n`, identity at index 0.
    pub fn cyclic_group(n: usize) -> Self {
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a + b) % n))
            .collect();
        let labels = (0..n)
            .map(|i| {
                if i == 0 {
                    "1".to_string()
                } else {
                    format!("g{i}")
                }
            })
            .collect();
        Self::from_flat(n, table, 0, Some(labels)).expect("cyclic group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn flat_table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.is_idempotent(a)).collect()
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn power(&self, a: usize, n: usize) -> usize {
        let mut r = self.identity;
        for _ in 0..n {
            r = self.mul(r, a);
        }
        r
    }

    /// Product of a sequence of elements.
    pub fn product<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items
            .into_iter()
            .fold(self.identity, |acc, x| self.mul(acc, x))
    }

    /// `(index, period)`: the least `i ≥ 0`, `p ≥ 1` with `a^(i+p) = a^i`.
    pub fn index_period(&self, a: usize) -> (usize, usize) {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut x = self.identity;
        for k in 0.. {
            if let Some(&first) = seen.get(&x) {
                return (first, k - first);
            }
            seen.insert(x, k);
            x = self.mul(x, a);
        }
        unreachable!()
    }

    /// The least `n` with `x^(n+1) = x^n` for every element, or an element of
    /// period greater than one.
    pub fn aperiodic_index(&self) -> Result<usize, NotAperiodic> {
        let mut n = 0;
        for a in self.elements() {
            let (index, period) = self.index_period(a);
            if period > 1 {
                return Err(NotAperiodic {
                    element: a,
                    label: self.labels[a].clone(),
                    period,
                });
            }
            n = n.max(index);
        }
        Ok(n)
    }

    pub fn is_aperiodic(&self) -> bool {
        self.aperiodic_index().is_ok()
    }

    /// Whether `x^(n+1) = x^n` holds for all elements.
    pub fn satisfies_aperiodicity(&self, n: usize) -> bool {
        self.elements()
            .all(|a| self.power(a, n + 1) == self.power(a, n))
    }

    pub fn idempotents_commute(&self) -> bool {
        let e = self.idempotents();
        e.iter()
            .all(|&a| e.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn idempotents_central(&self) -> bool {
        self.idempotents()
            .iter()
            .all(|&e| self.elements().all(|a| self.mul(e, a) == self.mul(a, e)))
    }

    /// Transposed table.
    pub fn dual(&self) -> FiniteMonoid {
        let n = self.order;
        let table = (0..n * n)
            .map(|k| self.table[(k % n) * n + k / n])
            .collect();
        FiniteMonoid {
            order: n,
            table,
            identity: self.identity,
            zero: self.zero,
            labels: self.labels.clone(),
        }
    }

    /// Componentwise product; element `(a, b)` has index `a·|N| + b`.
    pub fn direct_product(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let (m, n) = (self.order, other.order);
        let order = m * n;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let a = self.mul(x / n, y / n);
                let b = other.mul(x % n, y % n);
                table.push(a * n + b);
            }
        }
        let labels = (0..order)
            .map(|x| format!("({},{})", self.labels[x / n], other.labels[x % n]))
            .collect();
        let identity = self.identity * n + other.identity;
        let zero = match (self.zero, other.zero) {
            (Some(z1), Some(z2)) => Some(z1 * n + z2),
            _ => None,
        };
        FiniteMonoid {
            order,
            table,
            identity,
            zero,
            labels,
        }
    }

    /// Renumbers elements: element `a` becomes `perm[a]`.
    pub fn permute(&self, perm: &[usize]) -> FiniteMonoid {
        let n = self.order;
        let mut table = vec![0; n * n];
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        FiniteMonoid {
            order: n,
            table,
            identity: perm[self.identity],
            zero: self.zero.map(|z| perm[z]),
            labels,
        }
    }

    /// Quotient by the congruence generated by the given classes. Each
    /// quotient element takes the label of its least member; order follows
    /// least members.
    pub fn quotient(&self, classes: &[Vec<usize>]) -> FiniteMonoid {
        let n = self.order;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        fn union(parent: &mut [usize], a: usize, b: usize) -> bool {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra == rb {
                return false;
            }
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
            true
        }
        for class in classes {
            for w in class.windows(2) {
                union(&mut parent, w[0], w[1]);
            }
        }
        loop {
            let mut changed = false;
            for a in 0..n {
                let ra = find(&mut parent, a);
                if ra == a {
                    continue;
                }
                for c in 0..n {
                    changed |= union(&mut parent, self.mul(c, a), self.mul(c, ra));
                    changed |= union(&mut parent, self.mul(a, c), self.mul(ra, c));
                }
            }
            if !changed {
                break;
            }
        }
        let roots: Vec<usize> = (0..n).map(|a| find(&mut parent, a)).collect();
        let mut reps: Vec<usize> = roots.clone();
        reps.sort_unstable();
        reps.dedup();
        let index: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let k = reps.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &reps {
            for &b in &reps {
                table.push(index[&roots[self.mul(a, b)]]);
            }
        }
        let labels = reps.iter().map(|&r| self.labels[r].clone()).collect();
        FiniteMonoid::from_flat(k, table, index[&roots[self.identity]], Some(labels))
            .expect("quotient of a monoid is a monoid")
    }

    pub fn green(&self) -> GreenData {
        GreenData::compute(self)
    }

    pub fn is_j_trivial(&self) -> bool {
        self.green().is_j_trivial()
    }

    pub fn is_completely_regular(&self) -> bool {
        self.green().is_completely_regular(self)
    }

    /// Serializes in the table file format.
    pub fn to_table_text(&self) -> String {
        let mut s = format!("order {}\nidentity {}\nnames", self.order, self.identity);
        for l in &self.labels {
            s.push(' ');
            s.push_str(l);
        }
        s.push_str("\ntable\n");
        for row in self.table.chunks(self.order) {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the table file format:
    ///
    /// ```text
    /// order 5
    /// identity 4
    /// names 0 e f ef 1
    /// table
    /// 0 0 0 0 0
    /// ...
    /// ```
    pub fn parse_table(text: &str) -> Result<FiniteMonoid, MonoidError> {
        let mut order = None;
        let mut identity = None;
        let mut labels = None;
        let mut rows: Vec<Vec<usize>> = Vec::new();
        let mut in_table = false;
        let fmt_err = |line: usize, message: &str| MonoidError::Format {
            line,
            message: message.to_string(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if in_table {
                let row: Result<Vec<usize>, _> =
                    content.split_whitespace().map(str::parse).collect();
                rows.push(row.map_err(|_| fmt_err(line, "table rows hold element indices"))?);
                continue;
            }
            let mut parts = content.split_whitespace();
            match parts.next() {
                Some("order") => {
                    order = Some(
                        parts
                            .next()
                            .and_then(|x| x.parse::<usize>().ok())
                            .ok_or_else(|| fmt_err(line, "order needs a number"))?,
                    )
                }
                Some("identity") => {
                    identity = Some(
                        parts
                            .next()
                            .and_then(|x| x.parse::<usize>().ok())
                            .ok_or_else(|| fmt_err(line, "identity needs an index"))?,
                    )
                }
                Some("names") => labels = Some(parts.map(str::to_string).collect::<Vec<_>>()),
                Some("table") => in_table = true,
                _ => return Err(fmt_err(line, "expected order, identity, names or table")),
            }
        }
        let order = order.ok_or_else(|| fmt_err(0, "missing order"))?;
        let identity = identity.ok_or_else(|| fmt_err(0, "missing identity"))?;
        if rows.len() != order {
            return Err(MonoidError::RowCount {
                rows: rows.len(),
                order,
            });
        }
        FiniteMonoid::from_table(rows, identity, labels)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("element {label} has period {period}")]
pub struct NotAperiodic {
    pub element: usize,
    pub label: String,
    pub period: usize,
}

impl fmt::Display for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.labels.iter().map(String::len).max().unwrap_or(1);
        write!(f, "{:>width$} |", "")?;
        for l in &self.labels {
            write!(f, " {l:>width$}")?;
        }
        writeln!(f)?;
        for a in self.elements() {
            write!(f, "{:>width$} |", self.labels[a])?;
            for b in self.elements() {
                write!(f, " {:>width$}", self.labels[self.mul(a, b)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const A0_TABLE: &str = "\
order 5
identity 4
names 0 e f ef 1
table
0 0 0 0 0
0 1 3 3 1
0 0 2 0 2
0 0 3 0 3
0 1 2 3 4
";

    pub(crate) fn a0() -> FiniteMonoid {
        FiniteMonoid::parse_table(A0_TABLE).unwrap()
    }

    #[test]
    fn trivial_monoid() {
        let t = FiniteMonoid::from_table(vec![vec![0]], 0, None).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.zero(), Some(0));
        assert_eq!(t.dual(), t);
        assert!(t.is_j_trivial());
    }

    #[test]
    fn a0_table_parses() {
        let m = a0();
        assert_eq!(m.order(), 5);
        assert_eq!(m.zero(), Some(0));
        let (e, f) = (m.index_of("e").unwrap(), m.index_of("f").unwrap());
        assert_eq!(m.mul(f, e), 0);
        assert_eq!(m.label(m.mul(e, f)), "ef");
        assert_eq!(FiniteMonoid::parse_table(&m.to_table_text()).unwrap(), m);
    }

    #[test]
    fn corrupted_table_names_triple() {
        // ef·e should be 0; set it to ef (an associativity break: (ef)e vs e(fe)=0)
        let bad = A0_TABLE.replace("0 0 3 0 3", "0 3 3 0 3");
        match FiniteMonoid::parse_table(&bad) {
            Err(MonoidError::NonAssociative { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_law_checked() {
        let r = FiniteMonoid::from_table(vec![vec![0, 0], vec![0, 0]], 1, None);
        assert!(matches!(r, Err(MonoidError::IdentityLaw(_))));
        let r = FiniteMonoid::from_table(vec![vec![0, 2], vec![1, 1]], 0, None);
        assert!(matches!(r, Err(MonoidError::OutOfRange { .. })));
    }

    #[test]
    fn aperiodicity_of_a0() {
        let m = a0();
        assert_eq!(m.aperiodic_index(), Ok(2));
        assert!(!m.satisfies_aperiodicity(0));
        assert!(!m.satisfies_aperiodicity(1));
        assert!(m.satisfies_aperiodicity(2));
    }

    #[test]
    fn group_not_aperiodic() {
        let c2 = FiniteMonoid::cyclic_group(2);
        let err = c2.aperiodic_index().unwrap_err();
        assert_eq!(err.element, 1);
        assert_eq!(err.period, 2);
        assert!(c2.is_completely_regular());
        assert_eq!(c2.zero(), None);
    }

    #[test]
    fn a0_idempotents_do_not_commute() {
        let m = a0();
        assert!(!m.idempotents_commute());
        assert!(!m.idempotents_central());
    }

    #[test]
    fn products_and_duals() {
        let m = a0();
        let t = FiniteMonoid::trivial();
        let p = m.direct_product(&t);
        assert!(find_isomorphism(&p, &m).is_some());
        assert_eq!(m.dual().dual(), m);
        let mm = m.direct_product(&m);
        assert_eq!(mm.order(), 25);
        assert_eq!(mm.zero(), Some(0));
    }

    #[test]
    fn quotient_collapses_ideal() {
        // identify e with 0: the ideal generated by e collapses, leaving {0, f, 1}
        let m = a0();
        let q = m.quotient(&[vec![0, 1]]);
        assert_eq!(q.order(), 3);
        assert_eq!(q.labels(), &["0", "f", "1"]);
    }
}
