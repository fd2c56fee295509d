//! Isomorphism search between finite monoids.

use super::FiniteMonoid;

/// Per-element data preserved by every isomorphism.
pub fn invariant_signature(m: &FiniteMonoid) -> Vec<Vec<usize>> {
    let g = m.green();
    m.elements()
        .map(|a| {
            let (index, period) = m.index_period(a);
            let fixes_left = m.elements().filter(|&x| m.mul(x, a) == a).count();
            let fixes_right = m.elements().filter(|&x| m.mul(a, x) == a).count();
            let roots = m.elements().filter(|&x| m.mul(x, x) == a).count();
            vec![
                usize::from(a == m.identity()),
                usize::from(Some(a) == m.zero()),
                index,
                period,
                g.left_ideals[a].len(),
                g.right_ideals[a].len(),
                g.ideals[a].len(),
                fixes_left,
                fixes_right,
                roots,
            ]
        })
        .collect()
}

/// A bijection `f` with `f(ab) = f(a)f(b)`, as `f[a]`, or `None`.
pub fn find_isomorphism(m: &FiniteMonoid, n: &FiniteMonoid) -> Option<Vec<usize>> {
    if m.order() != n.order() {
        return None;
    }
    let sm = invariant_signature(m);
    let sn = invariant_signature(n);
    let mut a_sorted = sm.clone();
    let mut b_sorted = sn.clone();
    a_sorted.sort();
    b_sorted.sort();
    if a_sorted != b_sorted {
        return None;
    }
    let mut s = Search {
        m,
        n,
        sm: &sm,
        sn: &sn,
        fwd: vec![None; m.order()],
        used: vec![false; n.order()],
        trail: Vec::new(),
    };
    if !s.assign(m.identity(), n.identity()) {
        return None;
    }
    if s.solve() {
        Some(s.fwd.into_iter().map(|x| x.expect("total")).collect())
    } else {
        None
    }
}

struct Search<'a> {
    m: &'a FiniteMonoid,
    n: &'a FiniteMonoid,
    sm: &'a [Vec<usize>],
    sn: &'a [Vec<usize>],
    fwd: Vec<Option<usize>>,
    used: Vec<bool>,
    trail: Vec<usize>,
}

impl Search<'_> {
    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().expect("trail");
            let x = self.fwd[a].take().expect("assigned");
            self.used[x] = false;
        }
    }

    /// Assigns `a ↦ x` and propagates products; false on contradiction.
    fn assign(&mut self, a: usize, x: usize) -> bool {
        let mut queue = vec![(a, x)];
        while let Some((a, x)) = queue.pop() {
            match self.fwd[a] {
                Some(y) if y == x => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used[x] || self.sm[a] != self.sn[x] {
                return false;
            }
            self.fwd[a] = Some(x);
            self.used[x] = true;
            self.trail.push(a);
            let assigned: Vec<usize> = self.trail.clone();
            for &b in &assigned {
                let y = self.fwd[b].expect("assigned");
                for (p, img) in [
                    (self.m.mul(a, b), self.n.mul(x, y)),
                    (self.m.mul(b, a), self.n.mul(y, x)),
                ] {
                    match self.fwd[p] {
                        Some(q) if q != img => return false,
                        Some(_) => {}
                        None => queue.push((p, img)),
                    }
                }
            }
        }
        true
    }

    fn solve(&mut self) -> bool {
        let Some(a) = (0..self.m.order()).find(|&a| self.fwd[a].is_none()) else {
            return true;
        };
        for x in 0..self.n.order() {
            if self.used[x] || self.sm[a] != self.sn[x] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(a, x) && self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}
