//! Principal ideals and Green's relations.

use std::collections::BTreeMap;

use super::FiniteMonoid;

/// Ideal membership is stored as sorted element lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreenData {
    pub left_ideals: Vec<Vec<usize>>,
    pub right_ideals: Vec<Vec<usize>>,
    pub ideals: Vec<Vec<usize>>,
    pub l_classes: Vec<Vec<usize>>,
    pub r_classes: Vec<Vec<usize>>,
    pub j_classes: Vec<Vec<usize>>,
    pub h_classes: Vec<Vec<usize>>,
}

fn sorted_unique(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Groups elements by key, classes ordered by their least element.
fn classes_by<K: Ord + Clone>(keys: &[K]) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (a, k) in keys.iter().enumerate() {
        groups.entry(k.clone()).or_default().push(a);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

impl GreenData {
    pub fn compute(m: &FiniteMonoid) -> GreenData {
        let els: Vec<usize> = m.elements().collect();
        let left: Vec<Vec<usize>> = els
            .iter()
            .map(|&a| sorted_unique(els.iter().map(|&x| m.mul(x, a)).collect()))
            .collect();
        let right: Vec<Vec<usize>> = els
            .iter()
            .map(|&a| sorted_unique(els.iter().map(|&x| m.mul(a, x)).collect()))
            .collect();
        let two: Vec<Vec<usize>> = els
            .iter()
            .map(|&a| {
                sorted_unique(
                    right[a]
                        .iter()
                        .flat_map(|&r| els.iter().map(move |&x| m.mul(x, r)))
                        .collect(),
                )
            })
            .collect();
        let hkeys: Vec<(Vec<usize>, Vec<usize>)> = els
            .iter()
            .map(|&a| (left[a].clone(), right[a].clone()))
            .collect();
        GreenData {
            l_classes: classes_by(&left),
            r_classes: classes_by(&right),
            j_classes: classes_by(&two),
            h_classes: classes_by(&hkeys),
            left_ideals: left,
            right_ideals: right,
            ideals: two,
        }
    }

    pub fn is_j_trivial(&self) -> bool {
        self.j_classes.iter().all(|c| c.len() == 1)
    }

    pub fn is_l_trivial(&self) -> bool {
        self.l_classes.iter().all(|c| c.len() == 1)
    }

    pub fn is_r_trivial(&self) -> bool {
        self.r_classes.iter().all(|c| c.len() == 1)
    }

    pub fn is_h_trivial(&self) -> bool {
        self.h_classes.iter().all(|c| c.len() == 1)
    }

    /// Every H-class holds an idempotent.
    pub fn is_completely_regular(&self, m: &FiniteMonoid) -> bool {
        self.h_classes
            .iter()
            .all(|c| c.iter().any(|&a| m.is_idempotent(a)))
    }
}
