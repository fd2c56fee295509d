//! Rees quotients `Rq W` of the free monoid over the ideal of non-factors of `W`.

use std::collections::{BTreeSet, HashMap};

use crate::words::Word;

use super::FiniteMonoid;

fn shortlex(a: &Word, b: &Word) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Elements: `0`, then the nonempty factors of `W` in shortlex order, then `1`.
/// Labels are the factors written compactly (`xhx`).
pub fn rees_quotient(words: &[Word]) -> FiniteMonoid {
    let mut factors: BTreeSet<Word> = BTreeSet::new();
    for w in words {
        factors.extend(w.factors());
    }
    factors.remove(&Word::empty());
    let mut nonempty: Vec<Word> = factors.into_iter().collect();
    nonempty.sort_by(shortlex);

    let order = nonempty.len() + 2;
    let identity = order - 1;
    let mut index: HashMap<Word, usize> = HashMap::new();
    for (i, f) in nonempty.iter().enumerate() {
        index.insert(f.clone(), i + 1);
    }
    let element = |i: usize| -> Option<Word> {
        if i == 0 {
            None
        } else if i == identity {
            Some(Word::empty())
        } else {
            Some(nonempty[i - 1].clone())
        }
    };
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            let value = match (element(a), element(b)) {
                (Some(u), Some(v)) => {
                    let uv = u.concat(&v);
                    if uv.is_empty() {
                        identity
                    } else {
                        index.get(&uv).copied().unwrap_or(0)
                    }
                }
                _ => 0,
            };
            table.push(value);
        }
    }
    let mut labels = vec!["0".to_string()];
    labels.extend(nonempty.iter().map(Word::compact));
    labels.push("1".to_string());
    FiniteMonoid::from_flat(order, table, identity, Some(labels))
        .expect("Rees quotient is a monoid")
}
