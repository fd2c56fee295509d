//! Property tests over random words, identities and catalog monoids.

use proptest::prelude::*;
use varcross::catalog::Catalog;
use varcross::freeobject::{
    build_free_object_on, is_isoterm_in_join, is_isoterm_with_cap, IsotermVerdict,
};
use varcross::identities::{directly_deducible, Deducibility, WordSubstitution};
use varcross::monoids::find_isomorphism;
use varcross::satisfaction::{q_satisfies, satisfies};
use varcross::{parse_word, FiniteMonoid, Identity, Variable, Word};

fn small_monoids() -> Vec<FiniteMonoid> {
    Catalog::builtin()
        .unwrap()
        .monoids()
        .filter(|e| e.monoid.order() <= 7)
        .map(|e| e.monoid.clone())
        .collect()
}

fn word(vars: &'static str, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(
        prop::sample::select(vars.chars().collect::<Vec<_>>()),
        0..=max,
    )
    .prop_map(|cs| Word::from_letters(cs.into_iter().map(Variable::new).collect()))
}

fn identity(vars: &'static str, max: usize) -> impl Strategy<Value = Identity> {
    (word(vars, max), word(vars, max)).prop_map(|(u, v)| Identity::new(u, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn word_display_round_trips(w in word("xyht", 10)) {
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn reverse_is_an_involution(w in word("xyz", 12)) {
        prop_assert_eq!(w.reverse().reverse(), w.clone());
        prop_assert_eq!(w.reverse().len(), w.len());
    }

    #[test]
    fn natural_form_reassembles(w in word("xyzt", 12)) {
        prop_assert_eq!(w.natural_form().reassemble(), w);
    }

    #[test]
    fn duality_preserves_satisfaction(idx in 0usize..32, sigma in identity("xyz", 6)) {
        let ms = small_monoids();
        let m = &ms[idx % ms.len()];
        prop_assert_eq!(satisfies(m, &sigma).holds(), satisfies(&m.dual(), &sigma.dualize()).holds());
    }

    #[test]
    fn products_satisfy_the_conjunction(i in 0usize..32, j in 0usize..32, sigma in identity("xy", 6)) {
        let ms = small_monoids();
        let (a, b) = (&ms[i % ms.len()], &ms[j % ms.len()]);
        let both = satisfies(a, &sigma).holds() && satisfies(b, &sigma).holds();
        prop_assert_eq!(satisfies(&a.direct_product(b), &sigma).holds(), both);
    }

    #[test]
    fn q_criterion_matches_brute_force(sigma in identity("xyz", 7)) {
        let q = Catalog::builtin().unwrap().monoid("Q").unwrap().monoid.clone();
        prop_assert_eq!(q_satisfies(&sigma.lhs, &sigma.rhs), satisfies(&q, &sigma).holds());
    }

    #[test]
    fn substitution_instances_are_deducible(
        sigma in identity("xy", 4),
        ix in word("ab", 3),
        iy in word("ab", 3),
        a in word("ab", 2),
        b in word("ab", 2),
    ) {
        prop_assume!(!sigma.is_trivial());
        let phi = WordSubstitution::new().with(Variable::new('x'), ix).with(Variable::new('y'), iy);
        let u = a.concat(&phi.apply(&sigma.lhs)).concat(&b);
        let v = a.concat(&phi.apply(&sigma.rhs)).concat(&b);
        prop_assume!(u != v);
        let d = directly_deducible(&u, &v, &sigma, 1_000_000);
        prop_assert!(matches!(d, Deducibility::Deducible(_)), "{:?}", d);
    }

    #[test]
    fn permuted_tables_are_isomorphic(idx in 0usize..32, seed in any::<u64>()) {
        let ms = small_monoids();
        let m = &ms[idx % ms.len()];
        let mut perm: Vec<usize> = (0..m.order()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = m.permute(&perm);
        prop_assert!(find_isomorphism(m, &p).is_some());
        prop_assert_eq!(p.is_j_trivial(), m.is_j_trivial());
    }

    #[test]
    fn free_object_agrees_with_satisfaction(idx in 0usize..32, sigma in identity("xy", 5)) {
        let ms = small_monoids();
        let m = &ms[idx % ms.len()];
        let gens = [Variable::new('x'), Variable::new('y')];
        let fa = build_free_object_on(m, &gens, 100_000).unwrap();
        prop_assert_eq!(fa.run(&sigma.lhs) == fa.run(&sigma.rhs), satisfies(m, &sigma).holds());
    }

    #[test]
    fn isoterm_of_a_product_is_the_join_decision(i in 0usize..32, j in 0usize..32, w in word("xy", 4)) {
        let ms = small_monoids();
        let (a, b) = (&ms[i % ms.len()], &ms[j % ms.len()]);
        let prod = a.direct_product(b);
        let joined = is_isoterm_in_join(&[a.clone(), b.clone()], &w, 200_000);
        let direct = is_isoterm_with_cap(&prod, &w, 200_000);
        let decided = |v: &IsotermVerdict| !matches!(v, IsotermVerdict::Inconclusive(_));
        prop_assume!(decided(&joined) && decided(&direct));
        prop_assert_eq!(joined, direct);
    }
}
