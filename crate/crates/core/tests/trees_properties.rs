use std::collections::BTreeSet;

use proptest::prelude::*;
use quartic_core::trees::{
    act, act_word, bounded_states, braid_rewrite, orbit, Family, Fiber, FreeWord, Letter, OriginClass, QMove, SMove,
    TreeState,
};

const B: i64 = 12;

fn all_bounded(bound: i64) -> Vec<TreeState> {
    let mut v = bounded_states(Fiber::OverI, bound);
    v.extend(bounded_states(Fiber::OverMinusI, bound));
    v
}

#[test]
fn moves_are_injective_and_interior_states_have_preimages() {
    let states = all_bounded(B);
    for mv in [SMove::S0, SMove::Sinf] {
        let images: Vec<TreeState> = states.iter().map(|x| act(mv, *x).unwrap()).collect();
        let distinct: BTreeSet<_> = images.iter().collect();
        assert_eq!(distinct.len(), images.len(), "{mv} is not injective");
        for (x, y) in states.iter().zip(&images) {
            assert_ne!(x.fiber(), y.fiber());
            assert!(y.is_valid());
        }
        let image_set: BTreeSet<_> = all_bounded(B + 2).iter().map(|x| act(mv, *x).unwrap()).collect();
        for x in all_bounded(B - 2) {
            assert!(image_set.contains(&x), "{x} has no {mv} preimage");
        }
    }
}

#[test]
fn conjugation_identity() {
    for x in all_bounded(B) {
        let y = act(SMove::Sinf, act(SMove::S0, x.conjugate()).unwrap().conjugate()).unwrap();
        assert_eq!(y, x);
        assert_eq!(x.conjugate().conjugate(), x);
    }
}

#[test]
fn relation_acts_trivially() {
    let word = QMove::relation_word();
    for x in bounded_states(Fiber::OverI, B) {
        assert_eq!(act_word(&word, x).unwrap(), x);
    }
}

#[test]
fn completion_items() {
    for k in 0..=B {
        let word = vec![SMove::S0; 2 * k as usize];
        assert_eq!(act_word(&word, TreeState::a(0)).unwrap(), TreeState::a(k));
        for l in 1..=B / 2 {
            let word: Vec<SMove> = (0..l).flat_map(|_| [SMove::S0, SMove::Sinf]).collect();
            assert_eq!(act_word(&word, TreeState::a(k)).unwrap(), TreeState::new(Family::D, k, 2 * l));
        }
    }
}

#[test]
fn two_orbits_partition_the_fiber() {
    let even = orbit(TreeState::a(0), B).unwrap();
    let odd = orbit(TreeState::new(Family::D, 0, 1), B).unwrap();
    assert!(even.is_disjoint(&odd));
    let all: BTreeSet<_> = bounded_states(Fiber::OverI, B).into_iter().collect();
    let union: BTreeSet<_> = even.union(&odd).copied().collect();
    assert_eq!(union, all);
    for x in &even {
        assert_eq!(x.origin_class().unwrap(), OriginClass::PoleAtOrigin, "{x}");
    }
    for x in &odd {
        assert_eq!(x.origin_class().unwrap(), OriginClass::ZeroAtOrigin, "{x}");
    }
}

#[test]
fn small_orbit_contents() {
    let even = orbit(TreeState::a(0), 6).unwrap();
    let odd = orbit(TreeState::new(Family::D, 0, 1), 6).unwrap();
    for k in 0..=6 {
        assert!(even.contains(&TreeState::a(k)));
        assert!(odd.contains(&TreeState::new(Family::D, k, 1)));
        assert!(odd.contains(&TreeState::new(Family::Dbar, k, 1)));
        for l in 1..=3 {
            assert!(even.contains(&TreeState::new(Family::D, k, 2 * l)));
            assert!(even.contains(&TreeState::new(Family::Dbar, k, 2 * l)));
            assert!(odd.contains(&TreeState::new(Family::D, k, 2 * l - 1)));
            if k >= 1 {
                assert!(even.contains(&TreeState::new(Family::E, k, 2 * l)));
                assert!(odd.contains(&TreeState::new(Family::E, k, 2 * l - 1)));
            }
        }
    }
}

fn moves() -> impl Strategy<Value = SMove> {
    prop::sample::select(SMove::ALL.to_vec())
}

fn letters() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::all().to_vec())
}

proptest! {
    #[test]
    fn even_words_preserve_origin_class(
        k in 0i64..8,
        l in 1i64..8,
        family in prop::sample::select(vec![Family::A, Family::D, Family::Dbar, Family::E, Family::Ebar]),
        word in prop::collection::vec(moves(), 0..6),
    ) {
        let x = TreeState::new(family, k.max(1), if family == Family::A { 0 } else { l });
        let mut word = word;
        if word.len() % 2 == 1 {
            word.pop();
        }
        let y = act_word(&word, x).unwrap();
        prop_assert_eq!(y.fiber(), Fiber::OverI);
        prop_assert_eq!(y.origin_class().unwrap(), x.origin_class().unwrap());
    }

    #[test]
    fn word_then_inverse_word_is_identity(
        k in 0i64..8,
        word in prop::collection::vec(moves(), 0..10),
    ) {
        let x = TreeState::a(k);
        let back: Vec<SMove> = word.iter().rev().map(|m| m.inverse()).collect();
        let y = act_word(&word, x).unwrap();
        prop_assert_eq!(act_word(&back, y).unwrap(), x);
    }

    #[test]
    fn braid_rewrites_invert(word in prop::collection::vec(letters(), 0..12)) {
        let w = FreeWord::new(word);
        for (a, b) in [(SMove::S0, SMove::S0Inv), (SMove::Sinf, SMove::SinfInv)] {
            prop_assert_eq!(braid_rewrite(b, &braid_rewrite(a, &w)), w.clone());
            prop_assert_eq!(braid_rewrite(a, &braid_rewrite(b, &w)), w.clone());
        }
    }

    #[test]
    fn braid_rewrite_is_a_homomorphism(u in prop::collection::vec(letters(), 0..6), v in prop::collection::vec(letters(), 0..6), mv in moves()) {
        let u = FreeWord::new(u);
        let v = FreeWord::new(v);
        let uv = FreeWord::new(u.letters().iter().chain(v.letters()).copied());
        let ru = braid_rewrite(mv, &u);
        let rv = braid_rewrite(mv, &v);
        prop_assert_eq!(braid_rewrite(mv, &uv), FreeWord::new(ru.letters().iter().chain(rv.letters()).copied()));
    }
}
