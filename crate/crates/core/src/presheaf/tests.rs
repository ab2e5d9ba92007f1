use super::*;
use crate::freesmc::{enumerate_homs, SmcMor, Word};

fn arc(c: FinCat) -> Arc<FinCat> {
    Arc::new(c)
}

#[test]
fn yoneda_over_terminal_and_z2() {
    let t = arc(FinCat::terminal());
    let y = yoneda(&t, 0).unwrap();
    assert_eq!(y.presheaf().sizes(), &[1]);
    let z2 = arc(FinCat::cyclic(2));
    let y = yoneda(&z2, 0).unwrap();
    assert_eq!(y.presheaf().sizes(), &[2]);
    assert_eq!(y.presheaf().action_table(1), &[1, 0]);
    assert!(yoneda(&z2, 1).is_err());
}

#[test]
fn yoneda_over_arrow() {
    let s = arc(FinCat::arrow());
    let top = yoneda(&s, 1).unwrap();
    assert_eq!(top.presheaf().sizes(), &[1, 1]);
    let bot = yoneda(&s, 0).unwrap();
    assert_eq!(bot.presheaf().sizes(), &[1, 0]);
}

#[test]
fn sum_functor_on_swap_over_z2() {
    let z2 = arc(FinCat::cyclic(2));
    let w = Word(vec![0, 0]);
    let s = TaggedSum::new(&z2, &w).unwrap();
    let gamma = SmcMor::new(&z2, w.clone(), w.clone(), vec![1, 0], vec![1, 0]).unwrap();
    let f = sum_functor_mor(&gamma, &s, &s).unwrap();
    // (0, id) ↦ (1, σ)
    assert_eq!(s.tag(0, f.apply(0, s.element(0, 0))), (1, 1));
    assert_eq!(underlying_function(&f, &s, &s).unwrap(), vec![1, 0]);
    assert_eq!(lift_to_freesmc(&f, &s, &s).unwrap(), Some(gamma));
}

#[test]
fn empty_word_gives_empty_presheaf() {
    let z2 = arc(FinCat::cyclic(2));
    let s = TaggedSum::new(&z2, &Word::empty()).unwrap();
    assert!(s.presheaf().is_empty());
    assert_eq!(hom_enumerate(s.presheaf(), s.presheaf()).unwrap().len(), 1);
}

#[test]
fn hom_counts_between_sums() {
    let t = arc(FinCat::terminal());
    let a = TaggedSum::new(&t, &Word(vec![0, 0])).unwrap();
    let b = TaggedSum::new(&t, &Word(vec![0, 0, 0])).unwrap();
    assert_eq!(hom_enumerate(a.presheaf(), b.presheaf()).unwrap().len(), 9);
    let z2 = arc(FinCat::cyclic(2));
    let y = yoneda(&z2, 0).unwrap();
    assert_eq!(hom_enumerate(y.presheaf(), y.presheaf()).unwrap().len(), 2);
    assert_eq!(
        hom_enumerate(y.presheaf(), a.presheaf()),
        Err(PresheafError::BaseMismatch)
    );
}

#[test]
fn arrow_map_is_mono_not_epi() {
    let s = arc(FinCat::arrow());
    let bot = yoneda(&s, 0).unwrap();
    let top = yoneda(&s, 1).unwrap();
    let homs = hom_enumerate(bot.presheaf(), top.presheaf()).unwrap();
    assert_eq!(homs.len(), 1);
    let class = homs[0].classify(Some((&bot, &top))).unwrap();
    assert!(class.mono && !class.epi && !class.iso);
}

#[test]
fn pullback_of_identities_is_diagonal() {
    let z2 = arc(FinCat::cyclic(2));
    let y = yoneda(&z2, 0).unwrap();
    let id = NatTrans::identity(y.presheaf().clone());
    let pb = wide_pullback(&[id.clone(), id.clone()]).unwrap();
    assert!(pb.apex.is_isomorphic(y.presheaf()));
    assert_eq!(pb.tuples[0], vec![vec![0, 0], vec![1, 1]]);
    assert!(is_quasi_pullback(&pb.projections, &[id.clone(), id]).unwrap());
    assert_eq!(wide_pullback(&[]).unwrap_err(), PresheafError::EmptyCospan);
}

#[test]
fn disjoint_monos_have_empty_pullback() {
    let t = arc(FinCat::terminal());
    let s = TaggedSum::new(&t, &Word(vec![0, 0])).unwrap();
    let subs = subobjects_of_sum(&s).unwrap();
    let left = &subs[1].inclusion; // {0}
    let right = &subs[3].inclusion; // {1}
    assert_eq!(subs[1].indices, vec![0]);
    assert_eq!(subs[3].indices, vec![1]);
    let pb = wide_pullback(&[left.clone(), right.clone()]).unwrap();
    assert!(pb.apex.is_empty());
}

#[test]
fn non_commuting_square_is_an_error() {
    let t = arc(FinCat::terminal());
    let s = TaggedSum::new(&t, &Word(vec![0, 0])).unwrap();
    let p = s.presheaf().clone();
    let homs = hom_enumerate(&p, &p).unwrap();
    let swap = homs.iter().find(|h| h.component(0) == [1, 0]).unwrap();
    let id = NatTrans::identity(p.clone());
    let err = is_quasi_pullback(&[id.clone(), id.clone()], &[id, swap.clone()]).unwrap_err();
    assert!(matches!(err, PresheafError::NotCommuting { .. }));
}

#[test]
fn factorization_of_fold_map() {
    let t = arc(FinCat::terminal());
    let two = TaggedSum::new(&t, &Word(vec![0, 0])).unwrap();
    let one = yoneda(&t, 0).unwrap();
    let fold = &hom_enumerate(two.presheaf(), one.presheaf()).unwrap()[0];
    let (e, m) = epi_mono_factorize(fold);
    assert!(e.is_epi() && m.is_iso());
    assert_eq!(e.then(&m).unwrap(), *fold);
}

#[test]
fn subobjects_count_and_order() {
    let z2 = arc(FinCat::cyclic(2));
    let g = TaggedSum::new(&z2, &Word(vec![0, 0])).unwrap();
    let subs = subobjects_of_sum(&g).unwrap();
    let idx: Vec<Vec<usize>> = subs.iter().map(|s| s.indices.clone()).collect();
    assert_eq!(idx, vec![vec![], vec![0], vec![0, 1], vec![1]]);
    let arrow = arc(FinCat::arrow());
    let y = yoneda(&arrow, 0).unwrap();
    assert_eq!(subobjects_of_sum(&y).unwrap_err(), PresheafError::NotGroupoid);
}

#[test]
fn partial_actions_close_under_composition() {
    let z3 = arc(FinCat::cyclic(3));
    let mut given = HashMap::new();
    given.insert(1, vec![1, 2, 0]);
    let p = Presheaf::from_partial_actions(z3.clone(), vec![3], &given).unwrap();
    assert_eq!(p.action_table(2), &[2, 0, 1]);
    given.insert(1, vec![1, 0, 2]);
    assert!(Presheaf::from_partial_actions(z3, vec![3], &given).is_err());
}

#[test]
fn lift_round_trips_on_every_morphism() {
    let z2 = arc(FinCat::cyclic(2));
    let w = Word(vec![0, 0]);
    let s = TaggedSum::new(&z2, &w).unwrap();
    for gamma in enumerate_homs(&z2, &w, &w) {
        let f = sum_functor_mor(&gamma, &s, &s).unwrap();
        assert_eq!(lift_to_freesmc(&f, &s, &s).unwrap(), Some(gamma));
    }
}

#[test]
fn enumeration_over_z2_counts_orbit_multisets() {
    // transitive Z/2-sets: sizes 1 and 2, so iso classes of total ≤ 3 are
    // multisets of {1, 2} with sum ≤ 3: {}, 1, 11, 2, 111, 12
    let z2 = arc(FinCat::cyclic(2));
    assert_eq!(presheaves_up_to_iso(&z2, 3).len(), 6);
}

#[test]
fn enumeration_over_arrow_is_iso_free() {
    let s = arc(FinCat::arrow());
    let all = presheaves_up_to_iso(&s, 3);
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            assert!(!a.is_isomorphic(b));
        }
    }
}
