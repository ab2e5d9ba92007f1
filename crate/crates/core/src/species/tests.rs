use std::collections::HashMap;

use super::*;
use crate::classical::{catalog, CatalogName};
use crate::freesmc::{SmcMor, Word};
use crate::presheaf::{hom_enumerate, presheaves_up_to_iso, wide_pullback, yoneda};

fn arc(c: FinCat) -> Arc<FinCat> {
    Arc::new(c)
}

fn set(n: usize) -> Arc<Presheaf> {
    Arc::new(Presheaf::from_action(arc(FinCat::terminal()), n, |_, x| x).unwrap())
}

/// `X²` as ordered pairs: the free piece on `[•,•]`.
fn square(base: &Arc<FinCat>, degree: usize) -> Species {
    let atom = OrbitAtom {
        word: Word(vec![0, 0]),
        object: 0,
        generators: Vec::new(),
    };
    Species::orbit_sum("X^2", base.clone(), base.clone(), degree, &[atom]).unwrap()
}

#[test]
fn terminal_species_counts_multisets() {
    let t = arc(FinCat::terminal());
    let p = Species::terminal(t.clone(), t, 2);
    let v = lan_eval(&p, &set(2)).unwrap();
    // multisets of size ≤ 2 from two colours
    assert_eq!(v.num_classes(0), 1 + 2 + 3);
}

#[test]
fn linear_orders_count_words() {
    let l = catalog(CatalogName::L, 2).to_species();
    let v = lan_eval(&l, &set(2)).unwrap();
    assert_eq!(v.num_classes(0), 1 + 2 + 4);
}

#[test]
fn representatives_are_least_members() {
    let t = arc(FinCat::terminal());
    let p = Species::terminal(t.clone(), t, 2);
    let v = lan_eval(&p, &set(2)).unwrap();
    for k in 0..v.num_classes(0) {
        let members = v.members(0, k);
        assert_eq!(v.representative(0, k), v.decode(0, members[0]));
        for &m in &members {
            let (w, q, x) = v.decode(0, m);
            assert_eq!(v.triple_index(0, w, q, &x), m);
        }
    }
    let e = v.element(0, v.class_of_triple(0, 2, 0, &[1, 0]));
    assert_eq!(e.family, vec![0, 1]);
}

#[test]
fn empty_species_and_empty_input() {
    let z2 = arc(FinCat::cyclic(2));
    let zero = Species::empty(z2.clone(), z2.clone(), 2);
    let y = yoneda(&z2, 0).unwrap();
    assert!(lan_eval(&zero, y.presheaf()).unwrap().presheaf().is_empty());
    let one = Species::terminal(z2.clone(), z2.clone(), 2);
    let v = lan_eval(&one, &Arc::new(Presheaf::empty(z2))).unwrap();
    // only the empty word survives
    assert_eq!(v.presheaf().sizes(), &[1]);
}

#[test]
fn base_mismatch_is_reported() {
    let z2 = arc(FinCat::cyclic(2));
    let p = Species::terminal(z2.clone(), z2, 1);
    assert!(matches!(lan_eval(&p, &set(1)), Err(SpeciesError::BaseMismatch)));
}

#[test]
fn taylor_agrees_with_coend() {
    let t = arc(FinCat::terminal());
    let z2 = arc(FinCat::cyclic(2));
    let cases: Vec<(Species, Arc<Presheaf>)> = vec![
        (Species::terminal(t.clone(), t.clone(), 3), set(2)),
        (catalog(CatalogName::Perm, 3).to_species(), set(2)),
        (Species::terminal(z2.clone(), z2.clone(), 2), yoneda(&z2, 0).unwrap().presheaf().clone()),
        (square(&z2, 2), Arc::new(Presheaf::terminal(z2.clone()))),
    ];
    for (p, x) in cases {
        let lan = lan_eval(&p, &x).unwrap();
        let tv = taylor_eval(&p, &x, &lan).unwrap();
        assert!(tv.to_lan.is_iso());
        assert_eq!(tv.presheaf.sizes(), lan.presheaf().sizes());
    }
}

#[test]
fn lan_map_is_functorial() {
    let z2 = arc(FinCat::cyclic(2));
    let p = Species::terminal(z2.clone(), z2.clone(), 2);
    let xs = presheaves_up_to_iso(&z2, 3);
    let vals: Vec<LanValue> = xs.iter().map(|x| lan_eval(&p, x).unwrap()).collect();
    for (i, x) in xs.iter().enumerate() {
        let id = lan_map(&vals[i], &vals[i], &NatTrans::identity(x.clone())).unwrap();
        assert!(id.components().iter().all(|c| c.iter().enumerate().all(|(a, &b)| a == b)));
        for (j, y) in xs.iter().enumerate() {
            for f in hom_enumerate(x, y).unwrap() {
                for (k, z) in xs.iter().enumerate() {
                    for g in hom_enumerate(y, z).unwrap() {
                        let fg = lan_map(&vals[i], &vals[k], &f.then(&g).unwrap()).unwrap();
                        let split = lan_map(&vals[i], &vals[j], &f)
                            .unwrap()
                            .then(&lan_map(&vals[j], &vals[k], &g).unwrap())
                            .unwrap();
                        assert_eq!(fg.components(), split.components());
                    }
                }
            }
        }
    }
}

#[test]
fn lan_nat_of_identity_and_terminal() {
    let t = arc(FinCat::terminal());
    let l = Arc::new(catalog(CatalogName::L, 2).to_species());
    let one = Arc::new(Species::terminal(t.clone(), t, 2));
    let x = set(2);
    let vl = lan_eval(&l, &x).unwrap();
    let v1 = lan_eval(&one, &x).unwrap();
    let id = lan_nat(&SpeciesNat::identity(l.clone()), &vl, &vl).unwrap();
    assert!(id.is_iso());
    let bang = lan_nat(&SpeciesNat::to_terminal(l), &vl, &v1).unwrap();
    // words collapse onto multisets
    assert!(bang.is_epi() && !bang.is_mono());
}

#[test]
fn representable_at_top_reads_off_the_top_fibre() {
    let s = arc(FinCat::arrow());
    let p = Species::representable(s.clone(), &Word::single(1), 1).unwrap();
    let top = yoneda(&s, 1).unwrap();
    assert_eq!(lan_eval(&p, top.presheaf()).unwrap().num_classes(0), 1);
    let bot = yoneda(&s, 0).unwrap();
    assert_eq!(lan_eval(&p, bot.presheaf()).unwrap().num_classes(0), 0);
    for x in presheaves_up_to_iso(&s, 4) {
        assert_eq!(lan_eval(&p, &x).unwrap().num_classes(0), x.size(1));
    }
}

#[test]
fn validate_reports_broken_action() {
    let z2 = arc(FinCat::cyclic(2));
    let t = arc(FinCat::terminal());
    let two = |w: &Word| Presheaf::from_action(t.clone(), if w.len() == 1 { 2 } else { 0 }, |_, x| x).unwrap();
    // the non-identity automorphism of [•] collapses both points
    let bad = Species::tabulate("bad", z2.clone(), arc(FinCat::terminal()), 1, two, |m, _| {
        if m.dom.len() != 1 {
            Vec::new()
        } else if m.family[0] == 0 {
            vec![0, 1]
        } else {
            vec![0, 0]
        }
    })
    .unwrap();
    let report = bad.validate();
    assert!(!report.is_ok());
    let good = Species::new("swap", z2, arc(FinCat::terminal()), 1, two, |m, _| {
        if m.dom.len() != 1 {
            Vec::new()
        } else if m.family[0] == 0 {
            vec![0, 1]
        } else {
            vec![1, 0]
        }
    });
    assert!(good.is_ok());
}

#[test]
fn from_partial_closes_under_composition() {
    let z2 = arc(FinCat::cyclic(2));
    let t = arc(FinCat::terminal());
    let w = Word::single(0);
    let mut coeffs = HashMap::new();
    coeffs.insert(w.clone(), Presheaf::from_action(t.clone(), 2, |_, x| x).unwrap());
    let s = SmcMor::new(&z2, w.clone(), w.clone(), vec![0], vec![1]).unwrap();
    let p = Species::from_partial("swap", z2, t, 1, &coeffs, &[(s.clone(), vec![vec![1, 0]])]).unwrap();
    let m = p.morphism_index(&s).unwrap();
    assert_eq!(p.act(m, 0, 0), 1);
    assert!(p.validate().is_ok());
}

#[test]
fn sum_and_iso_search() {
    let t = arc(FinCat::terminal());
    let e = Arc::new(catalog(CatalogName::E, 2).to_species());
    let one = Arc::new(Species::terminal(t.clone(), t.clone(), 2));
    assert!(e.is_isomorphic(&one));
    let l = Arc::new(catalog(CatalogName::L, 2).to_species());
    assert!(!l.is_isomorphic(&e));
    let s = Species::sum(&[&e, &l]).unwrap();
    assert_eq!(s.coeff(2).size(0), 3);
    assert_eq!(Arc::new(s).homs(&one, 10).len(), 1);
}

#[test]
fn chain_of_pairs_counts_trees() {
    let t = arc(FinCat::terminal());
    let one = Species::constant(t.clone(), Presheaf::terminal(t.clone()), 2);
    let p = Species::sum(&[&one, &square(&t, 2)]).unwrap();
    let chain = initial_algebra_chain(&p, 4).unwrap();
    let sizes: Vec<usize> = chain.stages.iter().map(|s| s.size(0)).collect();
    assert_eq!(sizes, vec![0, 1, 2, 5, 26]);
    assert!(!chain.stabilized);
    assert!(chain.maps.iter().all(NatTrans::is_mono));
}

#[test]
fn chain_stabilization() {
    let z2 = arc(FinCat::cyclic(2));
    let zero = Species::empty(z2.clone(), z2.clone(), 1);
    let c = initial_algebra_chain(&zero, 2).unwrap();
    assert_eq!(c.stabilized_at, Some(1));
    let k = Species::constant(z2.clone(), Presheaf::terminal(z2.clone()), 1);
    let c = initial_algebra_chain(&k, 3).unwrap();
    assert_eq!(c.stabilized_at, Some(2));
    assert!(c.stabilized);
    let s = arc(FinCat::arrow());
    let p = Species::terminal(s.clone(), s, 1);
    assert!(matches!(initial_algebra_chain(&p, 1), Err(SpeciesError::NotGroupoid)));
}

#[test]
fn pullback_probes_are_preserved_over_a_groupoid() {
    let z2 = arc(FinCat::cyclic(2));
    let xs = presheaves_up_to_iso(&z2, 2);
    let mut probes = Vec::new();
    for x in &xs {
        for y in &xs {
            for z in &xs {
                for f in hom_enumerate(x, z).unwrap() {
                    for g in hom_enumerate(y, z).unwrap() {
                        let pb = wide_pullback(&[f.clone(), g.clone()]).unwrap();
                        probes.push(QpbProbe {
                            cone: pb.projections,
                            cospan: vec![f.clone(), g],
                        });
                    }
                }
            }
        }
    }
    let p = Species::terminal(z2.clone(), z2, 2);
    let report = preserves_quasi_pullbacks(&p, &probes).unwrap();
    assert!(report.guaranteed && report.all_pass());
    assert_eq!(report.checked, probes.len());
}
