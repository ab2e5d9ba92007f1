use super::*;
use crate::classical::{catalog, CatalogName, ClassicalSpecies};
use crate::fincat::FinCat;
use crate::freesmc::Word;
use crate::presheaf::{hom_enumerate, yoneda, TaggedSum};
use crate::species::{lan_eval, SpeciesNat};

fn arc(c: FinCat) -> Arc<FinCat> {
    Arc::new(c)
}

fn subsets(degree: usize) -> Species {
    ClassicalSpecies::from_fn(
        "E2",
        degree,
        |n| 1 << n,
        |n, s, p| (0..n).filter(|&i| p >> i & 1 == 1).map(|i| 1 << s[i]).sum(),
    )
    .unwrap()
    .to_species()
}

/// Orbit counts per arity, read off `⟨R⟩1`.
fn unlabelled(r: &Species) -> Vec<usize> {
    let one = Arc::new(crate::presheaf::Presheaf::terminal(r.dom().clone()));
    let v = lan_eval(r, &one).unwrap();
    let mut out = vec![0; r.degree() + 1];
    for k in 0..v.num_classes(0) {
        out[v.element(0, k).word.len()] += 1;
    }
    out
}

#[test]
fn counterexample_square_is_not_a_quasi_pullback() {
    let r = check_counterexample(4).unwrap();
    assert!(r.commutes);
    assert!(!r.quasi_pullback);
    assert!(r.witness.is_some());
    assert!(r.extraction_refused, "{:?}", r.extraction_error);
    assert!(r.discrete_quasi_cartesian);
    assert!(r.identity_quasi_cartesian);
}

#[test]
fn extraction_names_the_bottom_to_top_square() {
    let scat = arc(FinCat::arrow());
    let p = Arc::new(Species::representable(scat.clone(), &Word::single(1), 1).unwrap());
    let probes = ProbeFamily::new(scat.clone(), 4, 2);
    let psi = NatFamily::from_lan_nat(&SpeciesNat::to_terminal(p), &probes).unwrap();
    let Err(GenericError::NotQuasiCartesian(f)) = extract_coefficient_nat(&psi) else {
        panic!("extraction should refuse");
    };
    let yb = yoneda(&scat, 0).unwrap();
    let yt = yoneda(&scat, 1).unwrap();
    assert_eq!(**probes.member(f.from), **yb.presheaf());
    assert_eq!(**probes.member(f.to), **yt.presheaf());
}

#[test]
fn whitebox_examples() {
    let t = arc(FinCat::terminal());
    let p = Species::terminal(t.clone(), t.clone(), 2);
    let s2 = TaggedSum::new(&t, &Word(vec![0, 0])).unwrap();
    let v = lan_eval(&p, s2.presheaf()).unwrap();
    // p ⊗ id
    let k = v.class_of_triple(0, 2, 0, &[0, 1]);
    assert!(is_generic(&p, &v, 0, k, Mode::Whitebox).unwrap());
    assert!(is_minimal(&p, &v, 0, k, Mode::Whitebox).unwrap());
    // a proper mono S[•] -> S[•,•]
    let k = v.class_of_triple(0, 1, 0, &[0]);
    assert!(!is_generic(&p, &v, 0, k, Mode::Whitebox).unwrap());
    assert!(!is_minimal(&p, &v, 0, k, Mode::Whitebox).unwrap());
    // the fold map S[•,•] -> S[•]
    let s1 = TaggedSum::new(&t, &Word(vec![0])).unwrap();
    let v1 = lan_eval(&p, s1.presheaf()).unwrap();
    let k = v1.class_of_triple(0, 2, 0, &[0, 0]);
    assert!(!is_generic(&p, &v1, 0, k, Mode::Whitebox).unwrap());
    assert!(is_minimal(&p, &v1, 0, k, Mode::Whitebox).unwrap());
}

#[test]
fn whitebox_needs_a_groupoid() {
    let scat = arc(FinCat::arrow());
    let p = Species::terminal(scat.clone(), scat.clone(), 1);
    let v = lan_eval(&p, yoneda(&scat, 1).unwrap().presheaf()).unwrap();
    assert_eq!(generic_classes(&p, &v, Mode::Whitebox), Err(GenericError::NotGroupoid));
}

#[test]
fn bounded_agrees_with_whitebox_over_z2() {
    let z2 = arc(FinCat::cyclic(2));
    let probes = ProbeFamily::new(z2.clone(), 6, 3);
    let p = Arc::new(Species::terminal(z2.clone(), z2.clone(), 2));
    let ctx = LanOnProbes::new(p.clone(), &probes).unwrap();
    let mut generic = 0;
    for i in 0..probes.len() {
        let v = ctx.value(i);
        let wg = generic_classes(&p, v, Mode::Whitebox).unwrap();
        let wm = minimal_classes(&p, v, Mode::Whitebox).unwrap();
        assert_eq!(bounded_generic(&ctx, v), wg, "generic at probe {i}");
        assert_eq!(bounded_minimal(&ctx, v), wm, "minimal at probe {i}");
        for (g, m) in wg.iter().flatten().zip(wm.iter().flatten()) {
            assert!(!g || *m);
        }
        generic += wg.iter().flatten().filter(|&&g| g).count();
    }
    assert!(generic > 0);
}

#[test]
fn coefficients_recover_the_species() {
    let t = arc(FinCat::terminal());
    let probes = ProbeFamily::new(t.clone(), 4, 3);
    let e = catalog(CatalogName::E, 2).to_species();
    let p = Arc::new(Species::sum(&[&e, &subsets(2)]).unwrap());
    let c = coefficients_of(&p, &probes).unwrap();
    assert!(c.iso.is_iso());
    assert!(c.eta.mono && c.eta.epi && c.eta.failures.is_empty());
    for w in 0..p.words().len() {
        assert_eq!(c.fcirc.coeff(w).sizes(), p.coeff(w).sizes());
    }
    assert!(p.is_isomorphic(&c.fcirc));
    assert_eq!(c.iso.then(&c.inverse), SpeciesNat::identity(p.clone()));
}

#[test]
fn coefficients_over_z2() {
    let z2 = arc(FinCat::cyclic(2));
    let probes = ProbeFamily::new(z2.clone(), 4, 3);
    let p = Arc::new(Species::terminal(z2.clone(), z2.clone(), 2));
    let c = coefficients_of(&p, &probes).unwrap();
    assert!(p.is_isomorphic(&c.fcirc));
    assert!(c.eta.mono && c.eta.epi);
}

#[test]
fn lan_nat_is_quasi_cartesian_and_round_trips() {
    let z2 = arc(FinCat::cyclic(2));
    let probes = ProbeFamily::new(z2.clone(), 4, 3);
    let one = Species::terminal(z2.clone(), z2.clone(), 2);
    let p = Arc::new(Species::sum(&[&one, &one]).unwrap());
    let phi = SpeciesNat::to_terminal(p.clone());
    let psi = NatFamily::from_lan_nat(&phi, &probes).unwrap();
    assert!(is_quasi_cartesian(&psi).unwrap());
    assert_eq!(extract_coefficient_nat(&psi).unwrap(), phi);
    let id = NatFamily::from_lan_nat(&SpeciesNat::identity(p.clone()), &probes).unwrap();
    assert_eq!(extract_coefficient_nat(&id).unwrap(), SpeciesNat::identity(p));
}

#[test]
fn non_natural_family_is_rejected() {
    let z2 = arc(FinCat::cyclic(2));
    let probes = ProbeFamily::new(z2.clone(), 3, 2);
    let one = Species::terminal(z2.clone(), z2.clone(), 1);
    let p = Arc::new(Species::sum(&[&one, &one]).unwrap());
    let dom = LanOnProbes::new(p.clone(), &probes).unwrap();
    let cod = LanOnProbes::new(p.clone(), &probes).unwrap();
    // swap the two summands only at probes with a fixed point
    let comps = (0..probes.len())
        .map(|i| {
            let v = dom.value(i);
            let swap = probes.member(i).sizes()[0] % 2 == 1;
            let c: Vec<usize> = (0..v.num_classes(0))
                .map(|k| {
                    let e = v.element(0, k);
                    let c = if swap { 1 - e.coeff } else { e.coeff };
                    let w = v.words().iter().position(|w| *w == e.word).unwrap();
                    v.class_of_triple(0, w, c, &e.family)
                })
                .collect();
            crate::presheaf::NatTrans::new(v.presheaf().clone(), v.presheaf().clone(), vec![c]).unwrap()
        })
        .collect();
    assert!(matches!(NatFamily::new(dom, cod, comps), Err(GenericError::NotNatural(_))));
}

#[test]
fn composite_of_truncated_exponentials() {
    let t = arc(FinCat::terminal());
    let probes = ProbeFamily::new(t.clone(), 4, 3);
    let e = catalog(CatalogName::E, 2).to_species();
    assert!(matches!(
        compose_analytic(&e, &e, 2, &probes),
        Err(GenericError::InsufficientDegree { required: 4, given: 2 })
    ));
    let r = compose_analytic(&e, &e, 4, &probes).unwrap();
    // multisets of at most two blocks, each of size at most two
    let mut oracle = vec![0; 5];
    for a in 0..=2 {
        for b in a..=2 {
            oracle[a + b] += 1;
        }
        oracle[a] += 1;
    }
    oracle[0] += 1;
    assert_eq!(unlabelled(&r.species), oracle);
    assert_eq!(oracle, vec![3, 2, 3, 1, 1]);
}

#[test]
fn composite_unit_laws() {
    let z2 = arc(FinCat::cyclic(2));
    let probes = ProbeFamily::new(z2.clone(), 4, 3);
    let p = Arc::new(Species::terminal(z2.clone(), z2.clone(), 2));
    let id = Species::identity(z2.clone(), 2);
    let left = compose_analytic(&id, &p, 2, &probes).unwrap();
    let right = compose_analytic(&p, &id, 2, &probes).unwrap();
    assert!(p.is_isomorphic(&left.species));
    assert!(p.is_isomorphic(&right.species));
}

#[test]
fn singleton_composed_with_itself() {
    let t = arc(FinCat::terminal());
    let probes = ProbeFamily::new(t.clone(), 3, 2);
    let x = Arc::new(catalog(CatalogName::X, 1).to_species());
    let r = compose_analytic(&x, &x, 1, &probes).unwrap();
    assert!(x.is_isomorphic(&r.species));
}

#[test]
fn probe_family_contains_small_sums() {
    let z2 = arc(FinCat::cyclic(2));
    let probes = ProbeFamily::new(z2.clone(), 2, 3);
    let (m, iso) = probes.sum(&Word(vec![0, 0, 0])).unwrap();
    assert_eq!(probes.member(m).total_size(), 6);
    assert!(iso.is_iso());
    // hom counts agree with direct enumeration
    for i in 0..probes.len() {
        for j in 0..probes.len() {
            let direct = hom_enumerate(probes.member(i), probes.member(j)).unwrap();
            assert_eq!(probes.homs(i, j), direct.as_slice());
        }
    }
}
