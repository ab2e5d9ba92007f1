//! Laws that hold for every species, checked on seeded random instances.

use std::sync::Arc;

use anafun::classical::{burnside_unlabelled, count_labelled, count_unlabelled, ClassicalSpecies};
use anafun::fincat::FinCat;
use anafun::freesmc::{enumerate_homs, enumerate_words, Word};
use anafun::generic::{
    coefficients_of, extract_coefficient_nat, generic_classes, is_quasi_cartesian, minimal_classes, Mode, NatFamily,
    ProbeFamily,
};
use anafun::presheaf::{
    hom_enumerate, is_quasi_pullback, lift_to_freesmc, presheaves_up_to_iso, sum_functor_mor, wide_pullback, Presheaf,
    TaggedSum,
};
use anafun::random::{random_species, small_groupoids};
use anafun::species::{lan_eval, lan_map, taylor_eval, Species};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup(seed: u64, base: usize, degree: usize) -> (ChaCha8Rng, Arc<FinCat>, Arc<Species>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = small_groupoids()[base].clone();
    let p = Arc::new(random_species(&mut rng, "P", &g, &g, degree, 3));
    (rng, g, p)
}

/// Brute force over all `φ: |A| -> |B|`.
fn hom_count_oracle(base: &FinCat, a: &[usize], b: &[usize]) -> usize {
    match a.split_first() {
        None => 1,
        Some((&a0, rest)) => b
            .iter()
            .map(|&bj| base.hom(a0, bj).len() * hom_count_oracle(base, rest, b))
            .sum(),
    }
}

fn test_bases() -> Vec<Arc<FinCat>> {
    vec![
        Arc::new(FinCat::terminal()),
        Arc::new(FinCat::cyclic(2)),
        Arc::new(FinCat::codiscrete(2)),
        Arc::new(FinCat::arrow()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_species_validate(seed in any::<u64>(), base in 0..6usize, degree in 0..3usize) {
        let (_, _, p) = setup(seed, base, degree);
        prop_assert!(p.validate().is_ok());
        prop_assert!(p.effective_degree() <= degree);
    }

    #[test]
    fn lan_map_is_functorial(seed in any::<u64>(), base in 0..6usize) {
        let (mut rng, g, p) = setup(seed, base, 2);
        let xs = presheaves_up_to_iso(&g, 3);
        let (x, y, z) = (xs.choose(&mut rng).unwrap(), xs.choose(&mut rng).unwrap(), xs.choose(&mut rng).unwrap());
        let (fs, gs) = (hom_enumerate(x, y).unwrap(), hom_enumerate(y, z).unwrap());
        let (vx, vy, vz) = (lan_eval(&p, x).unwrap(), lan_eval(&p, y).unwrap(), lan_eval(&p, z).unwrap());
        if let (Some(f), Some(h)) = (fs.choose(&mut rng), gs.choose(&mut rng)) {
            let whole = lan_map(&vx, &vz, &f.then(h).unwrap()).unwrap();
            let parts = lan_map(&vx, &vy, f).unwrap().then(&lan_map(&vy, &vz, h).unwrap()).unwrap();
            prop_assert_eq!(whole, parts);
        }
        let id = anafun::presheaf::NatTrans::identity(x.clone());
        prop_assert!(lan_map(&vx, &vx, &id).unwrap().is_iso());
    }

    #[test]
    fn taylor_agrees_with_coend(seed in any::<u64>(), base in 0..6usize) {
        let (mut rng, g, p) = setup(seed, base, 2);
        let xs = presheaves_up_to_iso(&g, 4);
        let x = xs.choose(&mut rng).unwrap();
        let v = lan_eval(&p, x).unwrap();
        let t = taylor_eval(&p, x, &v).unwrap();
        prop_assert!(t.to_lan.is_iso());
    }

    #[test]
    fn coefficient_maps_are_quasi_cartesian_and_recoverable(seed in any::<u64>(), base in 0..6usize) {
        let (mut rng, g, p) = setup(seed, base, 2);
        let r = random_species(&mut rng, "R", &g, &g, 2, 2);
        let q = Arc::new(Species::sum(&[&p, &r]).unwrap());
        let homs = p.homs(&q, 64);
        let phi = homs.choose(&mut rng).unwrap();
        let probes = ProbeFamily::new(g.clone(), 3, 3);
        let psi = NatFamily::from_lan_nat(phi, &probes).unwrap();
        prop_assert!(is_quasi_cartesian(&psi).unwrap());
        prop_assert_eq!(&extract_coefficient_nat(&psi).unwrap(), phi);
        let c = coefficients_of(&p, &probes).unwrap();
        prop_assert!(p.is_isomorphic(&c.fcirc));
        prop_assert!(c.eta.mono && c.eta.epi);
    }

    #[test]
    fn generic_elements_are_minimal_and_rigid(seed in any::<u64>(), base in 0..6usize) {
        // a generic x and a minimal y with ⟨P⟩f(y) = x force f to be iso
        let (_, g, p) = setup(seed, base, 2);
        let xs = presheaves_up_to_iso(&g, 3);
        let vals: Vec<_> = xs.iter().map(|x| lan_eval(&p, x).unwrap()).collect();
        let gen: Vec<_> = vals.iter().map(|v| generic_classes(&p, v, Mode::Whitebox).unwrap()).collect();
        let min: Vec<_> = vals.iter().map(|v| minimal_classes(&p, v, Mode::Whitebox).unwrap()).collect();
        for i in 0..xs.len() {
            for (gs, ms) in gen[i].iter().zip(&min[i]) {
                for (&gk, &mk) in gs.iter().zip(ms) {
                    prop_assert!(!gk || mk);
                }
            }
            for j in 0..xs.len() {
                for f in hom_enumerate(&xs[j], &xs[i]).unwrap() {
                    let pf = lan_map(&vals[j], &vals[i], &f).unwrap();
                    for b in 0..g.num_objects() {
                        for y in 0..vals[j].num_classes(b) {
                            if min[j][b][y] && gen[i][b][pf.apply(b, y)] {
                                prop_assert!(f.is_iso());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pullbacks_are_preserved(seed in any::<u64>(), base in 0..6usize) {
        let (mut rng, g, p) = setup(seed, base, 2);
        let xs = presheaves_up_to_iso(&g, 3);
        let z = xs.choose(&mut rng).unwrap();
        let legs: Vec<_> = (0..rng.gen_range(1..=3))
            .filter_map(|_| {
                let x = xs.choose(&mut rng).unwrap();
                hom_enumerate(x, z).unwrap().choose(&mut rng).cloned()
            })
            .collect();
        prop_assume!(!legs.is_empty());
        let pb = wide_pullback(&legs).unwrap();
        let mut image = |f: &anafun::presheaf::NatTrans| {
            let (a, b) = (lan_eval(&p, f.dom()).unwrap(), lan_eval(&p, f.cod()).unwrap());
            lan_map(&a, &b, f).unwrap()
        };
        let cone: Vec<_> = pb.projections.iter().map(&mut image).collect();
        let cospan: Vec<_> = legs.iter().map(&mut image).collect();
        prop_assert!(is_quasi_pullback(&cone, &cospan).unwrap());
    }

    #[test]
    fn classical_counts_agree(seed in any::<u64>(), k in 0..4usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let one = Arc::new(FinCat::terminal());
        let s = random_species(&mut rng, "S", &one, &one, 3, 3);
        let c = ClassicalSpecies::from_species(&s).unwrap();
        prop_assert_eq!(burnside_unlabelled(&c), count_unlabelled(&c));
        let x = Arc::new(Presheaf::from_action(one.clone(), k, |_, e| e).unwrap());
        let v = lan_eval(&s, &x).unwrap();
        let mut by_degree = vec![0; 4];
        for cl in 0..v.num_classes(0) {
            by_degree[v.element(0, cl).word.len()] += 1;
        }
        prop_assert_eq!(count_labelled(&c, k), by_degree);
    }

    #[test]
    fn sum_functor_laws(base in 0..4usize, a in 0..40usize, b in 0..40usize) {
        let g = test_bases()[base].clone();
        let words = enumerate_words(&g, 3);
        let (wa, wb) = (&words[a % words.len()], &words[b % words.len()]);
        let (sa, sb) = (TaggedSum::new(&g, wa).unwrap(), TaggedSum::new(&g, wb).unwrap());
        let homs = hom_enumerate(sa.presheaf(), sb.presheaf()).unwrap();
        prop_assert_eq!(homs.len(), hom_count_oracle(&g, wa.letters(), wb.letters()));
        let gammas = enumerate_homs(&g, wa, wb);
        let mut images: Vec<_> = gammas.iter().map(|m| sum_functor_mor(m, &sa, &sb).unwrap()).collect();
        for (m, f) in gammas.iter().zip(&images) {
            let lifted = lift_to_freesmc(f, &sa, &sb).unwrap();
            prop_assert_eq!(lifted.as_ref(), Some(m));
            prop_assert!(!f.is_iso() || m.inverse(&g).is_some());
        }
        let n = images.len();
        images.sort_by(|x, y| x.components().cmp(y.components()));
        images.dedup_by(|x, y| x.components() == y.components());
        prop_assert_eq!(images.len(), n);
    }
}

#[test]
fn hom_count_oracle_examples() {
    let t = FinCat::terminal();
    assert_eq!(hom_count_oracle(&t, &[0, 0], &[0, 0, 0]), 9);
    assert_eq!(hom_count_oracle(&t, &[0], &[]), 0);
    assert_eq!(hom_count_oracle(&t, &[], &[0]), 1);
    let w = Word(vec![0, 0]);
    assert_eq!(enumerate_homs(&t, &w, &w).len(), 2);
}
