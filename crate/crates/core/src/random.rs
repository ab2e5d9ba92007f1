//! Seeded random species, built as sums of transitive orbit pieces.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fincat::FinCat;
use crate::freesmc::{enumerate_homs, Word};
use crate::species::{OrbitAtom, Species};

/// Groupoids with at most two objects and four morphisms used by the
/// randomized checks.
pub fn small_groupoids() -> Vec<Arc<FinCat>> {
    vec![
        Arc::new(FinCat::terminal()),
        Arc::new(FinCat::cyclic(2)),
        Arc::new(FinCat::cyclic(3)),
        Arc::new(FinCat::discrete(2)),
        Arc::new(FinCat::cyclic(2).disjoint_union(&FinCat::terminal())),
        Arc::new(FinCat::codiscrete(2)),
    ]
}

fn random_word(rng: &mut impl Rng, base: &FinCat, degree: usize) -> Word {
    let len = rng.gen_range(0..=degree);
    Word((0..len).map(|_| rng.gen_range(0..base.num_objects())).collect())
}

/// One to `max_atoms` orbit pieces, each with a random word of length at
/// most `degree`, a random object of `cod` and up to two random stabilizer
/// generators.
pub fn random_species(
    rng: &mut impl Rng,
    name: impl Into<String>,
    dom: &Arc<FinCat>,
    cod: &Arc<FinCat>,
    degree: usize,
    max_atoms: usize,
) -> Species {
    let atoms: Vec<OrbitAtom> = (0..rng.gen_range(1..=max_atoms.max(1)))
        .map(|_| {
            let word = random_word(rng, dom, degree);
            let object = rng.gen_range(0..cod.num_objects());
            let autos = enumerate_homs(dom, &word, &word);
            let ends = cod.hom(object, object);
            let generators = (0..rng.gen_range(0..=2))
                .map(|_| (autos.choose(rng).expect("identity").clone(), *ends.choose(rng).expect("identity")))
                .collect();
            OrbitAtom {
                word,
                object,
                generators,
            }
        })
        .collect();
    Species::orbit_sum(name, dom.clone(), cod.clone(), degree, &atoms).expect("atoms are well typed")
}
