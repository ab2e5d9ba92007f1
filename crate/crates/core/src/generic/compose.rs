//! `⟨Q⟩ ∘ ⟨P⟩` as an analytic functor: its coefficient at `A` is the set of
//! classes of `⟨Q⟩⟨P⟩(S A)` whose combined family is a bijection onto the
//! positions of `A`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::freesmc::is_permutation;
use crate::presheaf::{same_base, sum_functor_mor, NatTrans, Presheaf, TaggedSum};
use crate::species::{lan_eval, lan_map, map_class, LanValue, Species};

use super::{GenericError, ProbeFamily};

#[derive(Clone, Debug)]
pub struct Composite {
    pub species: Arc<Species>,
    /// Degree below which the composite is exact.
    pub required_degree: usize,
    /// Probes at which `⟨R⟩X ≅ ⟨Q⟩⟨P⟩X` was confirmed.
    pub certified: usize,
}

struct Level {
    sum: TaggedSum,
    inner: LanValue,
    outer: LanValue,
    chosen: Vec<Vec<usize>>,
    slot: Vec<Vec<usize>>,
}

/// Positions of `A` hit by the combined family of class `k` at `c`.
fn positions(lv: &Level, c: usize, k: usize) -> Vec<usize> {
    let (w, _, fam) = lv.outer.representative(c, k);
    let word = &lv.outer.words()[w];
    let mut out = Vec::new();
    for (&h, &xi) in word.letters().iter().zip(&fam) {
        let (iw, _, inner_fam) = lv.inner.representative(h, xi);
        let inner_word = &lv.inner.words()[iw];
        for (&g, &e) in inner_word.letters().iter().zip(&inner_fam) {
            out.push(lv.sum.tag(g, e).0);
        }
    }
    out
}

/// `R` with `⟨R⟩ ≅ ⟨Q⟩ ∘ ⟨P⟩`, certified at every probe.
///
/// Refuses degrees below `effdeg(P)·effdeg(Q)`, since the composite of the
/// truncations has coefficients up to that arity.
pub fn compose_analytic(p: &Species, q: &Species, degree: usize, probes: &ProbeFamily) -> Result<Composite, GenericError> {
    if !p.dom().is_groupoid() || !q.dom().is_groupoid() {
        return Err(GenericError::NotGroupoid);
    }
    if !same_base(p.cod(), q.dom()) || !same_base(p.dom(), probes.base()) {
        return Err(GenericError::BaseMismatch);
    }
    let required = p.effective_degree() * q.effective_degree();
    if degree < required {
        return Err(GenericError::InsufficientDegree { required, given: degree });
    }
    let g = p.dom().clone();
    let k = q.cod().clone();
    let nk = k.num_objects();
    let words = crate::freesmc::enumerate_words(&g, degree);
    let mut levels = Vec::with_capacity(words.len());
    for word in &words {
        let sum = TaggedSum::new(&g, word)?;
        let inner = lan_eval(p, sum.presheaf())?;
        let outer = lan_eval(q, inner.presheaf())?;
        let mut lv = Level {
            sum,
            inner,
            outer,
            chosen: Vec::new(),
            slot: Vec::new(),
        };
        for c in 0..nk {
            let n = lv.outer.num_classes(c);
            let chosen: Vec<usize> = (0..n)
                .filter(|&cl| {
                    let pos = positions(&lv, c, cl);
                    pos.len() == word.len() && is_permutation(&pos)
                })
                .collect();
            let mut slot = vec![usize::MAX; n];
            for (i, &cl) in chosen.iter().enumerate() {
                slot[cl] = i;
            }
            lv.chosen.push(chosen);
            lv.slot.push(slot);
        }
        levels.push(lv);
    }
    let word_index: HashMap<&crate::freesmc::Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let pick = |lv: &Level, c: usize, cl: usize| -> usize {
        let s = lv.slot[c][cl];
        assert_ne!(s, usize::MAX, "bijective classes are closed under the actions");
        s
    };
    let coeffs: Vec<Presheaf> = levels
        .iter()
        .map(|lv| {
            let sizes = lv.chosen.iter().map(Vec::len).collect();
            let action = (0..k.num_morphisms())
                .map(|beta| {
                    let (c, d) = (k.dom(beta), k.cod(beta));
                    lv.chosen[d].iter().map(|&cl| pick(lv, c, lv.outer.presheaf().restrict(beta, cl))).collect()
                })
                .collect();
            Presheaf::new(k.clone(), sizes, action)
        })
        .collect::<Result<_, _>>()?;
    let species = Species::tabulate(
        format!("{} ∘ {}", q.name(), p.name()),
        g.clone(),
        k.clone(),
        degree,
        |w| coeffs[word_index[w]].clone(),
        |m, c| {
            let (ls, lt) = (&levels[word_index[&m.dom]], &levels[word_index[&m.cod]]);
            let sg = sum_functor_mor(m, &ls.sum, &lt.sum).expect("typed");
            let t1 = lan_map(&ls.inner, &lt.inner, &sg).expect("typed");
            ls.chosen[c]
                .iter()
                .map(|&cl| pick(lt, c, map_class(&ls.outer, &lt.outer, &t1, c, cl)))
                .collect()
        },
    )?;
    let report = species.validate();
    if !report.is_ok() {
        return Err(GenericError::Species(crate::species::SpeciesError::Invalid(report)));
    }
    let species = Arc::new(species);
    for (i, x) in probes.members().iter().enumerate() {
        if !certify(&species, p, q, &levels, x)? {
            return Err(GenericError::CertificateFailed(i));
        }
    }
    Ok(Composite {
        species,
        required_degree: required,
        certified: probes.len(),
    })
}

/// `⟨R⟩X -> ⟨Q⟩⟨P⟩X`, `r ⊗ x ↦ ⟨Q⟩⟨P⟩x(r)`, is a bijection.
fn certify(r: &Species, p: &Species, q: &Species, levels: &[Level], x: &Arc<Presheaf>) -> Result<bool, GenericError> {
    let vr = lan_eval(r, x)?;
    let w1 = lan_eval(p, x)?;
    let w2 = lan_eval(q, w1.presheaf())?;
    let mut inner_maps: HashMap<(usize, Vec<usize>), NatTrans> = HashMap::new();
    let nk = r.cod().num_objects();
    let mut comps = Vec::with_capacity(nk);
    for c in 0..nk {
        let mut comp = Vec::with_capacity(vr.num_classes(c));
        for cl in 0..vr.num_classes(c) {
            let (w, s, fam) = vr.representative(c, cl);
            let lv = &levels[w];
            let t1 = match inner_maps.get(&(w, fam.clone())) {
                Some(t) => t.clone(),
                None => {
                    let xm = lv.sum.family_map(&fam, x)?;
                    let t = lan_map(&lv.inner, &w1, &xm)?;
                    inner_maps.insert((w, fam), t.clone());
                    t
                }
            };
            comp.push(map_class(&lv.outer, &w2, &t1, c, lv.chosen[c][s]));
        }
        comps.push(comp);
    }
    let cmp = NatTrans::new(vr.presheaf().clone(), w2.presheaf().clone(), comps)?;
    Ok(cmp.is_iso())
}
