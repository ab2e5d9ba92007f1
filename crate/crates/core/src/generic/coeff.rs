//! `F°(G)(h)` = generic elements of `⟨P⟩(S G)(h)`, and the comparison
//! `η: ⟨F°⟩ ⇒ ⟨P⟩`.

use std::sync::Arc;

use serde::Serialize;

use crate::presheaf::{sum_functor_mor, NatTrans, Presheaf, TaggedSum};
use crate::species::{lan_eval, lan_map, map_class, LanValue, Species, SpeciesNat};

use super::{GenericError, ProbeFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaReport {
    pub probes: usize,
    pub mono: bool,
    pub epi: bool,
    /// Probes where `η` is not an isomorphism.
    pub failures: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Coefficients {
    pub fcirc: Arc<Species>,
    /// `p ↦ p ⊗ id`.
    pub iso: SpeciesNat,
    pub inverse: SpeciesNat,
    pub eta: EtaReport,
}

struct Level {
    sum: TaggedSum,
    value: LanValue,
    // generic[b] = ascending generic classes; slot[b][class] = position
    generic: Vec<Vec<usize>>,
    slot: Vec<Vec<usize>>,
}

pub fn coefficients_of(p: &Arc<Species>, probes: &ProbeFamily) -> Result<Coefficients, GenericError> {
    if !p.dom().is_groupoid() || !p.cod().is_groupoid() {
        return Err(GenericError::NotGroupoid);
    }
    if !crate::presheaf::same_base(p.dom(), probes.base()) {
        return Err(GenericError::BaseMismatch);
    }
    let dom = p.dom().clone();
    let cod = p.cod().clone();
    let nb = cod.num_objects();
    let mut levels = Vec::with_capacity(p.words().len());
    for word in p.words() {
        let sum = TaggedSum::new(&dom, word)?;
        let value = lan_eval(p, sum.presheaf())?;
        let mut generic = Vec::with_capacity(nb);
        let mut slot = Vec::with_capacity(nb);
        for b in 0..nb {
            let gs: Vec<usize> = (0..value.num_classes(b))
                .filter(|&k| {
                    let e = value.element(b, k);
                    let w = TaggedSum::new(&dom, &e.word).expect("word");
                    w.family_map(&e.family, sum.presheaf()).expect("family").is_iso()
                })
                .collect();
            let mut s = vec![usize::MAX; value.num_classes(b)];
            for (i, &k) in gs.iter().enumerate() {
                s[k] = i;
            }
            generic.push(gs);
            slot.push(s);
        }
        levels.push(Level {
            sum,
            value,
            generic,
            slot,
        });
    }
    let closed = |lv: &Level, b: usize, k: usize| -> Result<usize, GenericError> {
        match lv.slot[b][k] {
            usize::MAX => Err(GenericError::Mismatch("generic elements are not closed under the actions".into())),
            s => Ok(s),
        }
    };
    let mut coeffs = Vec::with_capacity(levels.len());
    for lv in &levels {
        let sizes = lv.generic.iter().map(Vec::len).collect();
        let action = (0..cod.num_morphisms())
            .map(|g| {
                let (c, d) = (cod.dom(g), cod.cod(g));
                lv.generic[d]
                    .iter()
                    .map(|&k| closed(lv, c, lv.value.presheaf().restrict(g, k)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        coeffs.push(Presheaf::new(cod.clone(), sizes, action)?);
    }
    let mut actions = Vec::with_capacity(p.morphisms().len());
    for (m, mor) in p.morphisms().iter().enumerate() {
        let (s, t) = p.morphism_ends(m);
        let (ls, lt) = (&levels[s], &levels[t]);
        let sg = sum_functor_mor(mor, &ls.sum, &lt.sum)?;
        let fm = lan_map(&ls.value, &lt.value, &sg)?;
        let per_b = (0..nb)
            .map(|b| ls.generic[b].iter().map(|&k| closed(lt, b, fm.apply(b, k))).collect())
            .collect::<Result<Vec<Vec<usize>>, _>>()?;
        actions.push(per_b);
    }
    let fcirc = Species::tabulate(
        format!("{}°", p.name()),
        dom.clone(),
        cod.clone(),
        p.degree(),
        |w| coeffs[p.word_index(w).expect("same words")].clone(),
        |mor, b| actions[p.morphism_index(mor).expect("same morphisms")][b].clone(),
    )?;
    let fcirc = Arc::new(fcirc);
    let mut forward = Vec::with_capacity(levels.len());
    let mut backward = Vec::with_capacity(levels.len());
    for (w, lv) in levels.iter().enumerate() {
        let gens: Vec<usize> = (0..p.words()[w].len()).map(|i| lv.sum.generator(i)).collect();
        let mut fw = Vec::with_capacity(nb);
        let mut bw = Vec::with_capacity(nb);
        for b in 0..nb {
            let row: Vec<usize> = (0..p.coeff(w).size(b))
                .map(|c| closed(lv, b, lv.value.class_of_triple(b, w, c, &gens)))
                .collect::<Result<_, _>>()?;
            let mut inv = vec![usize::MAX; lv.generic[b].len()];
            for (c, &s) in row.iter().enumerate() {
                inv[s] = c;
            }
            if inv.contains(&usize::MAX) {
                return Err(GenericError::Mismatch("p ↦ p ⊗ id is not onto the generic elements".into()));
            }
            fw.push(row);
            bw.push(inv);
        }
        forward.push(fw);
        backward.push(bw);
    }
    let iso = SpeciesNat::new(p.clone(), fcirc.clone(), forward)?;
    let inverse = SpeciesNat::new(fcirc.clone(), p.clone(), backward)?;
    if !iso.is_iso() {
        return Err(GenericError::Mismatch("p ↦ p ⊗ id is not injective".into()));
    }
    let eta = eta_report(p, &fcirc, &levels, probes)?;
    Ok(Coefficients {
        fcirc,
        iso,
        inverse,
        eta,
    })
}

/// `η_X: ξ ⊗ x ↦ ⟨P⟩x(ξ)` at every probe.
fn eta_report(p: &Species, fcirc: &Species, levels: &[Level], probes: &ProbeFamily) -> Result<EtaReport, GenericError> {
    let nb = p.cod().num_objects();
    let (mut mono, mut epi) = (true, true);
    let mut failures = Vec::new();
    for (i, x) in probes.members().iter().enumerate() {
        let vf = lan_eval(fcirc, x)?;
        let vp = lan_eval(p, x)?;
        let comps = (0..nb)
            .map(|b| {
                (0..vf.num_classes(b))
                    .map(|k| {
                        let (w, s, fam) = vf.representative(b, k);
                        let lv = &levels[w];
                        let xm = lv.sum.family_map(&fam, x)?;
                        Ok(map_class(&lv.value, &vp, &xm, b, lv.generic[b][s]))
                    })
                    .collect::<Result<Vec<_>, GenericError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let eta = NatTrans::new(vf.presheaf().clone(), vp.presheaf().clone(), comps)?;
        mono &= eta.is_mono();
        epi &= eta.is_epi();
        if !eta.is_iso() {
            failures.push(i);
        }
    }
    Ok(EtaReport {
        probes: probes.len(),
        mono,
        epi,
        failures,
    })
}
