//! Transformations `ψ: ⟨P⟩ ⇒ ⟨Q⟩` given by their components at probes, the
//! quasi-cartesian test, and recovery of the coefficient transformation.
//!
//! Squares and naturality are checked for one map per orbit of
//! `Aut(X) × Aut(Y)` on `hom(X, Y)`, plus generators of each `Aut(X)`. The
//! square of `σ;f;τ` is the square of `f` pasted with the squares of the
//! isomorphisms `σ` and `τ`, which are pullbacks, so nothing is lost.

use std::fmt;

use crate::presheaf::{quasi_pullback_witness, same_base, NatTrans, TaggedSum};
use crate::species::{lan_eval, lan_nat, map_class, SpeciesNat};

use super::{GenericError, LanOnProbes, ProbeFamily};

pub struct NatFamily<'a> {
    dom: LanOnProbes<'a>,
    cod: LanOnProbes<'a>,
    components: Vec<NatTrans>,
}

/// A naturality square that is not a quasi-pullback.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcFailure {
    /// Probe indices of `X` and `Y` and the index of `f` in `hom(X, Y)`.
    pub from: usize,
    pub to: usize,
    pub morphism: usize,
    pub object: usize,
    /// The missed pullback element: a class of `⟨Q⟩X` and one of `⟨P⟩Y`.
    pub missed: (usize, usize),
    pub description: String,
}

impl fmt::Display for QcFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description)
    }
}

impl<'a> NatFamily<'a> {
    /// Checks shapes and naturality.
    pub fn new(dom: LanOnProbes<'a>, cod: LanOnProbes<'a>, components: Vec<NatTrans>) -> Result<Self, GenericError> {
        let probes = dom.probes();
        if !std::ptr::eq(probes, cod.probes())
            || !same_base(dom.species().cod(), cod.species().cod())
            || components.len() != probes.len()
        {
            return Err(GenericError::BaseMismatch);
        }
        for (i, c) in components.iter().enumerate() {
            if **c.dom() != **dom.value(i).presheaf() || **c.cod() != **cod.value(i).presheaf() {
                return Err(GenericError::NotNatural(format!("component {i} has the wrong type")));
            }
        }
        let fam = NatFamily { dom, cod, components };
        for i in 0..probes.len() {
            for (g, sigma) in probes.automorphism_generators(i).iter().enumerate() {
                if !fam.commutes(i, i, sigma) {
                    return Err(GenericError::NotNatural(format!("automorphism {g} of probe {i}")));
                }
            }
            for j in 0..probes.len() {
                for &fi in probes.reps_mod_both(i, j) {
                    if !fam.commutes(i, j, &probes.homs(i, j)[fi]) {
                        return Err(GenericError::NotNatural(format!("map {fi} from probe {i} to probe {j}")));
                    }
                }
            }
        }
        Ok(fam)
    }

    /// `⟨φ⟩` restricted to the probes.
    pub fn from_lan_nat(phi: &SpeciesNat, probes: &'a ProbeFamily) -> Result<Self, GenericError> {
        let dom = LanOnProbes::new(phi.dom().clone(), probes)?;
        let cod = LanOnProbes::new(phi.cod().clone(), probes)?;
        let components = (0..probes.len())
            .map(|i| lan_nat(phi, dom.value(i), cod.value(i)))
            .collect::<Result<_, _>>()?;
        NatFamily::new(dom, cod, components)
    }

    pub fn dom(&self) -> &LanOnProbes<'a> {
        &self.dom
    }

    pub fn cod(&self) -> &LanOnProbes<'a> {
        &self.cod
    }

    pub fn component(&self, i: usize) -> &NatTrans {
        &self.components[i]
    }

    fn commutes(&self, i: usize, j: usize, f: &NatTrans) -> bool {
        let pf = self.dom.map(i, j, f);
        let qf = self.cod.map(i, j, f);
        self.components[i].then(&qf).ok() == pf.then(&self.components[j]).ok()
    }

    fn square_failure(&self, i: usize, j: usize, fi: usize) -> Result<Option<QcFailure>, GenericError> {
        let probes = self.dom.probes();
        let pf = self.dom.map_at(i, j, fi);
        let qf = self.cod.map_at(i, j, fi);
        let cone = [self.components[i].clone(), (*pf).clone()];
        let cospan = [(*qf).clone(), self.components[j].clone()];
        let Some(w) = quasi_pullback_witness(&cone, &cospan)? else {
            return Ok(None);
        };
        let base = self.dom.species().cod();
        let description = format!(
            "the square over map {fi} from probe {i} {} to probe {j} {} misses ({}, {}) at {}",
            probes.member(i),
            probes.member(j),
            self.cod.value(i).display_element(w.object, w.tuple[0]),
            self.dom.value(j).display_element(w.object, w.tuple[1]),
            base.object_name(w.object),
        );
        Ok(Some(QcFailure {
            from: i,
            to: j,
            morphism: fi,
            object: w.object,
            missed: (w.tuple[0], w.tuple[1]),
            description,
        }))
    }
}

/// The first naturality square that is not a quasi-pullback, scanning `X`
/// then `Y` in probe order.
pub fn qc_failure(psi: &NatFamily<'_>) -> Result<Option<QcFailure>, GenericError> {
    let probes = psi.dom.probes();
    for i in 0..probes.len() {
        for j in 0..probes.len() {
            for &fi in probes.reps_mod_both(i, j) {
                if let Some(f) = psi.square_failure(i, j, fi)? {
                    return Ok(Some(f));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_quasi_cartesian(psi: &NatFamily<'_>) -> Result<bool, GenericError> {
    Ok(qc_failure(psi)?.is_none())
}

/// `φ(p)` = the `q` with `ψ(p ⊗ id) = q ⊗ id`, read off at the probes
/// standing for `S A`, then checked against `ψ` at every probe.
pub fn extract_coefficient_nat(psi: &NatFamily<'_>) -> Result<SpeciesNat, GenericError> {
    if let Some(f) = qc_failure(psi)? {
        return Err(GenericError::NotQuasiCartesian(Box::new(f)));
    }
    let p = psi.dom.species();
    let q = psi.cod.species();
    if p.words() != q.words() {
        return Err(GenericError::BaseMismatch);
    }
    let probes = psi.dom.probes();
    let dom = p.dom();
    let nb = p.cod().num_objects();
    let mut comps = Vec::with_capacity(p.words().len());
    for (w, word) in p.words().iter().enumerate() {
        let (m, iso) = probes
            .sum(word)
            .ok_or_else(|| GenericError::Mismatch(format!("probe family has no S {}", word.display(dom))))?;
        let sa = TaggedSum::new(dom, word)?;
        let gens: Vec<usize> = (0..word.len()).map(|i| sa.generator(i)).collect();
        let vp = lan_eval(p, iso.dom())?;
        let vq = lan_eval(q, iso.dom())?;
        let back = iso.inverse().expect("iso");
        let mut per_b = Vec::with_capacity(nb);
        for b in 0..nb {
            let mut row = Vec::with_capacity(p.coeff(w).size(b));
            for c in 0..p.coeff(w).size(b) {
                let xi = vp.class_of_triple(b, w, c, &gens);
                let at_m = map_class(&vp, psi.dom.value(m), iso, b, xi);
                let image = psi.components[m].apply(b, at_m);
                let pulled = map_class(psi.cod.value(m), &vq, &back, b, image);
                let found: Vec<usize> = (0..q.coeff(w).size(b))
                    .filter(|&d| vq.class_of_triple(b, w, d, &gens) == pulled)
                    .collect();
                match found.as_slice() {
                    [d] => row.push(*d),
                    [] => {
                        return Err(GenericError::NoCoefficient {
                            word: word.display(dom).to_string(),
                            object: p.cod().object_name(b).to_string(),
                            coeff: c,
                        })
                    }
                    _ => return Err(GenericError::Mismatch("coefficient is not unique".into())),
                }
            }
            per_b.push(row);
        }
        comps.push(per_b);
    }
    let phi = SpeciesNat::new(p.clone(), q.clone(), comps)?;
    for i in 0..probes.len() {
        if lan_nat(&phi, psi.dom.value(i), psi.cod.value(i))? != psi.components[i] {
            return Err(GenericError::Mismatch(format!("extracted transformation differs at probe {i}")));
        }
    }
    Ok(phi)
}

impl fmt::Debug for NatFamily<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NatFamily")
            .field("dom", &self.dom.species().name())
            .field("cod", &self.cod.species().name())
            .field("probes", &self.components.len())
            .finish()
    }
}
