//! Over the arrow category `bot -> top`, the unique `φ: P ⇒ 1` from
//! `P = !Scat[[top], -]` has a naturality square along `y(bot) -> y(top)`
//! that is not a quasi-pullback. Over the discrete category on the same
//! objects the same construction is quasi-cartesian.

use std::sync::Arc;

use serde::Serialize;

use crate::fincat::FinCat;
use crate::freesmc::Word;
use crate::presheaf::{hom_enumerate, quasi_pullback_witness, yoneda};
use crate::species::{lan_eval, lan_map, lan_nat, Species, SpeciesNat};

use super::{extract_coefficient_nat, is_quasi_cartesian, GenericError, NatFamily, ProbeFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub commutes: bool,
    pub quasi_pullback: bool,
    /// The pullback element the square misses.
    pub witness: Option<String>,
    /// Extraction over the arrow category refuses with a failing square.
    pub extraction_refused: bool,
    pub extraction_error: Option<String>,
    pub discrete_quasi_cartesian: bool,
    pub identity_quasi_cartesian: bool,
}

impl CounterexampleReport {
    /// The outcome the construction is expected to produce.
    pub fn as_expected(&self) -> bool {
        self.commutes
            && !self.quasi_pullback
            && self.witness.is_some()
            && self.extraction_refused
            && self.discrete_quasi_cartesian
            && self.identity_quasi_cartesian
    }
}

pub fn check_counterexample(probe_bound: usize) -> Result<CounterexampleReport, GenericError> {
    let scat = Arc::new(FinCat::arrow());
    let p = Arc::new(Species::representable(scat, &Word::single(1), 1)?);
    check_counterexample_with(&SpeciesNat::to_terminal(p), 0, 1, probe_bound)
}

/// The same checks for a given `φ: P ⇒ Q` over a category with a map
/// `bot -> top`. The discrete control is always the representable at `top`.
pub fn check_counterexample_with(
    phi: &SpeciesNat,
    bot: usize,
    top: usize,
    probe_bound: usize,
) -> Result<CounterexampleReport, GenericError> {
    let p = phi.dom().clone();
    let scat = p.dom().clone();
    let one = phi.cod().clone();

    let yb = yoneda(&scat, bot)?;
    let yt = yoneda(&scat, top)?;
    let u = hom_enumerate(yb.presheaf(), yt.presheaf())?
        .into_iter()
        .next()
        .ok_or_else(|| GenericError::Mismatch(format!("no map y({}) -> y({})", scat.object_name(bot), scat.object_name(top))))?;
    let (pb, pt) = (lan_eval(&p, yb.presheaf())?, lan_eval(&p, yt.presheaf())?);
    let (ob, ot) = (lan_eval(&one, yb.presheaf())?, lan_eval(&one, yt.presheaf())?);
    let psi_b = lan_nat(phi, &pb, &ob)?;
    let psi_t = lan_nat(phi, &pt, &ot)?;
    let pu = lan_map(&pb, &pt, &u)?;
    let ou = lan_map(&ob, &ot, &u)?;
    let commutes = psi_b.then(&ou)? == pu.then(&psi_t)?;
    let cone = [psi_b, pu];
    let cospan = [ou, psi_t];
    let witness = quasi_pullback_witness(&cone, &cospan)?.map(|w| {
        format!(
            "at {}: ({} in ⟨1⟩y(bot), {} in ⟨P⟩y(top)) is not hit",
            scat.object_name(w.object),
            ob.display_element(w.object, w.tuple[0]),
            pt.display_element(w.object, w.tuple[1]),
        )
    });

    let probes = ProbeFamily::new(scat.clone(), probe_bound, 2);
    let psi = NatFamily::from_lan_nat(phi, &probes)?;
    let extraction = extract_coefficient_nat(&psi);
    let extraction_refused = matches!(extraction, Err(GenericError::NotQuasiCartesian(_)));
    let extraction_error = extraction.err().map(|e| e.to_string());
    let identity = NatFamily::from_lan_nat(&SpeciesNat::identity(p.clone()), &probes)?;
    let identity_quasi_cartesian = is_quasi_cartesian(&identity)?;

    let disc = Arc::new(scat.discrete_part());
    let pd = Arc::new(Species::representable(disc.clone(), &Word::single(top), 1)?);
    let dprobes = ProbeFamily::new(disc, probe_bound, 2);
    let dpsi = NatFamily::from_lan_nat(&SpeciesNat::to_terminal(pd), &dprobes)?;
    let discrete_quasi_cartesian = is_quasi_cartesian(&dpsi)?;

    Ok(CounterexampleReport {
        commutes,
        quasi_pullback: witness.is_none(),
        witness,
        extraction_refused,
        extraction_error,
        discrete_quasi_cartesian,
        identity_quasi_cartesian,
    })
}
