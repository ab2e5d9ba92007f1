//! Generic and minimal elements of analytic functors, the coefficient
//! species `F°` recovered from `⟨P⟩`, quasi-cartesian transformations and
//! composition of analytic functors.
//!
//! Over groupoid bases the whitebox tests (the representative's family map
//! is iso, resp. epi) decide genericity and minimality. The bounded tests
//! quantify over a [`ProbeFamily`] instead and are used to cross-check them.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use thiserror::Error;

use crate::presheaf::{NatTrans, PresheafError};
use crate::species::{lan_eval, lan_map, LanValue, Species, SpeciesError};

mod coeff;
mod compose;
mod counter;
mod elements;
mod probe;
mod qc;

pub use coeff::{coefficients_of, Coefficients, EtaReport};
pub use compose::{compose_analytic, Composite};
pub use counter::{check_counterexample, check_counterexample_with, CounterexampleReport};
pub use elements::{
    bounded_generic, bounded_minimal, generic_classes, is_generic, is_minimal, minimal_classes, representative_map, Mode,
};
pub use probe::ProbeFamily;
pub use qc::{extract_coefficient_nat, is_quasi_cartesian, qc_failure, NatFamily, QcFailure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenericError {
    #[error("base category is not a groupoid")]
    NotGroupoid,
    #[error("base category mismatch")]
    BaseMismatch,
    #[error("no class {class} at object {object}")]
    ClassOutOfRange { object: usize, class: usize },
    #[error("{0}")]
    Species(#[from] SpeciesError),
    #[error("{0}")]
    Presheaf(#[from] PresheafError),
    #[error("family is not natural at probe morphism {0}")]
    NotNatural(String),
    #[error("not quasi-cartesian: {0}")]
    NotQuasiCartesian(Box<QcFailure>),
    #[error("not quasi-cartesian at ({word}, {object}, {coeff}): image of p ⊗ id has no representative q ⊗ id")]
    NoCoefficient { word: String, object: String, coeff: usize },
    #[error("degree {given} is too small; the composite needs degree {required}")]
    InsufficientDegree { required: usize, given: usize },
    #[error("comparison with the composite fails at probe {0}")]
    CertificateFailed(usize),
    #[error("{0}")]
    Mismatch(String),
}

/// `⟨P⟩` evaluated at every member of a probe family, with `⟨P⟩f` cached
/// for the maps visited so far.
pub struct LanOnProbes<'a> {
    species: Arc<Species>,
    probes: &'a ProbeFamily,
    values: Vec<LanValue>,
    maps: RefCell<HashMap<(usize, usize, usize), Rc<NatTrans>>>,
}

impl<'a> LanOnProbes<'a> {
    pub fn new(species: Arc<Species>, probes: &'a ProbeFamily) -> Result<Self, GenericError> {
        if !crate::presheaf::same_base(species.dom(), probes.base()) {
            return Err(GenericError::BaseMismatch);
        }
        let values = probes
            .members()
            .iter()
            .map(|x| lan_eval(&species, x))
            .collect::<Result<_, _>>()?;
        Ok(LanOnProbes {
            species,
            probes,
            values,
            maps: RefCell::new(HashMap::new()),
        })
    }

    pub fn species(&self) -> &Arc<Species> {
        &self.species
    }

    pub fn probes(&self) -> &'a ProbeFamily {
        self.probes
    }

    pub fn value(&self, i: usize) -> &LanValue {
        &self.values[i]
    }

    pub fn values(&self) -> &[LanValue] {
        &self.values
    }

    /// `⟨P⟩f` for `f: member i -> member j`.
    pub fn map(&self, i: usize, j: usize, f: &NatTrans) -> NatTrans {
        lan_map(&self.values[i], &self.values[j], f).expect("probe morphism")
    }

    /// `⟨P⟩` of the `idx`-th map in `probes.homs(i, j)`.
    pub fn map_at(&self, i: usize, j: usize, idx: usize) -> Rc<NatTrans> {
        if let Some(t) = self.maps.borrow().get(&(i, j, idx)) {
            return t.clone();
        }
        let t = Rc::new(self.map(i, j, &self.probes.homs(i, j)[idx]));
        self.maps.borrow_mut().insert((i, j, idx), t.clone());
        t
    }
}

/// Where `x` sits in the family, if it is literally a member.
fn member_position(probes: &ProbeFamily, x: &Arc<crate::presheaf::Presheaf>) -> Option<usize> {
    probes
        .members()
        .iter()
        .position(|m| Arc::ptr_eq(m, x))
        .or_else(|| probes.index_of(x))
}

#[cfg(test)]
mod tests;
