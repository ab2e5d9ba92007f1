//! Checking that `⟨P⟩` sends given quasi-pullbacks to quasi-pullbacks.

use std::sync::Arc;

use crate::presheaf::{is_quasi_pullback, NatTrans, Presheaf};

use super::{lan_eval, lan_map, LanValue, Species, SpeciesError};

/// A cone `Q -> X_j` over a cospan `X_j -> Z`.
#[derive(Clone, Debug)]
pub struct QpbProbe {
    pub cone: Vec<NatTrans>,
    pub cospan: Vec<NatTrans>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    /// Whether the domain is a groupoid, so that every probe must pass.
    pub guaranteed: bool,
    pub checked: usize,
    /// Indices of probes whose image is not a quasi-pullback.
    pub failures: Vec<usize>,
}

impl PreservationReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Cache<'a> {
    species: &'a Species,
    entries: Vec<(Arc<Presheaf>, LanValue)>,
}

impl Cache<'_> {
    fn get(&mut self, x: &Arc<Presheaf>) -> Result<usize, SpeciesError> {
        if let Some(i) = self.entries.iter().position(|(y, _)| Arc::ptr_eq(x, y) || x == y) {
            return Ok(i);
        }
        let v = lan_eval(self.species, x)?;
        self.entries.push((x.clone(), v));
        Ok(self.entries.len() - 1)
    }

    fn map(&mut self, f: &NatTrans) -> Result<NatTrans, SpeciesError> {
        let a = self.get(f.dom())?;
        let b = self.get(f.cod())?;
        lan_map(&self.entries[a].1, &self.entries[b].1, f)
    }
}

pub fn preserves_quasi_pullbacks(p: &Species, probes: &[QpbProbe]) -> Result<PreservationReport, SpeciesError> {
    let mut cache = Cache {
        species: p,
        entries: Vec::new(),
    };
    let mut failures = Vec::new();
    for (i, probe) in probes.iter().enumerate() {
        if !is_quasi_pullback(&probe.cone, &probe.cospan).map_err(|_| SpeciesError::InvalidProbe(i))? {
            return Err(SpeciesError::InvalidProbe(i));
        }
        let cone: Vec<NatTrans> = probe.cone.iter().map(|f| cache.map(f)).collect::<Result<_, _>>()?;
        let cospan: Vec<NatTrans> = probe.cospan.iter().map(|f| cache.map(f)).collect::<Result<_, _>>()?;
        if !is_quasi_pullback(&cone, &cospan)? {
            failures.push(i);
        }
    }
    Ok(PreservationReport {
        guaranteed: p.dom.is_groupoid(),
        checked: probes.len(),
        failures,
    })
}
