//! The chain `0 -> ⟨P⟩0 -> ⟨P⟩²0 -> ...` approximating the initial algebra.

use std::sync::Arc;

use crate::presheaf::{same_base, NatTrans, Presheaf};

use super::{lan_eval, lan_map, Species, SpeciesError};

#[derive(Clone, Debug)]
pub struct AlgebraChain {
    pub stages: Vec<Arc<Presheaf>>,
    /// `maps[i]: stages[i] -> stages[i + 1]`.
    pub maps: Vec<NatTrans>,
    /// The last connecting map is an isomorphism.
    pub stabilized: bool,
    /// First step whose connecting map is an isomorphism.
    pub stabilized_at: Option<usize>,
}

/// Runs `steps` iterations from the empty presheaf. No claim is made that
/// the chain converges within them.
pub fn initial_algebra_chain(p: &Species, steps: usize) -> Result<AlgebraChain, SpeciesError> {
    if !same_base(&p.dom, &p.cod) {
        return Err(SpeciesError::NotEndo);
    }
    if !p.dom.is_groupoid() {
        return Err(SpeciesError::NotGroupoid);
    }
    let mut stages = vec![Arc::new(Presheaf::empty(p.dom.clone()))];
    let mut values = Vec::with_capacity(steps);
    let mut maps: Vec<NatTrans> = Vec::with_capacity(steps);
    for i in 0..steps {
        let v = lan_eval(p, &stages[i])?;
        stages.push(v.presheaf().clone());
        let map = if i == 0 {
            NatTrans::from_empty(stages[0].clone(), stages[1].clone())?
        } else {
            lan_map(&values[i - 1], &v, &maps[i - 1])?
        };
        maps.push(map);
        values.push(v);
    }
    let stabilized_at = maps.iter().position(|m| m.is_iso()).map(|i| i + 1);
    let stabilized = maps.last().is_some_and(|m| m.is_iso());
    Ok(AlgebraChain {
        stages,
        maps,
        stabilized,
        stabilized_at,
    })
}
