//! Finite presheaves and natural transformations over a [`FinCat`].
//!
//! Carriers are dense index sets. For a morphism `g: c -> d` the action is a
//! table from `X(d)` to `X(c)`. Mono, epi and iso are decided pointwise.

mod enumerate;
mod limits;
mod sum;

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::FinCat;
use crate::unary::{self, Op, SearchOptions, UnaryAlgebra};

pub use enumerate::presheaves_up_to_iso;
pub use limits::{
    epi_mono_factorize, is_quasi_pullback, quasi_pullback_witness, set_square_is_quasi_pullback,
    wide_pullback, QuasiPullbackWitness, WidePullback,
};
pub use sum::{
    lift_to_freesmc, match_subobject, subobjects_of_sum, sum_functor_mor, underlying_function,
    yoneda, IndexFlags, Subobject, TaggedSum,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresheafError {
    #[error("presheaves live over different base categories")]
    BaseMismatch,
    #[error("malformed presheaf: {0}")]
    Shape(String),
    #[error("action of {morphism} is not the identity")]
    IdentityAction { morphism: String },
    #[error("action is not functorial on the pair ({f}, {g})")]
    NotFunctorial { f: String, g: String },
    #[error("family is not natural with respect to {morphism}")]
    NotNatural { morphism: String },
    #[error("transformations are not composable")]
    NotComposable,
    #[error("domain or codomain is not the expected tagged sum")]
    NotTaggedSum,
    #[error("cospan has no legs")]
    EmptyCospan,
    #[error("cospan legs do not share a codomain")]
    CodomainMismatch,
    #[error("cone legs do not match the cospan")]
    ConeMismatch,
    #[error("diagram does not commute at object {object}")]
    NotCommuting { object: String },
    #[error("base category is not a groupoid")]
    NotGroupoid,
    #[error("object index {0} out of range")]
    ObjectOutOfRange(usize),
    #[error("mono does not match any subobject")]
    NoMatchingSubobject,
}

pub(crate) fn same_base(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct Presheaf {
    base: Arc<FinCat>,
    sizes: Vec<usize>,
    action: Vec<Vec<usize>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        self.sizes == other.sizes && self.action == other.action && same_base(&self.base, &other.base)
    }
}

impl Eq for Presheaf {}

impl Presheaf {
    /// Checks table shapes, identity actions and functoriality.
    pub fn new(base: Arc<FinCat>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self, PresheafError> {
        let p = Presheaf { base, sizes, action };
        p.check_shape()?;
        p.check_laws()?;
        Ok(p)
    }

    pub(crate) fn new_unchecked(base: Arc<FinCat>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Self {
        let p = Presheaf { base, sizes, action };
        debug_assert!(p.check_shape().is_ok() && p.check_laws().is_ok());
        p
    }

    /// Builds a presheaf from actions given for some morphisms, closing
    /// under composition. Identities are implicit. Fails if a morphism's
    /// action cannot be derived or two derivations disagree.
    pub fn from_partial_actions(
        base: Arc<FinCat>,
        sizes: Vec<usize>,
        given: &HashMap<usize, Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        let m = base.num_morphisms();
        if sizes.len() != base.num_objects() {
            return Err(PresheafError::Shape(format!(
                "expected {} object sizes, got {}",
                base.num_objects(),
                sizes.len()
            )));
        }
        let mut action: Vec<Option<Vec<usize>>> = vec![None; m];
        for c in 0..base.num_objects() {
            action[base.identity(c)] = Some((0..sizes[c]).collect());
        }
        for (&f, table) in given {
            if f >= m {
                return Err(PresheafError::Shape(format!("morphism index {f} out of range")));
            }
            if let Some(existing) = &action[f] {
                if existing != table {
                    return Err(PresheafError::IdentityAction {
                        morphism: base.morphism(f).name.clone(),
                    });
                }
            }
            action[f] = Some(table.clone());
        }
        for (f, table) in action.iter().enumerate() {
            if let Some(t) = table {
                check_table(&base, &sizes, f, t)?;
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for f in 0..m {
                for g in 0..m {
                    let Some(h) = base.compose(f, g) else { continue };
                    let (Some(tf), Some(tg)) = (&action[f], &action[g]) else {
                        continue;
                    };
                    // X(f;g) = X(f) ∘ X(g)
                    let th: Vec<usize> = tg.iter().map(|&x| tf[x]).collect();
                    match &action[h] {
                        Some(existing) if *existing != th => {
                            return Err(PresheafError::NotFunctorial {
                                f: base.morphism(f).name.clone(),
                                g: base.morphism(g).name.clone(),
                            })
                        }
                        Some(_) => {}
                        None => {
                            action[h] = Some(th);
                            changed = true;
                        }
                    }
                }
            }
        }
        let mut full = Vec::with_capacity(m);
        for (f, t) in action.into_iter().enumerate() {
            match t {
                Some(t) => full.push(t),
                None => {
                    return Err(PresheafError::Shape(format!(
                        "action of {} is not determined",
                        base.morphism(f).name
                    )))
                }
            }
        }
        Presheaf::new(base, sizes, full)
    }

    pub fn empty(base: Arc<FinCat>) -> Self {
        let sizes = vec![0; base.num_objects()];
        let action = vec![Vec::new(); base.num_morphisms()];
        Presheaf { base, sizes, action }
    }

    /// The terminal presheaf: one element everywhere.
    pub fn terminal(base: Arc<FinCat>) -> Self {
        let sizes = vec![1; base.num_objects()];
        let action = vec![vec![0]; base.num_morphisms()];
        Presheaf { base, sizes, action }
    }

    /// Presheaf over a one-object base from a set with a right action of the
    /// vertex monoid; `act(g, x)` is the action of morphism `g` on `x`.
    pub fn from_action(base: Arc<FinCat>, size: usize, act: impl Fn(usize, usize) -> usize) -> Result<Self, PresheafError> {
        if base.num_objects() != 1 {
            return Err(PresheafError::Shape("base must have exactly one object".into()));
        }
        let action = (0..base.num_morphisms())
            .map(|g| (0..size).map(|x| act(g, x)).collect())
            .collect();
        Presheaf::new(base, vec![size], action)
    }

    fn check_shape(&self) -> Result<(), PresheafError> {
        let base = &self.base;
        if self.sizes.len() != base.num_objects() {
            return Err(PresheafError::Shape(format!(
                "expected {} object sizes, got {}",
                base.num_objects(),
                self.sizes.len()
            )));
        }
        if self.action.len() != base.num_morphisms() {
            return Err(PresheafError::Shape(format!(
                "expected {} action tables, got {}",
                base.num_morphisms(),
                self.action.len()
            )));
        }
        for (f, t) in self.action.iter().enumerate() {
            check_table(base, &self.sizes, f, t)?;
        }
        Ok(())
    }

    fn check_laws(&self) -> Result<(), PresheafError> {
        let base = &self.base;
        for c in 0..base.num_objects() {
            let id = base.identity(c);
            if self.action[id].iter().enumerate().any(|(i, &x)| i != x) {
                return Err(PresheafError::IdentityAction {
                    morphism: base.morphism(id).name.clone(),
                });
            }
        }
        let m = base.num_morphisms();
        for f in 0..m {
            for g in 0..m {
                let Some(h) = base.compose(f, g) else { continue };
                let (tf, tg, th) = (&self.action[f], &self.action[g], &self.action[h]);
                if tg.iter().zip(th).any(|(&x, &y)| tf[x] != y) {
                    return Err(PresheafError::NotFunctorial {
                        f: base.morphism(f).name.clone(),
                        g: base.morphism(g).name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn size(&self, c: usize) -> usize {
        self.sizes[c]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    /// `X(g)(x)` for `g: c -> d` and `x ∈ X(d)`.
    pub fn restrict(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn action_table(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    pub fn as_algebra(&self) -> UnaryAlgebra {
        let base = &self.base;
        let ops = (0..base.num_morphisms())
            .filter(|&g| !base.is_identity(g))
            .map(|g| Op {
                src: base.cod(g),
                dst: base.dom(g),
                table: self.action[g].clone(),
            })
            .collect();
        UnaryAlgebra {
            sizes: self.sizes.clone(),
            ops,
        }
    }

    /// Coproduct with its injections.
    pub fn coproduct(parts: &[Arc<Presheaf>], base: Arc<FinCat>) -> Result<(Arc<Presheaf>, Vec<NatTrans>), PresheafError> {
        if parts.iter().any(|p| !same_base(&p.base, &base)) {
            return Err(PresheafError::BaseMismatch);
        }
        let n = base.num_objects();
        let mut offsets = vec![vec![0; n]; parts.len()];
        let mut sizes = vec![0; n];
        for (k, p) in parts.iter().enumerate() {
            offsets[k].copy_from_slice(&sizes);
            for (s, ps) in sizes.iter_mut().zip(&p.sizes) {
                *s += ps;
            }
        }
        let action = (0..base.num_morphisms())
            .map(|g| {
                let d = base.cod(g);
                let c = base.dom(g);
                let mut t = Vec::with_capacity(sizes[d]);
                for (k, p) in parts.iter().enumerate() {
                    t.extend(p.action[g].iter().map(|&x| x + offsets[k][c]));
                }
                t
            })
            .collect();
        let sum = Arc::new(Presheaf::new_unchecked(base, sizes, action));
        let injections = parts
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let comps = (0..n).map(|c| (0..p.sizes[c]).map(|x| x + offsets[k][c]).collect()).collect();
                NatTrans::new_unchecked(p.clone(), sum.clone(), comps)
            })
            .collect();
        Ok((sum, injections))
    }

    /// Some isomorphism `self -> other`, if one exists.
    pub fn find_iso(self: &Arc<Self>, other: &Arc<Presheaf>) -> Option<NatTrans> {
        if !same_base(&self.base, &other.base) {
            return None;
        }
        unary::find_iso(&self.as_algebra(), &other.as_algebra())
            .map(|comps| NatTrans::new_unchecked(self.clone(), other.clone(), comps))
    }

    pub fn is_isomorphic(self: &Arc<Self>, other: &Arc<Presheaf>) -> bool {
        self.find_iso(other).is_some()
    }
}

fn check_table(base: &FinCat, sizes: &[usize], f: usize, t: &[usize]) -> Result<(), PresheafError> {
    let (c, d) = (base.dom(f), base.cod(f));
    if t.len() != sizes[d] || t.iter().any(|&x| x >= sizes[c]) {
        return Err(PresheafError::Shape(format!(
            "action table of {} has the wrong shape",
            base.morphism(f).name
        )));
    }
    Ok(())
}

impl fmt::Display for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.base.num_objects())
            .map(|c| format!("{}:{}", self.base.object_name(c), self.sizes[c]))
            .collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// Pointwise classification of a natural transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismClass {
    pub mono: bool,
    pub epi: bool,
    pub iso: bool,
    /// Only present when both ends were given as tagged sums.
    pub on_indices: Option<IndexFlags>,
}

#[derive(Clone, Debug)]
pub struct NatTrans {
    dom: Arc<Presheaf>,
    cod: Arc<Presheaf>,
    components: Vec<Vec<usize>>,
}

impl PartialEq for NatTrans {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
            && (Arc::ptr_eq(&self.dom, &other.dom) || self.dom == other.dom)
            && (Arc::ptr_eq(&self.cod, &other.cod) || self.cod == other.cod)
    }
}

impl Eq for NatTrans {}

impl NatTrans {
    pub fn new(dom: Arc<Presheaf>, cod: Arc<Presheaf>, components: Vec<Vec<usize>>) -> Result<Self, PresheafError> {
        if !same_base(&dom.base, &cod.base) {
            return Err(PresheafError::BaseMismatch);
        }
        let base = dom.base.clone();
        if components.len() != base.num_objects() {
            return Err(PresheafError::Shape("wrong number of components".into()));
        }
        for c in 0..base.num_objects() {
            if components[c].len() != dom.sizes[c] || components[c].iter().any(|&y| y >= cod.sizes[c]) {
                return Err(PresheafError::Shape(format!(
                    "component at {} has the wrong shape",
                    base.object_name(c)
                )));
            }
        }
        let t = NatTrans { dom, cod, components };
        if let Some(g) = t.naturality_failure() {
            return Err(PresheafError::NotNatural {
                morphism: base.morphism(g).name.clone(),
            });
        }
        Ok(t)
    }

    pub(crate) fn new_unchecked(dom: Arc<Presheaf>, cod: Arc<Presheaf>, components: Vec<Vec<usize>>) -> Self {
        let t = NatTrans { dom, cod, components };
        debug_assert!(t.naturality_failure().is_none());
        t
    }

    fn naturality_failure(&self) -> Option<usize> {
        let base = &self.dom.base;
        (0..base.num_morphisms()).find(|&g| {
            let (c, d) = (base.dom(g), base.cod(g));
            (0..self.dom.sizes[d])
                .any(|x| self.components[c][self.dom.restrict(g, x)] != self.cod.restrict(g, self.components[d][x]))
        })
    }

    pub fn identity(x: Arc<Presheaf>) -> Self {
        let components = x.sizes.iter().map(|&n| (0..n).collect()).collect();
        NatTrans {
            dom: x.clone(),
            cod: x,
            components,
        }
    }

    /// The unique map out of an empty presheaf.
    pub fn from_empty(dom: Arc<Presheaf>, cod: Arc<Presheaf>) -> Result<Self, PresheafError> {
        if !dom.is_empty() {
            return Err(PresheafError::Shape("domain is not empty".into()));
        }
        let n = dom.base.num_objects();
        NatTrans::new(dom, cod, vec![Vec::new(); n])
    }

    pub fn dom(&self) -> &Arc<Presheaf> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Presheaf> {
        &self.cod
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.dom.base
    }

    pub fn component(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn apply(&self, c: usize, x: usize) -> usize {
        self.components[c][x]
    }

    /// Diagrammatic composite `self ; other`.
    pub fn then(&self, other: &NatTrans) -> Result<NatTrans, PresheafError> {
        if !(Arc::ptr_eq(&self.cod, &other.dom) || *self.cod == *other.dom) {
            return Err(PresheafError::NotComposable);
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &NatTrans) -> NatTrans {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
            .collect();
        NatTrans {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            components,
        }
    }

    /// Same components, re-typed against equal presheaves.
    pub fn retype(&self, dom: Arc<Presheaf>, cod: Arc<Presheaf>) -> Result<NatTrans, PresheafError> {
        NatTrans::new(dom, cod, self.components.clone())
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|comp| {
            let mut seen = std::collections::HashSet::with_capacity(comp.len());
            comp.iter().all(|&y| seen.insert(y))
        })
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().enumerate().all(|(c, comp)| {
            let mut hit = vec![false; self.cod.sizes[c]];
            for &y in comp {
                hit[y] = true;
            }
            hit.into_iter().all(|h| h)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.dom.sizes == self.cod.sizes && self.is_mono()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<NatTrans> {
        if !self.is_iso() {
            return None;
        }
        let components = self
            .components
            .iter()
            .map(|comp| {
                let mut inv = vec![0; comp.len()];
                for (x, &y) in comp.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();
        Some(NatTrans {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            components,
        })
    }

    /// Mono/epi/iso flags; index flags need both ends as tagged sums.
    pub fn classify(&self, sums: Option<(&TaggedSum, &TaggedSum)>) -> Result<MorphismClass, PresheafError> {
        let on_indices = match sums {
            Some((a, b)) => Some(IndexFlags::of(&underlying_function(self, a, b)?, b.word().len())),
            None => None,
        };
        let (mono, epi) = (self.is_mono(), self.is_epi());
        Ok(MorphismClass {
            mono,
            epi,
            iso: mono && epi,
            on_indices,
        })
    }
}

/// All natural transformations `x -> y`, in lexicographic order of their
/// component tables.
pub fn hom_enumerate(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<Vec<NatTrans>, PresheafError> {
    if !same_base(&x.base, &y.base) {
        return Err(PresheafError::BaseMismatch);
    }
    let (dx, dy) = (x.as_algebra(), y.as_algebra());
    let mut out = Vec::new();
    unary::for_each_hom(&dx, &dy, SearchOptions::default(), None, |m| {
        out.push(NatTrans::new_unchecked(x.clone(), y.clone(), m.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Natural transformations `x -> y` whose value at every element is allowed
/// by `allowed(object, x, y)`.
pub fn hom_enumerate_restricted(
    x: &Arc<Presheaf>,
    y: &Arc<Presheaf>,
    allowed: &dyn Fn(usize, usize, usize) -> bool,
) -> Result<Vec<NatTrans>, PresheafError> {
    if !same_base(&x.base, &y.base) {
        return Err(PresheafError::BaseMismatch);
    }
    let (dx, dy) = (x.as_algebra(), y.as_algebra());
    let mut out = Vec::new();
    unary::for_each_hom(&dx, &dy, SearchOptions::default(), Some(allowed), |m| {
        out.push(NatTrans::new_unchecked(x.clone(), y.clone(), m.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

#[cfg(test)]
mod tests;
