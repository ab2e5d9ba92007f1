//! Truncated species `P: !A -> PSh B` and the analytic functors they
//! generate.
//!
//! A species stores a coefficient presheaf for every word of length at most
//! its degree and an action table for every morphism of `!A` between such
//! words. Coefficients above the degree are empty.

mod chain;
mod lan;
mod preserve;
mod taylor;

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::FinCat;
use crate::freesmc::{enumerate_homs, enumerate_words, SmcMor, Word};
use crate::presheaf::{same_base, NatTrans, Presheaf, PresheafError};
use crate::unary::{self, DisjointSets, Op, SearchOptions, UnaryAlgebra};

pub use chain::{initial_algebra_chain, AlgebraChain};
pub use lan::{lan_eval, lan_map, lan_nat, map_class, CoendElement, LanValue};
pub use preserve::{preserves_quasi_pullbacks, PreservationReport, QpbProbe};
pub use taylor::{taylor_eval, TaylorValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpeciesError {
    #[error("malformed species: {0}")]
    Shape(String),
    #[error("species laws violated:\n{0}")]
    Invalid(SpeciesReport),
    #[error("base category mismatch")]
    BaseMismatch,
    #[error("word {0} is not in the species' range")]
    UnknownWord(String),
    #[error("{0}")]
    Presheaf(#[from] PresheafError),
    #[error("transformation is not natural: {0}")]
    NotNatural(String),
    #[error("species is not an endofunctor species")]
    NotEndo,
    #[error("base category is not a groupoid")]
    NotGroupoid,
    #[error("independent computations disagree: {0}")]
    Mismatch(String),
    #[error("probe {0} is not a quasi-pullback")]
    InvalidProbe(usize),
}

/// Every violated species law, in enumeration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpeciesReport {
    pub violations: Vec<String>,
}

impl SpeciesReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SpeciesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Species {
    name: String,
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    degree: usize,
    words: Vec<Word>,
    word_index: HashMap<Word, usize>,
    coeffs: Vec<Arc<Presheaf>>,
    mors: Vec<SmcMor>,
    mor_src: Vec<usize>,
    mor_dst: Vec<usize>,
    mor_index: HashMap<SmcMor, usize>,
    mors_from: Vec<Vec<usize>>,
    // actions[α][b][p] = p·α
    actions: Vec<Vec<Vec<usize>>>,
}

/// Words and morphisms of `!A` up to a degree, shared by every species with
/// that domain and degree.
struct Skeleton {
    words: Vec<Word>,
    word_index: HashMap<Word, usize>,
    mors: Vec<SmcMor>,
    mor_src: Vec<usize>,
    mor_dst: Vec<usize>,
    mor_index: HashMap<SmcMor, usize>,
    mors_from: Vec<Vec<usize>>,
}

fn skeleton(dom: &FinCat, degree: usize) -> Skeleton {
    let words = enumerate_words(dom, degree);
    let word_index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut mors = Vec::new();
    let mut mor_src = Vec::new();
    let mut mor_dst = Vec::new();
    let mut mors_from = vec![Vec::new(); words.len()];
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if a.len() != b.len() {
                continue;
            }
            for m in enumerate_homs(dom, a, b) {
                mors_from[i].push(mors.len());
                mors.push(m);
                mor_src.push(i);
                mor_dst.push(j);
            }
        }
    }
    let mor_index = mors.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    Skeleton {
        words,
        word_index,
        mors,
        mor_src,
        mor_dst,
        mor_index,
        mors_from,
    }
}

impl Species {
    /// Tabulates coefficients and actions from closures. Only shapes are
    /// checked; use [`Species::validate`] for the laws.
    pub fn tabulate(
        name: impl Into<String>,
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        degree: usize,
        mut coeff: impl FnMut(&Word) -> Presheaf,
        mut action: impl FnMut(&SmcMor, usize) -> Vec<usize>,
    ) -> Result<Species, SpeciesError> {
        let sk = skeleton(&dom, degree);
        let mut coeffs = Vec::with_capacity(sk.words.len());
        for w in &sk.words {
            let p = coeff(w);
            if !same_base(p.base(), &cod) {
                return Err(SpeciesError::BaseMismatch);
            }
            coeffs.push(Arc::new(p));
        }
        let actions = sk
            .mors
            .iter()
            .map(|m| (0..cod.num_objects()).map(|b| action(m, b)).collect())
            .collect();
        let s = Species::assemble(name.into(), dom, cod, degree, sk, coeffs, actions);
        s.check_shape()?;
        Ok(s)
    }

    fn assemble(
        name: String,
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        degree: usize,
        sk: Skeleton,
        coeffs: Vec<Arc<Presheaf>>,
        actions: Vec<Vec<Vec<usize>>>,
    ) -> Species {
        Species {
            name,
            dom,
            cod,
            degree,
            words: sk.words,
            word_index: sk.word_index,
            coeffs,
            mors: sk.mors,
            mor_src: sk.mor_src,
            mor_dst: sk.mor_dst,
            mor_index: sk.mor_index,
            mors_from: sk.mors_from,
            actions,
        }
    }

    /// Tabulates and validates.
    pub fn new(
        name: impl Into<String>,
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        degree: usize,
        coeff: impl FnMut(&Word) -> Presheaf,
        action: impl FnMut(&SmcMor, usize) -> Vec<usize>,
    ) -> Result<Species, SpeciesError> {
        let s = Species::tabulate(name, dom, cod, degree, coeff, action)?;
        let report = s.validate();
        if report.is_ok() {
            Ok(s)
        } else {
            Err(SpeciesError::Invalid(report))
        }
    }

    /// Builds a species from coefficients on some words (others empty) and
    /// actions on some morphisms, closing under composition. Identity
    /// actions are implicit.
    pub fn from_partial(
        name: impl Into<String>,
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        degree: usize,
        coeffs: &HashMap<Word, Presheaf>,
        given: &[(SmcMor, Vec<Vec<usize>>)],
    ) -> Result<Species, SpeciesError> {
        let sk = skeleton(&dom, degree);
        let mut table = vec![None; sk.words.len()];
        for (w, p) in coeffs {
            let i = *sk
                .word_index
                .get(w)
                .ok_or_else(|| SpeciesError::UnknownWord(w.display(&dom).to_string()))?;
            if !same_base(p.base(), &cod) {
                return Err(SpeciesError::BaseMismatch);
            }
            table[i] = Some(Arc::new(p.clone()));
        }
        let coeffs: Vec<Arc<Presheaf>> = table
            .into_iter()
            .map(|p| p.unwrap_or_else(|| Arc::new(Presheaf::empty(cod.clone()))))
            .collect();
        let nb = cod.num_objects();
        let mut actions: Vec<Option<Vec<Vec<usize>>>> = vec![None; sk.mors.len()];
        for (m, mor) in sk.mors.iter().enumerate() {
            let src = &coeffs[sk.mor_src[m]];
            if mor.is_identity(&dom) {
                actions[m] = Some((0..nb).map(|b| (0..src.size(b)).collect()).collect());
            } else if src.is_empty() {
                actions[m] = Some(vec![Vec::new(); nb]);
            }
        }
        for (mor, tables) in given {
            let m = *sk
                .mor_index
                .get(mor)
                .ok_or_else(|| SpeciesError::Shape(format!("unknown morphism {}", mor.display(&dom))))?;
            if actions[m].as_ref().is_some_and(|t| t != tables) {
                return Err(SpeciesError::Shape(format!(
                    "conflicting action for {}",
                    mor.display(&dom)
                )));
            }
            actions[m] = Some(tables.clone());
        }
        let mut changed = true;
        while changed {
            changed = false;
            for a in 0..sk.mors.len() {
                if actions[a].is_none() {
                    continue;
                }
                for &b in &sk.mors_from[sk.mor_dst[a]] {
                    let Some(tb) = &actions[b] else { continue };
                    let ta = actions[a].as_ref().unwrap();
                    let composite: Vec<Vec<usize>> = ta
                        .iter()
                        .zip(tb)
                        .map(|(x, y)| x.iter().map(|&p| y[p]).collect())
                        .collect();
                    let c = sk.mor_index[&sk.mors[a].then_unchecked(&dom, &sk.mors[b])];
                    match &actions[c] {
                        Some(t) if *t != composite => {
                            return Err(SpeciesError::Invalid(SpeciesReport {
                                violations: vec![format!(
                                    "actions of {} and {} do not compose to that of {}",
                                    sk.mors[a].display(&dom),
                                    sk.mors[b].display(&dom),
                                    sk.mors[c].display(&dom)
                                )],
                            }))
                        }
                        Some(_) => {}
                        None => {
                            actions[c] = Some(composite);
                            changed = true;
                        }
                    }
                }
            }
        }
        let mut full = Vec::with_capacity(actions.len());
        for (m, t) in actions.into_iter().enumerate() {
            match t {
                Some(t) => full.push(t),
                None => {
                    return Err(SpeciesError::Shape(format!(
                        "action of {} is not determined",
                        sk.mors[m].display(&dom)
                    )))
                }
            }
        }
        let s = Species::assemble(name.into(), dom, cod, degree, sk, coeffs, full);
        s.check_shape()?;
        let report = s.validate();
        if report.is_ok() {
            Ok(s)
        } else {
            Err(SpeciesError::Invalid(report))
        }
    }

    fn check_shape(&self) -> Result<(), SpeciesError> {
        let nb = self.cod.num_objects();
        for (m, tables) in self.actions.iter().enumerate() {
            let (src, dst) = (&self.coeffs[self.mor_src[m]], &self.coeffs[self.mor_dst[m]]);
            if tables.len() != nb {
                return Err(SpeciesError::Shape(format!(
                    "action of {} has {} tables, expected {nb}",
                    self.mors[m].display(&self.dom),
                    tables.len()
                )));
            }
            for (b, t) in tables.iter().enumerate() {
                if t.len() != src.size(b) || t.iter().any(|&q| q >= dst.size(b)) {
                    return Err(SpeciesError::Shape(format!(
                        "action of {} at {} has the wrong shape",
                        self.mors[m].display(&self.dom),
                        self.cod.object_name(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks identities, composition of actions and compatibility with the
    /// codomain actions over the full enumeration.
    pub fn validate(&self) -> SpeciesReport {
        let mut report = SpeciesReport::default();
        let (dom, cod) = (&*self.dom, &*self.cod);
        for (m, mor) in self.mors.iter().enumerate() {
            if mor.is_identity(dom) && self.actions[m].iter().any(|t| t.iter().enumerate().any(|(i, &q)| i != q)) {
                report
                    .violations
                    .push(format!("identity {} does not act trivially", mor.display(dom)));
            }
        }
        for a in 0..self.mors.len() {
            for &b in &self.mors_from[self.mor_dst[a]] {
                let c = self.mor_index[&self.mors[a].then_unchecked(dom, &self.mors[b])];
                let ok = (0..cod.num_objects()).all(|x| {
                    self.actions[a][x]
                        .iter()
                        .zip(&self.actions[c][x])
                        .all(|(&p, &q)| self.actions[b][x][p] == q)
                });
                if !ok {
                    report.violations.push(format!(
                        "functoriality fails on the pair ({}, {})",
                        self.mors[a].display(dom),
                        self.mors[b].display(dom)
                    ));
                }
            }
        }
        for (m, mor) in self.mors.iter().enumerate() {
            let (src, dst) = (&self.coeffs[self.mor_src[m]], &self.coeffs[self.mor_dst[m]]);
            for g in 0..cod.num_morphisms() {
                let (c, d) = (cod.dom(g), cod.cod(g));
                // (β·p)·α = β·(p·α)
                let ok = (0..src.size(d))
                    .all(|p| self.actions[m][c][src.restrict(g, p)] == dst.restrict(g, self.actions[m][d][p]));
                if !ok {
                    report.violations.push(format!(
                        "action of {} does not commute with {}",
                        mor.display(dom),
                        cod.morphism(g).name
                    ));
                }
            }
        }
        report
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word_index(&self, w: &Word) -> Option<usize> {
        self.word_index.get(w).copied()
    }

    pub fn coeff(&self, w: usize) -> &Arc<Presheaf> {
        &self.coeffs[w]
    }

    pub fn coeff_of(&self, w: &Word) -> Option<&Arc<Presheaf>> {
        self.word_index(w).map(|i| &self.coeffs[i])
    }

    pub fn morphisms(&self) -> &[SmcMor] {
        &self.mors
    }

    pub fn morphism_ends(&self, m: usize) -> (usize, usize) {
        (self.mor_src[m], self.mor_dst[m])
    }

    pub fn morphisms_from(&self, w: usize) -> &[usize] {
        &self.mors_from[w]
    }

    pub fn morphism_index(&self, m: &SmcMor) -> Option<usize> {
        self.mor_index.get(m).copied()
    }

    /// `p ·_P α` at object `b`.
    pub fn act(&self, m: usize, b: usize, p: usize) -> usize {
        self.actions[m][b][p]
    }

    pub fn action_tables(&self, m: usize) -> &[Vec<usize>] {
        &self.actions[m]
    }

    /// Largest word length with a nonempty coefficient.
    pub fn effective_degree(&self) -> usize {
        self.words
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_empty())
            .map(|(w, _)| w.len())
            .max()
            .unwrap_or(0)
    }

    pub fn total_size(&self) -> usize {
        self.coeffs.iter().map(|c| c.total_size()).sum()
    }

    /// The same coefficients over a larger degree, empty above the old one.
    pub fn with_degree(&self, degree: usize) -> Species {
        let old = self;
        Species::tabulate(
            old.name.clone(),
            old.dom.clone(),
            old.cod.clone(),
            degree,
            |w| match old.coeff_of(w) {
                Some(c) => (**c).clone(),
                None => Presheaf::empty(old.cod.clone()),
            },
            |m, b| match old.morphism_index(m) {
                Some(i) => old.actions[i][b].clone(),
                None => Vec::new(),
            },
        )
        .expect("re-tabulation keeps shapes")
    }

    // constructors

    /// All coefficients empty.
    pub fn empty(dom: Arc<FinCat>, cod: Arc<FinCat>, degree: usize) -> Species {
        let c = cod.clone();
        Species::tabulate("0", dom, cod, degree, |_| Presheaf::empty(c.clone()), |_, _| Vec::new())
            .expect("empty species")
    }

    /// Singleton coefficient on every word.
    pub fn terminal(dom: Arc<FinCat>, cod: Arc<FinCat>, degree: usize) -> Species {
        let c = cod.clone();
        Species::tabulate("1", dom, cod, degree, |_| Presheaf::terminal(c.clone()), |_, _| vec![0])
            .expect("terminal species")
    }

    /// `value` on the empty word, empty elsewhere.
    pub fn constant(dom: Arc<FinCat>, value: Presheaf, degree: usize) -> Species {
        let cod = value.base().clone();
        let c = cod.clone();
        Species::tabulate(
            "const",
            dom,
            cod,
            degree,
            |w| if w.is_empty() { value.clone() } else { Presheaf::empty(c.clone()) },
            |m, b| if m.dom.is_empty() { (0..value.size(b)).collect() } else { Vec::new() },
        )
        .expect("constant species")
    }

    /// `!A[word, -]` with a one-object codomain.
    pub fn representable(dom: Arc<FinCat>, word: &Word, degree: usize) -> Result<Species, SpeciesError> {
        word.check(&dom).map_err(|e| SpeciesError::Shape(e.to_string()))?;
        let one = Arc::new(FinCat::terminal());
        let d = dom.clone();
        let homs: HashMap<Word, Vec<SmcMor>> = enumerate_words(&dom, degree)
            .into_iter()
            .map(|w| {
                let hs = enumerate_homs(&dom, word, &w);
                (w, hs)
            })
            .collect();
        let index: HashMap<&SmcMor, usize> = homs
            .values()
            .flat_map(|hs| hs.iter().enumerate().map(|(i, h)| (h, i)))
            .collect();
        Species::tabulate(
            format!("!{}[{}, -]", dom.name(), word.display(&dom)),
            dom.clone(),
            one.clone(),
            degree,
            |w| {
                let n = homs[w].len();
                Presheaf::from_action(one.clone(), n, |_, x| x).expect("set")
            },
            |m, _| homs[&m.dom].iter().map(|h| index[&h.then_unchecked(&d, m)]).collect(),
        )
    }

    /// Coefficient `y(h)` on each one-letter word `[h]`, empty elsewhere.
    /// Its analytic functor is the identity.
    pub fn identity(base: Arc<FinCat>, degree: usize) -> Species {
        let b = base.clone();
        Species::tabulate(
            "I",
            base.clone(),
            base.clone(),
            degree,
            |w| {
                if w.len() == 1 {
                    let y = crate::presheaf::yoneda(&b, w.letters()[0]).expect("letter");
                    (**y.presheaf()).clone()
                } else {
                    Presheaf::empty(b.clone())
                }
            },
            |m, x| {
                if m.dom.len() != 1 {
                    return Vec::new();
                }
                let (h, h2, f) = (m.dom.letters()[0], m.cod.letters()[0], m.family[0]);
                b.hom(x, h)
                    .iter()
                    .map(|&g| b.hom(x, h2).binary_search(&b.comp(g, f)).expect("typed"))
                    .collect()
            },
        )
        .expect("identity species")
    }

    /// Coefficientwise coproduct.
    pub fn sum(parts: &[&Species]) -> Result<Species, SpeciesError> {
        let first = parts.first().ok_or_else(|| SpeciesError::Shape("empty sum".into()))?;
        if parts
            .iter()
            .any(|p| !same_base(&p.dom, &first.dom) || !same_base(&p.cod, &first.cod) || p.degree != first.degree)
        {
            return Err(SpeciesError::BaseMismatch);
        }
        let nb = first.cod.num_objects();
        let mut coeffs = Vec::with_capacity(first.words.len());
        for w in 0..first.words.len() {
            let ps: Vec<Arc<Presheaf>> = parts.iter().map(|p| p.coeffs[w].clone()).collect();
            coeffs.push(Presheaf::coproduct(&ps, first.cod.clone())?.0);
        }
        let actions = (0..first.mors.len())
            .map(|m| {
                let dst = first.mor_dst[m];
                (0..nb)
                    .map(|b| {
                        let mut t = Vec::new();
                        let mut off = 0;
                        for p in parts {
                            t.extend(p.actions[m][b].iter().map(|&q| q + off));
                            off += p.coeffs[dst].size(b);
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(" + ");
        let sk = skeleton(&first.dom, first.degree);
        Ok(Species::assemble(
            name,
            first.dom.clone(),
            first.cod.clone(),
            first.degree,
            sk,
            coeffs,
            actions,
        ))
    }

    /// Coproduct of transitive pieces: for each atom, coefficients
    /// `(hom(A_j, A) × hom(b, h_j)) / K_j` where `(κ, κ')` identifies
    /// `(α, β)` with `(κ;α, β;κ')`.
    pub fn orbit_sum(
        name: impl Into<String>,
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        degree: usize,
        atoms: &[OrbitAtom],
    ) -> Result<Species, SpeciesError> {
        let pieces: Vec<Species> = atoms
            .iter()
            .map(|a| orbit_piece(&dom, &cod, degree, a))
            .collect::<Result<_, _>>()?;
        let refs: Vec<&Species> = pieces.iter().collect();
        let s = if refs.is_empty() {
            Species::empty(dom, cod, degree)
        } else {
            Species::sum(&refs)?
        };
        Ok(s.with_name(name))
    }

    // algebra view

    /// Sorts are `(word, b)` pairs; operations are the non-identity actions
    /// of `!A` and of the codomain.
    pub fn as_algebra(&self) -> UnaryAlgebra {
        let nb = self.cod.num_objects();
        let sort = |w: usize, b: usize| w * nb + b;
        let mut sizes = Vec::with_capacity(self.words.len() * nb);
        for c in &self.coeffs {
            sizes.extend_from_slice(c.sizes());
        }
        let mut ops = Vec::new();
        for (m, mor) in self.mors.iter().enumerate() {
            if mor.is_identity(&self.dom) {
                continue;
            }
            for b in 0..nb {
                ops.push(Op {
                    src: sort(self.mor_src[m], b),
                    dst: sort(self.mor_dst[m], b),
                    table: self.actions[m][b].clone(),
                });
            }
        }
        for (w, c) in self.coeffs.iter().enumerate() {
            for g in 0..self.cod.num_morphisms() {
                if self.cod.is_identity(g) {
                    continue;
                }
                ops.push(Op {
                    src: sort(w, self.cod.cod(g)),
                    dst: sort(w, self.cod.dom(g)),
                    table: c.action_table(g).to_vec(),
                });
            }
        }
        UnaryAlgebra { sizes, ops }
    }

    fn comparable(&self, other: &Species) -> bool {
        same_base(&self.dom, &other.dom) && same_base(&self.cod, &other.cod) && self.degree == other.degree
    }

    /// Some natural isomorphism `self ⇒ other`.
    pub fn find_iso(self: &Arc<Self>, other: &Arc<Species>) -> Option<SpeciesNat> {
        if !self.comparable(other) {
            return None;
        }
        let nb = self.cod.num_objects();
        unary::find_iso(&self.as_algebra(), &other.as_algebra()).map(|m| SpeciesNat {
            dom: self.clone(),
            cod: other.clone(),
            components: m.chunks(nb).map(|c| c.to_vec()).collect(),
        })
    }

    pub fn is_isomorphic(self: &Arc<Self>, other: &Arc<Species>) -> bool {
        self.find_iso(other).is_some()
    }

    /// Up to `limit` natural transformations `self ⇒ other`, in
    /// lexicographic order of their tables.
    pub fn homs(self: &Arc<Self>, other: &Arc<Species>, limit: usize) -> Vec<SpeciesNat> {
        if !self.comparable(other) || limit == 0 {
            return Vec::new();
        }
        let nb = self.cod.num_objects();
        let mut out = Vec::new();
        unary::for_each_hom(&self.as_algebra(), &other.as_algebra(), SearchOptions::default(), None, |m| {
            out.push(SpeciesNat {
                dom: self.clone(),
                cod: other.clone(),
                components: m.chunks(nb).map(|c| c.to_vec()).collect(),
            });
            if out.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        out
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: !{} -> PSh {} (degree {})", self.name, self.dom.name(), self.cod.name(), self.degree)?;
        for (w, c) in self.words.iter().zip(&self.coeffs) {
            if !c.is_empty() {
                write!(f, "\n  {} -> {}", w.display(&self.dom), c)?;
            }
        }
        Ok(())
    }
}

/// One transitive piece of an orbit species.
#[derive(Clone, Debug)]
pub struct OrbitAtom {
    pub word: Word,
    pub object: usize,
    /// Pairs `(κ, κ')` of an automorphism of `word` in `!A` and an
    /// automorphism of `object`.
    pub generators: Vec<(SmcMor, usize)>,
}

fn orbit_piece(dom: &Arc<FinCat>, cod: &Arc<FinCat>, degree: usize, atom: &OrbitAtom) -> Result<Species, SpeciesError> {
    let a0 = &atom.word;
    let h0 = atom.object;
    a0.check(dom).map_err(|e| SpeciesError::Shape(e.to_string()))?;
    if h0 >= cod.num_objects() || a0.len() > degree {
        return Err(SpeciesError::Shape("atom out of range".into()));
    }
    for (k, k2) in &atom.generators {
        if k.dom != *a0 || k.cod != *a0 || cod.dom(*k2) != h0 || cod.cod(*k2) != h0 {
            return Err(SpeciesError::Shape("atom generator has the wrong type".into()));
        }
    }
    let nb = cod.num_objects();
    // per word w and object b: class labels of (α, β) pairs
    let words = enumerate_words(dom, degree);
    struct Block {
        homs: Vec<SmcMor>,
        hom_index: HashMap<SmcMor, usize>,
        // class[b][α * |hom(b,h0)| + β]
        class: Vec<Vec<usize>>,
        count: Vec<usize>,
    }
    let mut blocks: HashMap<Word, Block> = HashMap::new();
    for w in &words {
        let homs = enumerate_homs(dom, a0, w);
        let hom_index: HashMap<SmcMor, usize> = homs.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
        let mut class = Vec::with_capacity(nb);
        let mut count = Vec::with_capacity(nb);
        for b in 0..nb {
            let hb = cod.hom(b, h0);
            let nbeta = hb.len();
            let mut dsu = DisjointSets::new(homs.len() * nbeta);
            for (ai, alpha) in homs.iter().enumerate() {
                for (bi, &beta) in hb.iter().enumerate() {
                    for (k, k2) in &atom.generators {
                        let a2 = hom_index[&k.then_unchecked(dom, alpha)];
                        let b2 = hb.binary_search(&cod.comp(beta, *k2)).expect("typed");
                        dsu.union(ai * nbeta + bi, a2 * nbeta + b2);
                    }
                }
            }
            let (labels, n) = dsu.classes();
            class.push(labels);
            count.push(n);
        }
        blocks.insert(
            w.clone(),
            Block {
                homs,
                hom_index,
                class,
                count,
            },
        );
    }
    // representative pair of each class
    let reps: HashMap<Word, Vec<Vec<(usize, usize)>>> = blocks
        .iter()
        .map(|(w, blk)| {
            let r = (0..nb)
                .map(|b| {
                    let nbeta = cod.hom(b, h0).len();
                    let mut rep = vec![(usize::MAX, 0); blk.count[b]];
                    for (idx, &c) in blk.class[b].iter().enumerate() {
                        if rep[c].0 == usize::MAX {
                            rep[c] = (idx / nbeta, idx % nbeta);
                        }
                    }
                    rep
                })
                .collect();
            (w.clone(), r)
        })
        .collect();
    let cod2 = cod.clone();
    let coeff = |w: &Word| {
        let blk = &blocks[w];
        let action = (0..cod2.num_morphisms())
            .map(|g| {
                let (c, d) = (cod2.dom(g), cod2.cod(g));
                let nc = cod2.hom(c, h0).len();
                reps[w][d]
                    .iter()
                    .map(|&(a, bi)| {
                        let beta = cod2.hom(d, h0)[bi];
                        let b2 = cod2.hom(c, h0).binary_search(&cod2.comp(g, beta)).expect("typed");
                        blk.class[c][a * nc + b2]
                    })
                    .collect()
            })
            .collect();
        Presheaf::new(cod2.clone(), blk.count.clone(), action).expect("orbit coefficients are functorial")
    };
    let d2 = dom.clone();
    let action = |m: &SmcMor, b: usize| {
        let (src, dst) = (&blocks[&m.dom], &blocks[&m.cod]);
        let nbeta = cod.hom(b, h0).len();
        reps[&m.dom][b]
            .iter()
            .map(|&(a, bi)| {
                let a2 = dst.hom_index[&src.homs[a].then_unchecked(&d2, m)];
                dst.class[b][a2 * nbeta + bi]
            })
            .collect()
    };
    Species::tabulate("atom", dom.clone(), cod.clone(), degree, coeff, action)
}

/// A natural transformation of species, `components[word][b][p]`.
#[derive(Clone, Debug)]
pub struct SpeciesNat {
    dom: Arc<Species>,
    cod: Arc<Species>,
    components: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for SpeciesNat {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for SpeciesNat {}

impl SpeciesNat {
    pub fn new(dom: Arc<Species>, cod: Arc<Species>, components: Vec<Vec<Vec<usize>>>) -> Result<Self, SpeciesError> {
        if !dom.comparable(&cod) {
            return Err(SpeciesError::BaseMismatch);
        }
        let nb = dom.cod.num_objects();
        if components.len() != dom.words.len()
            || components.iter().enumerate().any(|(w, cs)| {
                cs.len() != nb
                    || cs.iter().enumerate().any(|(b, t)| {
                        t.len() != dom.coeffs[w].size(b) || t.iter().any(|&q| q >= cod.coeffs[w].size(b))
                    })
            })
        {
            return Err(SpeciesError::Shape("components have the wrong shape".into()));
        }
        let t = SpeciesNat { dom, cod, components };
        if let Some(msg) = t.naturality_failure() {
            return Err(SpeciesError::NotNatural(msg));
        }
        Ok(t)
    }

    fn naturality_failure(&self) -> Option<String> {
        let (p, q) = (&*self.dom, &*self.cod);
        for (m, mor) in p.mors.iter().enumerate() {
            let (s, t) = (p.mor_src[m], p.mor_dst[m]);
            for b in 0..p.cod.num_objects() {
                for x in 0..p.coeffs[s].size(b) {
                    if self.components[t][b][p.act(m, b, x)] != q.act(m, b, self.components[s][b][x]) {
                        return Some(format!("at {}", mor.display(&p.dom)));
                    }
                }
            }
        }
        for w in 0..p.words.len() {
            for g in 0..p.cod.num_morphisms() {
                let (c, d) = (p.cod.dom(g), p.cod.cod(g));
                for x in 0..p.coeffs[w].size(d) {
                    if self.components[w][c][p.coeffs[w].restrict(g, x)]
                        != q.coeffs[w].restrict(g, self.components[w][d][x])
                    {
                        return Some(format!(
                            "at {} along {}",
                            p.words[w].display(&p.dom),
                            p.cod.morphism(g).name
                        ));
                    }
                }
            }
        }
        None
    }

    pub fn identity(p: Arc<Species>) -> SpeciesNat {
        let components = p
            .coeffs
            .iter()
            .map(|c| c.sizes().iter().map(|&n| (0..n).collect()).collect())
            .collect();
        SpeciesNat {
            dom: p.clone(),
            cod: p,
            components,
        }
    }

    /// The unique transformation into the terminal species.
    pub fn to_terminal(p: Arc<Species>) -> SpeciesNat {
        let one = Arc::new(Species::terminal(p.dom.clone(), p.cod.clone(), p.degree));
        let components = p
            .coeffs
            .iter()
            .map(|c| c.sizes().iter().map(|&n| vec![0; n]).collect())
            .collect();
        SpeciesNat {
            dom: p,
            cod: one,
            components,
        }
    }

    pub fn dom(&self) -> &Arc<Species> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Species> {
        &self.cod
    }

    pub fn apply(&self, w: usize, b: usize, p: usize) -> usize {
        self.components[w][b][p]
    }

    pub fn components(&self) -> &[Vec<Vec<usize>>] {
        &self.components
    }

    pub fn then(&self, other: &SpeciesNat) -> SpeciesNat {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.iter().map(|&p| y[p]).collect()).collect())
            .collect();
        SpeciesNat {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            components,
        }
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().enumerate().all(|(w, cs)| {
            cs.iter().enumerate().all(|(b, t)| {
                if t.len() != self.cod.coeffs[w].size(b) {
                    return false;
                }
                let mut seen = vec![false; t.len()];
                t.iter().all(|&q| !std::mem::replace(&mut seen[q], true))
            })
        })
    }

    /// Component at a word as a transformation of coefficient presheaves.
    pub fn at_word(&self, w: usize) -> NatTrans {
        NatTrans::new(self.dom.coeffs[w].clone(), self.cod.coeffs[w].clone(), self.components[w].clone())
            .expect("species transformations are natural in the codomain")
    }
}

#[cfg(test)]
mod tests;
