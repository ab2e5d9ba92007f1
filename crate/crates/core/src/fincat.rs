//! Finite categories presented by full composition tables.
//!
//! Objects and morphisms are dense indices in load order. Composition is
//! written diagrammatically throughout the crate: `compose(f, g)` is `f;g`,
//! defined when `cod(f) == dom(g)`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// Errors for presentations whose indices do not even make sense. These are
/// distinct from law violations, which are collected in a
/// [`ValidationReport`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("category has no objects named {0:?}")]
    UnknownObject(String),
    #[error("category has no morphism named {0:?}")]
    UnknownMorphism(String),
    #[error("object index {0} out of range")]
    ObjectOutOfRange(usize),
    #[error("morphism index {0} out of range")]
    MorphismOutOfRange(usize),
    #[error("expected {expected} identities, got {got}")]
    IdentityCount { expected: usize, got: usize },
    #[error("expected {expected} inverse entries, got {got}")]
    InverseCount { expected: usize, got: usize },
    #[error("composite of ({0}, {1}) given twice with different values")]
    ConflictingComposite(usize, usize),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IdentityTyping { object: usize, morphism: usize },
    MissingComposite { f: usize, g: usize },
    SpuriousComposite { f: usize, g: usize },
    CompositeTyping { f: usize, g: usize, composite: usize },
    LeftUnit { f: usize },
    RightUnit { f: usize },
    Associativity { f: usize, g: usize, h: usize },
    InverseTyping { f: usize },
    InverseLaw { f: usize },
}

/// Every law violated by a presentation; empty iff it is a category (or a
/// groupoid when inverses are supplied).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub details: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.details.is_empty() && self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, detail: Option<Violation>, text: String) {
        if let Some(d) = detail {
            self.details.push(d);
        }
        self.violations.push(text);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for line in &self.violations {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    table: Vec<Option<usize>>,
    inverses: Option<Vec<usize>>,
    homs: Vec<Vec<usize>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.table == other.table
            && self.inverses == other.inverses
    }
}

impl Eq for FinCat {}

impl FinCat {
    /// Builds a presentation from a full table of composites `(f, g, f;g)`.
    /// Only index ranges are checked here; see [`FinCat::validate`].
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        composites: impl IntoIterator<Item = (usize, usize, usize)>,
        inverses: Option<Vec<usize>>,
    ) -> Result<Self, StructureError> {
        let n = objects.len();
        let m = morphisms.len();
        for mor in &morphisms {
            if mor.dom >= n {
                return Err(StructureError::ObjectOutOfRange(mor.dom));
            }
            if mor.cod >= n {
                return Err(StructureError::ObjectOutOfRange(mor.cod));
            }
        }
        if identities.len() != n {
            return Err(StructureError::IdentityCount {
                expected: n,
                got: identities.len(),
            });
        }
        if let Some(&bad) = identities.iter().find(|&&i| i >= m) {
            return Err(StructureError::MorphismOutOfRange(bad));
        }
        let mut table = vec![None; m * m];
        for (f, g, h) in composites {
            for idx in [f, g, h] {
                if idx >= m {
                    return Err(StructureError::MorphismOutOfRange(idx));
                }
            }
            match table[f * m + g] {
                Some(prev) if prev != h => return Err(StructureError::ConflictingComposite(f, g)),
                _ => table[f * m + g] = Some(h),
            }
        }
        if let Some(inv) = &inverses {
            if inv.len() != m {
                return Err(StructureError::InverseCount {
                    expected: m,
                    got: inv.len(),
                });
            }
            if let Some(&bad) = inv.iter().find(|&&i| i >= m) {
                return Err(StructureError::MorphismOutOfRange(bad));
            }
        }
        let mut homs = vec![Vec::new(); n * n];
        for (i, mor) in morphisms.iter().enumerate() {
            homs[mor.dom * n + mor.cod].push(i);
        }
        Ok(FinCat {
            name: name.into(),
            objects,
            morphisms,
            identities,
            table,
            inverses,
            homs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, c: usize) -> &str {
        &self.objects[c]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn identity(&self, c: usize) -> usize {
        self.identities[c]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.dom(f)] == f
    }

    pub fn is_groupoid(&self) -> bool {
        self.inverses.is_some()
    }

    /// The two-sided inverse of `f`, if it has one.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        if let Some(inv) = &self.inverses {
            return Some(inv[f]);
        }
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.compose(f, g) == Some(self.identity(a)) && self.compose(g, f) == Some(self.identity(b)))
    }

    /// Diagrammatic composite `f;g`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let m = self.morphisms.len();
        self.table[f * m + g]
    }

    /// Like [`FinCat::compose`] for pairs already known to be composable.
    pub fn comp(&self, f: usize, g: usize) -> usize {
        self.compose(f, g)
            .unwrap_or_else(|| panic!("morphisms {f} and {g} are not composable"))
    }

    /// Morphisms `a -> b` in ascending index order.
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        let n = self.objects.len();
        &self.homs[a * n + b]
    }

    pub fn checked_hom(&self, a: usize, b: usize) -> Result<&[usize], StructureError> {
        let n = self.objects.len();
        if a >= n {
            return Err(StructureError::ObjectOutOfRange(a));
        }
        if b >= n {
            return Err(StructureError::ObjectOutOfRange(b));
        }
        Ok(self.hom(a, b))
    }

    /// Morphisms into `c`, in ascending index order.
    pub fn morphisms_into(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].cod == c)
    }

    /// Checks every category law (and the inverse laws when flagged).
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let m = self.morphisms.len();
        for (c, &id) in self.identities.iter().enumerate() {
            if self.dom(id) != c || self.cod(id) != c {
                report.push(
                    Some(Violation::IdentityTyping {
                        object: c,
                        morphism: id,
                    }),
                    format!(
                        "identity {} of {} is not an endomorphism of it",
                        self.morphisms[id].name, self.objects[c]
                    ),
                );
            }
        }
        for f in 0..m {
            for g in 0..m {
                let composable = self.cod(f) == self.dom(g);
                match (composable, self.compose(f, g)) {
                    (true, None) => report.push(
                        Some(Violation::MissingComposite { f, g }),
                        format!("missing composite {};{}", self.mname(f), self.mname(g)),
                    ),
                    (false, Some(_)) => report.push(
                        Some(Violation::SpuriousComposite { f, g }),
                        format!(
                            "composite {};{} given for non-composable pair",
                            self.mname(f),
                            self.mname(g)
                        ),
                    ),
                    (true, Some(h)) if self.dom(h) != self.dom(f) || self.cod(h) != self.cod(g) => {
                        report.push(
                            Some(Violation::CompositeTyping { f, g, composite: h }),
                            format!(
                                "composite {};{} = {} has the wrong type",
                                self.mname(f),
                                self.mname(g),
                                self.mname(h)
                            ),
                        )
                    }
                    _ => {}
                }
            }
        }
        if !report.is_ok() {
            // unit and associativity checks assume a well-typed table
            return report;
        }
        for f in 0..m {
            let (a, b) = (self.dom(f), self.cod(f));
            if self.compose(self.identities[a], f) != Some(f) {
                report.push(
                    Some(Violation::LeftUnit { f }),
                    format!("left unit law fails at {}", self.mname(f)),
                );
            }
            if self.compose(f, self.identities[b]) != Some(f) {
                report.push(
                    Some(Violation::RightUnit { f }),
                    format!("right unit law fails at {}", self.mname(f)),
                );
            }
        }
        for f in 0..m {
            for g in self.hom_from(self.cod(f)) {
                let fg = self.comp(f, g);
                for h in self.hom_from(self.cod(g)) {
                    let gh = self.comp(g, h);
                    if self.compose(fg, h) != self.compose(f, gh) {
                        report.push(
                            Some(Violation::Associativity { f, g, h }),
                            format!(
                                "associativity fails on ({}, {}, {})",
                                self.mname(f),
                                self.mname(g),
                                self.mname(h)
                            ),
                        );
                    }
                }
            }
        }
        if let Some(inv) = &self.inverses {
            for f in 0..m {
                let g = inv[f];
                if self.dom(g) != self.cod(f) || self.cod(g) != self.dom(f) {
                    report.push(
                        Some(Violation::InverseTyping { f }),
                        format!("inverse of {} has the wrong type", self.mname(f)),
                    );
                    continue;
                }
                if self.compose(f, g) != Some(self.identities[self.dom(f)])
                    || self.compose(g, f) != Some(self.identities[self.cod(f)])
                {
                    report.push(
                        Some(Violation::InverseLaw { f }),
                        format!("inverse law fails at {}", self.mname(f)),
                    );
                }
            }
        }
        report
    }

    fn mname(&self, f: usize) -> &str {
        &self.morphisms[f].name
    }

    fn hom_from(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&g| self.morphisms[g].dom == a)
    }

    /// The wide subcategory of identities (a discrete groupoid).
    pub fn discrete_part(&self) -> FinCat {
        let names = self.objects.clone();
        let mut b = CatBuilder::new(format!("{}-discrete", self.name));
        for o in &names {
            b.object(o);
        }
        b.build_groupoid().expect("discrete categories are well formed")
    }

    pub fn terminal() -> FinCat {
        let mut b = CatBuilder::new("1");
        b.object("*");
        b.build_groupoid().expect("terminal category")
    }

    /// Discrete category on `n` objects named `o0, o1, ...`.
    pub fn discrete(n: usize) -> FinCat {
        let mut b = CatBuilder::new(format!("D{n}"));
        for i in 0..n {
            b.object(&format!("o{i}"));
        }
        b.build_groupoid().expect("discrete category")
    }

    /// The one-object groupoid of a finite group given by its multiplication
    /// table (`mul[a][b]` is the diagrammatic product `a;b`, element 0 is the
    /// unit).
    pub fn from_group(name: impl Into<String>, mul: &[Vec<usize>]) -> Result<FinCat, StructureError> {
        let order = mul.len();
        let morphisms = (0..order)
            .map(|i| Morphism {
                name: if i == 0 { "id".to_string() } else { format!("g{i}") },
                dom: 0,
                cod: 0,
            })
            .collect();
        let mut composites = Vec::with_capacity(order * order);
        let mut inverses = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                let c = mul[a][b];
                composites.push((a, b, c));
                if c == 0 {
                    inverses[a] = b;
                }
            }
        }
        FinCat::new(name, vec!["*".to_string()], morphisms, vec![0], composites, Some(inverses))
    }

    /// Cyclic group of order `n` as a one-object groupoid; `g1` generates.
    pub fn cyclic(n: usize) -> FinCat {
        assert!(n >= 1);
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut cat = FinCat::from_group(format!("Z{n}"), &mul).expect("cyclic group table");
        if n == 2 {
            cat.morphisms[1].name = "s".to_string();
        }
        cat
    }

    /// Klein four-group as a one-object groupoid.
    pub fn klein() -> FinCat {
        let mul: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        FinCat::from_group("V4", &mul).expect("klein group table")
    }

    /// The groupoid with `n` objects and exactly one morphism between any two.
    pub fn codiscrete(n: usize) -> FinCat {
        let objects: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
        let mut morphisms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                morphisms.push(Morphism {
                    name: if a == b { format!("id_o{a}") } else { format!("o{a}>o{b}") },
                    dom: a,
                    cod: b,
                });
            }
        }
        let idx = |a: usize, b: usize| a * n + b;
        let identities = (0..n).map(|a| idx(a, a)).collect();
        let mut composites = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    composites.push((idx(a, b), idx(b, c), idx(a, c)));
                }
            }
        }
        let inverses = (0..n * n).map(|f| idx(f % n, f / n)).collect();
        FinCat::new(format!("I{n}"), objects, morphisms, identities, composites, Some(inverses))
            .expect("codiscrete groupoid")
    }

    /// The arrow category `bot -> top` with its single non-identity morphism `u`.
    pub fn arrow() -> FinCat {
        let mut b = CatBuilder::new("Scat");
        let bot = b.object("bot");
        let top = b.object("top");
        b.morphism("u", bot, top);
        b.build().expect("arrow category")
    }

    /// Disjoint union; object and morphism names of `other` are suffixed when
    /// they clash.
    pub fn disjoint_union(&self, other: &FinCat) -> FinCat {
        let n0 = self.objects.len();
        let m0 = self.morphisms.len();
        let rename = |s: &str, taken: &[String]| {
            if taken.iter().any(|t| t == s) {
                format!("{s}'")
            } else {
                s.to_string()
            }
        };
        let mut objects = self.objects.clone();
        for o in &other.objects {
            let name = rename(o, &objects);
            objects.push(name);
        }
        let mut names: Vec<String> = self.morphisms.iter().map(|m| m.name.clone()).collect();
        let mut morphisms = self.morphisms.clone();
        for mor in &other.morphisms {
            let name = rename(&mor.name, &names);
            names.push(name.clone());
            morphisms.push(Morphism {
                name,
                dom: mor.dom + n0,
                cod: mor.cod + n0,
            });
        }
        let mut identities = self.identities.clone();
        identities.extend(other.identities.iter().map(|&i| i + m0));
        let mut composites = Vec::new();
        for (cat, off) in [(self, 0), (other, m0)] {
            let m = cat.morphisms.len();
            for f in 0..m {
                for g in 0..m {
                    if let Some(h) = cat.compose(f, g) {
                        composites.push((f + off, g + off, h + off));
                    }
                }
            }
        }
        let inverses = match (&self.inverses, &other.inverses) {
            (Some(a), Some(b)) => {
                let mut inv = a.clone();
                inv.extend(b.iter().map(|&i| i + m0));
                Some(inv)
            }
            _ => None,
        };
        FinCat::new(
            format!("{}+{}", self.name, other.name),
            objects,
            morphisms,
            identities,
            composites,
            inverses,
        )
        .expect("disjoint union of well-formed categories")
    }

    /// Connected components of the underlying graph, each listed in
    /// ascending object order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut dsu = crate::unary::DisjointSets::new(n);
        for mor in &self.morphisms {
            dsu.union(mor.dom, mor.cod);
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_slot: HashMap<usize, usize> = HashMap::new();
        for c in 0..n {
            let r = dsu.find(c);
            let slot = *root_slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[slot].push(c);
        }
        groups
    }
}

/// Incremental construction by names. Identity morphisms and their
/// composites are generated automatically; all other composites must be
/// supplied with [`CatBuilder::composite`].
#[derive(Clone, Debug)]
pub struct CatBuilder {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    composites: Vec<(usize, usize, usize)>,
    inverses: Vec<(usize, usize)>,
    identity_names: HashMap<usize, String>,
}

impl CatBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CatBuilder {
            name: name.into(),
            objects: Vec::new(),
            morphisms: Vec::new(),
            composites: Vec::new(),
            inverses: Vec::new(),
            identity_names: HashMap::new(),
        }
    }

    pub fn object(&mut self, name: &str) -> usize {
        self.objects.push(name.to_string());
        self.objects.len() - 1
    }

    /// Overrides the default identity name `id_<object>`.
    pub fn identity_name(&mut self, object: usize, name: &str) {
        self.identity_names.insert(object, name.to_string());
    }

    /// Adds a non-identity morphism; indices are assigned after identities.
    pub fn morphism(&mut self, name: &str, dom: usize, cod: usize) -> usize {
        self.morphisms.push(Morphism {
            name: name.to_string(),
            dom,
            cod,
        });
        self.morphisms.len() - 1
    }

    /// Records `f;g = h` using builder-local morphism indices.
    pub fn composite(&mut self, f: usize, g: usize, h: usize) {
        self.composites.push((f, g, h));
    }

    pub fn inverse(&mut self, f: usize, g: usize) {
        self.inverses.push((f, g));
    }

    fn assemble(&self, groupoid: bool) -> Result<FinCat, StructureError> {
        let n = self.objects.len();
        for mor in &self.morphisms {
            if mor.dom >= n {
                return Err(StructureError::ObjectOutOfRange(mor.dom));
            }
            if mor.cod >= n {
                return Err(StructureError::ObjectOutOfRange(mor.cod));
            }
        }
        let mut morphisms: Vec<Morphism> = (0..n)
            .map(|c| Morphism {
                name: self
                    .identity_names
                    .get(&c)
                    .cloned()
                    .unwrap_or_else(|| format!("id_{}", self.objects[c])),
                dom: c,
                cod: c,
            })
            .collect();
        morphisms.extend(self.morphisms.iter().cloned());
        let m = morphisms.len();
        let shift = |i: usize| i + n;
        let mut composites = Vec::new();
        for f in 0..m {
            let (a, b) = (morphisms[f].dom, morphisms[f].cod);
            composites.push((a, f, f));
            composites.push((f, b, f));
        }
        for &(f, g, h) in &self.composites {
            let k = self.morphisms.len();
            if f >= k || g >= k || h >= k {
                return Err(StructureError::MorphismOutOfRange(f.max(g).max(h)));
            }
            composites.push((shift(f), shift(g), shift(h)));
        }
        let inverses = if groupoid {
            let mut inv: Vec<usize> = (0..m).collect();
            for &(f, g) in &self.inverses {
                let k = self.morphisms.len();
                if f >= k || g >= k {
                    return Err(StructureError::MorphismOutOfRange(f.max(g)));
                }
                inv[shift(f)] = shift(g);
                inv[shift(g)] = shift(f);
            }
            Some(inv)
        } else {
            None
        };
        FinCat::new(
            self.name.clone(),
            self.objects.clone(),
            morphisms,
            (0..n).collect(),
            composites,
            inverses,
        )
    }

    pub fn build(&self) -> Result<FinCat, StructureError> {
        self.assemble(false)
    }

    /// Builds with inverses: identities are self-inverse and every
    /// non-identity must be paired with [`CatBuilder::inverse`].
    pub fn build_groupoid(&self) -> Result<FinCat, StructureError> {
        self.assemble(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_category_is_valid() {
        let t = FinCat::terminal();
        assert!(t.validate().is_ok());
        assert_eq!(t.hom(0, 0), &[0]);
        assert!(t.is_groupoid());
    }

    #[test]
    fn z2_groupoid_table() {
        let z2 = FinCat::cyclic(2);
        assert!(z2.validate().is_ok());
        assert_eq!(z2.hom(0, 0), &[0, 1]);
        // the four table entries, checked against the group law by hand
        assert_eq!(z2.compose(0, 0), Some(0));
        assert_eq!(z2.compose(0, 1), Some(1));
        assert_eq!(z2.compose(1, 0), Some(1));
        assert_eq!(z2.compose(1, 1), Some(0));
        assert_eq!(z2.inverse(1), Some(1));
        let arrow = FinCat::arrow();
        assert_eq!(arrow.inverse(arrow.identity(0)), Some(arrow.identity(0)));
        assert_eq!(arrow.inverse(2), None);
    }

    #[test]
    fn empty_hom_in_discrete_category() {
        let d = FinCat::discrete(2);
        assert!(d.validate().is_ok());
        assert!(d.hom(0, 1).is_empty());
    }

    #[test]
    fn injected_associativity_fault_is_named() {
        // Z/3 with one composite corrupted: g1;g1 = id instead of g2
        let mut mul: Vec<Vec<usize>> =
            (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        mul[1][1] = 0;
        let cat = FinCat::from_group("broken", &mul).unwrap();
        let report = cat.validate();
        assert!(!report.is_ok());
        assert!(report
            .details
            .iter()
            .any(|v| matches!(v, Violation::Associativity { .. })));
        assert!(report.violations.iter().any(|l| l.contains("associativity")));
    }

    #[test]
    fn structural_errors_are_not_violations() {
        let err = FinCat::new(
            "bad",
            vec!["a".into()],
            vec![Morphism {
                name: "f".into(),
                dom: 0,
                cod: 3,
            }],
            vec![0],
            [],
            None,
        )
        .unwrap_err();
        assert_eq!(err, StructureError::ObjectOutOfRange(3));
        assert!(FinCat::terminal().checked_hom(0, 1).is_err());
    }

    #[test]
    fn missing_composite_reported() {
        let mut b = CatBuilder::new("chain");
        let x = b.object("x");
        let y = b.object("y");
        let z = b.object("z");
        b.morphism("f", x, y);
        b.morphism("g", y, z);
        let cat = b.build().unwrap();
        let report = cat.validate();
        assert!(report
            .details
            .iter()
            .any(|v| matches!(v, Violation::MissingComposite { .. })));
    }

    #[test]
    fn standard_categories_validate() {
        for cat in [
            FinCat::arrow(),
            FinCat::codiscrete(2),
            FinCat::codiscrete(3),
            FinCat::cyclic(3),
            FinCat::cyclic(4),
            FinCat::klein(),
            FinCat::cyclic(2).disjoint_union(&FinCat::terminal()),
            FinCat::arrow().discrete_part(),
        ] {
            assert!(cat.validate().is_ok(), "{}: {}", cat.name(), cat.validate());
        }
        assert!(!FinCat::arrow().is_groupoid());
    }

    #[test]
    fn groupoid_homs_are_symmetric_and_unital() {
        for cat in [FinCat::codiscrete(2), FinCat::cyclic(3), FinCat::discrete(2)] {
            for a in 0..cat.num_objects() {
                for b in 0..cat.num_objects() {
                    assert_eq!(cat.hom(a, b).len(), cat.hom(b, a).len());
                    for &f in cat.hom(a, b) {
                        assert_eq!(cat.compose(cat.identity(a), f), Some(f));
                        assert_eq!(cat.compose(f, cat.identity(b)), Some(f));
                    }
                }
            }
        }
    }

    #[test]
    fn validation_is_idempotent() {
        let cat = FinCat::arrow();
        assert_eq!(cat.validate(), cat.validate());
    }
}
