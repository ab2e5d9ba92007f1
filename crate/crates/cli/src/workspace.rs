//! JSON workspace files: categories, presheaves, species, linear species,
//! transformations and configuration, resolved by name.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use anafun::classical::{catalog, CatalogName, LinearSpecies};
use anafun::fincat::{FinCat, Morphism};
use anafun::freesmc::{SmcMor, Word};
use anafun::presheaf::Presheaf;
use anafun::species::{Species, SpeciesNat};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    #[serde(default)]
    pub categories: Vec<CategorySpec>,
    #[serde(default)]
    pub presheaves: Vec<PresheafSpec>,
    #[serde(default)]
    pub species: Vec<SpeciesSpec>,
    #[serde(default)]
    pub linear_species: Vec<LinearSpec>,
    #[serde(default)]
    pub transformations: Vec<TransformationSpec>,
    #[serde(default)]
    pub config: ConfigSpec,
}

/// Either a named standard category (`kind`) or an explicit presentation.
/// Identities default to `id_<object>`; composites with identities are
/// implied. Giving `inverses` makes the category a groupoid.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub name: String,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    pub identities: Option<Vec<String>>,
    #[serde(default)]
    pub composition: Vec<[String; 3]>,
    #[serde(default)]
    pub inverses: Option<Vec<[String; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// Element counts per object (missing objects are empty) and index maps
/// `X(cod) -> X(dom)` for enough morphisms to determine the rest.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafSpec {
    pub name: String,
    pub base: String,
    #[serde(default)]
    pub sizes: BTreeMap<String, usize>,
    #[serde(default)]
    pub actions: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesSpec {
    pub name: String,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub dom: Option<String>,
    #[serde(default)]
    pub cod: Option<String>,
    pub degree: usize,
    /// Letters of the representing word for `kind = "representable"`.
    #[serde(default)]
    pub word: Option<Vec<String>>,
    /// Catalog name for `kind = "catalog"`.
    #[serde(default)]
    pub catalog: Option<String>,
    #[serde(default)]
    pub coefficients: Vec<CoefficientSpec>,
    #[serde(default)]
    pub actions: Vec<ActionSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub word: Vec<String>,
    #[serde(default)]
    pub sizes: BTreeMap<String, usize>,
    #[serde(default)]
    pub actions: BTreeMap<String, Vec<usize>>,
}

/// The action of the `!A` morphism `(perm, family): dom -> cod`, one index
/// map per codomain object.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub perm: Vec<usize>,
    pub family: Vec<String>,
    pub tables: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSpec {
    pub name: String,
    pub sizes: Vec<usize>,
}

/// Components `word -> object -> index map`; omitted words have empty
/// coefficients.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub word: Vec<String>,
    pub maps: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub truncation: Option<usize>,
    pub probe_bound: Option<usize>,
    pub size_cap: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: cannot read: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {location}: unknown {kind} {name:?}")]
    UnknownReference {
        path: String,
        location: String,
        kind: &'static str,
        name: String,
    },
    #[error("{path}: {location}: name {name:?} is already defined")]
    Duplicate { path: String, location: String, name: String },
    #[error("{path}: {location}: {message}")]
    Schema { path: String, location: String, message: String },
    #[error("{path}: {location}: validation failed:\n{report}")]
    Invalid { path: String, location: String, report: String },
}

impl LoadError {
    /// Parse errors exit with 2, everything else with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Io { .. } | LoadError::Parse { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub categories: BTreeMap<String, Arc<FinCat>>,
    pub presheaves: BTreeMap<String, Arc<Presheaf>>,
    pub species: BTreeMap<String, Arc<Species>>,
    pub linear_species: BTreeMap<String, LinearSpecies>,
    pub transformations: BTreeMap<String, SpeciesNat>,
    pub config: ConfigSpec,
}

/// Tracks the file and the entry being loaded for error messages.
struct Ctx<'a> {
    path: &'a str,
    location: String,
}

impl Ctx<'_> {
    fn unknown(&self, kind: &'static str, name: &str) -> LoadError {
        LoadError::UnknownReference {
            path: self.path.to_string(),
            location: self.location.clone(),
            kind,
            name: name.to_string(),
        }
    }

    fn schema(&self, message: impl Into<String>) -> LoadError {
        LoadError::Schema {
            path: self.path.to_string(),
            location: self.location.clone(),
            message: message.into(),
        }
    }

    fn invalid(&self, report: impl ToString) -> LoadError {
        LoadError::Invalid {
            path: self.path.to_string(),
            location: self.location.clone(),
            report: report.to_string(),
        }
    }
}

fn object(ctx: &Ctx, cat: &FinCat, name: &str) -> Result<usize, LoadError> {
    cat.object_index(name).ok_or_else(|| ctx.unknown("object", name))
}

fn morphism(ctx: &Ctx, cat: &FinCat, name: &str) -> Result<usize, LoadError> {
    cat.morphism_index(name).ok_or_else(|| ctx.unknown("morphism", name))
}

fn word(ctx: &Ctx, cat: &FinCat, letters: &[String]) -> Result<Word, LoadError> {
    Ok(Word(letters.iter().map(|l| object(ctx, cat, l)).collect::<Result<_, _>>()?))
}

fn sizes(ctx: &Ctx, cat: &FinCat, given: &BTreeMap<String, usize>) -> Result<Vec<usize>, LoadError> {
    let mut out = vec![0; cat.num_objects()];
    for (o, &n) in given {
        out[object(ctx, cat, o)?] = n;
    }
    Ok(out)
}

fn presheaf(
    ctx: &Ctx,
    cat: &Arc<FinCat>,
    given_sizes: &BTreeMap<String, usize>,
    actions: &BTreeMap<String, Vec<usize>>,
) -> Result<Presheaf, LoadError> {
    let sizes = sizes(ctx, cat, given_sizes)?;
    let mut given = HashMap::new();
    for (m, t) in actions {
        given.insert(morphism(ctx, cat, m)?, t.clone());
    }
    Presheaf::from_partial_actions(cat.clone(), sizes, &given).map_err(|e| ctx.invalid(e))
}

impl Workspace {
    pub fn load_path(&mut self, path: &Path) -> Result<(), LoadError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io {
            path: shown.clone(),
            message: e.to_string(),
        })?;
        self.load_str(&shown, &text)
    }

    /// Loads every entry of one file, in the order categories, presheaves,
    /// species, linear species, transformations.
    pub fn load_str(&mut self, path: &str, text: &str) -> Result<(), LoadError> {
        let file: WorkspaceFile = serde_json::from_str(text).map_err(|e| LoadError::Parse {
            path: path.to_string(),
            message: e.to_string(),
        })?;
        for (i, c) in file.categories.iter().enumerate() {
            let ctx = Ctx {
                path,
                location: format!("categories[{i}] {:?}", c.name),
            };
            self.claim(&ctx, &c.name)?;
            let cat = build_category(&ctx, c)?;
            self.categories.insert(c.name.clone(), Arc::new(cat));
        }
        for (i, p) in file.presheaves.iter().enumerate() {
            let ctx = Ctx {
                path,
                location: format!("presheaves[{i}] {:?}", p.name),
            };
            self.claim(&ctx, &p.name)?;
            let base = self.category(&ctx, &p.base)?;
            let x = presheaf(&ctx, &base, &p.sizes, &p.actions)?;
            self.presheaves.insert(p.name.clone(), Arc::new(x));
        }
        for (i, s) in file.species.iter().enumerate() {
            let ctx = Ctx {
                path,
                location: format!("species[{i}] {:?}", s.name),
            };
            self.claim(&ctx, &s.name)?;
            let sp = self.build_species(&ctx, s)?;
            self.species.insert(s.name.clone(), Arc::new(sp));
        }
        for (i, l) in file.linear_species.iter().enumerate() {
            let ctx = Ctx {
                path,
                location: format!("linear_species[{i}] {:?}", l.name),
            };
            self.claim(&ctx, &l.name)?;
            if l.sizes.is_empty() {
                return Err(ctx.schema("sizes must list at least degree 0"));
            }
            self.linear_species.insert(
                l.name.clone(),
                LinearSpecies {
                    name: l.name.clone(),
                    sizes: l.sizes.clone(),
                },
            );
        }
        for (i, t) in file.transformations.iter().enumerate() {
            let ctx = Ctx {
                path,
                location: format!("transformations[{i}] {:?}", t.name),
            };
            self.claim(&ctx, &t.name)?;
            let phi = self.build_transformation(&ctx, t)?;
            self.transformations.insert(t.name.clone(), phi);
        }
        let c = file.config;
        let cfg = &mut self.config;
        cfg.truncation = c.truncation.or(cfg.truncation);
        cfg.probe_bound = c.probe_bound.or(cfg.probe_bound);
        cfg.size_cap = c.size_cap.or(cfg.size_cap);
        cfg.seed = c.seed.or(cfg.seed);
        Ok(())
    }

    fn claim(&self, ctx: &Ctx, name: &str) -> Result<(), LoadError> {
        let taken = self.categories.contains_key(name)
            || self.presheaves.contains_key(name)
            || self.species.contains_key(name)
            || self.linear_species.contains_key(name)
            || self.transformations.contains_key(name);
        if taken {
            return Err(LoadError::Duplicate {
                path: ctx.path.to_string(),
                location: ctx.location.clone(),
                name: name.to_string(),
            });
        }
        Ok(())
    }

    fn category(&self, ctx: &Ctx, name: &str) -> Result<Arc<FinCat>, LoadError> {
        self.categories.get(name).cloned().ok_or_else(|| ctx.unknown("category", name))
    }

    fn build_species(&self, ctx: &Ctx, s: &SpeciesSpec) -> Result<Species, LoadError> {
        let n = s.degree;
        let base = |field: &Option<String>, what: &str| -> Result<Arc<FinCat>, LoadError> {
            match field {
                Some(name) => self.category(ctx, name),
                None => Err(ctx.schema(format!("missing {what}"))),
            }
        };
        let built = match s.kind.as_deref() {
            Some("catalog") => {
                let name = s.catalog.as_deref().ok_or_else(|| ctx.schema("missing catalog"))?;
                let c: CatalogName = name.parse().map_err(|e| ctx.schema(format!("{e}")))?;
                catalog(c, n).to_species()
            }
            Some("terminal") => Species::terminal(base(&s.dom, "dom")?, base(&s.cod, "cod")?, n),
            Some("empty") => Species::empty(base(&s.dom, "dom")?, base(&s.cod, "cod")?, n),
            Some("identity") => Species::identity(base(&s.dom, "dom")?, n),
            Some("representable") => {
                let dom = base(&s.dom, "dom")?;
                let letters = s.word.as_ref().ok_or_else(|| ctx.schema("missing word"))?;
                let w = word(ctx, &dom, letters)?;
                Species::representable(dom, &w, n).map_err(|e| ctx.invalid(e))?
            }
            Some(other) => return Err(ctx.schema(format!("unknown species kind {other:?}"))),
            None => {
                let dom = base(&s.dom, "dom")?;
                let cod = base(&s.cod, "cod")?;
                let mut coeffs = HashMap::new();
                for c in &s.coefficients {
                    let w = word(ctx, &dom, &c.word)?;
                    let p = presheaf(ctx, &cod, &c.sizes, &c.actions)?;
                    if coeffs.insert(w, p).is_some() {
                        return Err(ctx.schema(format!("coefficient {:?} given twice", c.word)));
                    }
                }
                let mut given = Vec::new();
                for a in &s.actions {
                    let family = a.family.iter().map(|f| morphism(ctx, &dom, f)).collect::<Result<_, _>>()?;
                    let m = SmcMor::new(&dom, word(ctx, &dom, &a.dom)?, word(ctx, &dom, &a.cod)?, a.perm.clone(), family)
                        .map_err(|e| ctx.schema(e.to_string()))?;
                    let mut tables = vec![Vec::new(); cod.num_objects()];
                    for (o, t) in &a.tables {
                        tables[object(ctx, &cod, o)?] = t.clone();
                    }
                    given.push((m, tables));
                }
                Species::from_partial(s.name.clone(), dom, cod, n, &coeffs, &given).map_err(|e| ctx.invalid(e))?
            }
        };
        let report = built.validate();
        if !report.is_ok() {
            return Err(ctx.invalid(report));
        }
        Ok(built.with_name(s.name.clone()))
    }

    fn build_transformation(&self, ctx: &Ctx, t: &TransformationSpec) -> Result<SpeciesNat, LoadError> {
        let p = self.species.get(&t.dom).cloned().ok_or_else(|| ctx.unknown("species", &t.dom))?;
        let q = self.species.get(&t.cod).cloned().ok_or_else(|| ctx.unknown("species", &t.cod))?;
        let nb = p.cod().num_objects();
        let mut comps: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); nb]; p.words().len()];
        for c in &t.components {
            let w = word(ctx, p.dom(), &c.word)?;
            let wi = p.word_index(&w).ok_or_else(|| ctx.schema(format!("word {:?} exceeds the degree", c.word)))?;
            for (o, m) in &c.maps {
                comps[wi][object(ctx, p.cod(), o)?] = m.clone();
            }
        }
        SpeciesNat::new(p, q, comps).map_err(|e| ctx.invalid(e))
    }

    /// Every entry name with its kind, in a fixed order.
    pub fn summary(&self) -> Vec<(String, &'static str, String)> {
        let mut out = Vec::new();
        for (n, c) in &self.categories {
            let kind = if c.is_groupoid() { "groupoid" } else { "category" };
            out.push((n.clone(), kind, format!("{} objects, {} morphisms", c.num_objects(), c.num_morphisms())));
        }
        for (n, x) in &self.presheaves {
            out.push((n.clone(), "presheaf", format!("{x} over {}", x.base().name())));
        }
        for (n, s) in &self.species {
            out.push((
                n.clone(),
                "species",
                format!("{} -> {}, degree {}, {} structures", s.dom().name(), s.cod().name(), s.degree(), s.total_size()),
            ));
        }
        for (n, l) in &self.linear_species {
            out.push((n.clone(), "linear species", format!("sizes {:?}", l.sizes)));
        }
        for (n, t) in &self.transformations {
            out.push((n.clone(), "transformation", format!("{} => {}", t.dom().name(), t.cod().name())));
        }
        out
    }
}

fn build_category(ctx: &Ctx, c: &CategorySpec) -> Result<FinCat, LoadError> {
    if let Some(kind) = &c.kind {
        let n = || c.n.ok_or_else(|| ctx.schema(format!("kind {kind:?} needs n")));
        let cat = match kind.as_str() {
            "terminal" => FinCat::terminal(),
            "arrow" => FinCat::arrow(),
            "klein" => FinCat::klein(),
            "cyclic" => FinCat::cyclic(n()?),
            "discrete" => FinCat::discrete(n()?),
            "codiscrete" => FinCat::codiscrete(n()?),
            other => return Err(ctx.schema(format!("unknown category kind {other:?}"))),
        };
        return Ok(cat.with_name(c.name.clone()));
    }
    let objects = c.objects.clone();
    let ob = |name: &str| objects.iter().position(|o| o == name).ok_or_else(|| ctx.unknown("object", name));
    let n = objects.len();
    let id_names: Vec<String> = match &c.identities {
        Some(ids) if ids.len() != n => return Err(ctx.schema(format!("{} identities for {n} objects", ids.len()))),
        Some(ids) => ids.clone(),
        None => objects.iter().map(|o| format!("id_{o}")).collect(),
    };
    let mut morphisms: Vec<Morphism> = (0..n)
        .map(|i| Morphism {
            name: id_names[i].clone(),
            dom: i,
            cod: i,
        })
        .collect();
    for m in &c.morphisms {
        morphisms.push(Morphism {
            name: m.name.clone(),
            dom: ob(&m.dom)?,
            cod: ob(&m.cod)?,
        });
    }
    let mut seen = std::collections::HashSet::new();
    for m in &morphisms {
        if !seen.insert(&m.name) {
            return Err(ctx.schema(format!("morphism name {:?} used twice", m.name)));
        }
    }
    let mi = |name: &str| morphisms.iter().position(|m| m.name == name).ok_or_else(|| ctx.unknown("morphism", name));
    let mut composites = Vec::new();
    for [f, g, h] in &c.composition {
        composites.push((mi(f)?, mi(g)?, mi(h)?));
    }
    let given: std::collections::HashSet<(usize, usize)> = composites.iter().map(|&(f, g, _)| (f, g)).collect();
    for (f, m) in morphisms.iter().enumerate() {
        for (a, b) in [(m.dom, f), (f, m.cod)] {
            if !given.contains(&(a, b)) {
                composites.push((a, b, f));
            }
        }
    }
    let inverses = match &c.inverses {
        None => None,
        Some(pairs) => {
            let mut inv: Vec<Option<usize>> = vec![None; morphisms.len()];
            for i in 0..n {
                inv[i] = Some(i);
            }
            for [f, g] in pairs {
                let (f, g) = (mi(f)?, mi(g)?);
                inv[f] = Some(g);
                inv[g] = Some(f);
            }
            let full = inv
                .iter()
                .enumerate()
                .map(|(f, g)| g.ok_or_else(|| ctx.schema(format!("morphism {:?} has no inverse", morphisms[f].name))))
                .collect::<Result<Vec<_>, _>>()?;
            Some(full)
        }
    };
    let cat = FinCat::new(c.name.clone(), objects.clone(), morphisms.clone(), (0..n).collect(), composites, inverses)
        .map_err(|e| ctx.invalid(describe_structure(e, &morphisms)))?;
    let report = cat.validate();
    if !report.is_ok() {
        return Err(ctx.invalid(report));
    }
    Ok(cat)
}

fn describe_structure(e: anafun::fincat::StructureError, morphisms: &[Morphism]) -> String {
    use anafun::fincat::StructureError;
    match e {
        StructureError::ConflictingComposite(f, g) => {
            format!("composite ({}, {}) given twice with different values", morphisms[f].name, morphisms[g].name)
        }
        other => other.to_string(),
    }
}
