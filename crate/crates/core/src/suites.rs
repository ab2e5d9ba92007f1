//! Named verification suites. Each suite runs a family of exhaustive or
//! seeded checks and reports one line per check.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::{
    burnside_unlabelled, catalog, count_labelled, count_unlabelled, free_symmetric, CatalogName, LinearSpecies,
};
use crate::fincat::FinCat;
use crate::freesmc::{enumerate_homs, enumerate_words, Word};
use crate::generic::{
    bounded_generic, bounded_minimal, check_counterexample, coefficients_of, CounterexampleReport, GenericError, extract_coefficient_nat, generic_classes,
    is_quasi_cartesian, minimal_classes, representative_map, LanOnProbes, Mode, NatFamily, ProbeFamily,
};
use crate::presheaf::{
    hom_enumerate, lift_to_freesmc, presheaves_up_to_iso, sum_functor_mor, underlying_function, wide_pullback,
    IndexFlags, NatTrans, Presheaf, TaggedSum,
};
use crate::random::{random_species, small_groupoids};
use crate::species::{
    lan_eval, map_class, preserves_quasi_pullbacks, taylor_eval, QpbProbe, Species, SpeciesNat,
};

pub const SUITES: [&str; 10] = [
    "counterexample",
    "roundtrip",
    "generic-char",
    "qc-groupoid",
    "eq2-count",
    "taylor-coend",
    "prop3",
    "prop4",
    "qpb-preserve",
    "burnside",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub truncation: usize,
    pub probe_bound: usize,
    pub size_cap: usize,
    pub seed: u64,
    /// Random species pairs for `qc-groupoid` and `roundtrip`.
    pub qc_cases: usize,
    /// Random species for `generic-char`.
    pub generic_species: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            truncation: 2,
            probe_bound: 6,
            size_cap: 8,
            seed: 20_251_016,
            qc_cases: 200,
            generic_species: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &str, cfg: &SuiteConfig, checks: Vec<Check>) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            seed: cfg.seed,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {})", self.suite, self.seed)?;
        for c in &self.checks {
            writeln!(f, "  {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "{}", if self.passed { "ok" } else { "FAILED" })
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown suite {0:?}")]
pub struct UnknownSuite(pub String);

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

/// Tallies a family of cases, keeping the first failure.
#[derive(Default)]
struct Tally {
    total: usize,
    failed: usize,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn record_result<E: fmt::Display>(&mut self, r: Result<bool, E>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, what),
            Err(e) => self.record(false, || format!("{}: {e}", what())),
        }
    }

    fn into_check(self, name: &str, unit: &str) -> Check {
        let detail = match &self.first {
            None => format!("{} {unit}, 0 failures", self.total),
            Some(f) => format!("{} of {} {unit} failed; first: {f}", self.failed, self.total),
        };
        check(name, self.failed == 0 && self.total > 0, detail)
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<SuiteReport>, UnknownSuite> {
    if name == "all" {
        return Ok(SUITES.iter().map(|s| run_one(s, cfg)).collect());
    }
    if !SUITES.contains(&name) {
        return Err(UnknownSuite(name.to_string()));
    }
    Ok(vec![run_one(name, cfg)])
}

/// Assembles a report from checks computed elsewhere.
pub fn report(name: &str, cfg: &SuiteConfig, checks: Vec<Check>) -> SuiteReport {
    SuiteReport::new(name, cfg, checks)
}

fn run_one(name: &str, cfg: &SuiteConfig) -> SuiteReport {
    let checks = match name {
        "counterexample" => counterexample(cfg),
        "roundtrip" => roundtrip(cfg),
        "generic-char" => generic_char(cfg),
        "qc-groupoid" => qc_groupoid(cfg),
        "eq2-count" => eq2_count(),
        "taylor-coend" => taylor_coend(cfg),
        "prop3" => prop3(),
        "prop4" => prop4(),
        "qpb-preserve" => qpb_preserve(cfg),
        "burnside" => burnside(cfg),
        _ => unreachable!("checked by run_suite"),
    };
    SuiteReport::new(name, cfg, checks)
}

fn case_rng(seed: u64, stream: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(i as u128 * 1024);
    rng
}

// counterexample

pub fn counterexample(cfg: &SuiteConfig) -> Vec<Check> {
    counterexample_checks(check_counterexample(cfg.probe_bound.min(4)))
}

/// Report lines for a counterexample run, however it was constructed.
pub fn counterexample_checks(r: Result<CounterexampleReport, GenericError>) -> Vec<Check> {
    let r = match r {
        Ok(r) => r,
        Err(e) => return vec![check("construction", false, e.to_string())],
    };
    let verdict = if r.quasi_pullback { "quasi-pullback" } else { "not quasi-pullback" };
    vec![
        check("square commutes", r.commutes, "⟨φ⟩ is natural along y(bot) -> y(top)"),
        check(
            "square verdict",
            !r.quasi_pullback,
            format!("{verdict}; {}", r.witness.as_deref().unwrap_or("no missed element")),
        ),
        check(
            "extraction refused",
            r.extraction_refused,
            r.extraction_error.clone().unwrap_or_else(|| "extraction succeeded".into()),
        ),
        check(
            "identity is quasi-cartesian",
            r.identity_quasi_cartesian,
            "id on ⟨P⟩ over the arrow category",
        ),
        check(
            "discrete control",
            r.discrete_quasi_cartesian,
            "same construction over the discrete category is quasi-cartesian",
        ),
    ]
}

// random species pairs

pub struct QcCase {
    pub index: usize,
    pub base: usize,
    pub p: Arc<Species>,
    pub q: Arc<Species>,
    pub phi: SpeciesNat,
}

/// The seeded cases shared by `qc-groupoid` and `roundtrip`: a random `P`,
/// a `Q` that is either `P + R` or independent, and a random `φ: P ⇒ Q`.
pub fn qc_cases(cfg: &SuiteConfig) -> (Vec<Arc<FinCat>>, Vec<QcCase>) {
    let bases = small_groupoids();
    let cases = (0..cfg.qc_cases)
        .map(|i| {
            let mut rng = case_rng(cfg.seed, 1, i);
            let b = i % bases.len();
            let g = &bases[b];
            let n = cfg.truncation;
            let p = Arc::new(random_species(&mut rng, format!("P{i}"), g, g, n, 3));
            let extend = |rng: &mut ChaCha8Rng| {
                let r = random_species(rng, format!("R{i}"), g, g, n, 2);
                Arc::new(Species::sum(&[&p, &r]).expect("same bases").with_name(format!("Q{i}")))
            };
            let mut q = if rng.gen_bool(0.5) {
                extend(&mut rng)
            } else {
                Arc::new(random_species(&mut rng, format!("Q{i}"), g, g, n, 3))
            };
            let mut homs = p.homs(&q, 256);
            if homs.is_empty() {
                q = extend(&mut rng);
                homs = p.homs(&q, 256);
            }
            let phi = homs.choose(&mut rng).expect("P embeds in P + R").clone();
            QcCase {
                index: i,
                base: b,
                p,
                q,
                phi,
            }
        })
        .collect();
    (bases, cases)
}

fn probe_families(bases: &[Arc<FinCat>], cfg: &SuiteConfig) -> Vec<ProbeFamily> {
    bases
        .iter()
        .map(|g| ProbeFamily::new(g.clone(), cfg.probe_bound, cfg.truncation + 1))
        .collect()
}

fn case_label(c: &QcCase, bases: &[Arc<FinCat>]) -> String {
    format!("case {} over {}", c.index, bases[c.base].name())
}

pub fn qc_groupoid(cfg: &SuiteConfig) -> Vec<Check> {
    let (bases, cases) = qc_cases(cfg);
    let probes = probe_families(&bases, cfg);
    let mut natural = Tally::default();
    let mut qc = Tally::default();
    for c in &cases {
        let label = || case_label(c, &bases);
        match NatFamily::from_lan_nat(&c.phi, &probes[c.base]) {
            Ok(psi) => {
                natural.record(true, label);
                qc.record_result(is_quasi_cartesian(&psi), label);
            }
            Err(e) => {
                natural.record(false, || format!("{}: {e}", label()));
                qc.record(false, label);
            }
        }
    }
    let probe_counts: Vec<String> = bases.iter().zip(&probes).map(|(g, p)| format!("{}:{}", g.name(), p.len())).collect();
    vec![
        check(
            "probe families",
            true,
            format!("M = {}, probes per base {}", cfg.probe_bound, probe_counts.join(" ")),
        ),
        natural.into_check("⟨φ⟩ natural on probes", "cases"),
        qc.into_check("⟨φ⟩ quasi-cartesian", "cases"),
    ]
}

pub fn roundtrip(cfg: &SuiteConfig) -> Vec<Check> {
    let (bases, cases) = qc_cases(cfg);
    let probes = probe_families(&bases, cfg);
    let mut coeff = Tally::default();
    let mut eta = Tally::default();
    let mut extract = Tally::default();
    for c in &cases {
        let label = || case_label(c, &bases);
        for s in [&c.p, &c.q] {
            match coefficients_of(s, &probes[c.base]) {
                Ok(co) => {
                    coeff.record(co.iso.is_iso() && s.is_isomorphic(&co.fcirc), || {
                        format!("{}: {}° ≇ {}", label(), s.name(), s.name())
                    });
                    eta.record(co.eta.mono && co.eta.epi, || {
                        format!("{}: η fails at probes {:?}", label(), co.eta.failures)
                    });
                }
                Err(e) => {
                    coeff.record(false, || format!("{}: {e}", label()));
                    eta.record(false, label);
                }
            }
        }
        let r = NatFamily::from_lan_nat(&c.phi, &probes[c.base])
            .and_then(|psi| extract_coefficient_nat(&psi))
            .map(|phi| phi == c.phi);
        extract.record_result(r, label);
    }
    vec![
        coeff.into_check("coefficients recover the species", "species"),
        eta.into_check("η mono and epi at every probe", "species"),
        extract.into_check("extraction recovers φ", "cases"),
    ]
}

// generic and minimal elements

pub fn generic_char(cfg: &SuiteConfig) -> Vec<Check> {
    let bases = small_groupoids();
    let probes = probe_families(&bases, cfg);
    let mut generic = Tally::default();
    let mut minimal = Tally::default();
    let mut implies = Tally::default();
    let mut engendered = Tally::default();
    let mut classes = 0usize;
    let mut generic_count = 0usize;
    for i in 0..cfg.generic_species {
        let mut rng = case_rng(cfg.seed, 2, i);
        let b = i % bases.len();
        let g = &bases[b];
        let p = Arc::new(random_species(&mut rng, format!("G{i}"), g, g, cfg.truncation, 3));
        let ctx = match LanOnProbes::new(p.clone(), &probes[b]) {
            Ok(ctx) => ctx,
            Err(e) => {
                generic.record(false, || format!("species {i}: {e}"));
                continue;
            }
        };
        for x in 0..probes[b].len() {
            let v = ctx.value(x);
            let label = || format!("species {i} over {} at probe {x}", g.name());
            let wg = generic_classes(&p, v, Mode::Whitebox);
            let wm = minimal_classes(&p, v, Mode::Whitebox);
            let (Ok(wg), Ok(wm)) = (wg, wm) else {
                generic.record(false, label);
                continue;
            };
            generic.record(bounded_generic(&ctx, v) == wg, label);
            minimal.record(bounded_minimal(&ctx, v) == wm, label);
            for (c, (gs, ms)) in wg.iter().zip(&wm).enumerate() {
                for (k, (&gk, &mk)) in gs.iter().zip(ms).enumerate() {
                    classes += 1;
                    generic_count += usize::from(gk);
                    implies.record(!gk || mk, || format!("{} class {k} at {}", label(), g.object_name(c)));
                    engendered.record_result(engenders(&p, v, c, k), label);
                }
            }
        }
    }
    vec![
        generic.into_check("bounded generic = x iso", "probe values"),
        minimal.into_check("bounded minimal = x epi", "probe values"),
        implies.into_check("generic implies minimal", "classes"),
        engendered.into_check("p ⊗ id engenders p ⊗ x", "classes"),
        check(
            "coverage",
            generic_count > 0 && generic_count < classes,
            format!("{} species, {classes} classes, {generic_count} generic", cfg.generic_species),
        ),
    ]
}

/// `p ⊗ x = ⟨P⟩x(p ⊗ id)`.
fn engenders(p: &Species, v: &crate::species::LanValue, b: usize, k: usize) -> Result<bool, GenericError> {
    let (w, c, _) = v.representative(b, k);
    let (sum, xmap) = representative_map(p, v, b, k)?;
    let vs = lan_eval(p, sum.presheaf())?;
    let gens: Vec<usize> = (0..sum.word().len()).map(|i| sum.generator(i)).collect();
    let id = vs.class_of_triple(b, w, c, &gens);
    Ok(map_class(&vs, v, &xmap, b, id) == k)
}

// sums of representables

fn test_bases() -> Vec<Arc<FinCat>> {
    vec![
        Arc::new(FinCat::terminal()),
        Arc::new(FinCat::cyclic(2)),
        Arc::new(FinCat::codiscrete(2)),
        Arc::new(FinCat::arrow()),
    ]
}

fn sums(base: &Arc<FinCat>, max_len: usize) -> Vec<TaggedSum> {
    enumerate_words(base, max_len)
        .iter()
        .map(|w| TaggedSum::new(base, w).expect("word over base"))
        .collect()
}

/// `Σ_φ Π_i |hom(A_i, B_φi)|` over all functions `φ: |A| -> |B|`.
fn eq2_oracle(base: &FinCat, a: &Word, b: &Word) -> usize {
    fn go(base: &FinCat, a: &[usize], b: &[usize]) -> usize {
        match a.split_first() {
            None => 1,
            Some((&ai, rest)) => b.iter().map(|&bj| base.hom(ai, bj).len() * go(base, rest, b)).sum(),
        }
    }
    go(base, a.letters(), b.letters())
}

pub fn eq2_count() -> Vec<Check> {
    let mut out = Vec::new();
    for base in test_bases().into_iter().take(3) {
        let ss = sums(&base, 3);
        let mut t = Tally::default();
        for sa in &ss {
            for sb in &ss {
                let r = hom_enumerate(sa.presheaf(), sb.presheaf())
                    .map(|h| h.len() == eq2_oracle(&base, sa.word(), sb.word()));
                t.record_result(r, || format!("{} -> {}", sa.word().display(&base), sb.word().display(&base)));
            }
        }
        out.push(t.into_check(&format!("|hom(S A, S B)| over {}", base.name()), "word pairs"));
    }
    let t = Arc::new(FinCat::terminal());
    let a = TaggedSum::new(&t, &Word(vec![0; 2])).expect("word");
    let b = TaggedSum::new(&t, &Word(vec![0; 3])).expect("word");
    let n = hom_enumerate(a.presheaf(), b.presheaf()).map(|h| h.len()).unwrap_or(0);
    out.push(check("terminal, |A| = 2, |B| = 3", n == 9, format!("{n} maps")));
    out
}

pub fn prop3() -> Vec<Check> {
    let mut out = Vec::new();
    for base in test_bases() {
        let ss = sums(&base, 3);
        let mut faithful = Tally::default();
        let mut conservative = Tally::default();
        let mut lifts = Tally::default();
        for sa in &ss {
            for sb in &ss {
                let label = || format!("{} -> {}", sa.word().display(&base), sb.word().display(&base));
                let mut seen = HashSet::new();
                for gamma in enumerate_homs(&base, sa.word(), sb.word()) {
                    let Ok(f) = sum_functor_mor(&gamma, sa, sb) else {
                        faithful.record(false, label);
                        continue;
                    };
                    faithful.record(seen.insert(f.components().to_vec()), label);
                    conservative.record(!f.is_iso() || gamma.inverse(&base).is_some(), label);
                    lifts.record_result(lift_to_freesmc(&f, sa, sb).map(|l| l.as_ref() == Some(&gamma)), label);
                }
            }
        }
        let name = base.name().to_string();
        out.push(faithful.into_check(&format!("S faithful over {name}"), "morphisms"));
        out.push(conservative.into_check(&format!("S conservative over {name}"), "morphisms"));
        out.push(lifts.into_check(&format!("S γ lifts back to γ over {name}"), "morphisms"));
    }
    out
}

pub fn prop4() -> Vec<Check> {
    let mut out = Vec::new();
    for base in test_bases() {
        let ss = sums(&base, 3);
        let mut epi = Tally::default();
        let mut mono = Tally::default();
        for sa in &ss {
            for sb in &ss {
                let label = || format!("{} -> {}", sa.word().display(&base), sb.word().display(&base));
                let Ok(homs) = hom_enumerate(sa.presheaf(), sb.presheaf()) else {
                    epi.record(false, label);
                    continue;
                };
                for f in homs {
                    let Ok(phi) = underlying_function(&f, sa, sb) else {
                        epi.record(false, label);
                        continue;
                    };
                    let flags = IndexFlags::of(&phi, sb.word().len());
                    epi.record(!f.is_epi() || flags.surjective, label);
                    if base.is_groupoid() {
                        mono.record(!f.is_mono() || flags.injective, label);
                    }
                }
            }
        }
        let name = base.name().to_string();
        out.push(epi.into_check(&format!("epi ⇒ surjective on indices over {name}"), "maps"));
        if base.is_groupoid() {
            out.push(mono.into_check(&format!("mono ⇒ injective on indices over {name}"), "maps"));
        }
    }
    out
}

// Taylor development

pub fn taylor_coend(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let bases = [
        Arc::new(FinCat::terminal()),
        Arc::new(FinCat::cyclic(2)),
        Arc::new(FinCat::codiscrete(2)),
        Arc::new(FinCat::arrow()),
    ];
    for (bi, g) in bases.iter().enumerate() {
        let mut species = vec![Species::terminal(g.clone(), g.clone(), cfg.truncation)];
        if g.is_groupoid() {
            let mut rng = case_rng(cfg.seed, 3, bi);
            species.extend((0..4).map(|i| random_species(&mut rng, format!("T{i}"), g, g, cfg.truncation, 3)));
        } else {
            species.push(Species::representable(g.clone(), &Word::single(g.num_objects() - 1), cfg.truncation).expect("word"));
        }
        let xs = presheaves_up_to_iso(g, cfg.size_cap);
        let mut t = Tally::default();
        for p in &species {
            for (xi, x) in xs.iter().enumerate() {
                let r = lan_eval(p, x)
                    .map_err(|e| e.to_string())
                    .and_then(|v| taylor_eval(p, x, &v).map_err(|e| e.to_string()).map(|tv| tv.to_lan.is_iso()));
                t.record_result(r, || format!("{} at presheaf {xi}", p.name()));
            }
        }
        out.push(t.into_check(&format!("Taylor = coend over {}", g.name()), "evaluations"));
    }
    let l = catalog(CatalogName::L, 2).to_species();
    let t = Arc::new(FinCat::terminal());
    let two = Arc::new(Presheaf::from_action(t, 2, |_, x| x).expect("set"));
    let counts = lan_eval(&l, &two).and_then(|v| {
        let tv = taylor_eval(&l, &two, &v)?;
        Ok((v.num_classes(0), tv.classes[0].len()))
    });
    let ok = matches!(counts, Ok((7, 7)));
    out.push(check("linear orders at k = 2, N = 2", ok, format!("1 + 2 + 4 = 7; got {counts:?}")));
    out
}

// quasi-pullback preservation

/// Pullback cones and their precompositions with epis, for every binary
/// cospan between probes of size at most `binary` and every three-legged
/// cospan between probes of size at most `wide`. Legs are taken up to
/// automorphisms of their domains and legs are unordered.
pub fn qpb_probes(base: &Arc<FinCat>, binary: usize, wide: usize) -> Vec<QpbProbe> {
    let fam = ProbeFamily::new(base.clone(), binary.max(wide), 0);
    let sizes: Vec<usize> = fam.members().iter().map(|x| x.total_size()).collect();
    let mut out = Vec::new();
    for z in 0..fam.len() {
        for x1 in 0..fam.len() {
            for x2 in x1..fam.len() {
                if sizes[z].max(sizes[x1]).max(sizes[x2]) <= binary {
                    cospans_over(&fam, &[x1, x2], z, binary, &mut out);
                }
                if sizes[z].max(sizes[x1]).max(sizes[x2]) <= wide {
                    for x3 in (x2..fam.len()).filter(|&x3| sizes[x3] <= wide) {
                        cospans_over(&fam, &[x1, x2, x3], z, wide, &mut out);
                    }
                }
            }
        }
    }
    out
}

fn cospans_over(fam: &ProbeFamily, legs: &[usize], z: usize, bound: usize, out: &mut Vec<QpbProbe>) {
    let choices: Vec<&[usize]> = legs.iter().map(|&x| fam.reps_mod_dom(x, z)).collect();
    for pick in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
        let cospan: Vec<NatTrans> = legs.iter().zip(pick).map(|(&x, &k)| fam.homs(x, z)[k].clone()).collect();
        let pb = wide_pullback(&cospan).expect("shared codomain");
        for q in (0..fam.len()).filter(|&q| fam.member(q).total_size() <= bound) {
            let homs = hom_enumerate(fam.member(q), &pb.apex).expect("same base");
            for e in homs.into_iter().filter(NatTrans::is_epi) {
                let cone = pb.projections.iter().map(|pr| e.then(pr).expect("composable")).collect();
                out.push(QpbProbe {
                    cone,
                    cospan: cospan.clone(),
                });
            }
        }
        out.push(QpbProbe {
            cone: pb.projections,
            cospan,
        });
    }
}

pub fn qpb_preserve(cfg: &SuiteConfig) -> Vec<Check> {
    let binary = cfg.probe_bound.min(4);
    let wide = cfg.probe_bound.min(3);
    let bases = [
        Arc::new(FinCat::terminal()),
        Arc::new(FinCat::cyclic(2)),
        Arc::new(FinCat::discrete(2)),
        Arc::new(FinCat::codiscrete(2)),
    ];
    let mut out = Vec::new();
    for (bi, g) in bases.iter().enumerate() {
        let probes = qpb_probes(g, binary, wide);
        let mut rng = case_rng(cfg.seed, 4, bi);
        let mut species = vec![Species::terminal(g.clone(), g.clone(), cfg.truncation)];
        species.extend((0..3).map(|i| random_species(&mut rng, format!("W{i}"), g, g, cfg.truncation, 3)));
        let mut t = Tally::default();
        for p in &species {
            match preserves_quasi_pullbacks(p, &probes) {
                Ok(r) => {
                    for &f in &r.failures {
                        t.record(false, || format!("{} at probe {f}", p.name()));
                    }
                    for _ in r.failures.len()..r.checked {
                        t.record(true, String::new);
                    }
                }
                Err(e) => t.record(false, || format!("{}: {e}", p.name())),
            }
        }
        out.push(t.into_check(
            &format!("⟨P⟩ preserves quasi-pullbacks over {}", g.name()),
            &format!("cones ({} per species)", probes.len()),
        ));
    }
    out
}

// classical counts

fn partitions(n: usize) -> usize {
    fn go(n: usize, max: usize) -> usize {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| go(n - k, k)).sum()
    }
    go(n, n)
}

/// Nondecreasing sequences of length `n` over `k` letters.
fn multisets(n: usize, k: usize) -> usize {
    if n == 0 {
        return 1;
    }
    (0..n).map(|_| 0..k).multi_cartesian_product().filter(|s| s.windows(2).all(|w| w[0] <= w[1])).count()
}

pub fn burnside(cfg: &SuiteConfig) -> Vec<Check> {
    let top = cfg.size_cap.min(6);
    let n = cfg.truncation;
    let names = [CatalogName::E, CatalogName::X, CatalogName::L, CatalogName::C, CatalogName::Perm];
    let mut out = Vec::new();
    let e = catalog(CatalogName::E, top);
    let eu = count_unlabelled(&e);
    out.push(check("E unlabelled", eu.iter().all(|&c| c == 1), format!("{eu:?}")));
    let el = count_labelled(&catalog(CatalogName::E, n), 2);
    let oracle: Vec<usize> = (0..=n).map(|m| multisets(m, 2)).collect();
    out.push(check(
        "E labelled at k = 2",
        el == oracle,
        format!("{el:?}, multisets {oracle:?}"),
    ));
    let pu = count_unlabelled(&catalog(CatalogName::Perm, top));
    let oracle: Vec<usize> = (0..=top).map(partitions).collect();
    out.push(check("Perm unlabelled", pu == oracle, format!("{pu:?}, partitions {oracle:?}")));
    let mut t = Tally::default();
    for name in names {
        let p = catalog(name, top);
        t.record(burnside_unlabelled(&p) == count_unlabelled(&p), || name.to_string());
    }
    out.push(t.into_check(&format!("Burnside average = orbit count up to degree {top}"), "species"));
    let mut t = Tally::default();
    let one = Arc::new(FinCat::terminal());
    for name in names {
        let p = catalog(name, 3);
        let s = p.to_species();
        for k in 0..=3 {
            let x = Arc::new(Presheaf::from_action(one.clone(), k, |_, x| x).expect("set"));
            let by_degree = lan_eval(&s, &x).map(|v| {
                let mut c = vec![0; 4];
                for cl in 0..v.num_classes(0) {
                    c[v.element(0, cl).word.len()] += 1;
                }
                c
            });
            t.record(by_degree.as_ref().ok() == Some(&count_labelled(&p, k)), || format!("{name} at k = {k}"));
        }
    }
    out.push(t.into_check("labelled counts = ⟨P⟩X_k by degree", "evaluations"));
    let l = LinearSpecies {
        name: "L2".into(),
        sizes: vec![1, 2, 3],
    };
    let free = free_symmetric(&l);
    let mut t = Tally::default();
    for k in 0usize..=3 {
        let expected: Vec<usize> = (0..3).map(|m| l.sizes[m] * k.pow(m as u32)).collect();
        t.record(count_labelled(&free, k) == expected, || format!("k = {k}"));
    }
    out.push(t.into_check("free species count |L_n|·kⁿ", "label counts"));
    out
}
