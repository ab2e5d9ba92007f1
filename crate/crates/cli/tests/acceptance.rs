//! The acceptance criteria, one PASS/FAIL line each. Criteria run in
//! parallel; the process fails if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::thread;

use anafun::classical::{burnside_unlabelled, catalog, count_labelled, count_unlabelled, CatalogName};
use anafun::fincat::FinCat;
use anafun::freesmc::{enumerate_words, permutations};
use anafun::generic::{compose_analytic, ProbeFamily};
use anafun::presheaf::{hom_enumerate, Presheaf, TaggedSum};
use anafun::random::small_groupoids;
use anafun::species::{lan_eval, Species};
use anafun::suites::{run_suite, SuiteConfig, SuiteReport};

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        summary: summary.into(),
    }
}

fn suite(name: &str, cfg: &SuiteConfig) -> SuiteReport {
    run_suite(name, cfg).expect("known suite").remove(0)
}

fn failing_checks(r: &SuiteReport) -> String {
    let bad: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    if bad.is_empty() {
        format!("{} checks", r.checks.len())
    } else {
        bad.join("; ")
    }
}

fn detail<'a>(r: &'a SuiteReport, name: &str) -> &'a str {
    r.checks.iter().find(|c| c.name == name).map_or("", |c| c.detail.as_str())
}

fn counterexample() -> Outcome {
    let r = suite("counterexample", &SuiteConfig::default());
    let verdict = detail(&r, "square verdict");
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/scat-counterexample.pkg");
    let mut out = Vec::new();
    let code = anafun_cli::run(
        ["anafun", "-w", fixture.to_str().unwrap(), "suite", "counterexample"],
        &mut out,
        &mut Vec::new(),
    );
    let text = String::from_utf8(out).unwrap();
    let ok = r.passed && verdict.starts_with("not quasi-pullback") && code == 0 && text.contains("not quasi-pullback");
    outcome(ok, format!("{verdict}; fixture run exit {code}"))
}

fn qc_groupoid() -> Outcome {
    let cfg = SuiteConfig::default();
    let small = small_groupoids().iter().all(|g| g.is_groupoid() && g.num_objects() <= 2 && g.num_morphisms() <= 4);
    let sized = cfg.qc_cases >= 200 && cfg.probe_bound == 6 && cfg.truncation <= 2;
    let r = suite("qc-groupoid", &cfg);
    outcome(
        small && sized && r.passed,
        format!("{} at M = {}; {}", detail(&r, "⟨φ⟩ quasi-cartesian"), cfg.probe_bound, failing_checks(&r)),
    )
}

fn roundtrip() -> Outcome {
    let r = suite("roundtrip", &SuiteConfig::default());
    outcome(
        r.passed,
        format!(
            "coefficients {}; η {}; extraction {}",
            detail(&r, "coefficients recover the species"),
            detail(&r, "η mono and epi at every probe"),
            detail(&r, "extraction recovers φ")
        ),
    )
}

fn generic_char() -> Outcome {
    let cfg = SuiteConfig::default();
    let r = suite("generic-char", &cfg);
    outcome(
        r.passed && cfg.generic_species >= 50 && cfg.probe_bound == 6,
        format!("{}; {}", detail(&r, "coverage"), failing_checks(&r)),
    )
}

fn sum_functor() -> Outcome {
    let cfg = SuiteConfig::default();
    let (p3, p4) = (suite("prop3", &cfg), suite("prop4", &cfg));
    outcome(
        p3.passed && p4.passed,
        format!("faithful/conservative: {}; indices: {}", failing_checks(&p3), failing_checks(&p4)),
    )
}

/// `Σ_φ Π_i |hom(A_i, B_φi)|` by recursion over the letters of `A`.
fn eq2_oracle(base: &FinCat, a: &[usize], b: &[usize]) -> usize {
    match a.split_first() {
        None => 1,
        Some((&a0, rest)) => b.iter().map(|&bj| base.hom(a0, bj).len() * eq2_oracle(base, rest, b)).sum(),
    }
}

fn eq2_count() -> Outcome {
    let r = suite("eq2-count", &SuiteConfig::default());
    let mut pairs = 0;
    let mut bad = Vec::new();
    for g in [FinCat::terminal(), FinCat::cyclic(2), FinCat::codiscrete(2)] {
        let g = Arc::new(g);
        let words = enumerate_words(&g, 3);
        for a in &words {
            for b in &words {
                let (sa, sb) = (TaggedSum::new(&g, a).unwrap(), TaggedSum::new(&g, b).unwrap());
                let n = hom_enumerate(sa.presheaf(), sb.presheaf()).unwrap().len();
                pairs += 1;
                if n != eq2_oracle(&g, a.letters(), b.letters()) {
                    bad.push(format!("{} {} -> {}", g.name(), a.display(&g), b.display(&g)));
                }
            }
        }
    }
    let nine = eq2_oracle(&FinCat::terminal(), &[0, 0], &[0, 0, 0]);
    outcome(
        r.passed && bad.is_empty() && nine == 9,
        format!("{pairs} word pairs against the oracle, {} mismatches; terminal 2 -> 3 gives {nine}", bad.len()),
    )
}

fn taylor_coend() -> Outcome {
    let r = suite("taylor-coend", &SuiteConfig::default());
    // labelled linear orders on two labels: sequences of length ≤ 2
    let oracle: usize = (0..=2u32).map(|n| 2usize.pow(n)).sum();
    let one = Arc::new(FinCat::terminal());
    let two = Arc::new(Presheaf::from_action(one, 2, |_, x| x).unwrap());
    let classes = lan_eval(&catalog(CatalogName::L, 2).to_species(), &two).unwrap().num_classes(0);
    outcome(
        r.passed && classes == oracle && oracle == 7,
        format!("linear orders {classes} = {oracle}; {}", failing_checks(&r)),
    )
}

fn qpb_preserve() -> Outcome {
    let r = suite("qpb-preserve", &SuiteConfig::default());
    let cones: Vec<&str> = r.checks.iter().map(|c| c.detail.as_str()).collect();
    outcome(r.passed, cones.join("; "))
}

/// Orbits of `k`-colourings of `n` points: sorted sequences.
fn multisets_oracle(n: usize, k: usize) -> usize {
    let mut seen = BTreeSet::new();
    let mut seq = vec![0; n];
    loop {
        let mut s = seq.clone();
        s.sort();
        seen.insert(s);
        let mut i = 0;
        loop {
            if i == n {
                return seen.len();
            }
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Conjugacy classes of `𝔖_n` as distinct cycle types.
fn cycle_types(n: usize) -> usize {
    let mut types = BTreeSet::new();
    for p in permutations(n) {
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for s in 0..n {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = p[i];
                len += 1;
            }
            if len > 0 {
                lens.push(len);
            }
        }
        lens.sort();
        types.insert(lens);
    }
    types.len()
}

fn classical_counts() -> Outcome {
    let r = suite("burnside", &SuiteConfig::default());
    let e_unl = count_unlabelled(&catalog(CatalogName::E, 6));
    let e_lab = count_labelled(&catalog(CatalogName::E, 2), 2);
    let e_oracle: Vec<usize> = (0..=2).map(|n| multisets_oracle(n, 2)).collect();
    let perm = count_unlabelled(&catalog(CatalogName::Perm, 3));
    let perm_oracle: Vec<usize> = (0..=3).map(cycle_types).collect();
    let burnside = [CatalogName::E, CatalogName::X, CatalogName::L, CatalogName::C, CatalogName::Perm]
        .iter()
        .all(|&c| {
            let p = catalog(c, 5);
            burnside_unlabelled(&p) == count_unlabelled(&p)
        });
    let ok = r.passed
        && e_unl.iter().all(|&c| c == 1)
        && e_lab == e_oracle
        && e_lab == [1, 2, 3]
        && perm == perm_oracle
        && perm == [1, 1, 2, 3]
        && burnside;
    outcome(
        ok,
        format!("E unlabelled {e_unl:?}; E labelled@2 {e_lab:?} (oracle {e_oracle:?}); Perm {perm:?} (oracle {perm_oracle:?}); Burnside {burnside}"),
    )
}

/// Multisets of at most two block sizes from `0..=2`, by total.
fn composite_oracle() -> Vec<usize> {
    let mut out = vec![0; 5];
    out[0] += 1;
    for a in 0..=2 {
        out[a] += 1;
        for b in a..=2 {
            out[a + b] += 1;
        }
    }
    out
}

fn composition() -> Outcome {
    let cfg = SuiteConfig::default();
    let t = Arc::new(FinCat::terminal());
    let probes = ProbeFamily::new(t.clone(), cfg.probe_bound, 0);
    let e = Arc::new(catalog(CatalogName::E, 2).to_species());
    let r = compose_analytic(&e, &e, 4, &probes).unwrap();
    let one = Arc::new(Presheaf::terminal(t.clone()));
    let v = lan_eval(&r.species, &one).unwrap();
    let mut counts = vec![0; 5];
    for k in 0..v.num_classes(0) {
        counts[v.element(0, k).word.len()] += 1;
    }
    let oracle = composite_oracle();
    let mut units = true;
    for (g, p) in [
        (t.clone(), e.clone()),
        (Arc::new(FinCat::cyclic(2)), Arc::new(Species::terminal(Arc::new(FinCat::cyclic(2)), Arc::new(FinCat::cyclic(2)), 2))),
    ] {
        let probes = ProbeFamily::new(g.clone(), 4, 0);
        let id = Species::identity(g.clone(), 2);
        let left = compose_analytic(&id, &p, 2, &probes).unwrap();
        let right = compose_analytic(&p, &id, 2, &probes).unwrap();
        units &= p.is_isomorphic(&left.species) && p.is_isomorphic(&right.species);
    }
    outcome(
        r.certified == probes.len() && counts == oracle && units,
        format!("certified on {} of {} probes; unlabelled {counts:?} (oracle {oracle:?}); unit laws {units}", r.certified, probes.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("counterexample square is not a quasi-pullback", counterexample),
        ("quasi-cartesian over small groupoids", qc_groupoid),
        ("round trip through coefficients", roundtrip),
        ("generic and minimal characterizations", generic_char),
        ("sum functor laws", sum_functor),
        ("hom counts between sums", eq2_count),
        ("Taylor development equals the coend", taylor_coend),
        ("quasi-pullback preservation", qpb_preserve),
        ("classical counts", classical_counts),
        ("analytic composition", composition),
    ];
    let results: Vec<Outcome> = thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| s.spawn(move || panic::catch_unwind(AssertUnwindSafe(f))))
            .collect();
        handles
            .into_iter()
            .map(|h| match h.join().expect("joined") {
                Ok(o) => o,
                Err(e) => {
                    let msg = e
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    outcome(false, format!("panicked: {msg}"))
                }
            })
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), o)) in criteria.iter().zip(&results).enumerate() {
        println!("criterion {:>2} {}: {} ({})", i + 1, if o.passed { "PASS" } else { "FAIL" }, name, o.summary);
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
