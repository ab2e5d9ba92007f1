//! Generic and minimal elements of `⟨P⟩X`.
//!
//! `ξ ∈ FX(b)` is generic when every cospan `f: X -> Z <- Y: g` and
//! `υ ∈ FY(b)` with `Ff(ξ) = Fg(υ)` admit `h: X -> Y` with `h;g = f` and
//! `Fh(ξ) = υ`; it is minimal when `Ff(υ) = ξ` forces `f` epi.
//!
//! The bounded checks only visit maps up to automorphisms of probes. Every
//! condition is invariant under them: a cospan `(f;τ, g;τ)` is tested by
//! `(f, g)`, and `(f, σ;g, υ)` by `(f, g, Fσ(υ))` with `h` replaced by `h;σ⁻¹`.

use std::sync::Arc;

use crate::presheaf::{hom_enumerate, hom_enumerate_restricted, NatTrans, Presheaf, TaggedSum};
use crate::species::{lan_map, map_class, LanValue, Species};

use super::probe::orbit_reps;
use super::{member_position, GenericError, LanOnProbes, ProbeFamily};

#[derive(Clone, Copy, Debug)]
pub enum Mode<'a> {
    Whitebox,
    Bounded(&'a ProbeFamily),
}

/// The family map `x: S A -> X` of the canonical representative of class `k`
/// at `b`.
pub fn representative_map(p: &Species, v: &LanValue, b: usize, k: usize) -> Result<(TaggedSum, NatTrans), GenericError> {
    if b >= v.presheaf().sizes().len() || k >= v.num_classes(b) {
        return Err(GenericError::ClassOutOfRange { object: b, class: k });
    }
    let e = v.element(b, k);
    let s = TaggedSum::new(p.dom(), &e.word)?;
    let x = s.family_map(&e.family, v.input())?;
    Ok((s, x))
}

fn whitebox(p: &Species, v: &LanValue, test: fn(&NatTrans) -> bool) -> Result<Vec<Vec<bool>>, GenericError> {
    if !p.dom().is_groupoid() {
        return Err(GenericError::NotGroupoid);
    }
    (0..v.presheaf().sizes().len())
        .map(|b| {
            (0..v.num_classes(b))
                .map(|k| Ok(test(&representative_map(p, v, b, k)?.1)))
                .collect()
        })
        .collect()
}

fn check_bounded(p: &Species, probes: &ProbeFamily) -> Result<(), GenericError> {
    if crate::presheaf::same_base(p.dom(), probes.base()) {
        Ok(())
    } else {
        Err(GenericError::BaseMismatch)
    }
}

/// Verdicts for every class of `⟨P⟩X`, indexed `[b][k]`.
pub fn generic_classes(p: &Species, v: &LanValue, mode: Mode<'_>) -> Result<Vec<Vec<bool>>, GenericError> {
    match mode {
        Mode::Whitebox => whitebox(p, v, NatTrans::is_iso),
        Mode::Bounded(probes) => {
            check_bounded(p, probes)?;
            let ctx = LanOnProbes::new(Arc::new(p.clone()), probes)?;
            Ok(bounded_generic(&ctx, v))
        }
    }
}

pub fn minimal_classes(p: &Species, v: &LanValue, mode: Mode<'_>) -> Result<Vec<Vec<bool>>, GenericError> {
    match mode {
        Mode::Whitebox => whitebox(p, v, NatTrans::is_epi),
        Mode::Bounded(probes) => {
            check_bounded(p, probes)?;
            let ctx = LanOnProbes::new(Arc::new(p.clone()), probes)?;
            Ok(bounded_minimal(&ctx, v))
        }
    }
}

pub fn is_generic(p: &Species, v: &LanValue, b: usize, k: usize, mode: Mode<'_>) -> Result<bool, GenericError> {
    if let Mode::Whitebox = mode {
        if !p.dom().is_groupoid() {
            return Err(GenericError::NotGroupoid);
        }
        return Ok(representative_map(p, v, b, k)?.1.is_iso());
    }
    representative_map(p, v, b, k)?;
    Ok(generic_classes(p, v, mode)?[b][k])
}

pub fn is_minimal(p: &Species, v: &LanValue, b: usize, k: usize, mode: Mode<'_>) -> Result<bool, GenericError> {
    if let Mode::Whitebox = mode {
        if !p.dom().is_groupoid() {
            return Err(GenericError::NotGroupoid);
        }
        return Ok(representative_map(p, v, b, k)?.1.is_epi());
    }
    representative_map(p, v, b, k)?;
    Ok(minimal_classes(p, v, mode)?[b][k])
}

/// `hom(X, member j)`, from the cache when `X` is a member.
fn homs_out<'a>(probes: &'a ProbeFamily, at: Option<usize>, x: &Arc<Presheaf>, j: usize) -> std::borrow::Cow<'a, [NatTrans]> {
    match at {
        Some(i) => std::borrow::Cow::Borrowed(probes.homs(i, j)),
        None => std::borrow::Cow::Owned(hom_enumerate(x, probes.member(j)).expect("same base")),
    }
}

fn homs_in<'a>(probes: &'a ProbeFamily, at: Option<usize>, x: &Arc<Presheaf>, j: usize) -> std::borrow::Cow<'a, [NatTrans]> {
    match at {
        Some(i) => std::borrow::Cow::Borrowed(probes.homs(j, i)),
        None => std::borrow::Cow::Owned(hom_enumerate(probes.member(j), x).expect("same base")),
    }
}

/// Bounded genericity for all classes of `v` at once.
///
/// Probes isomorphic to `X` come first and isomorphisms `f` first among
/// them, so that non-generic classes are refuted by `Y ≅ S A` early and only
/// generic candidates reach the full sweep.
pub fn bounded_generic(ctx: &LanOnProbes<'_>, v: &LanValue) -> Vec<Vec<bool>> {
    let probes = ctx.probes();
    let x = v.input();
    let nb = v.presheaf().sizes().len();
    let mut alive: Vec<Vec<bool>> = (0..nb).map(|b| vec![true; v.num_classes(b)]).collect();
    let mut remaining: usize = alive.iter().map(Vec::len).sum();
    if remaining == 0 {
        return alive;
    }
    let at = member_position(probes, x);
    let mut zs: Vec<usize> = (0..probes.len()).collect();
    zs.sort_by_key(|&z| {
        let m = probes.member(z);
        !(m.sizes() == x.sizes() && x.is_isomorphic(m))
    });
    for z in zs {
        let fz = homs_out(probes, at, x, z);
        let mut freps = orbit_reps(&fz, &[], probes.automorphism_generators(z));
        freps.sort_by_key(|&i| !fz[i].is_iso());
        let vz = ctx.value(z);
        for fi in freps {
            let f = &fz[fi];
            let fx: Vec<Vec<usize>> = (0..nb)
                .map(|b| (0..v.num_classes(b)).map(|k| map_class(v, vz, f, b, k)).collect())
                .collect();
            for y in 0..probes.len() {
                let vy = ctx.value(y);
                let gs = probes.homs(y, z);
                for &gi in probes.reps_mod_dom(y, z) {
                    let g = &gs[gi];
                    let fg = ctx.map_at(y, z, gi);
                    let mut sections: Option<Vec<NatTrans>> = None;
                    for b in 0..nb {
                        for k in 0..alive[b].len() {
                            if !alive[b][k] {
                                continue;
                            }
                            let target = fx[b][k];
                            let ys: Vec<usize> = (0..vy.num_classes(b)).filter(|&u| fg.apply(b, u) == target).collect();
                            if ys.is_empty() {
                                continue;
                            }
                            let hs = sections.get_or_insert_with(|| {
                                hom_enumerate_restricted(x, probes.member(y), &|c, e, t| g.apply(c, t) == f.apply(c, e))
                                    .expect("same base")
                            });
                            let mut hit = vec![false; vy.num_classes(b)];
                            for h in hs.iter() {
                                hit[map_class(v, vy, h, b, k)] = true;
                            }
                            if ys.iter().any(|&u| !hit[u]) {
                                alive[b][k] = false;
                                remaining -= 1;
                            }
                        }
                    }
                    if remaining == 0 {
                        return alive;
                    }
                }
            }
        }
    }
    alive
}

/// Bounded minimality: a class is refuted when it is `Ff(υ)` for some
/// non-epi `f: Y -> X`.
pub fn bounded_minimal(ctx: &LanOnProbes<'_>, v: &LanValue) -> Vec<Vec<bool>> {
    let probes = ctx.probes();
    let x = v.input();
    let nb = v.presheaf().sizes().len();
    let mut minimal: Vec<Vec<bool>> = (0..nb).map(|b| vec![true; v.num_classes(b)]).collect();
    let at = member_position(probes, x);
    for y in 0..probes.len() {
        let fs = homs_in(probes, at, x, y);
        let reps = match at {
            Some(i) => probes.reps_mod_dom(y, i).to_vec(),
            None => orbit_reps(&fs, probes.automorphism_generators(y), &[]),
        };
        for fi in reps {
            let f = &fs[fi];
            if f.is_epi() {
                continue;
            }
            let ff = lan_map(ctx.value(y), v, f).expect("probe morphism");
            for b in 0..nb {
                for &k in ff.component(b) {
                    minimal[b][k] = false;
                }
            }
        }
    }
    minimal
}
