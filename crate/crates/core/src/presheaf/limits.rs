//! Wide pullbacks, quasi-pullback detection and image factorization.
//! Everything is computed one object at a time.

use std::collections::HashMap;
use std::sync::Arc;

use super::{same_base, NatTrans, Presheaf, PresheafError};

#[derive(Clone, Debug)]
pub struct WidePullback {
    pub apex: Arc<Presheaf>,
    pub projections: Vec<NatTrans>,
    /// Per object, the tuples making up the apex, in lexicographic order.
    pub tuples: Vec<Vec<Vec<usize>>>,
}

fn check_cospan(cospan: &[NatTrans]) -> Result<(), PresheafError> {
    let first = cospan.first().ok_or(PresheafError::EmptyCospan)?;
    for leg in &cospan[1..] {
        if !same_base(leg.base(), first.base()) {
            return Err(PresheafError::BaseMismatch);
        }
        if !(Arc::ptr_eq(leg.cod(), first.cod()) || leg.cod() == first.cod()) {
            return Err(PresheafError::CodomainMismatch);
        }
    }
    Ok(())
}

/// Tuples `(x_j)` with `x_j ∈ X_j(c)` all sent to the same point, in
/// lexicographic order.
fn tuples_at(cospan: &[NatTrans], c: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(cospan.len());
    fn go(cospan: &[NatTrans], c: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = cur.len();
        if j == cospan.len() {
            out.push(cur.clone());
            return;
        }
        let target = if j == 0 { None } else { Some(cospan[0].apply(c, cur[0])) };
        for (x, &z) in cospan[j].component(c).iter().enumerate() {
            if target.is_none_or(|t| t == z) {
                cur.push(x);
                go(cospan, c, cur, out);
                cur.pop();
            }
        }
    }
    go(cospan, c, &mut cur, &mut out);
    out
}

/// Limit of a nonempty cospan with a shared codomain.
pub fn wide_pullback(cospan: &[NatTrans]) -> Result<WidePullback, PresheafError> {
    check_cospan(cospan)?;
    let base = cospan[0].base().clone();
    let n = base.num_objects();
    let tuples: Vec<Vec<Vec<usize>>> = (0..n).map(|c| tuples_at(cospan, c)).collect();
    let index: Vec<HashMap<&[usize], usize>> = tuples
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect())
        .collect();
    let sizes: Vec<usize> = tuples.iter().map(Vec::len).collect();
    let action = (0..base.num_morphisms())
        .map(|beta| {
            let (c, d) = (base.dom(beta), base.cod(beta));
            tuples[d]
                .iter()
                .map(|t| {
                    let r: Vec<usize> = t
                        .iter()
                        .zip(cospan)
                        .map(|(&x, leg)| leg.dom().restrict(beta, x))
                        .collect();
                    index[c][r.as_slice()]
                })
                .collect()
        })
        .collect();
    let apex = Arc::new(Presheaf::new_unchecked(base, sizes, action));
    let projections = cospan
        .iter()
        .enumerate()
        .map(|(j, leg)| {
            let comps = tuples.iter().map(|ts| ts.iter().map(|t| t[j]).collect()).collect();
            NatTrans::new_unchecked(apex.clone(), leg.dom().clone(), comps)
        })
        .collect();
    Ok(WidePullback {
        apex,
        projections,
        tuples,
    })
}

/// A tuple of the pullback at `object` not reached from the cone apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPullbackWitness {
    pub object: usize,
    pub tuple: Vec<usize>,
}

fn check_cone(cone: &[NatTrans], cospan: &[NatTrans]) -> Result<(), PresheafError> {
    check_cospan(cospan)?;
    if cone.len() != cospan.len() {
        return Err(PresheafError::ConeMismatch);
    }
    let apex = cone[0].dom();
    for (leg, arm) in cone.iter().zip(cospan) {
        if !same_base(leg.base(), arm.base())
            || !(Arc::ptr_eq(leg.dom(), apex) || leg.dom() == apex)
            || !(Arc::ptr_eq(leg.cod(), arm.dom()) || leg.cod() == arm.dom())
        {
            return Err(PresheafError::ConeMismatch);
        }
    }
    let base = cone[0].base();
    for c in 0..base.num_objects() {
        for q in 0..apex.size(c) {
            let z = cospan[0].apply(c, cone[0].apply(c, q));
            if cone.iter().zip(cospan).any(|(l, a)| a.apply(c, l.apply(c, q)) != z) {
                return Err(PresheafError::NotCommuting {
                    object: base.object_name(c).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `None` if the (commuting) cone is a quasi-pullback of the cospan, else the
/// first pullback tuple it misses.
pub fn quasi_pullback_witness(
    cone: &[NatTrans],
    cospan: &[NatTrans],
) -> Result<Option<QuasiPullbackWitness>, PresheafError> {
    check_cone(cone, cospan)?;
    let base = cone[0].base();
    for c in 0..base.num_objects() {
        let hit: std::collections::HashSet<Vec<usize>> = (0..cone[0].dom().size(c))
            .map(|q| cone.iter().map(|l| l.apply(c, q)).collect())
            .collect();
        if let Some(t) = tuples_at(cospan, c).into_iter().find(|t| !hit.contains(t)) {
            return Ok(Some(QuasiPullbackWitness { object: c, tuple: t }));
        }
    }
    Ok(None)
}

pub fn is_quasi_pullback(cone: &[NatTrans], cospan: &[NatTrans]) -> Result<bool, PresheafError> {
    quasi_pullback_witness(cone, cospan).map(|w| w.is_none())
}

/// Set-level test for the square `h;f = k;g` given as plain functions.
pub fn set_square_is_quasi_pullback(h: &[usize], k: &[usize], f: &[usize], g: &[usize]) -> bool {
    (0..f.len()).all(|x| {
        (0..g.len()).all(|y| f[x] != g[y] || (0..h.len()).any(|q| h[q] == x && k[q] == y))
    })
}

/// `f = e ; m` through the pointwise image.
pub fn epi_mono_factorize(f: &NatTrans) -> (NatTrans, NatTrans) {
    let base = f.base().clone();
    let n = base.num_objects();
    let mut image: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut slot: Vec<Vec<usize>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut hit = vec![false; f.cod().size(c)];
        for &y in f.component(c) {
            hit[y] = true;
        }
        let im: Vec<usize> = (0..hit.len()).filter(|&y| hit[y]).collect();
        let mut s = vec![usize::MAX; hit.len()];
        for (i, &y) in im.iter().enumerate() {
            s[y] = i;
        }
        image.push(im);
        slot.push(s);
    }
    let sizes = image.iter().map(Vec::len).collect();
    let action = (0..base.num_morphisms())
        .map(|beta| {
            let c = base.dom(beta);
            let d = base.cod(beta);
            image[d].iter().map(|&y| slot[c][f.cod().restrict(beta, y)]).collect()
        })
        .collect();
    let mid = Arc::new(Presheaf::new_unchecked(base, sizes, action));
    let e_comps = (0..n).map(|c| f.component(c).iter().map(|&y| slot[c][y]).collect()).collect();
    let e = NatTrans::new_unchecked(f.dom().clone(), mid.clone(), e_comps);
    let m = NatTrans::new_unchecked(mid, f.cod().clone(), image);
    (e, m)
}
