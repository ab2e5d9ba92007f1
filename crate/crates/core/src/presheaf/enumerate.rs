//! All presheaves of bounded total size, one per isomorphism class.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::fincat::FinCat;

use super::Presheaf;

/// Every presheaf over `base` with at most `max_total` elements, up to
/// isomorphism, ordered by total size and then by construction order.
///
/// Over a groupoid each presheaf is a coproduct of transitive ones
/// `hom(-, r) / K`, one per conjugacy class of subgroups `K ≤ Aut(r)` in each
/// component, so it suffices to enumerate multisets of those. Other bases
/// are enumerated by brute force over action tables.
pub fn presheaves_up_to_iso(base: &Arc<FinCat>, max_total: usize) -> Vec<Arc<Presheaf>> {
    let mut out = if base.is_groupoid() {
        groupoid_presheaves(base, max_total)
    } else {
        brute_force_presheaves(base, max_total)
    };
    out.sort_by_key(|p| p.total_size());
    out
}

struct Transitive {
    size: usize,
    presheaf: Arc<Presheaf>,
}

fn groupoid_presheaves(base: &Arc<FinCat>, max_total: usize) -> Vec<Arc<Presheaf>> {
    let mut types = Vec::new();
    for comp in base.components() {
        let r = comp[0];
        let aut: Vec<usize> = base.hom(r, r).to_vec();
        for k in subgroup_classes(base, &aut) {
            let t = transitive(base, r, &k);
            if t.size <= max_total {
                types.push(t);
            }
        }
    }
    types.sort_by_key(|t| t.size);
    let mut out = vec![Arc::new(Presheaf::empty(base.clone()))];
    let mut chosen = Vec::new();
    multisets(&types, 0, max_total, &mut chosen, &mut |parts: &[usize]| {
        let ps: Vec<Arc<Presheaf>> = parts.iter().map(|&i| types[i].presheaf.clone()).collect();
        let (sum, _) = Presheaf::coproduct(&ps, base.clone()).expect("same base");
        out.push(sum);
    });
    out
}

fn multisets(
    types: &[Transitive],
    from: usize,
    budget: usize,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    for i in from..types.len() {
        if types[i].size > budget {
            break;
        }
        chosen.push(i);
        emit(chosen);
        multisets(types, i, budget - types[i].size, chosen, emit);
        chosen.pop();
    }
}

/// One subgroup of `aut` per conjugacy class, each as a sorted list.
fn subgroup_classes(base: &FinCat, aut: &[usize]) -> Vec<Vec<usize>> {
    let id = aut.iter().copied().find(|&g| base.is_identity(g)).expect("identity");
    let closure = |gens: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut set = gens.clone();
        set.insert(id);
        loop {
            let mut added = Vec::new();
            for &a in &set {
                for &b in &set {
                    let c = base.comp(a, b);
                    if !set.contains(&c) {
                        added.push(c);
                    }
                }
            }
            if added.is_empty() {
                return set;
            }
            set.extend(added);
        }
    };
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![closure(&BTreeSet::new())];
    all.insert(frontier[0].iter().copied().collect());
    while let Some(h) = frontier.pop() {
        for &g in aut {
            if h.contains(&g) {
                continue;
            }
            let mut gens = h.clone();
            gens.insert(g);
            let k = closure(&gens);
            if all.insert(k.iter().copied().collect()) {
                frontier.push(k);
            }
        }
    }
    let conj = |k: &[usize], g: usize| -> Vec<usize> {
        let gi = base.inverse(g).expect("groupoid");
        let mut v: Vec<usize> = k.iter().map(|&x| base.comp(base.comp(gi, x), g)).collect();
        v.sort_unstable();
        v
    };
    all.iter()
        .filter(|k| aut.iter().all(|&g| conj(k, g) >= **k))
        .cloned()
        .collect()
}

/// `hom(-, r) / K` where `h ~ h;k`.
fn transitive(base: &Arc<FinCat>, r: usize, k: &[usize]) -> Transitive {
    let n = base.num_objects();
    let mut class: HashMap<usize, usize> = HashMap::new();
    let mut sizes = vec![0; n];
    for d in 0..n {
        for &h in base.hom(d, r) {
            if class.contains_key(&h) {
                continue;
            }
            let id = sizes[d];
            sizes[d] += 1;
            for &x in k {
                class.insert(base.comp(h, x), id);
            }
        }
    }
    let action = (0..base.num_morphisms())
        .map(|beta| {
            let d = base.cod(beta);
            let mut t = vec![0; sizes[d]];
            for &h in base.hom(d, r) {
                t[class[&h]] = class[&base.comp(beta, h)];
            }
            t
        })
        .collect();
    let presheaf = Presheaf::new(base.clone(), sizes, action).expect("orbit presheaf is functorial");
    Transitive {
        size: presheaf.total_size(),
        presheaf: Arc::new(presheaf),
    }
}

fn brute_force_presheaves(base: &Arc<FinCat>, max_total: usize) -> Vec<Arc<Presheaf>> {
    let n = base.num_objects();
    let movers: Vec<usize> = (0..base.num_morphisms()).filter(|&g| !base.is_identity(g)).collect();
    let mut out: Vec<Arc<Presheaf>> = Vec::new();
    let mut sizes = vec![0; n];
    for_each_size_vector(&mut sizes, 0, max_total, &mut |sizes: &[usize]| {
        let start = out.len();
        let mut action: Vec<Vec<usize>> = (0..base.num_morphisms())
            .map(|g| {
                if base.is_identity(g) {
                    (0..sizes[base.cod(g)]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        fill_tables(base, sizes, &movers, 0, &mut action, &mut |action| {
            let Ok(p) = Presheaf::new(base.clone(), sizes.to_vec(), action.to_vec()) else {
                return;
            };
            let p = Arc::new(p);
            if !out[start..].iter().any(|q| q.is_isomorphic(&p)) {
                out.push(p);
            }
        });
    });
    out
}

fn for_each_size_vector(sizes: &mut Vec<usize>, at: usize, budget: usize, emit: &mut dyn FnMut(&[usize])) {
    if at == sizes.len() {
        emit(sizes);
        return;
    }
    for s in 0..=budget {
        sizes[at] = s;
        for_each_size_vector(sizes, at + 1, budget - s, emit);
    }
    sizes[at] = 0;
}

fn fill_tables(
    base: &FinCat,
    sizes: &[usize],
    movers: &[usize],
    at: usize,
    action: &mut Vec<Vec<usize>>,
    emit: &mut dyn FnMut(&[Vec<usize>]),
) {
    let Some(&g) = movers.get(at) else {
        emit(action);
        return;
    };
    let (c, d) = (base.dom(g), base.cod(g));
    let (len, range) = (sizes[d], sizes[c]);
    if len > 0 && range == 0 {
        return;
    }
    let mut table = vec![0; len];
    loop {
        action[g] = table.clone();
        fill_tables(base, sizes, movers, at + 1, action, emit);
        // odometer step
        let mut i = 0;
        while i < len {
            table[i] += 1;
            if table[i] < range {
                break;
            }
            table[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
    }
    action[g] = Vec::new();
}
