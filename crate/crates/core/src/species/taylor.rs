//! The Taylor development `Σ_n Σ_{a_1..a_n} P(⊕_i [a_i])(b) × Π_i X(a_i) / ≈`,
//! computed by graph search over explicit tuples, independently of
//! [`lan_eval`](super::lan_eval)'s union-find over dense indices.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::presheaf::{NatTrans, Presheaf};

use super::{LanValue, Species, SpeciesError};

type Tuple = (usize, usize, Vec<usize>);

#[derive(Clone, Debug)]
pub struct TaylorValue {
    pub presheaf: Arc<Presheaf>,
    /// Per object, the members of each class in discovery order.
    pub classes: Vec<Vec<Vec<Tuple>>>,
    /// The verified bijection onto the coend classes.
    pub to_lan: NatTrans,
}

fn families(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..s).map(move |v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    out
}

pub fn taylor_eval(p: &Species, x: &Arc<Presheaf>, lan: &LanValue) -> Result<TaylorValue, SpeciesError> {
    if !crate::presheaf::same_base(x.base(), &p.dom) {
        return Err(SpeciesError::BaseMismatch);
    }
    let cod = &p.cod;
    let nb = cod.num_objects();
    let mut mors_into = vec![Vec::new(); p.words.len()];
    for m in 0..p.mors.len() {
        mors_into[p.mor_dst[m]].push(m);
    }
    let mut class_lists = Vec::with_capacity(nb);
    let mut ids: Vec<HashMap<Tuple, usize>> = Vec::with_capacity(nb);
    for b in 0..nb {
        let mut nodes: Vec<Tuple> = Vec::new();
        for (w, word) in p.words.iter().enumerate() {
            let sizes: Vec<usize> = word.letters().iter().map(|&a| x.size(a)).collect();
            let fams = families(&sizes);
            for q in 0..p.coeffs[w].size(b) {
                for f in &fams {
                    nodes.push((w, q, f.clone()));
                }
            }
        }
        let mut class: HashMap<Tuple, usize> = HashMap::with_capacity(nodes.len());
        let mut lists: Vec<Vec<Tuple>> = Vec::new();
        for start in &nodes {
            if class.contains_key(start) {
                continue;
            }
            let k = lists.len();
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start.clone()]);
            class.insert(start.clone(), k);
            while let Some(node) = queue.pop_front() {
                let (w, q, fam) = &node;
                let mut push = |t: Tuple, class: &mut HashMap<Tuple, usize>| {
                    if !class.contains_key(&t) {
                        class.insert(t.clone(), k);
                        queue.push_back(t);
                    }
                };
                // (A, q, S(α)·x') ≈ (A', q·α, x') with this node on the left
                for &m in p.morphisms_from(*w) {
                    let mor = &p.mors[m];
                    let t = p.mor_dst[m];
                    let target = &p.words[t];
                    let k_len = mor.perm.len();
                    let mut choices: Vec<Vec<usize>> = vec![Vec::new(); k_len];
                    for i in 0..k_len {
                        let j = mor.perm[i];
                        choices[j] = (0..x.size(target.letters()[j]))
                            .filter(|&v| x.restrict(mor.family[i], v) == fam[i])
                            .collect();
                    }
                    let q2 = p.act(m, b, *q);
                    let mut cands = vec![Vec::new()];
                    for c in &choices {
                        cands = cands
                            .into_iter()
                            .flat_map(|f: Vec<usize>| {
                                c.iter().map(move |&v| {
                                    let mut g = f.clone();
                                    g.push(v);
                                    g
                                })
                            })
                            .collect();
                    }
                    for xp in cands {
                        push((t, q2, xp), &mut class);
                    }
                }
                // and with this node on the right
                for &m in &mors_into[*w] {
                    let mor = &p.mors[m];
                    let s = p.mor_src[m];
                    let xs: Vec<usize> = (0..mor.perm.len())
                        .map(|i| x.restrict(mor.family[i], fam[mor.perm[i]]))
                        .collect();
                    for q0 in 0..p.coeffs[s].size(b) {
                        if p.act(m, b, q0) == *q {
                            push((s, q0, xs.clone()), &mut class);
                        }
                    }
                }
                members.push(node);
            }
            lists.push(members);
        }
        class_lists.push(lists);
        ids.push(class);
    }
    let sizes: Vec<usize> = class_lists.iter().map(Vec::len).collect();
    let action = (0..cod.num_morphisms())
        .map(|g| {
            let (c, d) = (cod.dom(g), cod.cod(g));
            class_lists[d]
                .iter()
                .map(|members| {
                    let (w, q, fam) = &members[0];
                    ids[c][&(*w, p.coeffs[*w].restrict(g, *q), fam.clone())]
                })
                .collect()
        })
        .collect();
    let presheaf = Arc::new(Presheaf::new(cod.clone(), sizes, action)?);
    let mut comps = Vec::with_capacity(nb);
    for b in 0..nb {
        let mut comp = Vec::with_capacity(class_lists[b].len());
        for members in &class_lists[b] {
            let mut targets = members.iter().map(|(w, q, fam)| lan.class_of_triple(b, *w, *q, fam));
            let first = targets.next().expect("classes are nonempty");
            if targets.any(|t| t != first) {
                return Err(SpeciesError::Mismatch(format!(
                    "a Taylor class at {} meets two coend classes",
                    cod.object_name(b)
                )));
            }
            comp.push(first);
        }
        comps.push(comp);
    }
    let to_lan = NatTrans::new(presheaf.clone(), lan.presheaf().clone(), comps)
        .map_err(|e| SpeciesError::Mismatch(e.to_string()))?;
    if !to_lan.is_iso() {
        return Err(SpeciesError::Mismatch("Taylor and coend classes are not in bijection".into()));
    }
    Ok(TaylorValue {
        presheaf,
        classes: class_lists,
        to_lan,
    })
}
