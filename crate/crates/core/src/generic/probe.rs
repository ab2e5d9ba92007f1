//! Finite stand-ins for "every presheaf": all presheaves up to a total size,
//! closed under small sums of representables, with cached hom-sets.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use crate::fincat::FinCat;
use crate::freesmc::{enumerate_words, Word};
use crate::presheaf::{hom_enumerate, presheaves_up_to_iso, NatTrans, Presheaf, TaggedSum};
use crate::unary::DisjointSets;

/// One presheaf per isomorphism class with total size at most `size_bound`,
/// plus a representative of every `S A` with `|A| ≤ sum_length`.
pub struct ProbeFamily {
    base: Arc<FinCat>,
    size_bound: usize,
    sum_length: usize,
    members: Vec<Arc<Presheaf>>,
    sums: HashMap<Word, (usize, NatTrans)>,
    homs: Vec<OnceLock<Vec<NatTrans>>>,
    auts: Vec<OnceLock<Vec<NatTrans>>>,
    reps_dom: Vec<OnceLock<Vec<usize>>>,
    reps_both: Vec<OnceLock<Vec<usize>>>,
}

impl std::fmt::Debug for ProbeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProbeFamily")
            .field("base", &self.base.name())
            .field("size_bound", &self.size_bound)
            .field("members", &self.members.len())
            .finish()
    }
}

impl ProbeFamily {
    pub fn new(base: Arc<FinCat>, size_bound: usize, sum_length: usize) -> ProbeFamily {
        let mut members = presheaves_up_to_iso(&base, size_bound);
        let mut sums = HashMap::new();
        for w in enumerate_words(&base, sum_length) {
            let s = TaggedSum::new(&base, &w).expect("enumerated word");
            let x = s.presheaf();
            let hit = members
                .iter()
                .enumerate()
                .filter(|(_, m)| m.sizes() == x.sizes())
                .find_map(|(i, m)| x.find_iso(m).map(|iso| (i, iso)));
            let entry = match hit {
                Some(e) => e,
                None => {
                    members.push(x.clone());
                    (members.len() - 1, NatTrans::identity(x.clone()))
                }
            };
            sums.insert(w, entry);
        }
        let n = members.len();
        ProbeFamily {
            base,
            size_bound,
            sum_length,
            members,
            sums,
            homs: (0..n * n).map(|_| OnceLock::new()).collect(),
            auts: (0..n).map(|_| OnceLock::new()).collect(),
            reps_dom: (0..n * n).map(|_| OnceLock::new()).collect(),
            reps_both: (0..n * n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn size_bound(&self) -> usize {
        self.size_bound
    }

    pub fn sum_length(&self) -> usize {
        self.sum_length
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Arc<Presheaf>] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Arc<Presheaf> {
        &self.members[i]
    }

    /// Position of a member equal to `x` (same tables, not just isomorphic).
    pub fn index_of(&self, x: &Presheaf) -> Option<usize> {
        self.members.iter().position(|m| **m == *x)
    }

    /// The member isomorphic to `S w` and an iso `S w -> member`.
    pub fn sum(&self, w: &Word) -> Option<(usize, &NatTrans)> {
        self.sums.get(w).map(|(i, iso)| (*i, iso))
    }

    /// `hom(member i, member j)` in lexicographic order.
    pub fn homs(&self, i: usize, j: usize) -> &[NatTrans] {
        self.homs[i * self.len() + j].get_or_init(|| hom_enumerate(&self.members[i], &self.members[j]).expect("same base"))
    }

    /// A generating set of `Aut(member i)`.
    pub fn automorphism_generators(&self, i: usize) -> &[NatTrans] {
        self.auts[i].get_or_init(|| automorphism_generators(self.homs(i, i)))
    }

    /// Indices into `homs(i, j)` of one map per orbit of `Aut(i)` acting by
    /// precomposition.
    pub fn reps_mod_dom(&self, i: usize, j: usize) -> &[usize] {
        self.reps_dom[i * self.len() + j]
            .get_or_init(|| orbit_reps(self.homs(i, j), self.automorphism_generators(i), &[]))
    }

    /// Indices into `homs(i, j)` of one map per orbit of `Aut(i) × Aut(j)`.
    pub fn reps_mod_both(&self, i: usize, j: usize) -> &[usize] {
        self.reps_both[i * self.len() + j].get_or_init(|| {
            orbit_reps(self.homs(i, j), self.automorphism_generators(i), self.automorphism_generators(j))
        })
    }
}

fn offsets(x: &Presheaf) -> Vec<usize> {
    let mut off = Vec::with_capacity(x.sizes().len());
    let mut t = 0;
    for &s in x.sizes() {
        off.push(t);
        t += s;
    }
    off
}

/// Components flattened into one table on `Σ_c X(c)`.
pub(crate) fn flatten(f: &NatTrans) -> Vec<usize> {
    let off = offsets(f.cod());
    let mut out = Vec::with_capacity(f.dom().total_size());
    for (c, comp) in f.components().iter().enumerate() {
        out.extend(comp.iter().map(|&y| off[c] + y));
    }
    out
}

/// Greedy: keep an automorphism whenever it lies outside the group generated
/// so far.
pub(crate) fn automorphism_generators(endos: &[NatTrans]) -> Vec<NatTrans> {
    let auts: Vec<&NatTrans> = endos.iter().filter(|f| f.is_iso()).collect();
    let Some(first) = auts.first() else {
        return Vec::new();
    };
    let len = first.dom().total_size();
    let mut group: HashSet<Vec<usize>> = HashSet::from([(0..len).collect()]);
    let mut gens: Vec<NatTrans> = Vec::new();
    let mut flat_gens: Vec<Vec<usize>> = Vec::new();
    for a in auts {
        let fa = flatten(a);
        if group.contains(&fa) {
            continue;
        }
        gens.push(a.clone());
        flat_gens.push(fa);
        let mut queue: VecDeque<Vec<usize>> = group.iter().cloned().collect();
        while let Some(g) = queue.pop_front() {
            for s in &flat_gens {
                let h: Vec<usize> = g.iter().map(|&v| s[v]).collect();
                if group.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
    }
    gens
}

/// Least index of each orbit of `homs` under `f ↦ σ;f` and `f ↦ f;τ`.
pub(crate) fn orbit_reps(homs: &[NatTrans], left: &[NatTrans], right: &[NatTrans]) -> Vec<usize> {
    if homs.is_empty() {
        return Vec::new();
    }
    let flat: Vec<Vec<usize>> = homs.iter().map(flatten).collect();
    let index: HashMap<&[usize], usize> = flat.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let lefts: Vec<Vec<usize>> = left.iter().map(flatten).collect();
    let rights: Vec<Vec<usize>> = right.iter().map(flatten).collect();
    let mut dsu = DisjointSets::new(homs.len());
    for (i, f) in flat.iter().enumerate() {
        for s in &lefts {
            let g: Vec<usize> = s.iter().map(|&v| f[v]).collect();
            dsu.union(i, index[g.as_slice()]);
        }
        for t in &rights {
            let g: Vec<usize> = f.iter().map(|&v| t[v]).collect();
            dsu.union(i, index[g.as_slice()]);
        }
    }
    let (labels, n) = dsu.classes();
    let mut reps = vec![usize::MAX; n];
    for (i, &c) in labels.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = i;
        }
    }
    reps
}
