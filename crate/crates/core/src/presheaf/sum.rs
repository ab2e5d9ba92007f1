//! Sums of representables `S A = Σ_i y(A_i)` and maps between them.

use std::sync::Arc;

use crate::fincat::FinCat;
use crate::freesmc::{is_permutation, SmcMor, Word};

use super::{NatTrans, Presheaf, PresheafError};

/// `S A` with its elements labelled: at object `d` the elements are pairs
/// `(i, g)` with `g ∈ hom(d, A_i)`, ordered by `i` and then by `g`.
#[derive(Clone, Debug)]
pub struct TaggedSum {
    word: Word,
    presheaf: Arc<Presheaf>,
    // offsets[d][i] = index of the first element (i, _) at d
    offsets: Vec<Vec<usize>>,
}

impl TaggedSum {
    pub fn new(base: &Arc<FinCat>, word: &Word) -> Result<TaggedSum, PresheafError> {
        word.check(base).map_err(|e| PresheafError::Shape(e.to_string()))?;
        let n = base.num_objects();
        let mut offsets = vec![Vec::with_capacity(word.len()); n];
        let mut sizes = vec![0; n];
        for d in 0..n {
            for &a in word.letters() {
                offsets[d].push(sizes[d]);
                sizes[d] += base.hom(d, a).len();
            }
        }
        let mut action = Vec::with_capacity(base.num_morphisms());
        for beta in 0..base.num_morphisms() {
            let (c, d) = (base.dom(beta), base.cod(beta));
            let mut t = Vec::with_capacity(sizes[d]);
            for (i, &a) in word.letters().iter().enumerate() {
                for &g in base.hom(d, a) {
                    let h = base.comp(beta, g);
                    t.push(offsets[c][i] + hom_position(base, c, a, h));
                }
            }
            action.push(t);
        }
        let presheaf = Arc::new(Presheaf::new_unchecked(base.clone(), sizes, action));
        Ok(TaggedSum {
            word: word.clone(),
            presheaf,
            offsets,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn presheaf(&self) -> &Arc<Presheaf> {
        &self.presheaf
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.presheaf.base()
    }

    /// Index of `(i, g)` at object `d = dom g`.
    pub fn element(&self, i: usize, g: usize) -> usize {
        let base = self.presheaf.base();
        let d = base.dom(g);
        self.offsets[d][i] + hom_position(base, d, self.word.letters()[i], g)
    }

    /// The pair `(i, g)` labelling element `e` at object `d`.
    pub fn tag(&self, d: usize, e: usize) -> (usize, usize) {
        let offs = &self.offsets[d];
        // last block starting at or before e; empty blocks share the next offset
        let i = offs.partition_point(|&o| o <= e) - 1;
        let base = self.presheaf.base();
        (i, base.hom(d, self.word.letters()[i])[e - offs[i]])
    }

    /// The generic element `(i, id_{A_i})` at `A_i`.
    pub fn generator(&self, i: usize) -> usize {
        let a = self.word.letters()[i];
        self.element(i, self.presheaf.base().identity(a))
    }

    /// The map `S A -> target` picking `x_i ∈ target(A_i)` for each position.
    pub fn family_map(&self, x: &[usize], target: &Arc<Presheaf>) -> Result<NatTrans, PresheafError> {
        let base = self.presheaf.base();
        if x.len() != self.word.len()
            || x.iter().zip(self.word.letters()).any(|(&xi, &a)| xi >= target.size(a))
        {
            return Err(PresheafError::Shape("family does not match the word".into()));
        }
        let comps = (0..base.num_objects())
            .map(|d| {
                let mut comp = Vec::with_capacity(self.presheaf.size(d));
                for (i, &a) in self.word.letters().iter().enumerate() {
                    comp.extend(base.hom(d, a).iter().map(|&g| target.restrict(g, x[i])));
                }
                comp
            })
            .collect();
        NatTrans::new(self.presheaf.clone(), target.clone(), comps)
    }

    fn is_dom_of(&self, f: &NatTrans) -> bool {
        Arc::ptr_eq(&self.presheaf, f.dom()) || *self.presheaf == **f.dom()
    }

    fn is_cod_of(&self, f: &NatTrans) -> bool {
        Arc::ptr_eq(&self.presheaf, f.cod()) || *self.presheaf == **f.cod()
    }
}

fn hom_position(base: &FinCat, d: usize, a: usize, g: usize) -> usize {
    base.hom(d, a).binary_search(&g).expect("morphism lies in the hom-set")
}

/// The representable presheaf `y(c)`.
pub fn yoneda(base: &Arc<FinCat>, c: usize) -> Result<TaggedSum, PresheafError> {
    if c >= base.num_objects() {
        return Err(PresheafError::ObjectOutOfRange(c));
    }
    TaggedSum::new(base, &Word::single(c))
}

/// `S γ: (i, g) ↦ (γ(i), g ; γ̂_i)`.
pub fn sum_functor_mor(gamma: &SmcMor, sa: &TaggedSum, sb: &TaggedSum) -> Result<NatTrans, PresheafError> {
    if gamma.dom != sa.word || gamma.cod != sb.word {
        return Err(PresheafError::NotTaggedSum);
    }
    let base = sa.base();
    let n = base.num_objects();
    let mut comps = Vec::with_capacity(n);
    for d in 0..n {
        let mut comp = Vec::with_capacity(sa.presheaf.size(d));
        for (i, &a) in sa.word.letters().iter().enumerate() {
            for &g in base.hom(d, a) {
                comp.push(sb.element(gamma.perm[i], base.comp(g, gamma.family[i])));
            }
        }
        comps.push(comp);
    }
    Ok(NatTrans::new_unchecked(sa.presheaf.clone(), sb.presheaf.clone(), comps))
}

/// `φ(i)` = the tag of `f(i, id_{A_i})`.
pub fn underlying_function(f: &NatTrans, a: &TaggedSum, b: &TaggedSum) -> Result<Vec<usize>, PresheafError> {
    if !a.is_dom_of(f) || !b.is_cod_of(f) {
        return Err(PresheafError::NotTaggedSum);
    }
    Ok(a.word
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &ai)| b.tag(ai, f.apply(ai, a.generator(i))).0)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexFlags {
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
}

impl IndexFlags {
    pub fn of(phi: &[usize], cod_len: usize) -> IndexFlags {
        let mut hit = vec![0usize; cod_len];
        for &j in phi {
            hit[j] += 1;
        }
        let injective = hit.iter().all(|&h| h <= 1);
        let surjective = hit.iter().all(|&h| h >= 1);
        IndexFlags {
            injective,
            surjective,
            bijective: injective && surjective,
        }
    }
}

/// The unique `γ` with `S γ = f`, when `f` is bijective on indices.
pub fn lift_to_freesmc(f: &NatTrans, a: &TaggedSum, b: &TaggedSum) -> Result<Option<SmcMor>, PresheafError> {
    let phi = underlying_function(f, a, b)?;
    if phi.len() != b.word.len() || !is_permutation(&phi) {
        return Ok(None);
    }
    let family = a
        .word
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &ai)| b.tag(ai, f.apply(ai, a.generator(i))).1)
        .collect();
    let gamma = SmcMor {
        dom: a.word.clone(),
        cod: b.word.clone(),
        perm: phi,
        family,
    };
    // a natural map out of S A is fixed by its values on the generators
    debug_assert_eq!(sum_functor_mor(&gamma, a, b).ok().as_ref(), Some(f));
    Ok(Some(gamma))
}

#[derive(Clone, Debug)]
pub struct Subobject {
    /// Ascending positions of the sub-word.
    pub indices: Vec<usize>,
    pub sum: TaggedSum,
    pub inclusion: NatTrans,
}

/// The `2^|G|` subobjects `Σ_{i∈I} y(G_i)` of `S G`, with `I` in
/// lexicographic order of ascending index lists.
pub fn subobjects_of_sum(g: &TaggedSum) -> Result<Vec<Subobject>, PresheafError> {
    let base = g.base();
    if !base.is_groupoid() {
        return Err(PresheafError::NotGroupoid);
    }
    let k = g.word.len();
    let mut subsets = Vec::with_capacity(1 << k);
    let mut cur = Vec::new();
    lex_subsets(k, 0, &mut cur, &mut subsets);
    subsets
        .into_iter()
        .map(|indices| {
            let word = Word(indices.iter().map(|&i| g.word.letters()[i]).collect());
            let sum = TaggedSum::new(base, &word)?;
            let comps = (0..base.num_objects())
                .map(|d| {
                    (0..sum.presheaf.size(d))
                        .map(|e| {
                            let (j, h) = sum.tag(d, e);
                            g.element(indices[j], h)
                        })
                        .collect()
                })
                .collect();
            let inclusion = NatTrans::new_unchecked(sum.presheaf.clone(), g.presheaf.clone(), comps);
            Ok(Subobject {
                indices,
                sum,
                inclusion,
            })
        })
        .collect()
}

fn lex_subsets(k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(cur.clone());
    for i in from..k {
        cur.push(i);
        lex_subsets(k, i + 1, cur, out);
        cur.pop();
    }
}

/// Position in `subs` of the subobject with the same image as `mono`.
pub fn match_subobject(mono: &NatTrans, subs: &[Subobject]) -> Result<usize, PresheafError> {
    let n = mono.base().num_objects();
    let image = |t: &NatTrans| -> Vec<Vec<bool>> {
        (0..n)
            .map(|c| {
                let mut hit = vec![false; t.cod().size(c)];
                for &y in t.component(c) {
                    hit[y] = true;
                }
                hit
            })
            .collect()
    };
    let target = image(mono);
    subs.iter()
        .position(|s| s.inclusion.cod().sizes() == mono.cod().sizes() && image(&s.inclusion) == target)
        .ok_or(PresheafError::NoMatchingSubobject)
}
