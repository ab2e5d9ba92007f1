//! The coend `⟨P⟩X(b) = Σ_A P(A)(b) × Π_i X(A_i) / ≈` and its functorial
//! action.

use std::sync::Arc;

use crate::fincat::FinCat;
use crate::freesmc::Word;
use crate::presheaf::{same_base, NatTrans, Presheaf};
use crate::unary::DisjointSets;

use super::{Species, SpeciesError, SpeciesNat};

/// `(A, p, x)` standing for the class `p ⊗_A x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoendElement {
    pub word: Word,
    pub coeff: usize,
    pub family: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Block {
    offset: usize,
    count: usize,
    stride: usize,
}

/// `⟨P⟩X` with every class labelled by its least triple.
///
/// Triples at `b` are numbered word by word, then by coefficient, then by
/// family in lexicographic order, so the least triple of a class is its
/// lexicographically least member.
#[derive(Clone, Debug)]
pub struct LanValue {
    dom: Arc<FinCat>,
    words: Vec<Word>,
    input: Arc<Presheaf>,
    presheaf: Arc<Presheaf>,
    // radix[w] = sizes X(A_i)
    radix: Vec<Vec<usize>>,
    blocks: Vec<Vec<Block>>,
    class_of: Vec<Vec<usize>>,
    reps: Vec<Vec<usize>>,
}

impl LanValue {
    pub fn presheaf(&self) -> &Arc<Presheaf> {
        &self.presheaf
    }

    pub fn input(&self) -> &Arc<Presheaf> {
        &self.input
    }

    pub fn num_classes(&self, b: usize) -> usize {
        self.reps[b].len()
    }

    pub fn num_triples(&self, b: usize) -> usize {
        self.class_of[b].len()
    }

    /// Index of the triple `(w, p, x)` at `b`.
    pub fn triple_index(&self, b: usize, w: usize, p: usize, x: &[usize]) -> usize {
        let blk = &self.blocks[b][w];
        let mut idx = 0;
        for (xi, r) in x.iter().zip(&self.radix[w]) {
            idx = idx * r + xi;
        }
        blk.offset + p * blk.stride + idx
    }

    pub fn class_of_triple(&self, b: usize, w: usize, p: usize, x: &[usize]) -> usize {
        self.class_of[b][self.triple_index(b, w, p, x)]
    }

    /// Class of an arbitrary element, if its word is within the degree.
    pub fn class_of_element(&self, b: usize, e: &CoendElement) -> Option<usize> {
        let w = self.words.iter().position(|v| *v == e.word)?;
        Some(self.class_of_triple(b, w, e.coeff, &e.family))
    }

    /// `(w, p, x)` for the triple with index `t` at `b`.
    pub fn decode(&self, b: usize, t: usize) -> (usize, usize, Vec<usize>) {
        let w = self.blocks[b].partition_point(|blk| blk.offset <= t) - 1;
        // skip empty blocks sharing this offset
        let w = (0..=w)
            .rev()
            .find(|&v| {
                let blk = &self.blocks[b][v];
                t < blk.offset + blk.count * blk.stride
            })
            .expect("triple index in range");
        let blk = &self.blocks[b][w];
        let rel = t - blk.offset;
        let (p, mut rest) = (rel / blk.stride, rel % blk.stride);
        let mut x = vec![0; self.radix[w].len()];
        for i in (0..x.len()).rev() {
            let r = self.radix[w][i];
            x[i] = rest % r;
            rest /= r;
        }
        (w, p, x)
    }

    /// Canonical representative of class `k` at `b`.
    pub fn representative(&self, b: usize, k: usize) -> (usize, usize, Vec<usize>) {
        self.decode(b, self.reps[b][k])
    }

    pub fn element(&self, b: usize, k: usize) -> CoendElement {
        let (w, p, x) = self.representative(b, k);
        CoendElement {
            word: self.words[w].clone(),
            coeff: p,
            family: x,
        }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Members of class `k` at `b`, as triple indices.
    pub fn members(&self, b: usize, k: usize) -> Vec<usize> {
        (0..self.class_of[b].len()).filter(|&t| self.class_of[b][t] == k).collect()
    }

    pub fn display_element(&self, b: usize, k: usize) -> String {
        let e = self.element(b, k);
        format!("{} ⊗ {} ({:?})", e.coeff, e.word.display(&self.dom), e.family)
    }
}

fn check_input(p: &Species, x: &Presheaf) -> Result<(), SpeciesError> {
    if same_base(x.base(), &p.dom) {
        Ok(())
    } else {
        Err(SpeciesError::BaseMismatch)
    }
}

/// Computes `⟨P⟩X` by union-find over the generating relation
/// `(A, p, S(α)·x') ≈ (A', p·α, x')`, for every enumerated `α: A -> A'`.
pub fn lan_eval(p: &Species, x: &Arc<Presheaf>) -> Result<LanValue, SpeciesError> {
    check_input(p, x)?;
    let cod = &p.cod;
    let nb = cod.num_objects();
    let radix: Vec<Vec<usize>> = p
        .words
        .iter()
        .map(|w| w.letters().iter().map(|&a| x.size(a)).collect())
        .collect();
    let fam_count: Vec<usize> = radix.iter().map(|r| r.iter().product()).collect();
    let mut blocks = Vec::with_capacity(nb);
    let mut class_of = Vec::with_capacity(nb);
    let mut reps = Vec::with_capacity(nb);
    for b in 0..nb {
        let mut bl = Vec::with_capacity(p.words.len());
        let mut total = 0;
        for (w, c) in p.coeffs.iter().enumerate() {
            let count = c.size(b);
            bl.push(Block {
                offset: total,
                count,
                stride: fam_count[w],
            });
            total += count * fam_count[w];
        }
        let mut dsu = DisjointSets::new(total);
        let mut xs = Vec::new();
        for (m, mor) in p.mors.iter().enumerate() {
            let (s, t) = (p.mor_src[m], p.mor_dst[m]);
            let (bs, bt) = (&bl[s], &bl[t]);
            if bs.count == 0 || fam_count[t] == 0 || mor.is_identity(&p.dom) {
                continue;
            }
            let k = mor.perm.len();
            let rt = &radix[t];
            let rs = &radix[s];
            let mut xp = vec![0usize; k];
            for fi in 0..fam_count[t] {
                // x = S(α)·x'
                xs.clear();
                xs.extend((0..k).map(|i| x.restrict(mor.family[i], xp[mor.perm[i]])));
                let mut ix = 0;
                for i in 0..k {
                    ix = ix * rs[i] + xs[i];
                }
                for pp in 0..bs.count {
                    let q = p.actions[m][b][pp];
                    dsu.union(bs.offset + pp * bs.stride + ix, bt.offset + q * bt.stride + fi);
                }
                // next x' in lexicographic order
                for i in (0..k).rev() {
                    xp[i] += 1;
                    if xp[i] < rt[i] {
                        break;
                    }
                    xp[i] = 0;
                }
            }
        }
        let (labels, n) = dsu.classes();
        let mut r = vec![usize::MAX; n];
        for (t, &c) in labels.iter().enumerate() {
            if r[c] == usize::MAX {
                r[c] = t;
            }
        }
        blocks.push(bl);
        class_of.push(labels);
        reps.push(r);
    }
    let mut value = LanValue {
        dom: p.dom.clone(),
        words: p.words.clone(),
        input: x.clone(),
        presheaf: Arc::new(Presheaf::empty(cod.clone())),
        radix,
        blocks,
        class_of,
        reps,
    };
    // β·(p ⊗ x) = (β·p) ⊗ x
    let sizes: Vec<usize> = value.reps.iter().map(Vec::len).collect();
    let action = (0..cod.num_morphisms())
        .map(|g| {
            let (c, d) = (cod.dom(g), cod.cod(g));
            (0..sizes[d])
                .map(|k| {
                    let (w, pp, fam) = value.representative(d, k);
                    value.class_of_triple(c, w, p.coeffs[w].restrict(g, pp), &fam)
                })
                .collect()
        })
        .collect();
    value.presheaf = Arc::new(Presheaf::new(cod.clone(), sizes, action)?);
    Ok(value)
}

/// `⟨P⟩f: p ⊗ x ↦ p ⊗ (x·f)`.
pub fn lan_map(vx: &LanValue, vy: &LanValue, f: &NatTrans) -> Result<NatTrans, SpeciesError> {
    if !(Arc::ptr_eq(f.dom(), &vx.input) || **f.dom() == *vx.input)
        || !(Arc::ptr_eq(f.cod(), &vy.input) || **f.cod() == *vy.input)
        || vx.words != vy.words
    {
        return Err(SpeciesError::BaseMismatch);
    }
    let nb = vx.reps.len();
    let comps = (0..nb)
        .map(|b| (0..vx.num_classes(b)).map(|k| map_class(vx, vy, f, b, k)).collect())
        .collect();
    Ok(NatTrans::new(vx.presheaf.clone(), vy.presheaf.clone(), comps)?)
}

/// `⟨P⟩f` at a single class; `f` is assumed to run between the two inputs.
pub fn map_class(vx: &LanValue, vy: &LanValue, f: &NatTrans, b: usize, k: usize) -> usize {
    let (w, p, x) = vx.representative(b, k);
    let y: Vec<usize> = x
        .iter()
        .zip(vx.words[w].letters())
        .map(|(&xi, &a)| f.apply(a, xi))
        .collect();
    vy.class_of_triple(b, w, p, &y)
}

/// `⟨φ⟩_X: p ⊗ x ↦ φ(p) ⊗ x`, from `⟨P⟩X` (`vp`) to `⟨Q⟩X` (`vq`).
pub fn lan_nat(phi: &SpeciesNat, vp: &LanValue, vq: &LanValue) -> Result<NatTrans, SpeciesError> {
    if !(Arc::ptr_eq(&vp.input, &vq.input) || *vp.input == *vq.input) || vp.words != phi.dom().words {
        return Err(SpeciesError::BaseMismatch);
    }
    let nb = vp.reps.len();
    let comps = (0..nb)
        .map(|b| {
            (0..vp.num_classes(b))
                .map(|k| {
                    let (w, p, x) = vp.representative(b, k);
                    vq.class_of_triple(b, w, phi.apply(w, b, p), &x)
                })
                .collect()
        })
        .collect();
    Ok(NatTrans::new(vp.presheaf.clone(), vq.presheaf.clone(), comps)?)
}
