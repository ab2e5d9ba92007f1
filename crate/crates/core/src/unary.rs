//! Multi-sorted sets with unary operations, and homomorphism search between
//! them.
//!
//! Presheaves (sorts = objects, operations = restriction along morphisms) and
//! species (sorts = (word, object) pairs, operations = both actions) are both
//! presented this way, so natural transformations of either kind are found
//! by the same backtracking search.

use std::ops::ControlFlow;

/// A forest of disjoint sets with path compression and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets of `i` and `j`; returns false if already merged.
    pub fn union(&mut self, i: usize, j: usize) -> bool {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Labels every element by its class, classes numbered in order of their
    /// least member. Returns (class of each element, number of classes).
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label_of_root = vec![usize::MAX; n];
        let mut labels = vec![0; n];
        let mut next = 0;
        for i in 0..n {
            let r = self.find(i);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            labels[i] = label_of_root[r];
        }
        (labels, next)
    }
}

/// One unary operation: sends an element of sort `src` to sort `dst`.
#[derive(Clone, Debug)]
pub struct Op {
    pub src: usize,
    pub dst: usize,
    pub table: Vec<usize>,
}

/// A finite multi-sorted unary algebra. Two algebras are comparable when
/// their operation lists have the same shape (same `src`/`dst` in order).
#[derive(Clone, Debug)]
pub struct UnaryAlgebra {
    pub sizes: Vec<usize>,
    pub ops: Vec<Op>,
}

impl UnaryAlgebra {
    pub fn same_signature(&self, other: &UnaryAlgebra) -> bool {
        self.sizes.len() == other.sizes.len()
            && self.ops.len() == other.ops.len()
            && self
                .ops
                .iter()
                .zip(&other.ops)
                .all(|(a, b)| a.src == b.src && a.dst == b.dst)
    }

    /// Checks that `map` (one function per sort) commutes with every operation.
    pub fn is_homomorphism(&self, cod: &UnaryAlgebra, map: &[Vec<usize>]) -> bool {
        self.ops.iter().zip(&cod.ops).all(|(od, oc)| {
            (0..self.sizes[od.src]).all(|x| map[od.dst][od.table[x]] == oc.table[map[od.src][x]])
        })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Only injective homomorphisms.
    pub injective: bool,
}

type Allowed<'a> = &'a dyn Fn(usize, usize, usize) -> bool;

struct Search<'a> {
    dom: &'a UnaryAlgebra,
    cod: &'a UnaryAlgebra,
    opts: SearchOptions,
    allowed: Option<Allowed<'a>>,
    ops_from: Vec<Vec<usize>>,
    assign: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    queue: Vec<(usize, usize)>,
}

const UNSET: usize = usize::MAX;

impl<'a> Search<'a> {
    fn set(&mut self, s: usize, x: usize, y: usize) -> bool {
        let cur = self.assign[s][x];
        if cur != UNSET {
            return cur == y;
        }
        if let Some(allowed) = self.allowed {
            if !allowed(s, x, y) {
                return false;
            }
        }
        if self.opts.injective {
            if self.used[s][y] {
                return false;
            }
            self.used[s][y] = true;
        }
        self.assign[s][x] = y;
        self.trail.push((s, x));
        self.queue.push((s, x));
        true
    }

    fn propagate(&mut self) -> bool {
        while let Some((s, x)) = self.queue.pop() {
            let y = self.assign[s][x];
            for k in 0..self.ops_from[s].len() {
                let oi = self.ops_from[s][k];
                let (od, oc) = (&self.dom.ops[oi], &self.cod.ops[oi]);
                let (t, x2, y2) = (od.dst, od.table[x], oc.table[y]);
                if !self.set(t, x2, y2) {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (s, x) = self.trail.pop().unwrap();
            if self.opts.injective {
                let y = self.assign[s][x];
                self.used[s][y] = false;
            }
            self.assign[s][x] = UNSET;
        }
    }

    fn run(
        &mut self,
        s0: usize,
        x0: usize,
        visit: &mut dyn FnMut(&[Vec<usize>]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (mut s, mut x) = (s0, x0);
        loop {
            if s >= self.dom.sizes.len() {
                return visit(&self.assign);
            }
            if x >= self.dom.sizes[s] {
                s += 1;
                x = 0;
                continue;
            }
            if self.assign[s][x] != UNSET {
                x += 1;
                continue;
            }
            break;
        }
        for y in 0..self.cod.sizes[s] {
            let mark = self.trail.len();
            if self.set(s, x, y) && self.propagate() {
                self.run(s, x + 1, visit)?;
            }
            self.undo(mark);
        }
        ControlFlow::Continue(())
    }
}

/// Visits every homomorphism `dom -> cod` in lexicographic order of the
/// value table (sorts ascending, elements ascending). `allowed(sort, x, y)`
/// may restrict the admissible values.
pub fn for_each_hom(
    dom: &UnaryAlgebra,
    cod: &UnaryAlgebra,
    opts: SearchOptions,
    allowed: Option<Allowed<'_>>,
    mut visit: impl FnMut(&[Vec<usize>]) -> ControlFlow<()>,
) {
    assert!(dom.same_signature(cod), "algebras have different signatures");
    let mut ops_from = vec![Vec::new(); dom.sizes.len()];
    for (i, op) in dom.ops.iter().enumerate() {
        ops_from[op.src].push(i);
    }
    let mut search = Search {
        dom,
        cod,
        opts,
        allowed,
        ops_from,
        assign: dom.sizes.iter().map(|&n| vec![UNSET; n]).collect(),
        used: cod.sizes.iter().map(|&n| vec![false; n]).collect(),
        trail: Vec::new(),
        queue: Vec::new(),
    };
    let _ = search.run(0, 0, &mut visit);
}

pub fn all_homs(dom: &UnaryAlgebra, cod: &UnaryAlgebra) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_hom(dom, cod, SearchOptions::default(), None, |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Some bijective homomorphism, if the algebras are isomorphic.
pub fn find_iso(dom: &UnaryAlgebra, cod: &UnaryAlgebra) -> Option<Vec<Vec<usize>>> {
    if dom.sizes != cod.sizes || !dom.same_signature(cod) {
        return None;
    }
    let mut found = None;
    for_each_hom(dom, cod, SearchOptions { injective: true }, None, |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> UnaryAlgebra {
        UnaryAlgebra {
            sizes: vec![n],
            ops: vec![Op {
                src: 0,
                dst: 0,
                table: (0..n).map(|i| (i + 1) % n).collect(),
            }],
        }
    }

    #[test]
    fn union_find_classes_ordered_by_least_member() {
        let mut d = DisjointSets::new(5);
        d.union(3, 1);
        d.union(4, 2);
        let (labels, n) = d.classes();
        assert_eq!(n, 3);
        assert_eq!(labels, vec![0, 1, 2, 1, 2]);
        assert!(!d.union(1, 3));
    }

    #[test]
    fn homs_between_cycles() {
        // maps C_4 -> C_2 commuting with successor: determined by the image of 0
        let homs = all_homs(&cycle(4), &cycle(2));
        assert_eq!(homs.len(), 2);
        assert_eq!(homs[0], vec![vec![0, 1, 0, 1]]);
        // C_2 -> C_4 has none (would need an element of period dividing 2)
        assert!(all_homs(&cycle(2), &cycle(4)).is_empty());
        assert_eq!(all_homs(&cycle(3), &cycle(3)).len(), 3);
    }

    #[test]
    fn iso_search() {
        assert!(find_iso(&cycle(3), &cycle(3)).is_some());
        let mut twisted = cycle(3);
        twisted.ops[0].table = vec![0, 2, 1];
        assert!(find_iso(&cycle(3), &twisted).is_none());
    }

    #[test]
    fn restricted_search() {
        let allow = |_s: usize, x: usize, y: usize| x != 0 || y == 1;
        let mut got = Vec::new();
        for_each_hom(&cycle(3), &cycle(3), SearchOptions::default(), Some(&allow), |m| {
            got.push(m.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(got, vec![vec![vec![1, 2, 0]]]);
    }
}
