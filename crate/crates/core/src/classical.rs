//! Classical species: the case where both bases are the terminal groupoid,
//! so a species is a family of finite sets `P_n` with right `𝔖_n`-actions.
//!
//! Permutations are one-line forward maps listed in lexicographic order, and
//! products are diagrammatic: `σσ'` is `σ` followed by `σ'`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::FinCat;
use crate::freesmc::{perm_inverse, perm_then, permutations, SmcMor, Word};
use crate::presheaf::Presheaf;
use crate::species::Species;
use crate::unary::DisjointSets;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("unknown catalog species {0:?} (expected E, X, L, C or Perm)")]
    UnknownName(String),
    #[error("degree {0}: {1}")]
    NotAnAction(usize, String),
    #[error("species {0:?} is not over the terminal groupoid on both sides")]
    NotClassical(String),
}

/// Lexicographic rank of a permutation (its Lehmer code read in factorial
/// base).
pub fn perm_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&q| q < p[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Plain finite sets `L_n`, `n ≤ degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSpecies {
    pub name: String,
    pub sizes: Vec<usize>,
}

impl LinearSpecies {
    pub fn degree(&self) -> usize {
        self.sizes.len().saturating_sub(1)
    }
}

/// Sets `P_n` with right actions, tabulated as `act[n][rank σ][p] = p·σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSpecies {
    name: String,
    sizes: Vec<usize>,
    act: Vec<Vec<Vec<usize>>>,
}

impl ClassicalSpecies {
    /// Tabulates `act(n, σ, p)` and checks the action laws.
    pub fn from_fn(
        name: impl Into<String>,
        degree: usize,
        sizes: impl Fn(usize) -> usize,
        act: impl Fn(usize, &[usize], usize) -> usize,
    ) -> Result<Self, ClassicalError> {
        let sizes: Vec<usize> = (0..=degree).map(sizes).collect();
        let act = (0..=degree)
            .map(|n| {
                permutations(n)
                    .iter()
                    .map(|s| (0..sizes[n]).map(|p| act(n, s, p)).collect())
                    .collect()
            })
            .collect();
        let s = ClassicalSpecies {
            name: name.into(),
            sizes,
            act,
        };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), ClassicalError> {
        for n in 0..self.sizes.len() {
            let perms = permutations(n);
            let size = self.sizes[n];
            for (r, t) in self.act[n].iter().enumerate() {
                if t.len() != size || t.iter().any(|&q| q >= size) {
                    return Err(ClassicalError::NotAnAction(n, format!("table {r} has the wrong shape")));
                }
            }
            if self.act[n][0].iter().enumerate().any(|(p, &q)| p != q) {
                return Err(ClassicalError::NotAnAction(n, "identity acts nontrivially".into()));
            }
            for (i, s) in perms.iter().enumerate() {
                for (j, s2) in perms.iter().enumerate() {
                    let k = perm_rank(&perm_then(s, s2));
                    if (0..size).any(|p| self.act[n][j][self.act[n][i][p]] != self.act[n][k][p]) {
                        return Err(ClassicalError::NotAnAction(n, format!("(p·{s:?})·{s2:?} ≠ p·({s:?}{s2:?})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, n: usize) -> usize {
        self.sizes[n]
    }

    /// `p·σ` for `σ` given in one-line form.
    pub fn act(&self, sigma: &[usize], p: usize) -> usize {
        self.act[sigma.len()][perm_rank(sigma)][p]
    }

    /// Reads a species `!1 -> PSh 1` back as sets with actions.
    pub fn from_species(p: &Species) -> Result<Self, ClassicalError> {
        let terminal = |c: &FinCat| c.num_objects() == 1 && c.num_morphisms() == 1;
        if !terminal(p.dom()) || !terminal(p.cod()) {
            return Err(ClassicalError::NotClassical(p.name().to_string()));
        }
        let word = |n: usize| Word(vec![0; n]);
        ClassicalSpecies::from_fn(
            p.name(),
            p.degree(),
            |n| p.coeff_of(&word(n)).expect("word in range").size(0),
            |n, s, x| {
                let m = SmcMor {
                    dom: word(n),
                    cod: word(n),
                    perm: s.to_vec(),
                    family: vec![0; n],
                };
                p.act(p.morphism_index(&m).expect("morphism in range"), 0, x)
            },
        )
    }

    /// As a species `!1 -> PSh 1`.
    pub fn to_species(&self) -> Species {
        let one = Arc::new(FinCat::terminal());
        let o = one.clone();
        Species::tabulate(
            self.name.clone(),
            one.clone(),
            one,
            self.degree(),
            |w| Presheaf::from_action(o.clone(), self.sizes[w.len()], |_, x| x).expect("set"),
            |m, _| self.act[m.perm.len()][perm_rank(&m.perm)].clone(),
        )
        .expect("classical species tabulate")
    }
}

/// `(L×𝔖)_n = L_n × 𝔖_n` with `(ℓ, σ)·σ' = (ℓ, σσ')`; `(ℓ, σ)` has index
/// `ℓ·n! + rank σ`.
pub fn free_symmetric(l: &LinearSpecies) -> ClassicalSpecies {
    let perms: Vec<Vec<Vec<usize>>> = (0..=l.degree()).map(permutations).collect();
    ClassicalSpecies::from_fn(
        format!("{}×S", l.name),
        l.degree(),
        |n| l.sizes[n] * factorial(n),
        |n, s2, p| {
            let f = factorial(n);
            let (ell, s) = (p / f, &perms[n][p % f]);
            ell * f + perm_rank(&perm_then(s, s2))
        },
    )
    .expect("free actions are actions")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CatalogName {
    E,
    X,
    L,
    C,
    Perm,
}

impl FromStr for CatalogName {
    type Err = ClassicalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E" => Ok(CatalogName::E),
            "X" => Ok(CatalogName::X),
            "L" => Ok(CatalogName::L),
            "C" => Ok(CatalogName::C),
            "Perm" => Ok(CatalogName::Perm),
            _ => Err(ClassicalError::UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Cyclic arrangements: sequences rotated to start with label 0.
fn cyclic_reps(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    permutations(n).into_iter().filter(|p| p[0] == 0).collect()
}

fn rotate_to_zero(seq: &[usize]) -> Vec<usize> {
    let at = seq.iter().position(|&v| v == 0).expect("label 0 present");
    seq[at..].iter().chain(&seq[..at]).copied().collect()
}

pub fn catalog(name: CatalogName, degree: usize) -> ClassicalSpecies {
    let built = match name {
        CatalogName::E => ClassicalSpecies::from_fn("E", degree, |_| 1, |_, _, _| 0),
        CatalogName::X => ClassicalSpecies::from_fn("X", degree, |n| usize::from(n == 1), |_, _, p| p),
        CatalogName::L => {
            let l = LinearSpecies {
                name: "L".into(),
                sizes: vec![1; degree + 1],
            };
            return free_symmetric(&l).with_name("L");
        }
        CatalogName::C => {
            let reps: Vec<Vec<Vec<usize>>> = (0..=degree).map(cyclic_reps).collect();
            ClassicalSpecies::from_fn(
                "C",
                degree,
                |n| reps[n].len(),
                |n, s, p| {
                    let moved = rotate_to_zero(&perm_then(&reps[n][p], s));
                    reps[n].iter().position(|r| *r == moved).expect("canonical rotation")
                },
            )
        }
        CatalogName::Perm => {
            let perms: Vec<Vec<Vec<usize>>> = (0..=degree).map(permutations).collect();
            ClassicalSpecies::from_fn(
                "Perm",
                degree,
                factorial,
                |n, s, p| {
                    // σ⁻¹ p σ
                    let conj = perm_then(&perm_then(&perm_inverse(s), &perms[n][p]), s);
                    perm_rank(&conj)
                },
            )
        }
    };
    built.expect("catalog species are actions")
}

impl ClassicalSpecies {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// `|P_n ×_{𝔖_n} X^n|` for `|X| = k`, by union-find over the pairs
/// `(p, x)` with `(p, x∘σ) ~ (p·σ, x)`.
pub fn count_labelled(p: &ClassicalSpecies, k: usize) -> Vec<usize> {
    (0..=p.degree())
        .map(|n| {
            let fams = k.pow(n as u32);
            let size = p.sizes[n];
            let mut dsu = DisjointSets::new(size * fams);
            let digits = |mut v: usize| -> Vec<usize> {
                let mut d = vec![0; n];
                for i in (0..n).rev() {
                    d[i] = v % k;
                    v /= k;
                }
                d
            };
            let pack = |d: &[usize]| d.iter().fold(0, |acc, &v| acc * k + v);
            for (r, s) in permutations(n).iter().enumerate() {
                for x in 0..fams {
                    let xd = digits(x);
                    let xs: Vec<usize> = (0..n).map(|i| xd[s[i]]).collect();
                    let xi = pack(&xs);
                    for q in 0..size {
                        dsu.union(q * fams + xi, p.act[n][r][q] * fams + x);
                    }
                }
            }
            dsu.classes().1
        })
        .collect()
}

/// Orbits of `P_n` under `𝔖_n`.
pub fn count_unlabelled(p: &ClassicalSpecies) -> Vec<usize> {
    (0..=p.degree())
        .map(|n| {
            let mut dsu = DisjointSets::new(p.sizes[n]);
            for t in &p.act[n] {
                for (q, &r) in t.iter().enumerate() {
                    dsu.union(q, r);
                }
            }
            dsu.classes().1
        })
        .collect()
}

/// `(1/n!) Σ_σ |Fix σ|`, computed exactly.
pub fn burnside_unlabelled(p: &ClassicalSpecies) -> Vec<usize> {
    (0..=p.degree())
        .map(|n| {
            let fixed: usize = p.act[n]
                .iter()
                .map(|t| t.iter().enumerate().filter(|(q, &r)| *q == r).count())
                .sum();
            let order = factorial(n);
            assert_eq!(fixed % order, 0, "fixed-point total not divisible by the group order");
            fixed / order
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub degree: usize,
    pub labelled: usize,
    pub unlabelled: usize,
}

pub fn count_table(p: &ClassicalSpecies, k: usize) -> Vec<CountRow> {
    let lab = count_labelled(p, k);
    let unl = count_unlabelled(p);
    (0..=p.degree())
        .map(|n| CountRow {
            degree: n,
            labelled: lab[n],
            unlabelled: unl[n],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn species_round_trip() {
        for name in [CatalogName::E, CatalogName::C, CatalogName::Perm] {
            let p = catalog(name, 4);
            assert_eq!(ClassicalSpecies::from_species(&p.to_species()).unwrap(), p);
        }
        let z2 = Arc::new(FinCat::cyclic(2));
        let s = Species::terminal(z2.clone(), z2, 1);
        assert!(matches!(ClassicalSpecies::from_species(&s), Err(ClassicalError::NotClassical(_))));
    }

    #[test]
    fn rank_matches_enumeration_order() {
        for n in 0..5 {
            for (i, p) in permutations(n).iter().enumerate() {
                assert_eq!(perm_rank(p), i);
            }
        }
    }

    #[test]
    fn sets_labelled_by_two() {
        let e = catalog(CatalogName::E, 2);
        assert_eq!(count_labelled(&e, 2), vec![1, 2, 3]);
        assert_eq!(count_unlabelled(&e), vec![1, 1, 1]);
    }

    #[test]
    fn singleton_species() {
        let x = catalog(CatalogName::X, 2);
        assert_eq!(count_labelled(&x, 3), vec![0, 3, 0]);
    }

    #[test]
    fn zero_labels() {
        for name in [CatalogName::E, CatalogName::L, CatalogName::Perm] {
            let p = catalog(name, 3);
            let c = count_labelled(&p, 0);
            assert_eq!(c[0], p.size(0));
            assert!(c[1..].iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn linear_orders() {
        let l = catalog(CatalogName::L, 3);
        assert_eq!(count_labelled(&l, 2), vec![1, 2, 4, 8]);
        assert_eq!(count_unlabelled(&l), vec![1, 1, 1, 1]);
    }

    #[test]
    fn permutations_by_conjugacy() {
        let p = catalog(CatalogName::Perm, 3);
        assert_eq!(count_unlabelled(&p), vec![1, 1, 2, 3]);
    }

    #[test]
    fn cyclic_orders_form_one_orbit() {
        let c = catalog(CatalogName::C, 4);
        assert_eq!(c.size(4), 6);
        assert_eq!(count_unlabelled(&c)[4], 1);
    }

    #[test]
    fn constant_linear_species() {
        let l = LinearSpecies {
            name: "one".into(),
            sizes: vec![1, 0, 0],
        };
        let s = free_symmetric(&l);
        assert_eq!(count_labelled(&s, 5), vec![1, 0, 0]);
    }

    #[test]
    fn bad_action_is_rejected() {
        // swapping acts as a 3-cycle: not a homomorphism
        let err = ClassicalSpecies::from_fn("bad", 2, |_| 3, |_, s, p| if s == [1, 0] { (p + 1) % 3 } else { p });
        assert!(err.is_err());
    }

    #[test]
    fn unknown_name() {
        assert!("Q".parse::<CatalogName>().is_err());
        assert_eq!("Perm".parse::<CatalogName>().unwrap(), CatalogName::Perm);
    }
}
