//! Finite pocsets: posets with an order-reversing, fixed-point-free involution.
//!
//! Elements are numbered so that `2p` and `2p + 1` form the `p`-th
//! complementary pair; the involution is `a ↦ a ^ 1`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::complex::CubeComplex;
use crate::error::{Error, Result};
use crate::hyperplane::Halfspace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pocset {
    labels: Vec<String>,
    /// `up[a]` is `{b : a ⪯ b}`, reflexive.
    up: Vec<FixedBitSet>,
}

pub const fn complement(a: usize) -> usize {
    a ^ 1
}

impl Pocset {
    pub fn empty() -> Self {
        Pocset { labels: Vec::new(), up: Vec::new() }
    }

    /// Builds from element labels (consecutive complementary pairs) and
    /// generating relations `a ⪯ b`, closed under transitivity and the
    /// involution.
    pub fn new(labels: Vec<String>, order: &[(usize, usize)]) -> Result<Self> {
        let len = labels.len();
        if len % 2 == 1 {
            return Err(Error::InvalidPocset("odd number of elements".into()));
        }
        let mut up: Vec<FixedBitSet> = (0..len)
            .map(|a| {
                let mut bits = FixedBitSet::with_capacity(len);
                bits.insert(a);
                bits
            })
            .collect();
        for &(a, b) in order {
            if a >= len || b >= len {
                return Err(Error::InvalidPocset(format!("relation ({a}, {b}) out of range")));
            }
            up[a].insert(b);
            up[complement(b)].insert(complement(a));
        }
        // Warshall closure; reversing through the involution commutes with it.
        for k in 0..len {
            let row = up[k].clone();
            for (a, bits) in up.iter_mut().enumerate() {
                if a != k && bits.contains(k) {
                    bits.union_with(&row);
                }
            }
        }
        Pocset::from_closed(labels, up)
    }

    /// Builds from labelled complementary pairs and relations between labels.
    pub fn from_labels<S: AsRef<str>>(pairs: &[(S, S)], order: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> =
            pairs.iter().flat_map(|(a, b)| [a.as_ref().to_owned(), b.as_ref().to_owned()]).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidPocset(format!("duplicate element `{l}`")));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::InvalidPocset(format!("unknown element `{}`", s.as_ref())))
        };
        let relations = order.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>>>()?;
        Pocset::new(labels, &relations)
    }

    /// Checks the axioms on an already transitively closed relation.
    pub(crate) fn from_closed(labels: Vec<String>, up: Vec<FixedBitSet>) -> Result<Self> {
        let len = labels.len();
        for a in 0..len {
            if up[a].contains(complement(a)) {
                return Err(Error::DegeneratePair(labels[a].clone()));
            }
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return Err(Error::InvalidPocset(format!(
                        "`{}` and `{}` are mutually below",
                        labels[a], labels[b]
                    )));
                }
                if !up[complement(b)].contains(complement(a)) {
                    return Err(Error::InvalidPocset(format!(
                        "involution does not reverse `{}` ⪯ `{}`",
                        labels[a], labels[b]
                    )));
                }
            }
        }
        Ok(Pocset { labels, up })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn pair_count(&self) -> usize {
        self.labels.len() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn up(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// Strict relations `a ≺ b` in lexicographic order.
    pub fn strict_relations(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|a| self.up[a].ones().filter(move |&b| b != a).map(move |b| (a, b))).collect()
    }

    /// Elements are transverse when no element of one pair is comparable to
    /// an element of the other.
    pub fn transverse(&self, a: usize, b: usize) -> bool {
        let (p, q) = (a / 2, b / 2);
        p != q && self.pairs_transverse(p, q)
    }

    pub fn pairs_transverse(&self, p: usize, q: usize) -> bool {
        if p == q {
            return false;
        }
        let (a, b) = (2 * p, 2 * q);
        [a, a + 1].iter().all(|&x| [b, b + 1].iter().all(|&y| !self.le(x, y) && !self.le(y, x)))
    }

    /// Maximal sets of pairwise transverse pairs, each sorted, in sorted order.
    pub fn maximal_transverse_pair_sets(&self) -> Vec<Vec<usize>> {
        let m = self.pair_count();
        let neighbours: Vec<FixedBitSet> = (0..m)
            .map(|p| {
                let mut bits = FixedBitSet::with_capacity(m);
                bits.extend((0..m).filter(|&q| self.pairs_transverse(p, q)));
                bits
            })
            .collect();
        let mut out = Vec::new();
        let mut all = FixedBitSet::with_capacity(m);
        all.insert_range(..);
        bron_kerbosch(&neighbours, &mut Vec::new(), all, FixedBitSet::with_capacity(m), &mut out);
        for clique in &mut out {
            clique.sort_unstable();
        }
        out.sort();
        out
    }

    /// Largest number of pairwise transverse pairs.
    pub fn dimension(&self) -> usize {
        self.maximal_transverse_pair_sets().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The sub-pocset on the given pairs, renumbered in the given order.
    pub fn restrict(&self, pairs: &[usize]) -> Pocset {
        let elements: Vec<usize> = pairs.iter().flat_map(|&p| [2 * p, 2 * p + 1]).collect();
        let labels = elements.iter().map(|&a| self.labels[a].clone()).collect();
        let up = elements
            .iter()
            .map(|&a| {
                let mut bits = FixedBitSet::with_capacity(elements.len());
                bits.extend(elements.iter().enumerate().filter(|&(_, &b)| self.le(a, b)).map(|(i, _)| i));
                bits
            })
            .collect();
        Pocset { labels, up }
    }
}

fn bron_kerbosch(
    neighbours: &[FixedBitSet],
    clique: &mut Vec<usize>,
    mut candidates: FixedBitSet,
    mut excluded: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_clear() && excluded.is_clear() {
        out.push(clique.clone());
        return;
    }
    let pivot =
        candidates.union(&excluded).max_by_key(|&u| neighbours[u].intersection(&candidates).count()).expect("nonempty");
    let branch: Vec<usize> = candidates.difference(&neighbours[pivot]).collect();
    for v in branch {
        clique.push(v);
        bron_kerbosch(neighbours, clique, &candidates & &neighbours[v], &excluded & &neighbours[v], out);
        clique.pop();
        candidates.set(v, false);
        excluded.insert(v);
    }
}

/// The label `-u|v` or `+u|v` of a halfspace.
pub fn halfspace_label(x: &CubeComplex, h: Halfspace) -> String {
    let sign = if h.index() % 2 == 1 { '+' } else { '-' };
    format!("{sign}{}", x.hyperplane(h.hyperplane).label)
}

/// The halfspace pocset `(ℋ(X), ⊆, *)`; element `2w` is the minus side of `w`.
pub fn pocset_of(x: &CubeComplex) -> Pocset {
    let len = 2 * x.hyperplanes().len();
    let halfspaces: Vec<Halfspace> = (0..len).map(Halfspace::from_index).collect();
    let labels = halfspaces.iter().map(|&h| halfspace_label(x, h)).collect();
    let up = halfspaces
        .iter()
        .map(|&a| {
            let mut bits = FixedBitSet::with_capacity(len);
            bits.extend((0..len).filter(|&b| x.halfspace(a).is_subset(x.halfspace(halfspaces[b]))));
            bits
        })
        .collect();
    Pocset::from_closed(labels, up).expect("halfspaces of a median graph form a pocset")
}
