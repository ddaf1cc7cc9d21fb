//! Hyperplanes, halfspaces and the combinatorics of their arrangement.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::complex::{CubeComplex, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }
}

/// One side of a hyperplane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub hyperplane: usize,
    pub side: Side,
}

impl Halfspace {
    pub fn new(hyperplane: usize, side: Side) -> Self {
        Halfspace { hyperplane, side }
    }

    pub fn complement(self) -> Halfspace {
        Halfspace { hyperplane: self.hyperplane, side: self.side.flip() }
    }

    /// Dense index `2w` (minus) or `2w + 1` (plus).
    pub fn index(self) -> usize {
        2 * self.hyperplane + usize::from(self.side == Side::Plus)
    }

    pub fn from_index(i: usize) -> Self {
        Halfspace { hyperplane: i / 2, side: if i % 2 == 1 { Side::Plus } else { Side::Minus } }
    }
}

/// An edge-parallelism class together with its two halfspaces.
///
/// The smallest dual edge `u|v` (with `u < v`) names the hyperplane; `u`
/// lies in `minus` and `v` in `plus`.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    pub label: String,
    pub dual_edges: Vec<usize>,
    pub minus: FixedBitSet,
    pub plus: FixedBitSet,
    pub carrier_minus: FixedBitSet,
    pub carrier_plus: FixedBitSet,
}

impl Hyperplane {
    pub fn carrier(&self) -> FixedBitSet {
        &self.carrier_minus | &self.carrier_plus
    }

    pub fn side_of(&self, v: Vertex) -> Side {
        if self.plus.contains(v) {
            Side::Plus
        } else {
            Side::Minus
        }
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    /// Keeps the smaller root so roots are class minima.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.0[hi] = lo;
        true
    }
}

pub(crate) fn union_find(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for (a, b) in pairs {
        uf.union(a, b);
    }
    (0..n).map(|i| uf.find(i)).collect()
}

/// Whether adding the edges one by one ever closes a cycle.
pub(crate) fn has_cycle(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut uf = UnionFind::new(n);
    edges.into_iter().any(|(a, b)| !uf.union(a, b))
}

/// Hyperplanes from square-opposite closure, cross-checked against
/// distance-comparison halfspaces of a representative edge.
pub(crate) fn extract(x: &CubeComplex) -> Result<(Vec<Hyperplane>, Vec<usize>)> {
    let edge = |a: Vertex, b: Vertex| x.edge_id(a, b).expect("square edge");
    let pairs = x.squares().iter().flat_map(|&[a, b, c, d]| [(edge(a, b), edge(d, c)), (edge(a, d), edge(b, c))]);
    let roots = union_find(x.edges().len(), pairs);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    for (e, &r) in roots.iter().enumerate() {
        let id = *class_of_root.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(e);
    }
    let n = x.len();
    let mut hyperplanes = Vec::with_capacity(classes.len());
    let mut edge_hyperplane = vec![0; x.edges().len()];
    for (w, dual_edges) in classes.into_iter().enumerate() {
        let (u, v) = x.edges()[dual_edges[0]];
        let mut minus = FixedBitSet::with_capacity(n);
        for z in x.vertices() {
            if x.dist(z, u) < x.dist(z, v) {
                minus.insert(z);
            }
        }
        let mut plus = minus.clone();
        plus.toggle_range(..);
        let crossing: Vec<usize> = x
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| minus.contains(a) != minus.contains(b))
            .map(|(e, _)| e)
            .collect();
        if crossing != dual_edges {
            return Err(Error::Internal(format!(
                "square-parallelism and distance halfspaces disagree at `{}`",
                x.edge_label(dual_edges[0])
            )));
        }
        let mut carrier_minus = FixedBitSet::with_capacity(n);
        let mut carrier_plus = FixedBitSet::with_capacity(n);
        for &e in &dual_edges {
            let (a, b) = x.edges()[e];
            for z in [a, b] {
                if minus.contains(z) {
                    carrier_minus.insert(z);
                } else {
                    carrier_plus.insert(z);
                }
            }
            edge_hyperplane[e] = w;
        }
        hyperplanes.push(Hyperplane {
            label: x.edge_label(dual_edges[0]),
            dual_edges,
            minus,
            plus,
            carrier_minus,
            carrier_plus,
        });
    }
    Ok((hyperplanes, edge_hyperplane))
}

/// Strict containment of halfspaces (as vertex sets).
pub fn halfspace_contained(x: &CubeComplex, a: Halfspace, b: Halfspace) -> bool {
    a != b && x.halfspace(a).is_subset(x.halfspace(b))
}

pub(crate) fn transverse(x: &CubeComplex, a: usize, b: usize) -> bool {
    if a == b {
        return false;
    }
    let (p, q) = (&x.hyperplanes()[a], &x.hyperplanes()[b]);
    !p.plus.is_disjoint(&q.plus)
        && !p.plus.is_disjoint(&q.minus)
        && !p.minus.is_disjoint(&q.plus)
        && !p.minus.is_disjoint(&q.minus)
}

/// All four quarter-spaces of the two hyperplanes are nonempty.
pub fn is_transverse(x: &CubeComplex, a: usize, b: usize) -> Result<bool> {
    if a == b {
        return Err(Error::SameHyperplane(x.hyperplane(a).label.clone()));
    }
    Ok(transverse(x, a, b))
}

/// Hyperplanes transverse to `w`, in canonical order.
pub fn crossing_hyperplanes(x: &CubeComplex, w: usize) -> Vec<usize> {
    (0..x.hyperplanes().len()).filter(|&u| transverse(x, w, u)).collect()
}

/// `W(w1 | w2)`: hyperplanes with the two carriers on opposite sides.
pub fn separating_hyperplanes(x: &CubeComplex, w1: usize, w2: usize) -> Vec<usize> {
    let (c1, c2) = (x.hyperplane(w1).carrier(), x.hyperplane(w2).carrier());
    x.hyperplanes()
        .iter()
        .enumerate()
        .filter(|&(u, h)| {
            u != w1
                && u != w2
                && ((c1.is_subset(&h.plus) && c2.is_subset(&h.minus))
                    || (c1.is_subset(&h.minus) && c2.is_subset(&h.plus)))
        })
        .map(|(u, _)| u)
        .collect()
}

/// Unordered triples of pairwise disjoint hyperplanes with pairwise disjoint
/// halfspace choices.
pub fn facing_triples(x: &CubeComplex) -> Vec<[usize; 3]> {
    let m = x.hyperplanes().len();
    let sides = [Side::Minus, Side::Plus];
    let disjoint = |a: Halfspace, b: Halfspace| x.halfspace(a).is_disjoint(x.halfspace(b));
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if transverse(x, i, j) {
                continue;
            }
            for k in j + 1..m {
                if transverse(x, i, k) || transverse(x, j, k) {
                    continue;
                }
                let facing = sides.iter().any(|&si| {
                    sides.iter().any(|&sj| {
                        sides.iter().any(|&sk| {
                            let (a, b, c) = (Halfspace::new(i, si), Halfspace::new(j, sj), Halfspace::new(k, sk));
                            disjoint(a, b) && disjoint(a, c) && disjoint(b, c)
                        })
                    })
                });
                if facing {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

/// A longest strictly nested sequence of halfspaces, smallest first.
pub fn longest_chain(x: &CubeComplex) -> Vec<Halfspace> {
    let count = 2 * x.hyperplanes().len();
    if count == 0 {
        return Vec::new();
    }
    let mut order: Vec<Halfspace> = (0..count).map(Halfspace::from_index).collect();
    order.sort_by_key(|&h| (x.halfspace(h).count_ones(..), h.index()));
    // best[i]: length of the longest chain ending at order[i], with predecessor.
    let mut best: Vec<(usize, Option<usize>)> = vec![(1, None); count];
    for i in 0..count {
        for j in 0..i {
            if halfspace_contained(x, order[j], order[i]) && best[j].0 + 1 > best[i].0 {
                best[i] = (best[j].0 + 1, Some(j));
            }
        }
    }
    let mut end = 0;
    for i in 1..count {
        if best[i].0 > best[end].0 {
            end = i;
        }
    }
    let mut chain = vec![order[end]];
    let mut cursor = best[end].1;
    while let Some(j) = cursor {
        chain.push(order[j]);
        cursor = best[j].1;
    }
    chain.reverse();
    chain
}

/// Minimum vertex distance between the two carriers.
pub fn hyperplane_distance(x: &CubeComplex, a: usize, b: usize) -> u32 {
    let (ca, cb) = (x.hyperplane(a).carrier(), x.hyperplane(b).carrier());
    ca.ones().flat_map(|u| cb.ones().map(move |v| (u, v))).map(|(u, v)| x.dist(u, v)).min().unwrap_or(0)
}

/// Outcome of the search for a halfspace inside a quarter-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerReport {
    pub halfspace: Option<Halfspace>,
    /// Hypotheses of the corner property that this finite complex fails.
    pub failed_hypotheses: Vec<&'static str>,
}

pub fn corner_halfspace(x: &CubeComplex, h1: Halfspace, h2: Halfspace) -> Result<CornerReport> {
    if !is_transverse(x, h1.hyperplane, h2.hyperplane)? {
        return Err(Error::NotTransverse(
            x.hyperplane(h1.hyperplane).label.clone(),
            x.hyperplane(h2.hyperplane).label.clone(),
        ));
    }
    let quarter = x.halfspace(h1) & x.halfspace(h2);
    let halfspace =
        (0..2 * x.hyperplanes().len()).map(Halfspace::from_index).find(|&k| x.halfspace(k).is_subset(&quarter));
    let mut failed_hypotheses = Vec::new();
    if !x.hyperplanes().is_empty() {
        failed_hypotheses.push("essential");
    }
    if non_transversality_components(x).len() > 1 {
        failed_hypotheses.push("irreducible");
    }
    if (0..x.hyperplanes().len()).any(|w| !crossing_hyperplanes(x, w).is_empty()) {
        failed_hypotheses.push("hyperplane-essential");
    }
    Ok(CornerReport { halfspace, failed_hypotheses })
}

fn components(m: usize, linked: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let pairs = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).filter(|&(a, b)| linked(a, b));
    let roots = union_find(m, pairs.collect::<Vec<_>>());
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (w, r) in roots.into_iter().enumerate() {
        let i = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[i].push(w);
    }
    groups
}

/// Components of the graph on hyperplanes joining non-transverse pairs.
pub fn non_transversality_components(x: &CubeComplex) -> Vec<Vec<usize>> {
    components(x.hyperplanes().len(), |a, b| !transverse(x, a, b))
}

/// Components of the graph on hyperplanes joining transverse pairs.
pub fn transversality_components(x: &CubeComplex) -> Vec<Vec<usize>> {
    components(x.hyperplanes().len(), |a, b| transverse(x, a, b))
}

/// A partition `W = A ⊔ B` into nonempty parts with nothing in `A`
/// transverse to anything in `B`, if one exists.
pub fn one_ended_obstruction(x: &CubeComplex) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut parts = transversality_components(x);
    if parts.len() < 2 {
        return None;
    }
    let first = parts.remove(0);
    let mut rest: Vec<usize> = parts.concat();
    rest.sort_unstable();
    Some((first, rest))
}

/// What a vertex permutation does to the hyperplanes.
#[derive(Clone, Debug)]
pub struct AutomorphismReport {
    pub permutation: Vec<Vertex>,
    pub hyperplane_image: Vec<usize>,
    pub hyperplane_orbits: Vec<Vec<usize>>,
    pub inversions: Vec<usize>,
    /// Order of the vertex permutation, saturating at `u64::MAX`.
    pub order: u64,
    /// Entry `k - 1` tells whether the `k`-th power acts without inversions;
    /// listed up to the order, capped at [`MAX_REPORTED_POWERS`].
    pub inversion_free_powers: Vec<bool>,
    pub stably_without_inversions: bool,
}

pub const MAX_REPORTED_POWERS: usize = 4096;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn check_automorphism(x: &CubeComplex, permutation: &[Vertex]) -> Result<AutomorphismReport> {
    let n = x.len();
    if permutation.len() != n {
        return Err(Error::NotBijection(format!("{} images for {} vertices", permutation.len(), n)));
    }
    let mut hit = vec![false; n];
    for &v in permutation {
        if v >= n || std::mem::replace(&mut hit[v], true) {
            return Err(Error::NotBijection(format!("image index {v} repeated or out of range")));
        }
    }
    for &(u, v) in x.edges() {
        if !x.is_adjacent(permutation[u], permutation[v]) {
            return Err(Error::NotAutomorphism(x.name(u).to_owned(), x.name(v).to_owned()));
        }
    }

    let m = x.hyperplanes().len();
    let mut hyperplane_image = Vec::with_capacity(m);
    let mut flips = Vec::with_capacity(m);
    for w in x.hyperplanes() {
        let (u, v) = x.edges()[w.dual_edges[0]];
        let e = x.edge_id(permutation[u], permutation[v]).expect("edges map to edges");
        let image = x.hyperplane_of_edge(e);
        hyperplane_image.push(image);
        flips.push(x.hyperplane(image).minus.contains(permutation[v]));
    }

    let mut seen = vec![false; m];
    let mut hyperplane_orbits = Vec::new();
    let mut cycles = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut parity = false;
        let mut w = start;
        while !seen[w] {
            seen[w] = true;
            orbit.push(w);
            parity ^= flips[w];
            w = hyperplane_image[w];
        }
        cycles.push((orbit.len() as u64, parity));
        orbit.sort_unstable();
        hyperplane_orbits.push(orbit);
    }
    let inversions = (0..m).filter(|&w| hyperplane_image[w] == w && flips[w]).collect();

    let mut seen = vec![false; n];
    let mut order: u64 = 1;
    for start in 0..n {
        let mut len = 0u64;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            len += 1;
            v = permutation[v];
        }
        if len > 0 {
            order = (order / gcd(order, len)).saturating_mul(len);
        }
    }
    // g^k inverts a hyperplane in a cycle of length L with flip parity s
    // iff L divides k, s is odd and k / L is odd.
    let reported = order.min(MAX_REPORTED_POWERS as u64);
    let inversion_free_powers = (1..=reported)
        .map(|k| !cycles.iter().any(|&(len, parity)| parity && k % len == 0 && (k / len) % 2 == 1))
        .collect();
    let stably_without_inversions = !cycles.iter().any(|&(_, parity)| parity);
    Ok(AutomorphismReport {
        permutation: permutation.to_vec(),
        hyperplane_image,
        hyperplane_orbits,
        inversions,
        order,
        inversion_free_powers,
        stably_without_inversions,
    })
}
