//! Finite CAT(0) cube complexes, stored by their 1-skeleta.
//!
//! A [`CubeComplex`] is a finite connected median graph. Everything else
//! (distances, squares, cubes, hyperplanes, halfspace labels) is derived once
//! at validation time and never changes afterwards.
//!
//! Vertices are addressed by their index in the canonical (lexicographic)
//! order of their identifiers, so iteration order is stable across runs.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyperplane::{self, Halfspace, Hyperplane, Side};

/// Index of a vertex in the canonical order of a complex.
pub type Vertex = usize;

/// How exhaustively the median property is checked during validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MedianCheck {
    /// Every vertex triple (the default).
    #[default]
    Exhaustive,
    /// A fixed number of pseudo-random triples.
    Sampled { triples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ValidateOptions {
    pub median_check: MedianCheck,
}

/// A non-negative multiple of one half, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(u32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_twice(twice: u32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(value: u32) -> Self {
        HalfInt(2 * value)
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// A cube of the complex: its `2^k` corners and the `k` hyperplanes crossing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub vertices: Vec<Vertex>,
    pub directions: Vec<usize>,
}

impl Cube {
    pub fn dimension(&self) -> usize {
        self.directions.len()
    }
}

/// A subset of the vertices of one complex.
///
/// The `convex` flag is only ever set by code that has verified convexity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
    convex: bool,
}

impl VertexSet {
    pub fn empty(x: &CubeComplex) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(x.len()), convex: false }
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(x: &CubeComplex, vertices: I) -> Self {
        let mut bits = FixedBitSet::with_capacity(x.len());
        bits.extend(vertices);
        VertexSet { bits, convex: false }
    }

    /// Looks vertices up by identifier.
    pub fn from_names<S: AsRef<str>>(x: &CubeComplex, names: &[S]) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(x.len());
        for name in names {
            let v = x.index_of(name.as_ref()).ok_or_else(|| Error::UnknownVertex(name.as_ref().to_owned()))?;
            bits.insert(v);
        }
        Ok(VertexSet { bits, convex: false })
    }

    pub(crate) fn from_bits(bits: FixedBitSet, convex: bool) -> Self {
        VertexSet { bits, convex }
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.bits.ones().collect()
    }

    pub fn is_flagged_convex(&self) -> bool {
        self.convex
    }

    pub fn insert(&mut self, v: Vertex) {
        self.bits.insert(v);
        self.convex = false;
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet { bits: &self.bits | &other.bits, convex: false }
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }
}

/// The product decomposition of the bridge between two convex sets.
#[derive(Clone, Debug)]
pub struct BridgeDecomposition {
    /// `π_Y(Z)`.
    pub gate_in_first: VertexSet,
    /// `π_Z(Y)`.
    pub gate_in_second: VertexSet,
    /// The rung interval `I(π_Z(y), y)` for the first vertex `y` of `π_Y(Z)`.
    pub rung: VertexSet,
    pub bridge: VertexSet,
    /// `(bridge vertex, its gate in π_Y(Z), its gate in the rung)` for every bridge vertex.
    pub product: Vec<(Vertex, Vertex, Vertex)>,
}

/// A finite CAT(0) cube complex.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    adjacency: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
    edge_index: HashMap<(Vertex, Vertex), usize>,
    dist: Vec<u32>,
    squares: Vec<[Vertex; 4]>,
    cubes: Vec<Vec<Cube>>,
    pub(crate) hyperplanes: Vec<Hyperplane>,
    pub(crate) edge_hyperplane: Vec<usize>,
    labels: Vec<FixedBitSet>,
    label_index: HashMap<FixedBitSet, Vertex>,
}

/// Validates a graph as a median graph with exhaustive median checking.
pub fn validate_complex<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<CubeComplex> {
    validate_complex_with(vertices, edges, ValidateOptions::default())
}

pub fn validate_complex_with<S: AsRef<str>>(
    vertices: &[S],
    edges: &[(S, S)],
    options: ValidateOptions,
) -> Result<CubeComplex> {
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    let mut names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_owned()).collect();
    names.sort();
    for pair in names.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateVertex(pair[0].clone()));
        }
    }
    let index: HashMap<String, Vertex> = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownVertex(s.to_owned()));

    let mut edge_list = Vec::with_capacity(edges.len());
    for (a, b) in edges {
        let (u, v) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
        if u == v {
            return Err(Error::NotSimple(format!("self-loop at `{}`", names[u])));
        }
        edge_list.push((u.min(v), u.max(v)));
    }
    edge_list.sort_unstable();
    for pair in edge_list.windows(2) {
        if pair[0] == pair[1] {
            let (u, v) = pair[0];
            return Err(Error::NotSimple(format!("repeated edge `{}`-`{}`", names[u], names[v])));
        }
    }
    CubeComplex::build(names, index, edge_list, options)
}

impl CubeComplex {
    /// Builds from canonical names and sorted, deduplicated index edges.
    pub(crate) fn build(
        names: Vec<String>,
        index: HashMap<String, Vertex>,
        edges: Vec<(Vertex, Vertex)>,
        options: ValidateOptions,
    ) -> Result<CubeComplex> {
        let n = names.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let dist = all_pairs_bfs(&adjacency);
        if let Some(v) = (0..n).find(|&v| dist[v] == u32::MAX) {
            return Err(Error::NotConnected(names[v].clone(), names[0].clone()));
        }

        let mut x = CubeComplex {
            names,
            index,
            adjacency,
            edges,
            edge_index,
            dist,
            squares: Vec::new(),
            cubes: Vec::new(),
            hyperplanes: Vec::new(),
            edge_hyperplane: Vec::new(),
            labels: Vec::new(),
            label_index: HashMap::new(),
        };
        if let Some((triple, medians)) = x.find_median_failure(options.median_check) {
            return Err(Error::NotMedian {
                triple: triple.map(|v| x.names[v].clone()),
                medians: medians.into_iter().map(|v| x.names[v].clone()).collect(),
            });
        }
        x.squares = x.find_squares();
        let (hyperplanes, edge_hyperplane) = hyperplane::extract(&x)?;
        x.hyperplanes = hyperplanes;
        x.edge_hyperplane = edge_hyperplane;
        x.labels = (0..n)
            .map(|v| {
                let mut bits = FixedBitSet::with_capacity(x.hyperplanes.len());
                for (w, h) in x.hyperplanes.iter().enumerate() {
                    bits.set(w, h.plus.contains(v));
                }
                bits
            })
            .collect();
        x.label_index = x.labels.iter().cloned().enumerate().map(|(v, l)| (l, v)).collect();
        if x.label_index.len() != n {
            return Err(Error::Internal("two vertices share a halfspace label".into()));
        }
        x.cubes = x.find_cubes()?;
        Ok(x)
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.names.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_index.contains_key(&(u.min(v), u.max(v)))
    }

    /// Edges as `(u, v)` with `u < v`, in canonical order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn edge_label(&self, e: usize) -> String {
        let (u, v) = self.edges[e];
        format!("{}|{}", self.names[u], self.names[v])
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges.iter().map(|&(u, v)| (self.names[u].clone(), self.names[v].clone())).collect()
    }

    pub fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        self.dist[u * self.len() + v]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Squares as `[a, b, c, d]` in cyclic order, `a` the smallest corner.
    pub fn squares(&self) -> &[[Vertex; 4]] {
        &self.squares
    }

    /// All cubes of dimension `k`, vertices (k = 0) included.
    pub fn cubes(&self, k: usize) -> &[Cube] {
        self.cubes.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cube_counts(&self) -> Vec<usize> {
        self.cubes.iter().map(Vec::len).collect()
    }

    pub fn total_cubes(&self) -> usize {
        self.cubes.iter().map(Vec::len).sum()
    }

    pub fn dimension(&self) -> usize {
        self.cubes.len().saturating_sub(1)
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, w: usize) -> &Hyperplane {
        &self.hyperplanes[w]
    }

    /// The hyperplane dual to edge `e`.
    pub fn hyperplane_of_edge(&self, e: usize) -> usize {
        self.edge_hyperplane[e]
    }

    /// Finds a hyperplane by its label or by any dual edge written `u|v`.
    pub fn find_hyperplane(&self, label: &str) -> Result<usize> {
        let unknown = || Error::UnknownHyperplane(label.to_owned());
        let (a, b) = label.split_once('|').ok_or_else(unknown)?;
        let (u, v) = (self.index_of(a).ok_or_else(unknown)?, self.index_of(b).ok_or_else(unknown)?);
        self.edge_id(u, v).map(|e| self.edge_hyperplane[e]).ok_or_else(unknown)
    }

    pub fn halfspace(&self, h: Halfspace) -> &FixedBitSet {
        let w = &self.hyperplanes[h.hyperplane];
        match h.side {
            Side::Plus => &w.plus,
            Side::Minus => &w.minus,
        }
    }

    /// The halfspace label of `v`: bit `w` is set iff `v` lies on the plus side of `w`.
    pub fn label(&self, v: Vertex) -> &FixedBitSet {
        &self.labels[v]
    }

    pub fn vertex_with_label(&self, label: &FixedBitSet) -> Option<Vertex> {
        self.label_index.get(label).copied()
    }

    pub fn all_vertices(&self) -> VertexSet {
        let mut bits = FixedBitSet::with_capacity(self.len());
        bits.insert_range(..);
        VertexSet::from_bits(bits, true)
    }

    /// The median of three vertices, read off coordinatewise from halfspace labels.
    pub fn median(&self, x: Vertex, y: Vertex, z: Vertex) -> Vertex {
        let (a, b, c) = (&self.labels[x], &self.labels[y], &self.labels[z]);
        let mut majority = a & b;
        majority |= &(b & c);
        majority |= &(a & c);
        self.label_index[&majority]
    }

    /// `I(x, y)`: all vertices on some geodesic from `x` to `y`.
    pub fn interval(&self, x: Vertex, y: Vertex) -> VertexSet {
        let d = self.dist(x, y);
        let mut bits = FixedBitSet::with_capacity(self.len());
        bits.extend(self.vertices().filter(|&z| self.dist(x, z) + self.dist(z, y) == d));
        VertexSet::from_bits(bits, true)
    }

    /// The intersection of all halfspaces containing `set`.
    fn halfspace_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut hull = FixedBitSet::with_capacity(self.len());
        hull.insert_range(..);
        for w in &self.hyperplanes {
            if set.is_subset(&w.plus) {
                hull.intersect_with(&w.plus);
            } else if set.is_subset(&w.minus) {
                hull.intersect_with(&w.minus);
            }
        }
        hull
    }

    /// Convex sets of a median graph are exactly the intersections of halfspaces.
    pub fn is_convex(&self, set: &VertexSet) -> bool {
        set.convex || (!set.is_empty() && self.halfspace_closure(&set.bits) == set.bits)
    }

    /// Returns the set flagged convex, or the first vertex its hull adds.
    pub fn ensure_convex(&self, set: &VertexSet) -> Result<VertexSet> {
        if set.convex {
            return Ok(set.clone());
        }
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let hull = self.halfspace_closure(&set.bits);
        match hull.difference(&set.bits).next() {
            None => Ok(VertexSet::from_bits(hull, true)),
            Some(v) => Err(Error::NotConvex(self.names[v].clone())),
        }
    }

    pub fn convex_hull(&self, set: &VertexSet) -> Result<VertexSet> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(VertexSet::from_bits(self.halfspace_closure(&set.bits), true))
    }

    fn nearest_in(&self, y: &VertexSet, x: Vertex) -> Vertex {
        y.iter().min_by_key(|&v| (self.dist(x, v), v)).expect("nonempty convex set")
    }

    /// `W(A | B)`: hyperplanes with `A` on one side and `B` on the other.
    pub fn separator_set(&self, a: &VertexSet, b: &VertexSet) -> Vec<usize> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        self.hyperplanes
            .iter()
            .enumerate()
            .filter(|(_, w)| {
                (a.bits.is_subset(&w.plus) && b.bits.is_subset(&w.minus))
                    || (a.bits.is_subset(&w.minus) && b.bits.is_subset(&w.plus))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// `W(x | y)` for single vertices: the coordinates where the labels differ.
    pub fn separating_vertices(&self, x: Vertex, y: Vertex) -> Vec<usize> {
        let mut w: Vec<usize> = self.labels[x].symmetric_difference(&self.labels[y]).collect();
        w.sort_unstable();
        w
    }

    /// Hyperplanes crossing a set, i.e. meeting both of its sides.
    pub fn crossing_set(&self, set: &VertexSet) -> Vec<usize> {
        self.hyperplanes
            .iter()
            .enumerate()
            .filter(|(_, w)| !set.bits.is_disjoint(&w.plus) && !set.bits.is_disjoint(&w.minus))
            .map(|(i, _)| i)
            .collect()
    }

    /// Gate projection of `x` onto the convex set `y`.
    ///
    /// The nearest point is certified by `W(x | π(x)) = W(x | Y)`.
    pub fn gate_project(&self, y: &VertexSet, x: Vertex) -> Result<Vertex> {
        let y = self.ensure_convex(y)?;
        let gate = self.nearest_in(&y, x);
        let single = VertexSet::from_vertices(self, [x]);
        let to_gate = self.separating_vertices(x, gate);
        if to_gate != self.separator_set(&single, &y) {
            return Err(Error::Internal(format!("gate of `{}` failed its separator certificate", self.names[x])));
        }
        Ok(gate)
    }

    /// Gate projection without the certificate; `y` must already be convex.
    pub(crate) fn gate_unchecked(&self, y: &VertexSet, x: Vertex) -> Vertex {
        self.nearest_in(y, x)
    }

    /// `π_Y(S)` for a set `S`.
    pub fn project_set(&self, y: &VertexSet, s: &VertexSet) -> Result<VertexSet> {
        let y = self.ensure_convex(y)?;
        let mut out = VertexSet::empty(self);
        for v in s.iter() {
            out.bits.insert(self.gate_unchecked(&y, v));
        }
        Ok(out)
    }

    /// Checks `d(π(x), π(y)) ≤ d(x, y)` for every vertex pair; returns a violating pair.
    pub fn projection_lipschitz_violation(&self, y: &VertexSet) -> Result<Option<(Vertex, Vertex)>> {
        let y = self.ensure_convex(y)?;
        let gates: Vec<Vertex> = self.vertices().map(|v| self.gate_unchecked(&y, v)).collect();
        for a in self.vertices() {
            for b in a + 1..self.len() {
                if self.dist(gates[a], gates[b]) > self.dist(a, b) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    /// The bridge `B(Y, Z)` with its product structure `π_Y(Z) × H`.
    pub fn bridge(&self, y: &VertexSet, z: &VertexSet) -> Result<BridgeDecomposition> {
        let y = self.ensure_convex(y)?;
        let z = self.ensure_convex(z)?;
        let mut gate_in_first = VertexSet::empty(self);
        for v in z.iter() {
            gate_in_first.bits.insert(self.gate_unchecked(&y, v));
        }
        let mut gate_in_second = VertexSet::empty(self);
        for v in y.iter() {
            gate_in_second.bits.insert(self.gate_unchecked(&z, v));
        }
        let gate_in_first = self.ensure_convex(&gate_in_first)?;
        let gate_in_second = self.ensure_convex(&gate_in_second)?;
        let bridge = self.convex_hull(&gate_in_first.union(&gate_in_second))?;

        let anchor = gate_in_first.iter().next().expect("nonempty gate");
        let rung = self.interval(self.gate_unchecked(&z, anchor), anchor);

        let mut product = Vec::with_capacity(bridge.len());
        let mut seen = std::collections::HashSet::new();
        for b in bridge.iter() {
            let pair = (self.gate_unchecked(&gate_in_first, b), self.gate_unchecked(&rung, b));
            if !seen.insert(pair) {
                return Err(Error::Internal("bridge product map is not injective".into()));
            }
            product.push((b, pair.0, pair.1));
        }
        if product.len() != gate_in_first.len() * rung.len() {
            return Err(Error::Internal("bridge product map is not surjective".into()));
        }
        Ok(BridgeDecomposition { gate_in_first, gate_in_second, rung, bridge, product })
    }

    /// `(x · y)_p = #W(p | x, y)`.
    pub fn gromov_product(&self, p: Vertex, x: Vertex, y: Vertex) -> u32 {
        let (lp, lx, ly) = (&self.labels[p], &self.labels[x], &self.labels[y]);
        (0..self.hyperplanes.len()).filter(|&w| lp[w] != lx[w] && lp[w] != ly[w]).count() as u32
    }

    /// The least `δ` satisfying the four-point condition, over all quadruples.
    pub fn hyperbolicity_delta(&self) -> HalfInt {
        let n = self.len();
        let best = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut best = 0;
                for j in i + 1..n {
                    for k in j + 1..n {
                        for l in k + 1..n {
                            let mut sums = [
                                self.dist(i, j) + self.dist(k, l),
                                self.dist(i, k) + self.dist(j, l),
                                self.dist(i, l) + self.dist(j, k),
                            ];
                            sums.sort_unstable();
                            best = best.max(sums[2] - sums[1]);
                        }
                    }
                }
                best
            })
            .max()
            .unwrap_or(0);
        HalfInt::from_twice(best)
    }

    /// First triple (in canonical order) without exactly one median.
    fn find_median_failure(&self, check: MedianCheck) -> Option<([Vertex; 3], Vec<Vertex>)> {
        let n = self.len();
        let diameter = self.diameter() as usize;
        let levels: Vec<Vec<FixedBitSet>> = (0..n)
            .map(|x| {
                let mut by_distance = vec![FixedBitSet::with_capacity(n); diameter + 1];
                for y in 0..n {
                    by_distance[self.dist(x, y) as usize].insert(y);
                }
                by_distance
            })
            .collect();
        let candidates = |x: Vertex, y: Vertex, z: Vertex| -> Option<[&FixedBitSet; 3]> {
            let (dxy, dxz, dyz) = (self.dist(x, y), self.dist(x, z), self.dist(y, z));
            if (dxy + dxz + dyz) % 2 == 1 {
                return None;
            }
            let gx = (dxy + dxz - dyz) / 2;
            let gy = (dxy + dyz - dxz) / 2;
            let gz = (dxz + dyz - dxy) / 2;
            Some([&levels[x][gx as usize], &levels[y][gy as usize], &levels[z][gz as usize]])
        };
        let count = |x: Vertex, y: Vertex, z: Vertex| -> u32 {
            match candidates(x, y, z) {
                None => 0,
                Some([a, b, c]) => a
                    .as_slice()
                    .iter()
                    .zip(b.as_slice())
                    .zip(c.as_slice())
                    .map(|((p, q), r)| (p & q & r).count_ones())
                    .sum(),
            }
        };
        let witness = |x: Vertex, y: Vertex, z: Vertex| -> ([Vertex; 3], Vec<Vertex>) {
            let medians = match candidates(x, y, z) {
                None => Vec::new(),
                Some([a, b, c]) => (a & b).intersection(c).collect(),
            };
            ([x, y, z], medians)
        };
        match check {
            MedianCheck::Exhaustive => {
                let failure = (0..n)
                    .into_par_iter()
                    .filter_map(|x| {
                        for y in x + 1..n {
                            for z in y + 1..n {
                                if count(x, y, z) != 1 {
                                    return Some((x, y, z));
                                }
                            }
                        }
                        None
                    })
                    .min()?;
                Some(witness(failure.0, failure.1, failure.2))
            }
            MedianCheck::Sampled { triples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..triples {
                    let mut t = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
                    t.sort_unstable();
                    if t[0] == t[1] || t[1] == t[2] {
                        continue;
                    }
                    if count(t[0], t[1], t[2]) != 1 {
                        return Some(witness(t[0], t[1], t[2]));
                    }
                }
                None
            }
        }
    }

    fn find_squares(&self) -> Vec<[Vertex; 4]> {
        let mut squares = Vec::new();
        for a in self.vertices() {
            let nb = &self.adjacency[a];
            for (i, &b) in nb.iter().enumerate() {
                for &d in &nb[i + 1..] {
                    if b < a || d < a {
                        continue;
                    }
                    for &c in &self.adjacency[b] {
                        if c > a && c != d && self.is_adjacent(c, d) {
                            squares.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        squares.sort_unstable();
        squares
    }

    /// Every cube, found from its smallest corner and a clique of pairwise-square neighbours.
    fn find_cubes(&self) -> Result<Vec<Vec<Cube>>> {
        let mut cubes: Vec<Vec<Cube>> = vec![Vec::new()];
        for x in self.vertices() {
            let nb = &self.adjacency[x];
            let directions: Vec<usize> =
                nb.iter().map(|&y| self.edge_hyperplane[self.edge_id(x, y).expect("edge")]).collect();
            let spans_square =
                |i: usize, j: usize| self.adjacency[nb[i]].iter().any(|&c| c != x && self.is_adjacent(c, nb[j]));
            let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
            while let Some((clique, start)) = stack.pop() {
                let mut dirs: Vec<usize> = clique.iter().map(|&i| directions[i]).collect();
                dirs.sort_unstable();
                let mut corners = Vec::with_capacity(1 << dirs.len());
                for mask in 0u64..(1u64 << dirs.len()) {
                    let mut label = self.labels[x].clone();
                    for (bit, &w) in dirs.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            label.toggle(w);
                        }
                    }
                    let v = self
                        .vertex_with_label(&label)
                        .ok_or_else(|| Error::Internal(format!("cube condition fails at `{}`", self.names[x])))?;
                    corners.push(v);
                }
                if corners.iter().all(|&v| v >= x) {
                    corners.sort_unstable();
                    if cubes.len() <= dirs.len() {
                        cubes.resize_with(dirs.len() + 1, Vec::new);
                    }
                    cubes[dirs.len()].push(Cube { vertices: corners, directions: dirs });
                }
                for next in start..nb.len() {
                    if clique.iter().all(|&i| spans_square(i, next)) {
                        let mut extended = clique.clone();
                        extended.push(next);
                        stack.push((extended, next + 1));
                    }
                }
            }
        }
        for list in &mut cubes {
            list.sort_unstable();
        }
        Ok(cubes)
    }
}

fn all_pairs_bfs(adjacency: &[Vec<Vertex>]) -> Vec<u32> {
    let n = adjacency.len();
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut row = vec![u32::MAX; n];
            let mut queue = VecDeque::from([s]);
            row[s] = 0;
            while let Some(u) = queue.pop_front() {
                for &v in &adjacency[u] {
                    if row[v] == u32::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            row
        })
        .collect();
    rows.concat()
}
