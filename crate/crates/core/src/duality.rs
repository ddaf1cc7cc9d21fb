//! From pocsets and wallspaces back to cube complexes.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::complex::{validate_complex, CubeComplex, Vertex};
use crate::error::{Error, Result};
use crate::pocset::{complement, pocset_of, Pocset};

/// Default bound on the number of ultrafilters enumerated.
pub const DEFAULT_ULTRAFILTER_CAP: usize = 1 << 20;

/// A consistent choice of one element from every complementary pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ultrafilter(FixedBitSet);

impl Ultrafilter {
    pub(crate) fn from_bits(bits: FixedBitSet) -> Self {
        Ultrafilter(bits)
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(a)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.0
    }

    /// Minimal elements under the pocset order.
    pub fn minimal(&self, p: &Pocset) -> Vec<usize> {
        self.elements().filter(|&a| !self.elements().any(|b| b != a && p.le(b, a))).collect()
    }

    /// The chosen element of pair `q` flipped.
    pub fn flipped(&self, q: usize) -> Ultrafilter {
        let mut bits = self.0.clone();
        bits.toggle(2 * q);
        bits.toggle(2 * q + 1);
        Ultrafilter(bits)
    }

    pub fn is_consistent(&self, p: &Pocset) -> bool {
        (0..p.pair_count()).all(|q| self.contains(2 * q) != self.contains(2 * q + 1))
            && self.elements().all(|a| p.up(a).is_subset(&self.0))
    }
}

/// Every ultrafilter in canonical order: depth-first over pairs, first
/// element before its complement.
pub fn all_ultrafilters(p: &Pocset) -> Vec<Ultrafilter> {
    all_ultrafilters_capped(p, usize::MAX).expect("uncapped")
}

pub fn all_ultrafilters_capped(p: &Pocset, cap: usize) -> Result<Vec<Ultrafilter>> {
    let mut out = Vec::new();
    extend_ultrafilters(p, FixedBitSet::with_capacity(p.len()), 0, cap, &mut out)?;
    Ok(out)
}

/// Ultrafilters are upward closed, so choosing a free element and closing
/// upward never conflicts with earlier choices (the conflict would force the
/// complement already).
fn extend_ultrafilters(
    p: &Pocset,
    chosen: FixedBitSet,
    mut pair: usize,
    cap: usize,
    out: &mut Vec<Ultrafilter>,
) -> Result<()> {
    while pair < p.pair_count() && (chosen.contains(2 * pair) || chosen.contains(2 * pair + 1)) {
        pair += 1;
    }
    if pair == p.pair_count() {
        if out.len() >= cap {
            return Err(Error::TooLarge(cap));
        }
        out.push(Ultrafilter(chosen));
        return Ok(());
    }
    for a in [2 * pair, 2 * pair + 1] {
        let mut next = chosen.clone();
        next.union_with(p.up(a));
        extend_ultrafilters(p, next, pair + 1, cap, out)?;
    }
    Ok(())
}

/// The dual complex together with the ultrafilter of each of its vertices.
#[derive(Clone, Debug)]
pub struct Dual {
    pub complex: CubeComplex,
    /// Indexed by vertex of `complex`.
    pub ultrafilters: Vec<Ultrafilter>,
    /// The hyperplane of `complex` dual to each pair.
    pub pair_hyperplane: Vec<usize>,
}

impl Dual {
    pub fn vertex_of(&self, u: &Ultrafilter) -> Option<Vertex> {
        self.ultrafilters.iter().position(|v| v == u)
    }
}

pub fn dual_complex(p: &Pocset) -> Result<CubeComplex> {
    Ok(dual(p, DEFAULT_ULTRAFILTER_CAP)?.complex)
}

/// Vertices `u0, u1, …` in canonical ultrafilter order; edges join
/// ultrafilters that differ on one pair.
pub fn dual(p: &Pocset, cap: usize) -> Result<Dual> {
    let ultrafilters = all_ultrafilters_capped(p, cap)?;
    let index: HashMap<&Ultrafilter, usize> = ultrafilters.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let names: Vec<String> = (0..ultrafilters.len()).map(|i| format!("u{i}")).collect();
    let mut edges = Vec::new();
    for (i, u) in ultrafilters.iter().enumerate() {
        for q in 0..p.pair_count() {
            if let Some(&j) = index.get(&u.flipped(q)) {
                if i < j {
                    edges.push((names[i].clone(), names[j].clone()));
                }
            }
        }
    }
    let complex = validate_complex(&names, &edges)?;
    let mut by_vertex = vec![None; ultrafilters.len()];
    for (i, u) in ultrafilters.into_iter().enumerate() {
        by_vertex[complex.index_of(&names[i]).expect("named vertex")] = Some(u);
    }
    let ultrafilters: Vec<Ultrafilter> = by_vertex.into_iter().map(|u| u.expect("every vertex named")).collect();
    let mut pair_hyperplane = Vec::with_capacity(p.pair_count());
    for q in 0..p.pair_count() {
        let e = complex
            .edges()
            .iter()
            .position(|&(a, b)| ultrafilters[a].contains(2 * q) != ultrafilters[b].contains(2 * q))
            .ok_or_else(|| Error::Internal(format!("pair `{}` has no dual edge", p.label(2 * q))))?;
        pair_hyperplane.push(complex.hyperplane_of_edge(e));
    }
    if pair_hyperplane.iter().collect::<HashSet<_>>().len() != complex.hyperplanes().len()
        || complex.hyperplanes().len() != p.pair_count()
    {
        return Err(Error::Internal("dual hyperplanes do not match the pairs".into()));
    }
    Ok(Dual { complex, ultrafilters, pair_hyperplane })
}

/// The unique ultrafilter whose minimal elements contain the maximal
/// transverse family `tau`.
pub fn ultrafilter_from_transverse_family(p: &Pocset, tau: &[usize]) -> Result<Ultrafilter> {
    for (i, &a) in tau.iter().enumerate() {
        if a >= p.len() {
            return Err(Error::InvalidPocset(format!("element {a} out of range")));
        }
        for &b in &tau[i + 1..] {
            if !p.transverse(a, b) {
                return Err(Error::NotTransverse(p.label(a).to_owned(), p.label(b).to_owned()));
            }
        }
    }
    let used: HashSet<usize> = tau.iter().map(|&a| a / 2).collect();
    if let Some(q) =
        (0..p.pair_count()).find(|&q| !used.contains(&q) && tau.iter().all(|&a| p.pairs_transverse(a / 2, q)))
    {
        return Err(Error::NotMaximal(p.label(2 * q).to_owned()));
    }

    // Force everything above τ and the complement of everything strictly below it.
    let mut forced = FixedBitSet::with_capacity(p.len());
    for &a in tau {
        forced.union_with(p.up(a));
        for b in (0..p.len()).filter(|&b| b != a && p.le(b, a)) {
            forced.union_with(p.up(complement(b)));
        }
    }
    if (0..p.pair_count()).any(|q| forced.contains(2 * q) && forced.contains(2 * q + 1)) {
        return Err(Error::Internal("forcing a transverse family is inconsistent".into()));
    }
    let mut completions = Vec::new();
    extend_ultrafilters(p, forced, 0, usize::MAX, &mut completions)?;
    let is_candidate = |u: &Ultrafilter| {
        let minimal = u.minimal(p);
        tau.iter().all(|a| minimal.contains(a))
    };
    let constructed = completions
        .into_iter()
        .find(|u| is_candidate(u))
        .ok_or_else(|| Error::Internal("forced completion misses the family".into()))?;
    let matches = all_ultrafilters(p).into_iter().filter(|u| is_candidate(u)).count();
    if matches != 1 {
        return Err(Error::Internal(format!("{matches} ultrafilters have the family among their minima")));
    }
    Ok(constructed)
}

/// Every maximal transverse family: each maximal set of transverse pairs in
/// every orientation.
pub fn maximal_transverse_families(p: &Pocset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for pairs in p.maximal_transverse_pair_sets() {
        for mask in 0u64..1 << pairs.len() {
            out.push(pairs.iter().enumerate().map(|(i, &q)| 2 * q + (mask >> i & 1) as usize).collect());
        }
    }
    out
}

/// Whether `min σ` contains a maximal transverse family.
pub fn minimal_elements_contain_maximal_family(p: &Pocset, u: &Ultrafilter) -> bool {
    let minimal = u.minimal(p);
    maximal_transverse_families(p).iter().any(|tau| tau.iter().all(|a| minimal.contains(a)))
}

/// A finite set of points with bipartitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wallspace {
    points: Vec<String>,
    /// `(plus, minus)` as sorted point indices.
    walls: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Wallspace {
    pub fn new<S: AsRef<str>>(points: &[S], walls: &[(Vec<S>, Vec<S>)]) -> Result<Self> {
        let points: Vec<String> = points.iter().map(|s| s.as_ref().to_owned()).collect();
        let index: HashMap<&str, usize> = points.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != points.len() {
            let mut sorted = points.clone();
            sorted.sort();
            let repeated = sorted.windows(2).find(|w| w[0] == w[1]).expect("a repeat");
            return Err(Error::DuplicateVertex(repeated[0].clone()));
        }
        let mut resolved = Vec::with_capacity(walls.len());
        for (i, (plus, minus)) in walls.iter().enumerate() {
            let side = |names: &[S]| -> Result<Vec<usize>> {
                let mut out = Vec::with_capacity(names.len());
                for s in names {
                    let v = *index
                        .get(s.as_ref())
                        .ok_or_else(|| Error::InconsistentWall(i, format!("unknown point `{}`", s.as_ref())))?;
                    out.push(v);
                }
                out.sort_unstable();
                out.dedup();
                Ok(out)
            };
            resolved.push((side(plus)?, side(minus)?));
        }
        Wallspace::from_indices(points, resolved)
    }

    pub fn from_indices(points: Vec<String>, walls: Vec<(Vec<usize>, Vec<usize>)>) -> Result<Self> {
        let n = points.len();
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for (i, (plus, minus)) in walls.iter().enumerate() {
            if plus.is_empty() || minus.is_empty() {
                return Err(Error::InconsistentWall(i, "a side is empty".into()));
            }
            let mut covered = vec![0u8; n];
            for &v in plus.iter().chain(minus) {
                if v >= n {
                    return Err(Error::InconsistentWall(i, format!("point index {v} out of range")));
                }
                covered[v] += 1;
            }
            if let Some(v) = covered.iter().position(|&c| c != 1) {
                let why = if covered[v] == 0 { "misses" } else { "repeats" };
                return Err(Error::InconsistentWall(i, format!("{why} point `{}`", points[v])));
            }
            // A wall is determined by the side containing point 0.
            let key = if plus.contains(&0) { plus.clone() } else { minus.clone() };
            if let Some(&j) = seen.get(&key) {
                return Err(Error::DuplicateWall(i, j));
            }
            seen.insert(key, i);
        }
        Ok(Wallspace { points, walls })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn walls(&self) -> &[(Vec<usize>, Vec<usize>)] {
        &self.walls
    }

    /// Sides ordered by inclusion; element `2i` is the minus side of wall `i`.
    pub fn pocset(&self) -> Result<Pocset> {
        let n = self.points.len();
        let sides: Vec<FixedBitSet> = self
            .walls
            .iter()
            .flat_map(|(plus, minus)| [minus, plus])
            .map(|side| {
                let mut bits = FixedBitSet::with_capacity(n);
                bits.extend(side.iter().copied());
                bits
            })
            .collect();
        let labels = (0..sides.len()).map(|a| format!("{}{}", if a % 2 == 1 { '+' } else { '-' }, a / 2)).collect();
        let up = sides
            .iter()
            .map(|a| {
                let mut bits = FixedBitSet::with_capacity(sides.len());
                bits.extend(sides.iter().enumerate().filter(|(_, b)| a.is_subset(b)).map(|(j, _)| j));
                bits
            })
            .collect();
        Pocset::from_closed(labels, up)
    }
}

/// The dual of a wallspace together with its principal map.
#[derive(Clone, Debug)]
pub struct WallDual {
    pub dual: Dual,
    /// Vertex of the dual for each point.
    pub principal: Vec<Vertex>,
}

pub fn wallspace_dual(w: &Wallspace) -> Result<WallDual> {
    wallspace_dual_capped(w, DEFAULT_ULTRAFILTER_CAP)
}

pub fn wallspace_dual_capped(w: &Wallspace, cap: usize) -> Result<WallDual> {
    let p = w.pocset()?;
    let dual = dual(&p, cap)?;
    let index: HashMap<&Ultrafilter, Vertex> = dual.ultrafilters.iter().enumerate().map(|(v, u)| (u, v)).collect();
    let principal = (0..w.points.len())
        .map(|x| {
            let mut bits = FixedBitSet::with_capacity(p.len());
            for (i, (plus, _)) in w.walls.iter().enumerate() {
                bits.insert(2 * i + usize::from(plus.binary_search(&x).is_ok()));
            }
            index
                .get(&Ultrafilter(bits))
                .copied()
                .ok_or_else(|| Error::Internal(format!("principal ultrafilter of `{}` missing", w.points[x])))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WallDual { dual, principal })
}

/// A vertex bijection preserving adjacency both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// Image in the second complex of each vertex of the first.
    pub map: Vec<Vertex>,
}

impl Isomorphism {
    pub fn verify(&self, x: &CubeComplex, y: &CubeComplex) -> bool {
        if x.len() != y.len() || x.edges().len() != y.edges().len() || self.map.len() != x.len() {
            return false;
        }
        let mut hit = vec![false; y.len()];
        for &v in &self.map {
            if v >= y.len() || std::mem::replace(&mut hit[v], true) {
                return false;
            }
        }
        x.edges().iter().all(|&(a, b)| y.is_adjacent(self.map[a], self.map[b]))
    }
}

/// Compares the two vertex-set bijections through `X ≅ dual(pocset_of(X))`
/// given by principal ultrafilters.
pub fn roundtrip_check(x: &CubeComplex) -> Result<Isomorphism> {
    let p = pocset_of(x);
    let d = dual(&p, DEFAULT_ULTRAFILTER_CAP)?;
    let index: HashMap<&Ultrafilter, Vertex> = d.ultrafilters.iter().enumerate().map(|(v, u)| (u, v)).collect();
    let map = x
        .vertices()
        .map(|v| {
            let mut bits = FixedBitSet::with_capacity(p.len());
            for w in 0..x.hyperplanes().len() {
                bits.insert(2 * w + usize::from(x.label(v).contains(w)));
            }
            index
                .get(&Ultrafilter(bits))
                .copied()
                .ok_or_else(|| Error::NoIsomorphism(format!("`{}` has no principal ultrafilter", x.name(v))))
        })
        .collect::<Result<Vec<_>>>()?;
    let iso = Isomorphism { map };
    if !iso.verify(x, &d.complex) {
        return Err(Error::NoIsomorphism("principal map does not preserve adjacency".into()));
    }
    Ok(iso)
}

/// Backtracking search with degree and distance-profile refinement.
pub fn complexes_isomorphic(x: &CubeComplex, y: &CubeComplex) -> Option<Isomorphism> {
    let n = x.len();
    if n != y.len() || x.edges().len() != y.edges().len() || x.hyperplanes().len() != y.hyperplanes().len() {
        return None;
    }
    let profile = |z: &CubeComplex, v: Vertex| {
        let mut row: Vec<u32> = z.vertices().map(|u| z.dist(v, u)).collect();
        row.sort_unstable();
        (z.neighbors(v).len(), row)
    };
    let px: Vec<_> = x.vertices().map(|v| profile(x, v)).collect();
    let py: Vec<_> = y.vertices().map(|v| profile(y, v)).collect();
    let (mut sx, mut sy) = (px.clone(), py.clone());
    sx.sort();
    sy.sort();
    if sx != sy {
        return None;
    }
    // Visit x in BFS order so each vertex after the first has a mapped neighbour.
    let mut order = vec![0];
    let mut placed = vec![false; n];
    placed[0] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &u in x.neighbors(v) {
            if !std::mem::replace(&mut placed[u], true) {
                order.push(u);
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(x, y, &px, &py, &order, 0, &mut map, &mut used) {
        Some(Isomorphism { map })
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    x: &CubeComplex,
    y: &CubeComplex,
    px: &[(usize, Vec<u32>)],
    py: &[(usize, Vec<u32>)],
    order: &[Vertex],
    depth: usize,
    map: &mut [Vertex],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    let candidates: Vec<Vertex> = if depth == 0 {
        y.vertices().collect()
    } else {
        let anchor = *x.neighbors(v).iter().find(|&&u| map[u] != usize::MAX).expect("BFS order");
        y.neighbors(map[anchor]).to_vec()
    };
    for w in candidates {
        if used[w] || px[v] != py[w] {
            continue;
        }
        if order[..depth].iter().any(|&u| x.dist(u, v) != y.dist(map[u], w)) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if search(x, y, px, py, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn labels(pairs: &[(&str, &str)]) -> Vec<String> {
        pairs.iter().flat_map(|(a, b)| [a.to_string(), b.to_string()]).collect()
    }

    /// Every choice of one element per pair, kept when upward closed.
    fn brute_ultrafilters(p: &Pocset) -> Vec<FixedBitSet> {
        let m = p.pair_count();
        (0u64..1 << m)
            .map(|mask| {
                let mut bits = FixedBitSet::with_capacity(p.len());
                bits.extend((0..m).map(|q| 2 * q + (mask >> q & 1) as usize));
                bits
            })
            .filter(|bits| bits.ones().all(|a| bits.ones().all(|b| !p.le(a, complement(b)))))
            .collect()
    }

    #[test]
    fn ultrafilter_counts() {
        assert_eq!(all_ultrafilters(&Pocset::empty()).len(), 1);
        let square = Pocset::new(labels(&[("a", "a*"), ("b", "b*")]), &[]).unwrap();
        assert_eq!(all_ultrafilters(&square).len(), 4);
        let chain = Pocset::new(labels(&[("a", "a*"), ("b", "b*")]), &[(0, 2)]).unwrap();
        let us = all_ultrafilters(&chain);
        assert_eq!(us.len(), 3);
        assert!(!us.iter().any(|u| u.contains(0) && u.contains(3)));
        assert!(matches!(all_ultrafilters_capped(&square, 3), Err(Error::TooLarge(3))));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for seed in 0..8 {
            let p = pocset_of(&corpus::random_median(seed, 9));
            let mut fast: Vec<FixedBitSet> = all_ultrafilters(&p).into_iter().map(|u| u.0).collect();
            let mut slow = brute_ultrafilters(&p);
            fast.sort();
            slow.sort();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn small_duals() {
        let square = Pocset::new(labels(&[("a", "a*"), ("b", "b*")]), &[]).unwrap();
        let d = dual_complex(&square).unwrap();
        assert!(complexes_isomorphic(&d, &corpus::square()).is_some());
        let chain = Pocset::new(labels(&[("a", "a*"), ("b", "b*")]), &[(0, 2)]).unwrap();
        assert!(complexes_isomorphic(&dual_complex(&chain).unwrap(), &corpus::path(3)).is_some());
        let one = dual_complex(&Pocset::empty()).unwrap();
        assert_eq!((one.len(), one.names()[0].as_str()), (1, "u0"));
    }

    #[test]
    fn transverse_family_examples() {
        let cube = corpus::hypercube(3);
        let p = pocset_of(&cube);
        let tau = [1, 3, 5];
        let u = ultrafilter_from_transverse_family(&p, &tau).unwrap();
        assert_eq!(u.minimal(&p), vec![1, 3, 5]);
        assert_eq!(u.elements().collect::<Vec<_>>(), vec![1, 3, 5]);

        let path = corpus::path(4);
        let p = pocset_of(&path);
        let u = ultrafilter_from_transverse_family(&p, &[3]).unwrap();
        // The vertex just past the middle hyperplane, on its plus side.
        let v = path.index_of("p2").unwrap();
        assert!((0..3).all(|w| u.contains(2 * w + usize::from(path.label(v).contains(w)))));

        assert!(matches!(ultrafilter_from_transverse_family(&pocset_of(&cube), &[1, 3]), Err(Error::NotMaximal(_))));
        assert!(matches!(ultrafilter_from_transverse_family(&p, &[1, 3]), Err(Error::NotTransverse(..))));
    }

    #[test]
    fn wallspaces() {
        let one = Wallspace::new(&["a", "b"], &[(vec!["a"], vec!["b"])]).unwrap();
        assert!(complexes_isomorphic(&wallspace_dual(&one).unwrap().dual.complex, &corpus::path(2)).is_some());

        let tri = Wallspace::new(
            &["1", "2", "3"],
            &[(vec!["1"], vec!["2", "3"]), (vec!["2"], vec!["1", "3"]), (vec!["3"], vec!["1", "2"])],
        )
        .unwrap();
        let d = wallspace_dual(&tri).unwrap();
        assert!(complexes_isomorphic(&d.dual.complex, &corpus::star(3)).is_some());
        for &v in &d.principal {
            assert_eq!(d.dual.complex.neighbors(v).len(), 1);
        }

        let grid = Wallspace::new(
            &["a", "b", "c", "d"],
            &[(vec!["a", "b"], vec!["c", "d"]), (vec!["a", "c"], vec!["b", "d"])],
        )
        .unwrap();
        assert!(complexes_isomorphic(&wallspace_dual(&grid).unwrap().dual.complex, &corpus::square()).is_some());

        assert!(matches!(Wallspace::new(&["a", "b"], &[(vec!["a", "b"], vec![])]), Err(Error::InconsistentWall(0, _))));
        assert!(matches!(
            Wallspace::new(&["a", "b"], &[(vec!["a"], vec!["b"]), (vec!["b"], vec!["a"])]),
            Err(Error::DuplicateWall(1, 0))
        ));
        assert!(matches!(
            Wallspace::new(&["a", "b", "c"], &[(vec!["a"], vec!["c"])]),
            Err(Error::InconsistentWall(0, _))
        ));
    }

    #[test]
    fn wall_separation_is_preserved() {
        let w = Wallspace::new(
            &["1", "2", "3", "4"],
            &[(vec!["1", "2"], vec!["3", "4"]), (vec!["1"], vec!["2", "3", "4"]), (vec!["1", "3"], vec!["2", "4"])],
        )
        .unwrap();
        let d = wallspace_dual(&w).unwrap();
        let x = &d.dual.complex;
        for (i, (plus, _)) in w.walls().iter().enumerate() {
            let h = x.hyperplane(d.dual.pair_hyperplane[i]);
            for a in 0..4 {
                for b in 0..4 {
                    let split = plus.contains(&a) != plus.contains(&b);
                    assert_eq!(split, h.plus.contains(d.principal[a]) != h.plus.contains(d.principal[b]));
                }
            }
        }
    }

    #[test]
    fn roundtrips_and_isomorphisms() {
        for x in [corpus::hypercube(3), corpus::star(3), corpus::path(1), corpus::random_median(5, 14)] {
            let iso = roundtrip_check(&x).unwrap();
            assert_eq!(iso.map.len(), x.len());
        }
        let g = corpus::grid(4, 4);
        let id = complexes_isomorphic(&g, &g).unwrap();
        assert!(id.verify(&g, &g));
        assert!(complexes_isomorphic(&corpus::square(), &corpus::path(4)).is_none());
        let prod = corpus::product(&corpus::path(4), &corpus::path(4));
        assert!(complexes_isomorphic(&g, &prod).unwrap().verify(&g, &prod));
        assert!(complexes_isomorphic(&corpus::spider(3, 2), &corpus::path(7)).is_none());
    }
}
