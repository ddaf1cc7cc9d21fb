//! Bending hyperplanes along systems of switches.
//!
//! A switch is a transverse pair of hyperplanes. Cutting every hyperplane of
//! the support along its switches yields pieces; the switch graph joins each
//! switch to the four pieces meeting its crossing. A crooked subtree of that
//! graph glues pieces into a track, which is realized as a new wall.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::complex::{CubeComplex, HalfInt, Vertex, VertexSet};
use crate::duality::{wallspace_dual, WallDual, Wallspace};
use crate::error::{Error, Result};
use crate::hyperplane::{has_cycle, hyperplane_distance, transverse, union_find, Side};
use crate::transforms::{subdivide, SubdivisionResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchSystem {
    /// Sorted pairs `(u, v)` with `u < v`.
    pub switches: Vec<(usize, usize)>,
    pub n: u32,
    pub delta: HalfInt,
    /// Whether `n > 8δ`, where the switch graph is guaranteed to be a forest.
    pub forest_regime: bool,
}

impl SwitchSystem {
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.switches.iter().flat_map(|&(u, v)| [u, v]).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// `S_u`: the hyperplanes paired with `u`.
    pub fn partners(&self, u: usize) -> Vec<usize> {
        self.switches
            .iter()
            .filter_map(|&(a, b)| {
                if a == u {
                    Some(b)
                } else if b == u {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }
}

pub fn validate_switch_system(x: &CubeComplex, switches: &[(usize, usize)], n: u32) -> Result<SwitchSystem> {
    let mut pairs = Vec::with_capacity(switches.len());
    for &(a, b) in switches {
        if a >= x.hyperplanes().len() || b >= x.hyperplanes().len() {
            return Err(Error::UnknownHyperplane(a.max(b).to_string()));
        }
        if a == b {
            return Err(Error::SameHyperplane(x.hyperplane(a).label.clone()));
        }
        if !transverse(x, a, b) {
            return Err(Error::NotTransverse(x.hyperplane(a).label.clone(), x.hyperplane(b).label.clone()));
        }
        pairs.push((a.min(b), a.max(b)));
    }
    pairs.sort_unstable();
    pairs.dedup();
    let delta = x.hyperbolicity_delta();
    let system = SwitchSystem { switches: pairs, n, delta, forest_regime: n > 4 * delta.twice() };
    for u in system.support() {
        let partners = system.partners(u);
        for (i, &a) in partners.iter().enumerate() {
            for &b in &partners[i + 1..] {
                let distance = hyperplane_distance(x, a, b);
                if distance < n {
                    return Err(Error::SpacingViolated {
                        hyperplane: x.hyperplane(u).label.clone(),
                        first: x.hyperplane(a).label.clone(),
                        second: x.hyperplane(b).label.clone(),
                        distance,
                        required: n,
                    });
                }
            }
        }
    }
    Ok(system)
}

/// Switches given by hyperplane labels or dual edges `u|v`.
pub fn switch_system_from_labels<S: AsRef<str>>(x: &CubeComplex, switches: &[(S, S)], n: u32) -> Result<SwitchSystem> {
    let pairs = switches
        .iter()
        .map(|(a, b)| Ok((x.find_hyperplane(a.as_ref())?, x.find_hyperplane(b.as_ref())?)))
        .collect::<Result<Vec<_>>>()?;
    validate_switch_system(x, &pairs, n)
}

/// A component of a hyperplane cut along its switches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub hyperplane: usize,
    /// Sorted dual edges.
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SwitchGraph {
    pub pieces: Vec<Piece>,
    pub switches: Vec<(usize, usize)>,
    /// For switch `(u, v)`: the `u`-pieces on the minus and plus sides of
    /// `v`, then the `v`-pieces on the minus and plus sides of `u`.
    pub slots: Vec<[usize; 4]>,
    /// Switches adjacent to each piece, sorted.
    pub piece_switches: Vec<Vec<usize>>,
    pub forest: bool,
}

pub fn switch_graph(x: &CubeComplex, system: &SwitchSystem) -> Result<SwitchGraph> {
    let support = system.support();
    let partners: HashMap<usize, Vec<usize>> = support.iter().map(|&u| (u, system.partners(u))).collect();
    let edge = |a: Vertex, b: Vertex| x.edge_id(a, b).expect("square edge");
    // Join dual edges of a support hyperplane across squares not crossed by a partner.
    let mut links = Vec::new();
    for &[a, b, c, d] in x.squares() {
        for (e1, e2, across) in [(edge(a, b), edge(d, c), edge(a, d)), (edge(a, d), edge(b, c), edge(a, b))] {
            let w = x.hyperplane_of_edge(e1);
            if let Some(cut) = partners.get(&w) {
                if !cut.contains(&x.hyperplane_of_edge(across)) {
                    links.push((e1, e2));
                }
            }
        }
    }
    let roots = union_find(x.edges().len(), links);
    let mut pieces = Vec::new();
    let mut piece_of_root: HashMap<usize, usize> = HashMap::new();
    for &w in &support {
        for &e in &x.hyperplane(w).dual_edges {
            let id = *piece_of_root.entry(roots[e]).or_insert_with(|| {
                pieces.push(Piece { hyperplane: w, edges: Vec::new() });
                pieces.len() - 1
            });
            pieces[id].edges.push(e);
        }
    }

    let mut slots = Vec::with_capacity(system.switches.len());
    let mut piece_switches = vec![Vec::new(); pieces.len()];
    for (s, &(u, v)) in system.switches.iter().enumerate() {
        // For each side of `v`, the u-pieces meeting the crossing there, and vice versa.
        let mut seen: [Vec<usize>; 4] = Default::default();
        for &[a, b, c, d] in x.squares() {
            for (e1, e2, across) in [(edge(a, b), edge(d, c), edge(a, d)), (edge(a, d), edge(b, c), edge(a, b))] {
                let (w, t) = (x.hyperplane_of_edge(e1), x.hyperplane_of_edge(across));
                let offset = if (w, t) == (u, v) {
                    0
                } else if (w, t) == (v, u) {
                    2
                } else {
                    continue;
                };
                for e in [e1, e2] {
                    let side = x.hyperplane(t).side_of(x.edges()[e].0);
                    let list = &mut seen[offset + usize::from(side == Side::Plus)];
                    let piece = piece_of_root[&roots[e]];
                    if !list.contains(&piece) {
                        list.push(piece);
                    }
                }
            }
        }
        if seen.iter().any(|l| l.len() != 1) {
            return Err(Error::DegenerateSwitch(format!("{}/{}", x.hyperplane(u).label, x.hyperplane(v).label)));
        }
        let slot = [seen[0][0], seen[1][0], seen[2][0], seen[3][0]];
        for &p in &slot {
            piece_switches[p].push(s);
        }
        slots.push(slot);
    }
    let node_edges = slots.iter().enumerate().flat_map(|(s, slot)| slot.map(|p| (p, pieces.len() + s)));
    let forest = !has_cycle(pieces.len() + slots.len(), node_edges.collect::<Vec<_>>());
    Ok(SwitchGraph { pieces, switches: system.switches.clone(), slots, piece_switches, forest })
}

/// A connected, two-sided, star-complete subtree of a switch graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrookedSubtree {
    /// Sorted switch ids.
    pub switches: Vec<usize>,
    /// The two slots selected at each switch, sorted.
    pub selected: Vec<[usize; 2]>,
    /// Sorted piece ids.
    pub pieces: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CrookedEnumeration {
    pub subtrees: Vec<CrookedSubtree>,
    /// Set when the limit stopped the search early.
    pub truncated: bool,
}

#[derive(Clone)]
struct Growth {
    included: Vec<bool>,
    excluded: Vec<bool>,
    selected: Vec<Option<[usize; 2]>>,
    pending: Vec<usize>,
}

impl Growth {
    /// Selects `slots` at switch `s`; false if that contradicts the state.
    fn select(&mut self, g: &SwitchGraph, s: usize, pair: [usize; 2]) -> bool {
        self.selected[s] = Some(pair);
        for &p in &g.slots[s] {
            if pair.contains(&p) {
                if !self.included[p] {
                    if self.excluded[p] {
                        return false;
                    }
                    self.included[p] = true;
                    self.pending.push(p);
                }
            } else {
                if self.included[p] {
                    return false;
                }
                self.excluded[p] = true;
            }
        }
        true
    }
}

/// All crooked subtrees, canonically sorted, stopping after `limit`.
pub fn enumerate_crooked(g: &SwitchGraph, limit: usize) -> CrookedEnumeration {
    let mut out = Vec::new();
    let mut truncated = false;
    'roots: for s0 in 0..g.switches.len() {
        let slots = g.slots[s0];
        for i in 0..4 {
            for j in i + 1..4 {
                let mut state = Growth {
                    included: vec![false; g.pieces.len()],
                    excluded: vec![false; g.pieces.len()],
                    selected: vec![None; g.switches.len()],
                    pending: Vec::new(),
                };
                let mut pair = [slots[i], slots[j]];
                pair.sort_unstable();
                if state.select(g, s0, pair) && !grow(g, s0, state, limit, &mut out) {
                    truncated = true;
                    break 'roots;
                }
            }
        }
    }
    out.sort();
    CrookedEnumeration { subtrees: out, truncated }
}

/// Returns false once `limit` results have been collected and more remain.
fn grow(g: &SwitchGraph, s0: usize, mut state: Growth, limit: usize, out: &mut Vec<CrookedSubtree>) -> bool {
    loop {
        let Some(&p) = state.pending.last() else {
            if out.len() >= limit {
                return false;
            }
            if let Some(t) = finish(g, &state) {
                out.push(t);
            }
            return true;
        };
        let mut open = None;
        for &s in &g.piece_switches[p] {
            match state.selected[s] {
                Some(pair) if !pair.contains(&p) => return true,
                Some(_) => {}
                None if s < s0 => return true,
                None => {
                    open = Some(s);
                    break;
                }
            }
        }
        let Some(s) = open else {
            state.pending.pop();
            continue;
        };
        for &q in &g.slots[s] {
            if q == p || state.included[q] {
                continue;
            }
            let mut branch = state.clone();
            let mut pair = [p, q];
            pair.sort_unstable();
            if branch.select(g, s, pair) && !grow(g, s0, branch, limit, out) {
                return false;
            }
        }
        return true;
    }
}

fn finish(g: &SwitchGraph, state: &Growth) -> Option<CrookedSubtree> {
    let switches: Vec<usize> = (0..g.switches.len()).filter(|&s| state.selected[s].is_some()).collect();
    let selected: Vec<[usize; 2]> = switches.iter().map(|&s| state.selected[s].expect("selected")).collect();
    let pieces: Vec<usize> = (0..g.pieces.len()).filter(|&p| state.included[p]).collect();
    let t = CrookedSubtree { switches, selected, pieces };
    check_crooked(g, &t).ok().map(|_| t)
}

/// Verifies the defining conditions of a crooked subtree.
pub fn check_crooked(g: &SwitchGraph, t: &CrookedSubtree) -> Result<()> {
    let bad = |why: &str| Err(Error::InvalidSubtree(why.to_owned()));
    if t.switches.is_empty() {
        return bad("no switch");
    }
    if t.selected.len() != t.switches.len() {
        return bad("selection count differs from switch count");
    }
    if t.switches.iter().any(|&s| s >= g.switches.len()) || t.pieces.iter().any(|&p| p >= g.pieces.len()) {
        return bad("id out of range");
    }
    let in_pieces = |p: usize| t.pieces.binary_search(&p).is_ok();
    for (i, &s) in t.switches.iter().enumerate() {
        let [a, b] = t.selected[i];
        if a == b || !g.slots[s].contains(&a) || !g.slots[s].contains(&b) {
            return bad("selection is not two slots of its switch");
        }
        for &p in &g.slots[s] {
            if in_pieces(p) != (p == a || p == b) {
                return bad("a switch does not have degree two");
            }
        }
    }
    for &p in &t.pieces {
        if g.piece_switches[p].iter().any(|s| t.switches.binary_search(s).is_err()) {
            return bad("a piece's star is not included");
        }
    }
    let index: HashMap<usize, usize> = t.pieces.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let nodes = t.pieces.len() + t.switches.len();
    let edges: Vec<(usize, usize)> =
        t.selected.iter().enumerate().flat_map(|(i, pair)| pair.map(|p| (index[&p], t.pieces.len() + i))).collect();
    if edges.len() + 1 != nodes || has_cycle(nodes, edges) {
        return bad("not a tree");
    }
    Ok(())
}

/// The wall cut out by a crooked subtree's track.
#[derive(Clone, Debug)]
pub struct WallRealization {
    /// Sorted edge ids of `U(Γ)`.
    pub track: Vec<usize>,
    /// The two components of the complement, the one holding vertex 0 first.
    pub sides: [Vec<Vertex>; 2],
    /// Track edges linked through shared squares form one class.
    pub track_connected: bool,
    /// Largest distance from a geodesic between track carrier vertices to the carrier.
    pub quasiconvexity_defect: u32,
}

pub fn realize(x: &CubeComplex, g: &SwitchGraph, t: &CrookedSubtree) -> Result<WallRealization> {
    check_crooked(g, t)?;
    let mut track: Vec<usize> = t.pieces.iter().flat_map(|&p| g.pieces[p].edges.iter().copied()).collect();
    track.sort_unstable();
    let cut = |a: Vertex, b: Vertex| track.binary_search(&x.edge_id(a, b).expect("edge")).is_ok();
    let mut component = vec![usize::MAX; x.len()];
    let mut count = 0;
    for start in x.vertices() {
        if component[start] != usize::MAX {
            continue;
        }
        component[start] = count;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in x.neighbors(v) {
                if component[u] == usize::MAX && !cut(v, u) {
                    component[u] = count;
                    stack.push(u);
                }
            }
        }
        count += 1;
    }
    if count != 2 {
        return Err(Error::NotSeparating(count));
    }
    let sides = [0, 1].map(|c| x.vertices().filter(|&v| component[v] == c).collect());

    let position: HashMap<usize, usize> = track.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut links = Vec::new();
    for &[a, b, c, d] in x.squares() {
        let inside: Vec<usize> = [(a, b), (b, c), (c, d), (a, d)]
            .iter()
            .filter_map(|&(p, q)| position.get(&x.edge_id(p, q).expect("edge")))
            .copied()
            .collect();
        links.extend(inside.windows(2).map(|w| (w[0], w[1])));
    }
    let roots = union_find(track.len(), links);
    let track_connected = roots.iter().all(|&r| r == roots[0]);

    let mut carrier = FixedBitSet::with_capacity(x.len());
    for &e in &track {
        let (a, b) = x.edges()[e];
        carrier.insert(a);
        carrier.insert(b);
    }
    let to_carrier: Vec<u32> = x.vertices().map(|z| carrier.ones().map(|c| x.dist(z, c)).min().unwrap_or(0)).collect();
    let members: Vec<Vertex> = carrier.ones().collect();
    let mut quasiconvexity_defect = 0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            for z in x.interval(a, b).iter() {
                quasiconvexity_defect = quasiconvexity_defect.max(to_carrier[z]);
            }
        }
    }
    Ok(WallRealization { track, sides, track_connected, quasiconvexity_defect })
}

/// The wall `(plus, minus)` of a hyperplane.
pub fn hyperplane_wall(x: &CubeComplex, w: usize) -> (Vec<Vertex>, Vec<Vertex>) {
    let h = x.hyperplane(w);
    (h.plus.ones().collect(), h.minus.ones().collect())
}

/// Dualizes a family of walls on the vertices of `X`.
pub fn recubulate(x: &CubeComplex, walls: &[(Vec<Vertex>, Vec<Vertex>)]) -> Result<WallDual> {
    let w = Wallspace::from_indices(x.names().to_vec(), walls.to_vec())?;
    wallspace_dual(&w)
}

/// A standard path through a sequence of pairwise consecutive transverse
/// hyperplanes, computed in the cubical subdivision.
#[derive(Clone, Debug)]
pub struct StandardPath {
    pub subdivision: SubdivisionResult,
    /// `x_0, …, x_{m+1}` as vertices of the subdivision.
    pub points: Vec<Vertex>,
    /// The concatenated geodesics, as vertices of the subdivision.
    pub path: Vec<Vertex>,
    /// `min d(x_i, x_{i+1})` over `1 ≤ i ≤ m - 1`, in units of `X`.
    pub local_geodesic_constant: Option<HalfInt>,
    /// Whether the stretch from `x_i` to `x_{i+2}` is a geodesic, for each `i`.
    pub segments_geodesic: Vec<bool>,
    /// `min d(v_{i-1}, v_{i+1})` over `0 < i < m`.
    pub spacing: Option<u32>,
    pub endpoint_distance: u32,
    pub delta: HalfInt,
    /// `m ≥ 2` and spacing `> 8δ`.
    pub hypotheses_hold: bool,
    /// `d(v_0, v_m) ≥ n(m - 1)/3 - 2δ`, checked exactly whatever the hypotheses.
    pub bound_holds: bool,
}

fn slab_set(s: &SubdivisionResult, w: usize) -> Result<VertexSet> {
    s.subdivided.ensure_convex(&VertexSet::from_bits(s.slab(w), false))
}

fn dual_edge_cell(x: &CubeComplex, s: &SubdivisionResult, w: usize, v: Vertex) -> Result<Vertex> {
    let partner = x
        .neighbors(v)
        .iter()
        .copied()
        .find(|&u| x.hyperplane_of_edge(x.edge_id(v, u).expect("edge")) == w)
        .ok_or_else(|| Error::NotOnCarrier(x.name(v).to_owned(), x.hyperplane(w).label.clone()))?;
    Ok(s.cell(&[v.min(partner), v.max(partner)]).expect("edges are cells"))
}

/// The geodesic that always steps to the smallest admissible neighbour.
fn greedy_geodesic(x: &CubeComplex, a: Vertex, b: Vertex) -> Vec<Vertex> {
    let mut path = vec![a];
    let mut here = a;
    while here != b {
        here = *x.neighbors(here).iter().find(|&&u| x.dist(u, b) + 1 == x.dist(here, b)).expect("geodesic step");
        path.push(here);
    }
    path
}

pub fn standard_path(x: &CubeComplex, seq: &[usize], from: Vertex, to: Vertex) -> Result<StandardPath> {
    if seq.is_empty() {
        return Err(Error::UnknownHyperplane("empty sequence".into()));
    }
    for (i, pair) in seq.windows(2).enumerate() {
        if !transverse(x, pair[0], pair[1]) {
            return Err(Error::NotTransverseConsecutive(i));
        }
    }
    let m = seq.len() - 1;
    let subdivision = subdivide(x)?;
    let sub = &subdivision.subdivided;
    let mut points = vec![dual_edge_cell(x, &subdivision, seq[0], from)?];
    let last = dual_edge_cell(x, &subdivision, seq[m], to)?;
    for &w in &seq[1..] {
        let slab = slab_set(&subdivision, w)?;
        points.push(sub.gate_project(&slab, *points.last().expect("nonempty"))?);
    }
    points.push(last);

    let mut path = vec![points[0]];
    for pair in points.windows(2) {
        path.extend(greedy_geodesic(sub, pair[0], pair[1]).into_iter().skip(1));
    }
    let local_geodesic_constant = (1..m).map(|i| HalfInt::from_twice(sub.dist(points[i], points[i + 1]))).min();
    let segments_geodesic = (0..m)
        .map(|i| {
            let (a, b, c) = (points[i], points[i + 1], points[i + 2]);
            sub.dist(a, b) + sub.dist(b, c) == sub.dist(a, c)
        })
        .collect();
    let spacing = (1..m).map(|i| hyperplane_distance(x, seq[i - 1], seq[i + 1])).min();
    let endpoint_distance = hyperplane_distance(x, seq[0], seq[m]);
    let delta = x.hyperbolicity_delta();
    let n = spacing.unwrap_or(0);
    let hypotheses_hold = m >= 2 && n > 4 * delta.twice();
    // 6·d ≥ 2n(m - 1) - 12δ, all in integers.
    let bound_holds =
        6 * i64::from(endpoint_distance) >= 2 * i64::from(n) * (m as i64 - 1) - 6 * i64::from(delta.twice());
    Ok(StandardPath {
        subdivision,
        points,
        path,
        local_geodesic_constant,
        segments_geodesic,
        spacing,
        endpoint_distance,
        delta,
        hypotheses_hold,
        bound_holds,
    })
}

/// Over the hyperplanes a geodesic crosses, the one onto which the geodesic
/// projects with the smallest diameter (ties to the smallest id).
pub fn min_projection_hyperplane(x: &CubeComplex, gamma: &[Vertex]) -> Result<Option<(usize, HalfInt)>> {
    let mut crossed = Vec::new();
    for pair in gamma.windows(2) {
        let e = x
            .edge_id(pair[0], pair[1])
            .ok_or_else(|| Error::NotPath(x.name(pair[0]).to_owned(), x.name(pair[1]).to_owned()))?;
        let w = x.hyperplane_of_edge(e);
        if crossed.contains(&w) {
            return Err(Error::NotGeodesic(x.hyperplane(w).label.clone()));
        }
        crossed.push(w);
    }
    if crossed.is_empty() {
        return Ok(None);
    }
    crossed.sort_unstable();
    let s = subdivide(x)?;
    let sub = &s.subdivided;
    let mut best: Option<(usize, HalfInt)> = None;
    for w in crossed {
        let slab = slab_set(&s, w)?;
        let images: Vec<Vertex> = gamma.iter().map(|&v| sub.gate_unchecked(&slab, s.vertex_embedding[v])).collect();
        let diameter = images
            .iter()
            .flat_map(|&a| images.iter().map(move |&b| (a, b)))
            .map(|(a, b)| sub.dist(a, b))
            .max()
            .unwrap_or(0);
        let diameter = HalfInt::from_twice(diameter);
        if best.is_none_or(|(_, d)| diameter < d) {
            best = Some((w, diameter));
        }
    }
    Ok(best)
}
