//! Exit gate: one PASS/FAIL line per criterion. Values come from brute-force
//! oracles written here, independent of the library code paths they check.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cubulate_core::bending::{
    enumerate_crooked, hyperplane_wall, realize, recubulate, standard_path, switch_graph, switch_system_from_labels,
    validate_switch_system, SwitchSystem,
};
use cubulate_core::duality::{maximal_transverse_families, minimal_elements_contain_maximal_family};
use cubulate_core::hyperplane::{is_transverse, non_transversality_components};
use cubulate_core::transforms::{compress, derham, para_classes, strongly_parallel_pairs, subdivide};
use cubulate_core::{
    all_ultrafilters, complexes_isomorphic, corpus, dual_complex, pocset_of, ultrafilter_from_transverse_family,
    validate_complex, CubeComplex, Pocset, Side, Vertex, VertexSet, Wallspace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROUNDTRIP_BUDGET: Duration = Duration::from_secs(10);
const DERHAM_BUDGET: Duration = Duration::from_secs(5);
const BENDING_BUDGET: Duration = Duration::from_secs(5);
const RANDOM_POCSETS: usize = 50;
const MAX_PAIRS: usize = 12;
const CONVEX_PAIRS: usize = 100;
const REPEATS: usize = 5;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn corpus_set() -> Vec<(String, CubeComplex)> {
    let mut out: Vec<(String, CubeComplex)> = (2..=6).map(|n| (format!("P{n}"), corpus::path(n))).collect();
    out.push(("square".into(), corpus::square()));
    out.push(("3-cube".into(), corpus::hypercube(3)));
    out.push(("grid 4x4".into(), corpus::grid(4, 4)));
    out.push(("grid 5x5".into(), corpus::grid(5, 5)));
    out.push(("tripod".into(), corpus::star(3)));
    out.push(("spider 5 legs".into(), corpus::spider(5, 2)));
    out.push(("random A".into(), corpus::random_median(1, 10)));
    out.push(("random B".into(), corpus::random_median(2, 12)));
    out
}

fn bfs(x: &CubeComplex, from: Vertex) -> Vec<u32> {
    let mut dist = vec![u32::MAX; x.len()];
    dist[from] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &u in x.neighbors(v) {
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

fn all_distances(x: &CubeComplex) -> Vec<Vec<u32>> {
    x.vertices().map(|v| bfs(x, v)).collect()
}

fn roundtrip(corpus: &[(String, CubeComplex)]) -> Check {
    let start = Instant::now();
    for (name, x) in corpus {
        let d = dual_complex(&pocset_of(x)).map_err(|e| format!("{name}: {e}"))?;
        let iso = complexes_isomorphic(&d, x).ok_or(format!("{name}: dual not isomorphic"))?;
        ensure!(iso.verify(&d, x), "{name}: witness failed");
        // Independent witness check: a bijection preserving adjacency both ways.
        let image: BTreeSet<_> = iso.map.iter().collect();
        ensure!(image.len() == x.len(), "{name}: witness not a bijection");
        for a in d.vertices() {
            for b in d.vertices() {
                ensure!(
                    d.is_adjacent(a, b) == x.is_adjacent(iso.map[a], iso.map[b]),
                    "{name}: adjacency not preserved"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < ROUNDTRIP_BUDGET, "took {elapsed:?}");
    Ok(format!("{} complexes in {:.2?} (< {ROUNDTRIP_BUDGET:?})", corpus.len(), elapsed))
}

fn subdivision_law(corpus: &[(String, CubeComplex)]) -> Check {
    for (name, x) in corpus {
        let s = subdivide(x).map_err(|e| format!("{name}: {e}"))?;
        let (dx, dy) = (all_distances(x), all_distances(&s.subdivided));
        for a in x.vertices() {
            for b in x.vertices() {
                let (ia, ib) = (s.vertex_embedding[a], s.vertex_embedding[b]);
                ensure!(dy[ia][ib] == 2 * dx[a][b], "{name}: d'({a},{b}) = {} != 2·{}", dy[ia][ib], dx[a][b]);
            }
        }
        ensure!(s.hyperplane_cover.len() == s.subdivided.hyperplanes().len(), "{name}: cover length");
        for w in 0..x.hyperplanes().len() {
            for side in [Side::Minus, Side::Plus] {
                let count = s.hyperplane_cover.iter().filter(|&&c| c == (w, side)).count();
                ensure!(count == 1, "{name}: hyperplane {w} has {count} copies on one side");
            }
        }
        ensure!(s.hyperplane_cover.iter().all(|&(w, _)| w < x.hyperplanes().len()), "{name}: cover out of range");
    }
    Ok(format!("{} complexes, distances doubled exactly, cover exactly two-to-one", corpus.len()))
}

fn compression(corpus: &[(String, CubeComplex)]) -> Check {
    let mut inverses = 0;
    for (name, x) in corpus {
        let direct = compress(x).map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            strongly_parallel_pairs(&direct.complex).is_empty(),
            "{name}: compress(X) has a strongly parallel pair"
        );
        let s = subdivide(x).map_err(|e| format!("{name}: {e}"))?;
        let c = compress(&s.subdivided).map_err(|e| format!("{name}: {e}"))?;
        ensure!(strongly_parallel_pairs(&c.complex).is_empty(), "{name}: compress(X') has a strongly parallel pair");
        if para_classes(x).map_err(|e| format!("{name}: {e}"))?.is_trivial() {
            ensure!(
                complexes_isomorphic(&c.complex, x).is_some(),
                "{name}: compress(subdivide(X)) not isomorphic to X"
            );
            inverses += 1;
        }
    }
    let p5 = compress(&corpus::path(5)).map_err(|e| e.to_string())?.complex;
    ensure!(p5.len() == 2 && p5.edges().len() == 1, "compress(P5) has {} vertices", p5.len());
    Ok(format!("{inverses} singleton-class complexes inverted, compress(P5) is an edge, no strongly parallel pair after any compression"))
}

fn is_path_graph(x: &CubeComplex) -> bool {
    x.edges().len() + 1 == x.len() && x.vertices().all(|v| x.neighbors(v).len() <= 2)
}

fn de_rham(corpus: &[(String, CubeComplex)]) -> Check {
    let start = Instant::now();
    let count = |x: &CubeComplex| derham(x).map(|d| d.factors.len()).map_err(|e| e.to_string());
    ensure!(count(&corpus::hypercube(3))? == 3, "3-cube");
    let grid = derham(&corpus::grid(4, 4)).map_err(|e| e.to_string())?;
    ensure!(grid.factors.len() == 2, "grid has {} factors", grid.factors.len());
    ensure!(grid.factors.iter().all(|f| is_path_graph(&f.complex) && f.complex.len() == 4), "grid factors are not P4");
    ensure!(count(&corpus::star(3))? == 1, "tripod");
    for (name, x) in corpus {
        let d = derham(x).map_err(|e| format!("{name}: {e}"))?;
        ensure!(d.witness.verify(x, &d.product), "{name}: product witness failed");
        let product_size: usize = d.factors.iter().map(|f| f.complex.len()).product();
        ensure!(product_size == x.len(), "{name}: factor sizes multiply to {product_size}");
        for f in &d.factors {
            ensure!(non_transversality_components(&f.complex).len() == 1, "{name}: factor graph disconnected");
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < DERHAM_BUDGET, "took {elapsed:?}");
    Ok(format!("3-cube 3, grid 2 paths, tripod 1; {} witnesses in {:.2?} (< {DERHAM_BUDGET:?})", corpus.len(), elapsed))
}

/// A random pocset with consistent relations added one at a time.
fn random_abstract_pocset(rng: &mut ChaCha8Rng) -> Pocset {
    let pairs = rng.gen_range(1..=MAX_PAIRS);
    let labels: Vec<String> = (0..pairs).flat_map(|i| [format!("e{i}"), format!("e{i}*")]).collect();
    let mut order = Vec::new();
    for _ in 0..rng.gen_range(0..=2 * pairs) {
        let (a, b) = (rng.gen_range(0..2 * pairs), rng.gen_range(0..2 * pairs));
        if a / 2 == b / 2 {
            continue;
        }
        order.push((a, b));
        if Pocset::new(labels.clone(), &order).is_err() {
            order.pop();
        }
    }
    Pocset::new(labels, &order).expect("kept relations are consistent")
}

fn random_wall_pocset(rng: &mut ChaCha8Rng) -> Pocset {
    let points = rng.gen_range(3..=9);
    let names: Vec<String> = (0..points).map(|i| format!("q{i}")).collect();
    let target = rng.gen_range(1..=MAX_PAIRS);
    let mut walls: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut seen = BTreeSet::new();
    for _ in 0..200 {
        if walls.len() == target {
            break;
        }
        let mask: u32 = rng.gen_range(1..(1 << points) - 1);
        let key = if mask & 1 == 1 { mask } else { !mask & ((1 << points) - 1) };
        if !seen.insert(key) {
            continue;
        }
        let plus = (0..points).filter(|i| mask >> i & 1 == 1).collect();
        let minus = (0..points).filter(|i| mask >> i & 1 == 0).collect();
        walls.push((plus, minus));
    }
    Wallspace::from_indices(names, walls).and_then(|w| w.pocset()).expect("distinct proper walls")
}

/// Ultrafilters by brute force: one element per pair, no chosen `a ⪯ b*`.
fn oracle_ultrafilters(p: &Pocset) -> Vec<Vec<usize>> {
    let m = p.pair_count();
    let mut out = Vec::new();
    for mask in 0u32..1 << m {
        let chosen: Vec<usize> = (0..m).map(|i| 2 * i + (mask >> i & 1) as usize).collect();
        if chosen.iter().all(|&a| chosen.iter().all(|&b| !p.le(a, b ^ 1))) {
            out.push(chosen);
        }
    }
    out.sort();
    out
}

/// Maximal pairwise-transverse element sets by brute force over pair subsets.
fn oracle_families(p: &Pocset) -> Vec<Vec<usize>> {
    let m = p.pair_count();
    let transverse = |a: usize, b: usize| {
        [2 * a, 2 * a + 1].iter().all(|&x| [2 * b, 2 * b + 1].iter().all(|&y| !p.le(x, y) && !p.le(y, x)))
    };
    let clique =
        |s: u32| (0..m).all(|i| (0..m).all(|j| i == j || s >> i & 1 == 0 || s >> j & 1 == 0 || transverse(i, j)));
    let mut out = Vec::new();
    for s in 0u32..1 << m {
        if !clique(s) || (0..m).any(|k| s >> k & 1 == 0 && clique(s | 1 << k)) {
            continue;
        }
        let members: Vec<usize> = (0..m).filter(|i| s >> i & 1 == 1).collect();
        for orient in 0u32..1 << members.len() {
            out.push(members.iter().enumerate().map(|(j, &i)| 2 * i + (orient >> j & 1) as usize).collect());
        }
    }
    out.sort();
    out
}

fn minimal_of(p: &Pocset, sigma: &[usize]) -> Vec<usize> {
    sigma.iter().copied().filter(|&a| !sigma.iter().any(|&b| b != a && p.le(b, a))).collect()
}

fn pocset_lemma(corpus: &[(String, CubeComplex)]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pocsets: Vec<(String, Pocset)> = corpus
        .iter()
        .filter(|(_, x)| x.hyperplanes().len() <= MAX_PAIRS + 4)
        .map(|(n, x)| (n.clone(), pocset_of(x)))
        .collect();
    for i in 0..RANDOM_POCSETS {
        let p = if i % 2 == 0 { random_wall_pocset(&mut rng) } else { random_abstract_pocset(&mut rng) };
        pocsets.push((format!("random #{i}"), p));
    }
    let mut families = 0;
    let mut filters = 0;
    for (name, p) in &pocsets {
        let oracle = oracle_ultrafilters(p);
        let mut library: Vec<Vec<usize>> = all_ultrafilters(p).iter().map(|u| u.elements().collect()).collect();
        library.sort();
        ensure!(library == oracle, "{name}: ultrafilter sets differ ({} vs {})", library.len(), oracle.len());
        let taus = oracle_families(p);
        let mut lib_taus = maximal_transverse_families(p);
        lib_taus.iter_mut().for_each(|t| t.sort_unstable());
        lib_taus.sort();
        ensure!(lib_taus == taus, "{name}: maximal transverse families differ");
        let minimals: Vec<Vec<usize>> = oracle.iter().map(|s| minimal_of(p, s)).collect();
        for tau in &taus {
            let hits: Vec<usize> = (0..oracle.len()).filter(|&i| tau.iter().all(|a| minimals[i].contains(a))).collect();
            ensure!(hits.len() == 1, "{name}: family {tau:?} lies in min σ for {} ultrafilters", hits.len());
            let built: Vec<usize> =
                ultrafilter_from_transverse_family(p, tau).map_err(|e| format!("{name}: {e}"))?.elements().collect();
            ensure!(built == oracle[hits[0]], "{name}: constructed ultrafilter differs for {tau:?}");
        }
        for (i, u) in all_ultrafilters(p).iter().enumerate() {
            let sigma: Vec<usize> = u.elements().collect();
            let min = minimal_of(p, &sigma);
            let holds = taus.iter().any(|t| t.iter().all(|a| min.contains(a)));
            ensure!(holds, "{name}: min σ of ultrafilter {i} contains no maximal family");
            ensure!(
                minimal_elements_contain_maximal_family(p, u) == holds,
                "{name}: library disagrees on ultrafilter {i}"
            );
        }
        families += taus.len();
        filters += oracle.len();
    }
    // Any two ultrafilters on a finite pocset differ on finitely many pairs,
    // so the almost-equality part holds trivially.
    Ok(format!(
        "{} pocsets ({RANDOM_POCSETS} random, ≤ {MAX_PAIRS} pairs): {families} maximal families each under exactly one min σ, every one of {filters} ultrafilters has such a family in min σ, almost equality vacuous",
        pocsets.len()
    ))
}

/// Closure of a set under intervals, from distances alone.
fn oracle_hull(d: &[Vec<u32>], seed: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
    let n = d.len();
    let mut set = seed.clone();
    loop {
        let list: Vec<Vertex> = set.iter().copied().collect();
        let mut grown = set.clone();
        for &a in &list {
            for &b in &list {
                grown.extend((0..n).filter(|&z| d[a][z] + d[z][b] == d[a][b]));
            }
        }
        if grown.len() == set.len() {
            return set;
        }
        set = grown;
    }
}

fn oracle_gate(d: &[Vec<u32>], y: &BTreeSet<Vertex>, v: Vertex) -> Vertex {
    *y.iter().min_by_key(|&&u| (d[v][u], u)).expect("nonempty")
}

fn median_gate_bridge(corpus: &[(String, CubeComplex)]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    for (name, x) in corpus {
        let d = all_distances(x);
        let n = x.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let medians: Vec<Vertex> = (0..n)
                        .filter(|&z| {
                            d[a][z] + d[z][b] == d[a][b] && d[b][z] + d[z][c] == d[b][c] && d[a][z] + d[z][c] == d[a][c]
                        })
                        .collect();
                    ensure!(medians == [x.median(a, b, c)], "{name}: median of ({a},{b},{c})");
                }
            }
        }
        for _ in 0..CONVEX_PAIRS {
            let pick = |rng: &mut ChaCha8Rng| -> BTreeSet<Vertex> {
                (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect()
            };
            let (ys, zs) = (oracle_hull(&d, &pick(&mut rng)), oracle_hull(&d, &pick(&mut rng)));
            let y = VertexSet::from_vertices(x, ys.iter().copied());
            let z = VertexSet::from_vertices(x, zs.iter().copied());
            ensure!(
                x.convex_hull(&y).map_err(|e| e.to_string())?.to_vec() == y.to_vec(),
                "{name}: hull disagrees with oracle"
            );
            let mut gates = vec![0; n];
            for v in 0..n {
                let g = oracle_gate(&d, &ys, v);
                ensure!(ys.iter().all(|&u| d[v][u] == d[v][g] + d[g][u]), "{name}: oracle gate of {v} is not a gate");
                ensure!(x.gate_project(&y, v).map_err(|e| e.to_string())? == g, "{name}: gate of {v}");
                // W(v | Y): hyperplanes with v on one side and all of Y on the other.
                let wy: Vec<usize> = (0..x.hyperplanes().len())
                    .filter(|&w| {
                        let h = x.hyperplane(w);
                        let side = |u: Vertex| h.plus.contains(u);
                        ys.iter().all(|&u| side(u) != side(v))
                    })
                    .collect();
                ensure!(x.separating_vertices(v, g) == wy, "{name}: W(x|π(x)) != W(x|Y) at {v}");
                gates[v] = g;
            }
            for a in 0..n {
                for b in 0..n {
                    ensure!(d[gates[a]][gates[b]] <= d[a][b], "{name}: projection not 1-Lipschitz");
                }
            }
            let py: BTreeSet<Vertex> = zs.iter().map(|&v| oracle_gate(&d, &ys, v)).collect();
            let pz: BTreeSet<Vertex> = ys.iter().map(|&v| oracle_gate(&d, &zs, v)).collect();
            let bridge: BTreeSet<Vertex> = oracle_hull(&d, &py.union(&pz).copied().collect());
            let first = *py.iter().next().expect("nonempty");
            let across = oracle_gate(&d, &zs, first);
            let rung = (0..n).filter(|&v| d[first][v] + d[v][across] == d[first][across]).count();
            ensure!(bridge.len() == py.len() * rung, "{name}: |B| = {} != {}·{rung}", bridge.len(), py.len());
            let b = x.bridge(&y, &z).map_err(|e| e.to_string())?;
            ensure!(
                b.bridge.to_vec() == bridge.iter().copied().collect::<Vec<_>>(),
                "{name}: bridge differs from oracle"
            );
            ensure!(b.gate_in_first.len() == py.len() && b.rung.len() == rung, "{name}: bridge factors differ");
            checked += 1;
        }
    }
    Ok(format!("exhaustive medians; {checked} convex pairs ({CONVEX_PAIRS} per complex)"))
}

fn components_without(x: &CubeComplex, removed: &BTreeSet<(Vertex, Vertex)>) -> usize {
    let mut seen = vec![false; x.len()];
    let mut count = 0;
    for s in x.vertices() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in x.neighbors(v) {
                if !seen[u] && !removed.contains(&(v.min(u), v.max(u))) {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    count
}

/// Vertices of the dual of a wallspace: orientations whose chosen sides meet pairwise.
fn oracle_wall_dual_size(walls: &[(Vec<Vertex>, Vec<Vertex>)]) -> usize {
    let sets: Vec<[BTreeSet<Vertex>; 2]> =
        walls.iter().map(|(p, m)| [p.iter().copied().collect(), m.iter().copied().collect()]).collect();
    (0u32..1 << walls.len())
        .filter(|mask| {
            let chosen: Vec<&BTreeSet<Vertex>> =
                sets.iter().enumerate().map(|(i, s)| &s[(mask >> i & 1) as usize]).collect();
            chosen.iter().all(|a| chosen.iter().all(|b| !a.is_disjoint(b)))
        })
        .count()
}

fn bending() -> Check {
    let start = Instant::now();
    let x = corpus::grid(4, 4);
    let system = switch_system_from_labels(&x, &[("0.1|0.2", "1.0|2.0")], 1).map_err(|e| e.to_string())?;
    let g = switch_graph(&x, &system).map_err(|e| e.to_string())?;
    let distinct: BTreeSet<_> = g.slots[0].iter().collect();
    ensure!(g.switches.len() == 1 && g.pieces.len() == 4 && distinct.len() == 4, "switch graph is not K1,4");
    ensure!(g.piece_switches.iter().all(|s| s == &[0]), "a piece is not a leaf");
    let crooked = enumerate_crooked(&g, 1000);
    ensure!(crooked.subtrees.len() == 6 && !crooked.truncated, "{} crooked subtrees", crooked.subtrees.len());
    let (h2, v2) = (x.find_hyperplane("0.1|0.2").unwrap(), x.find_hyperplane("1.0|2.0").unwrap());
    let mut checked_l = false;
    for t in &crooked.subtrees {
        let wall = realize(&x, &g, t).map_err(|e| e.to_string())?;
        let removed: BTreeSet<(Vertex, Vertex)> =
            wall.track.iter().map(|&e| x.edges()[e]).map(|(a, b)| (a.min(b), a.max(b))).collect();
        let parts = components_without(&x, &removed);
        ensure!(parts == 2, "crooked subtree splits X into {parts} components");
        let bent: BTreeSet<usize> = t.pieces.iter().map(|&p| g.pieces[p].hyperplane).collect();
        if bent.len() == 2 && !checked_l {
            let mut walls: Vec<_> =
                (0..x.hyperplanes().len()).filter(|&w| w != h2 && w != v2).map(|w| hyperplane_wall(&x, w)).collect();
            walls.push((wall.sides[1].clone(), wall.sides[0].clone()));
            let y = recubulate(&x, &walls).map_err(|e| e.to_string())?.dual.complex;
            let (names, edges) = (y.names().to_vec(), y.edge_names());
            validate_complex(&names, &edges).map_err(|e| format!("recubulation invalid: {e}"))?;
            let expected = oracle_wall_dual_size(&walls);
            ensure!(y.len() == expected, "recubulation has {} vertices, oracle {expected}", y.len());
            checked_l = true;
        }
    }
    ensure!(checked_l, "no L-shaped crooked subtree");
    let elapsed = start.elapsed();
    ensure!(elapsed < BENDING_BUDGET, "took {elapsed:?}");
    Ok(format!("K1,4, 6 crooked subtrees each with 2 components, L-wall recubulation matches oracle, {elapsed:.2?}"))
}

fn forest_condition() -> Check {
    let by_labels = |x: &CubeComplex, pairs: &[(&str, &str)], n: u32| {
        switch_system_from_labels(x, pairs, n).map_err(|e| e.to_string())
    };
    let ladder = corpus::ladder(30);
    let mut systems: Vec<(String, CubeComplex, SwitchSystem)> = Vec::new();
    let ladder_system =
        by_labels(&ladder, &[("0.0|0.1", "0.0|1.0"), ("0.0|0.1", "10.0|11.0"), ("0.0|0.1", "20.0|21.0")], 9)?;
    systems.push(("ladder 30, three switches".into(), ladder.clone(), ladder_system));
    let pair = by_labels(&ladder, &[("0.0|0.1", "3.0|4.0"), ("0.0|0.1", "14.0|15.0")], 10)?;
    systems.push(("ladder 30, two switches".into(), ladder, pair));
    let prism = corpus::product(&corpus::star(3), &corpus::path(2));
    let transverse: Vec<(usize, usize)> = (0..prism.hyperplanes().len())
        .flat_map(|a| (a + 1..prism.hyperplanes().len()).map(move |b| (a, b)))
        .filter(|&(a, b)| is_transverse(&prism, a, b).unwrap_or(false))
        .collect();
    for &(a, b) in &transverse {
        let s = validate_switch_system(&prism, &[(a, b)], 9).map_err(|e| e.to_string())?;
        systems.push((format!("tripod prism switch {a}/{b}"), prism.clone(), s));
    }
    let grid = corpus::grid(4, 4);
    let big = 8 * grid.hyperbolicity_delta().twice() as u32 + 1;
    systems.push(("grid 4x4 single switch".into(), grid.clone(), by_labels(&grid, &[("0.1|0.2", "1.0|2.0")], big)?));

    let mut regime = 0;
    for (name, x, s) in &systems {
        if !s.forest_regime {
            continue;
        }
        regime += 1;
        let g = switch_graph(x, s).map_err(|e| format!("{name}: {e}"))?;
        ensure!(g.forest, "{name}: n = {} > 8δ = {} but switch graph has a cycle", s.n, 4 * s.delta.twice());
    }
    ensure!(regime >= 3, "only {regime} systems in the forest regime");

    let small = corpus::grid(3, 3);
    let cycle = by_labels(
        &small,
        &[("0.0|1.0", "0.0|0.1"), ("0.0|0.1", "1.0|2.0"), ("1.0|2.0", "0.1|0.2"), ("0.1|0.2", "0.0|1.0")],
        0,
    )?;
    let g = switch_graph(&small, &cycle).map_err(|e| e.to_string())?;
    ensure!(!cycle.forest_regime, "cycle example unexpectedly has n > 8δ");
    Ok(format!(
        "{regime} systems with n > 8δ are forests; 3x3 cycle example: n = {} ≤ 8δ = {}, forest = {} (reported)",
        cycle.n,
        4 * cycle.delta.twice(),
        g.forest
    ))
}

fn standard_paths() -> Check {
    let mut instances = 0;
    let mut under_hypotheses = 0;
    let mut cases: Vec<(CubeComplex, Vec<Vec<&str>>)> = vec![
        (
            corpus::grid(3, 3),
            vec![
                vec!["0.0|1.0", "0.0|0.1"],
                vec!["0.0|1.0", "0.1|0.2", "1.0|2.0"],
                vec!["0.0|0.1", "1.0|2.0", "0.1|0.2", "0.0|1.0"],
            ],
        ),
        (
            corpus::grid(4, 4),
            vec![
                vec!["1.0|2.0"],
                vec!["0.0|1.0", "0.0|0.1", "2.0|3.0"],
                vec!["0.2|0.3", "2.0|3.0", "0.0|0.1", "0.0|1.0"],
            ],
        ),
    ];
    cases.push((
        corpus::ladder(24),
        vec![
            vec!["0.0|1.0", "0.0|0.1", "12.0|13.0"],
            vec!["2.0|3.0", "0.0|0.1", "22.0|23.0"],
            vec!["5.0|6.0", "0.0|0.1"],
        ],
    ));
    for (x, seqs) in &cases {
        for labels in seqs {
            let seq: Vec<usize> =
                labels.iter().map(|l| x.find_hyperplane(l)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
            let first = x.hyperplane(seq[0]).carrier();
            let last = x.hyperplane(*seq.last().unwrap()).carrier();
            for a in first.ones() {
                for b in last.ones() {
                    let p = standard_path(x, &seq, a, b).map_err(|e| e.to_string())?;
                    let d = all_distances(&p.subdivision.subdivided);
                    for (i, w) in p.points.windows(3).enumerate() {
                        ensure!(
                            d[w[0]][w[1]] + d[w[1]][w[2]] == d[w[0]][w[2]],
                            "{labels:?} from {a} to {b}: segment {i} not geodesic"
                        );
                    }
                    ensure!(p.segments_geodesic.iter().all(|&g| g), "library reports a non-geodesic segment");
                    if p.hypotheses_hold {
                        under_hypotheses += 1;
                        let n = i64::from(p.spacing.unwrap());
                        let m = seq.len() as i64 - 1;
                        let lhs = 6 * i64::from(p.endpoint_distance);
                        let rhs = 2 * n * (m - 1) - 6 * i64::from(p.delta.twice());
                        ensure!(lhs >= rhs && p.bound_holds, "{labels:?}: bound violated ({lhs} < {rhs})");
                    }
                    instances += 1;
                }
            }
        }
    }
    ensure!(under_hypotheses > 0, "no instance satisfies the hypotheses");
    Ok(format!("{instances} standard paths geodesic on every segment; bound holds on all {under_hypotheses} instances meeting the hypotheses"))
}

struct Run {
    code: Option<i32>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    files: Vec<(String, Vec<u8>)>,
}

fn run_cli(dir: &Path, jobs: usize, args: &[String]) -> Result<Run, String> {
    let out_dir = dir.join("out");
    let _ = fs::remove_dir_all(&out_dir);
    fs::create_dir_all(&out_dir).map_err(|e| e.to_string())?;
    let args: Vec<String> = args.iter().map(|a| a.replace("{out}", out_dir.to_str().unwrap())).collect();
    let output = Command::new(env!("CARGO_BIN_EXE_cubulate"))
        .arg("--jobs")
        .arg(jobs.to_string())
        .args(&args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    let mut stack = vec![out_dir];
    while let Some(d) = stack.pop() {
        let mut entries: Vec<_> = fs::read_dir(&d).map_err(|e| e.to_string())?.flatten().map(|e| e.path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push((p.display().to_string(), fs::read(&p).map_err(|e| e.to_string())?));
            }
        }
    }
    Ok(Run { code: output.status.code(), stdout: output.stdout, stderr: output.stderr, files })
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = dir.path();
    let write = |name: &str, text: &str| fs::write(root.join(name), text).map_err(|e| e.to_string());
    for (name, x) in [
        ("grid.json", corpus::grid(4, 4)),
        ("cube.json", corpus::hypercube(3)),
        ("random.json", corpus::random_median(2, 12)),
        ("path.json", corpus::path(5)),
    ] {
        let edges: Vec<[String; 2]> = x.edge_names().into_iter().map(|(a, b)| [a, b]).collect();
        write(name, &serde_json::json!({ "vertices": x.names(), "edges": edges }).to_string())?;
    }
    write(
        "c6.json",
        r#"{"vertices":["a","b","c","d","e","f"],"edges":[["a","b"],["b","c"],["c","d"],["d","e"],["e","f"],["f","a"]]}"#,
    )?;
    write(
        "pocset.json",
        r#"{"elements":["a","a*","b","b*","c","c*"],"pairs":[["a","a*"],["b","b*"],["c","c*"]],"order":[["a","b"]]}"#,
    )?;
    write(
        "walls.json",
        r#"{"points":["x","y","z"],"walls":[{"plus":["x"],"minus":["y","z"]},{"plus":["y"],"minus":["x","z"]},{"plus":["z"],"minus":["x","y"]}]}"#,
    )?;
    write("switch.json", r#"{"complex":"grid.json","switches":[["0.1|0.2","1.0|2.0"]],"n":1}"#)?;
    let commands: Vec<&str> = vec![
        "validate random.json",
        "validate grid.json",
        "validate c6.json",
        "validate missing.json",
        "dual --pocset pocset.json",
        "dual --walls walls.json --out {out}/dual.json",
        "subdivide random.json --out {out}/sub.json --map {out}/map.json",
        "compress random.json --map {out}/classes.json",
        "derham cube.json --out-dir {out}/factors",
        "quotient grid.json --keep 0.0|1.0,0.1|0.2 --map {out}/q.json",
        "trim path.json --radius 1 --map {out}/trim.json",
        "corner grid.json -0.0|1.0 -0.0|0.1",
        "bend graph switch.json",
        "bend enumerate switch.json --limit 100",
        "bend apply switch.json --crooked 1 --keep-original-walls --report {out}/report.json",
        "corpus random 7 9",
    ];
    for command in &commands {
        let args: Vec<String> = command.split(' ').map(String::from).collect();
        let reference = run_cli(root, 1, &args)?;
        for jobs in [1, 4] {
            for _ in 0..REPEATS {
                let r = run_cli(root, jobs, &args)?;
                ensure!(
                    r.code == reference.code
                        && r.stdout == reference.stdout
                        && r.stderr == reference.stderr
                        && r.files == reference.files,
                    "`{command}` differs with --jobs {jobs}"
                );
            }
        }
    }
    Ok(format!("{} commands byte-identical over {REPEATS} runs each at --jobs 1 and --jobs 4", commands.len()))
}

fn main() -> ExitCode {
    let corpus = corpus_set();
    let criteria: Vec<Criterion> = vec![
        ("duality roundtrip", Box::new(|| roundtrip(&corpus))),
        ("subdivision law", Box::new(|| subdivision_law(&corpus))),
        ("compression inverse", Box::new(|| compression(&corpus))),
        ("de Rham decomposition", Box::new(|| de_rham(&corpus))),
        ("pocset lemma", Box::new(|| pocset_lemma(&corpus))),
        ("median, gate and bridge", Box::new(|| median_gate_bridge(&corpus))),
        ("bending pipeline", Box::new(bending)),
        ("forest condition", Box::new(forest_condition)),
        ("standard paths", Box::new(standard_paths)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
