use std::fs;
use std::path::Path;

use cubulate_core::bending::{
    check_crooked, enumerate_crooked, hyperplane_wall, realize, recubulate, switch_graph, switch_system_from_labels,
    CrookedSubtree, SwitchGraph,
};
use cubulate_core::duality::{dual, wallspace_dual, DEFAULT_ULTRAFILTER_CAP};
use cubulate_core::hyperplane::{corner_halfspace, facing_triples, longest_chain};
use cubulate_core::pocset::halfspace_label;
use cubulate_core::transforms::{
    compress, derham, para_classes, restriction_quotient, strongly_parallel_pairs, subdivide, trim_shallow,
};
use cubulate_core::{corpus, CubeComplex, Error, HalfInt, Halfspace, Side};
use serde::Serialize;

use crate::formats::{emit, load_complex, load_pocset, load_walls, read_json, to_json, ComplexFile, SwitchFile};
use crate::Failure;

fn labels(x: &CubeComplex, ws: impl IntoIterator<Item = usize>) -> Vec<String> {
    ws.into_iter().map(|w| x.hyperplane(w).label.clone()).collect()
}

fn parse_halfspace(x: &CubeComplex, s: &str) -> Result<Halfspace, Failure> {
    let side = match s.chars().next() {
        Some('+') => Side::Plus,
        Some('-') => Side::Minus,
        _ => return Err(Failure::Input(format!("halfspace `{s}` must start with + or -"))),
    };
    Ok(Halfspace::new(x.find_hyperplane(&s[1..])?, side))
}

fn emit_complex(out: Option<&Path>, x: &CubeComplex) -> Result<(), Failure> {
    emit(out, &to_json(&ComplexFile::of(x)))
}

fn emit_map<T: Serialize>(map: Option<&Path>, value: &T) -> Result<(), Failure> {
    match map {
        Some(path) => emit(Some(path), &to_json(value)),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct Baldness {
    strongly_parallel_pairs: Vec<[String; 2]>,
    nontrivial_para_classes: Vec<Vec<String>>,
    bald: bool,
}

#[derive(Serialize)]
struct ValidateReport {
    vertices: usize,
    edges: usize,
    cubes: Vec<usize>,
    dimension: usize,
    hyperplanes: usize,
    delta: f64,
    facing_triples: Vec<[String; 3]>,
    longest_chain: Vec<String>,
    derham_factors: usize,
    baldness: Baldness,
}

pub fn validate(file: &Path, sample: Option<usize>) -> Result<(), Failure> {
    let x = load_complex(file, sample)?;
    let para = para_classes(&x)?;
    let strongly_parallel: Vec<[String; 2]> = strongly_parallel_pairs(&x)
        .into_iter()
        .map(|(a, b)| [x.hyperplane(a).label.clone(), x.hyperplane(b).label.clone()])
        .collect();
    let nontrivial_para_classes: Vec<Vec<String>> = para
        .classes
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.iter().map(|&h| halfspace_label(&x, h)).collect())
        .collect();
    let report = ValidateReport {
        vertices: x.len(),
        edges: x.edges().len(),
        cubes: x.cube_counts(),
        dimension: x.dimension(),
        hyperplanes: x.hyperplanes().len(),
        delta: x.hyperbolicity_delta().as_f64(),
        facing_triples: facing_triples(&x).into_iter().map(|t| t.map(|w| x.hyperplane(w).label.clone())).collect(),
        longest_chain: longest_chain(&x).into_iter().map(|h| halfspace_label(&x, h)).collect(),
        derham_factors: derham(&x)?.factors.len(),
        baldness: Baldness {
            bald: strongly_parallel.is_empty(),
            strongly_parallel_pairs: strongly_parallel,
            nontrivial_para_classes,
        },
    };
    emit(None, &to_json(&report))
}

pub fn dual_command(pocset: Option<&Path>, walls: Option<&Path>, out: Option<&Path>) -> Result<(), Failure> {
    let x = match (pocset, walls) {
        (Some(p), None) => dual(&load_pocset(p)?, DEFAULT_ULTRAFILTER_CAP)?.complex,
        (None, Some(w)) => wallspace_dual(&load_walls(w)?)?.dual.complex,
        _ => return Err(Failure::Input("exactly one of --pocset and --walls is required".into())),
    };
    emit_complex(out, &x)
}

#[derive(Serialize)]
struct CoverEntry {
    hyperplane: String,
    over: String,
    side: &'static str,
}

#[derive(Serialize)]
struct SubdivisionMap {
    vertex_embedding: Vec<[String; 2]>,
    hyperplane_cover: Vec<CoverEntry>,
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Minus => "minus",
        Side::Plus => "plus",
    }
}

pub fn subdivide_command(
    file: &Path,
    sample: Option<usize>,
    out: Option<&Path>,
    map: Option<&Path>,
) -> Result<(), Failure> {
    let x = load_complex(file, sample)?;
    let s = subdivide(&x)?;
    let sub = &s.subdivided;
    emit_complex(out, sub)?;
    emit_map(
        map,
        &SubdivisionMap {
            vertex_embedding: x
                .vertices()
                .map(|v| [x.name(v).to_owned(), sub.name(s.vertex_embedding[v]).to_owned()])
                .collect(),
            hyperplane_cover: s
                .hyperplane_cover
                .iter()
                .enumerate()
                .map(|(i, &(w, side))| CoverEntry {
                    hyperplane: sub.hyperplane(i).label.clone(),
                    over: x.hyperplane(w).label.clone(),
                    side: side_name(side),
                })
                .collect(),
        },
    )
}

#[derive(Serialize)]
struct CompressionClass {
    hyperplane: String,
    halfspaces: Vec<String>,
}

pub fn compress_command(
    file: &Path,
    sample: Option<usize>,
    out: Option<&Path>,
    map: Option<&Path>,
) -> Result<(), Failure> {
    let x = load_complex(file, sample)?;
    let c = compress(&x)?;
    emit_complex(out, &c.complex)?;
    let classes: Vec<CompressionClass> = c
        .classes
        .classes
        .iter()
        .enumerate()
        .filter(|&(i, _)| c.classes.element_of_class[i] % 2 == 0)
        .map(|(i, members)| CompressionClass {
            hyperplane: c.complex.hyperplane(c.pair_hyperplane[c.classes.element_of_class[i] / 2]).label.clone(),
            halfspaces: members.iter().map(|&h| halfspace_label(&x, h)).collect(),
        })
        .collect();
    emit_map(map, &classes)
}

#[derive(Serialize)]
struct Factor {
    file: Option<String>,
    hyperplanes: Vec<String>,
    vertices: usize,
}

#[derive(Serialize)]
struct DeRhamReport {
    factors: Vec<Factor>,
    product_vertices: usize,
    witness_verified: bool,
}

pub fn derham_command(file: &Path, sample: Option<usize>, out_dir: Option<&Path>) -> Result<(), Failure> {
    let x = load_complex(file, sample)?;
    let d = derham(&x)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    }
    let mut factors = Vec::new();
    for (i, (class, f)) in d.classes.iter().zip(&d.factors).enumerate() {
        let name = format!("factor-{i}.json");
        if let Some(dir) = out_dir {
            emit_complex(Some(&dir.join(&name)), &f.complex)?;
        }
        factors.push(Factor {
            file: out_dir.map(|_| name),
            hyperplanes: labels(&x, class.iter().copied()),
            vertices: f.complex.len(),
        });
    }
    let witness_verified = d.witness.verify(&x, &d.product);
    emit(None, &to_json(&DeRhamReport { factors, product_vertices: d.product.len(), witness_verified }))
}

#[derive(Serialize)]
struct QuotientMap {
    kept: Vec<String>,
    vertex_map: Vec<[String; 2]>,
}

pub fn quotient_command(
    file: &Path,
    sample: Option<usize>,
    keep: &[String],
    out: Option<&Path>,
    map: Option<&Path>,
) -> Result<(), Failure> {
    let x = load_complex(file, sample)?;
    let ids = keep.iter().map(|l| x.find_hyperplane(l.trim())).collect::<Result<Vec<_>, _>>()?;
    let q = restriction_quotient(&x, &ids)?;
    emit_complex(out, &q.complex)?;
    emit_map(
        map,
        &QuotientMap {
            kept: labels(&x, q.kept.iter().copied()),
            vertex_map: x.vertices().map(|v| [x.name(v).to_owned(), q.complex.name(q.map[v]).to_owned()]).collect(),
        },
    )
}

#[derive(Serialize)]
struct TrimMap<'a> {
    removed: &'a [String],
    vertex_map: Vec<[String; 2]>,
}

pub fn trim_command(
    file: &Path,
    sample: Option<usize>,
    radius: u32,
    out: Option<&Path>,
    map: Option<&Path>,
) -> Result<(), Failure> {
    let x = load_complex(file, sample)?;
    let t = trim_shallow(&x, radius)?;
    emit_complex(out, &t.complex)?;
    emit_map(
        map,
        &TrimMap {
            removed: &t.removed,
            vertex_map: x.vertices().map(|v| [x.name(v).to_owned(), t.complex.name(t.map[v]).to_owned()]).collect(),
        },
    )
}

#[derive(Serialize)]
struct CornerOutput {
    halfspace: Option<String>,
    failed_hypotheses: Vec<&'static str>,
}

pub fn corner_command(file: &Path, sample: Option<usize>, first: &str, second: &str) -> Result<(), Failure> {
    let x = load_complex(file, sample)?;
    let (h1, h2) = (parse_halfspace(&x, first)?, parse_halfspace(&x, second)?);
    let r = corner_halfspace(&x, h1, h2)?;
    let report =
        CornerOutput { halfspace: r.halfspace.map(|h| halfspace_label(&x, h)), failed_hypotheses: r.failed_hypotheses };
    emit(None, &to_json(&report))
}

struct Bend {
    x: CubeComplex,
    graph: SwitchGraph,
    n: u32,
    delta: HalfInt,
    forest_regime: bool,
}

fn load_bend(file: &Path, sample: Option<usize>) -> Result<Bend, Failure> {
    let s: SwitchFile = read_json(file)?;
    let base = file.parent().map(Path::to_path_buf).unwrap_or_default();
    let x = load_complex(&base.join(&s.complex), sample)?;
    let pairs: Vec<(&str, &str)> = s.switches.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
    let system = switch_system_from_labels(&x, &pairs, s.n)?;
    let graph = switch_graph(&x, &system)?;
    Ok(Bend { x, graph, n: system.n, delta: system.delta, forest_regime: system.forest_regime })
}

#[derive(Serialize)]
struct PieceEntry {
    id: usize,
    hyperplane: String,
    edges: Vec<[String; 2]>,
    switches: Vec<usize>,
}

#[derive(Serialize)]
struct SwitchEntry {
    id: usize,
    hyperplanes: [String; 2],
    slots: [usize; 4],
}

#[derive(Serialize)]
struct GraphReport {
    type1_vertices: usize,
    type2_vertices: usize,
    pieces: Vec<PieceEntry>,
    switches: Vec<SwitchEntry>,
    forest: bool,
    n: u32,
    eight_delta: f64,
    n_exceeds_eight_delta: bool,
}

pub fn bend_graph(file: &Path, sample: Option<usize>) -> Result<(), Failure> {
    let Bend { x, graph, n, delta, forest_regime } = load_bend(file, sample)?;
    let edge = |e: usize| {
        let (a, b) = x.edges()[e];
        [x.name(a).to_owned(), x.name(b).to_owned()]
    };
    let report = GraphReport {
        type1_vertices: graph.pieces.len(),
        type2_vertices: graph.switches.len(),
        pieces: graph
            .pieces
            .iter()
            .enumerate()
            .map(|(id, p)| PieceEntry {
                id,
                hyperplane: x.hyperplane(p.hyperplane).label.clone(),
                edges: p.edges.iter().map(|&e| edge(e)).collect(),
                switches: graph.piece_switches[id].clone(),
            })
            .collect(),
        switches: graph
            .switches
            .iter()
            .zip(&graph.slots)
            .enumerate()
            .map(|(id, (&(u, v), &slots))| SwitchEntry {
                id,
                hyperplanes: [x.hyperplane(u).label.clone(), x.hyperplane(v).label.clone()],
                slots,
            })
            .collect(),
        forest: graph.forest,
        n,
        eight_delta: 8.0 * delta.as_f64(),
        n_exceeds_eight_delta: forest_regime,
    };
    emit(None, &to_json(&report))
}

#[derive(Serialize)]
struct SubtreeEntry<'a> {
    id: usize,
    switches: &'a [usize],
    selected: &'a [[usize; 2]],
    pieces: &'a [usize],
}

#[derive(Serialize)]
struct EnumerateReport<'a> {
    count: usize,
    truncated: bool,
    subtrees: Vec<SubtreeEntry<'a>>,
}

pub fn bend_enumerate(file: &Path, sample: Option<usize>, limit: usize) -> Result<(), Failure> {
    let b = load_bend(file, sample)?;
    let e = enumerate_crooked(&b.graph, limit);
    let subtrees = e
        .subtrees
        .iter()
        .enumerate()
        .map(|(id, t)| SubtreeEntry { id, switches: &t.switches, selected: &t.selected, pieces: &t.pieces })
        .collect();
    emit(None, &to_json(&EnumerateReport { count: e.subtrees.len(), truncated: e.truncated, subtrees }))
}

#[derive(Serialize)]
struct ApplyReport {
    crooked: usize,
    sides: [usize; 2],
    track_edges: usize,
    track_connected: bool,
    quasiconvexity_defect: u32,
    walls: usize,
    vertices: usize,
    hyperplanes: usize,
}

pub struct ApplyArgs<'a> {
    pub file: &'a Path,
    pub sample: Option<usize>,
    pub crooked: usize,
    pub limit: usize,
    pub keep_original_walls: bool,
    pub out: Option<&'a Path>,
    pub report: Option<&'a Path>,
}

pub fn bend_apply(args: ApplyArgs<'_>) -> Result<(), Failure> {
    let Bend { x, graph, .. } = load_bend(args.file, args.sample)?;
    let e = enumerate_crooked(&graph, args.limit);
    let t: &CrookedSubtree = e.subtrees.get(args.crooked).ok_or_else(|| {
        Error::InvalidSubtree(format!("no crooked subtree with id {} ({} enumerated)", args.crooked, e.subtrees.len()))
    })?;
    check_crooked(&graph, t)?;
    let wall = realize(&x, &graph, t)?;
    let mut walls = Vec::new();
    if args.keep_original_walls {
        let bent: Vec<usize> = t.pieces.iter().map(|&p| graph.pieces[p].hyperplane).collect();
        walls.extend((0..x.hyperplanes().len()).filter(|w| !bent.contains(w)).map(|w| hyperplane_wall(&x, w)));
    }
    walls.push((wall.sides[1].clone(), wall.sides[0].clone()));
    let r = recubulate(&x, &walls)?;
    let y = &r.dual.complex;
    emit_complex(args.out, y)?;
    let report = ApplyReport {
        crooked: args.crooked,
        sides: [wall.sides[0].len(), wall.sides[1].len()],
        track_edges: wall.track.len(),
        track_connected: wall.track_connected,
        quasiconvexity_defect: wall.quasiconvexity_defect,
        walls: walls.len(),
        vertices: y.len(),
        hyperplanes: y.hyperplanes().len(),
    };
    let text = to_json(&report);
    match args.report {
        Some(path) => emit(Some(path), &text),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

pub fn corpus_command(kind: &str, params: &[usize], out: Option<&Path>) -> Result<(), Failure> {
    let arg = |i: usize| {
        params.get(i).copied().ok_or_else(|| Failure::Input(format!("corpus `{kind}` needs {} parameter(s)", i + 1)))
    };
    let x = match kind {
        "path" => corpus::path(arg(0)?),
        "square" => corpus::square(),
        "hypercube" => corpus::hypercube(arg(0)?),
        "grid" => corpus::grid(arg(0)?, arg(1)?),
        "ladder" => corpus::ladder(arg(0)?),
        "star" => corpus::star(arg(0)?),
        "spider" => corpus::spider(arg(0)?, arg(1)?),
        "square-pendant" => corpus::square_with_pendant(),
        "random" => corpus::random_median(arg(0)? as u64, arg(1)?),
        other => return Err(Failure::Input(format!("unknown corpus complex `{other}`"))),
    };
    if x.is_empty() {
        return Err(Failure::Input("corpus complexes need at least one vertex".into()));
    }
    emit_complex(out, &x)
}
