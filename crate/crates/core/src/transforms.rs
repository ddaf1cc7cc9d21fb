//! Structural transforms: subdivision, restriction quotients, strongly
//! parallel classes and compression, de Rham factors, shallow trimming.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::complex::{validate_complex, Cube, CubeComplex, Vertex};
use crate::corpus::build_trusted;
use crate::duality::{dual, Isomorphism, Ultrafilter, DEFAULT_ULTRAFILTER_CAP};
use crate::error::{Error, Result};
use crate::hyperplane::{
    crossing_hyperplanes, non_transversality_components, separating_hyperplanes, transverse, union_find, Halfspace,
    Side,
};
use crate::pocset::{halfspace_label, pocset_of, Pocset};

/// The cubical subdivision `X'` and its relation to `X`.
#[derive(Clone, Debug)]
pub struct SubdivisionResult {
    pub subdivided: CubeComplex,
    /// Vertex of `X'` for each vertex of `X`.
    pub vertex_embedding: Vec<Vertex>,
    /// The hyperplane of `X` each hyperplane of `X'` lies over, with the side
    /// of it that the copy is nearer to.
    pub hyperplane_cover: Vec<(usize, Side)>,
    /// The cube of `X` whose barycentre each vertex of `X'` is.
    pub cells: Vec<Cube>,
}

impl SubdivisionResult {
    /// The two copies of `w`, minus side first.
    pub fn copies(&self, w: usize) -> [usize; 2] {
        let find = |s| self.hyperplane_cover.iter().position(|&c| c == (w, s)).expect("two-to-one cover");
        [find(Side::Minus), find(Side::Plus)]
    }

    /// Barycentres of the cubes crossed by `w`.
    pub fn slab(&self, w: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.cells.len());
        bits.extend(self.cells.iter().enumerate().filter(|(_, c)| c.directions.contains(&w)).map(|(i, _)| i));
        bits
    }

    /// The barycentre of cube `vertices`, if it is a cube of `X`.
    pub fn cell(&self, vertices: &[Vertex]) -> Option<Vertex> {
        self.cells.iter().position(|c| c.vertices == vertices)
    }
}

fn cell_name(x: &CubeComplex, cube: &Cube) -> String {
    if cube.vertices.len() == 1 {
        x.name(cube.vertices[0]).to_owned()
    } else {
        let names: Vec<&str> = cube.vertices.iter().map(|&v| x.name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Vertices are barycentres of cubes; edges join a cube to its facets.
pub fn subdivide(x: &CubeComplex) -> Result<SubdivisionResult> {
    let cubes: Vec<&Cube> = (0..=x.dimension()).flat_map(|k| x.cubes(k)).collect();
    let names: Vec<String> = cubes.iter().map(|c| cell_name(x, c)).collect();
    let by_vertices: HashMap<&[Vertex], usize> =
        cubes.iter().enumerate().map(|(i, c)| (c.vertices.as_slice(), i)).collect();
    let mut edges = Vec::new();
    let mut edge_cover = HashMap::new();
    for (i, c) in cubes.iter().enumerate() {
        for &w in &c.directions {
            for side in [Side::Minus, Side::Plus] {
                let h = x.halfspace(Halfspace::new(w, side));
                let facet: Vec<Vertex> = c.vertices.iter().copied().filter(|&v| h.contains(v)).collect();
                let j = *by_vertices
                    .get(facet.as_slice())
                    .ok_or_else(|| Error::Internal(format!("facet of `{}` is not a cube", names[i])))?;
                edges.push((names[i].clone(), names[j].clone()));
                edge_cover.insert((names[i].clone(), names[j].clone()), (w, side));
            }
        }
    }
    let subdivided = validate_complex(&names, &edges)?;
    let mut cells = vec![None; cubes.len()];
    for (i, c) in cubes.iter().enumerate() {
        cells[subdivided.index_of(&names[i]).expect("cell")] = Some((*c).clone());
    }
    let cells: Vec<Cube> = cells.into_iter().map(|c| c.expect("every cell named")).collect();
    let mut hyperplane_cover = Vec::with_capacity(subdivided.hyperplanes().len());
    let mut fibres: HashMap<(usize, Side), usize> = HashMap::new();
    for h in subdivided.hyperplanes() {
        let images: Vec<(usize, Side)> = h
            .dual_edges
            .iter()
            .map(|&e| {
                let (a, b) = subdivided.edges()[e];
                let (a, b) = (subdivided.name(a).to_owned(), subdivided.name(b).to_owned());
                edge_cover
                    .get(&(a.clone(), b.clone()))
                    .or_else(|| edge_cover.get(&(b, a)))
                    .copied()
                    .expect("covered edge")
            })
            .collect();
        if images.iter().any(|&i| i != images[0]) {
            return Err(Error::Internal(format!(
                "hyperplane `{}` of the subdivision lies over two hyperplanes",
                h.label
            )));
        }
        *fibres.entry(images[0]).or_default() += 1;
        hyperplane_cover.push(images[0]);
    }
    if fibres.len() != 2 * x.hyperplanes().len() || fibres.values().any(|&c| c != 1) {
        return Err(Error::Internal("subdivision hyperplane map is not two-to-one".into()));
    }
    let vertex_embedding =
        x.vertices().map(|v| subdivided.index_of(x.name(v)).expect("0-cells keep their names")).collect();
    Ok(SubdivisionResult { subdivided, vertex_embedding, hyperplane_cover, cells })
}

/// The complex dual to a subset of the hyperplanes, with its quotient map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: CubeComplex,
    /// Image of each vertex of `X`.
    pub map: Vec<Vertex>,
    /// The kept hyperplanes of `X`, sorted.
    pub kept: Vec<usize>,
    /// For each kept hyperplane, the hyperplane of `complex` it becomes.
    pub image: Vec<usize>,
}

pub fn restriction_quotient(x: &CubeComplex, keep: &[usize]) -> Result<Quotient> {
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&w) = kept.iter().find(|&&w| w >= x.hyperplanes().len()) {
        return Err(Error::UnknownHyperplane(w.to_string()));
    }
    let p = pocset_of(x).restrict(&kept);
    let d = dual(&p, DEFAULT_ULTRAFILTER_CAP)?;
    let index: HashMap<&Ultrafilter, Vertex> = d.ultrafilters.iter().enumerate().map(|(v, u)| (u, v)).collect();
    let map = x
        .vertices()
        .map(|v| {
            let mut bits = FixedBitSet::with_capacity(p.len());
            for (i, &w) in kept.iter().enumerate() {
                bits.insert(2 * i + usize::from(x.label(v).contains(w)));
            }
            let u = Ultrafilter::from_bits(bits);
            index.get(&u).copied().ok_or_else(|| Error::Internal(format!("`{}` has no image", x.name(v))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Quotient { complex: d.complex, map, kept, image: d.pair_hyperplane })
}

fn outer_and_inner(x: &CubeComplex, w1: usize, w2: usize) -> (Halfspace, Halfspace) {
    let towards = |a: usize, b: usize| {
        let v = x.hyperplane(b).carrier().ones().next().expect("nonempty carrier");
        Halfspace::new(a, x.hyperplane(a).side_of(v))
    };
    (towards(w1, w2).complement(), towards(w2, w1))
}

/// The finite-scale strong parallelism test: not transverse, nothing in
/// between, the same crossing hyperplanes, and every vertex between them on
/// both carriers.
pub fn strongly_parallel(x: &CubeComplex, w1: usize, w2: usize) -> Result<bool> {
    if w1 == w2 {
        return Err(Error::SameHyperplane(x.hyperplane(w1).label.clone()));
    }
    Ok(strongly_parallel_unchecked(x, w1, w2))
}

fn strongly_parallel_unchecked(x: &CubeComplex, w1: usize, w2: usize) -> bool {
    if transverse(x, w1, w2) || !separating_hyperplanes(x, w1, w2).is_empty() {
        return false;
    }
    if crossing_hyperplanes(x, w1) != crossing_hyperplanes(x, w2) {
        return false;
    }
    let (outer1, inner2) = outer_and_inner(x, w1, w2);
    let between = x.halfspace(outer1.complement()) & x.halfspace(inner2);
    let both = &x.hyperplane(w1).carrier() & &x.hyperplane(w2).carrier();
    between.is_subset(&both)
}

/// All strongly parallel pairs `(w1, w2)` with `w1 < w2`.
pub fn strongly_parallel_pairs(x: &CubeComplex) -> Vec<(usize, usize)> {
    let m = x.hyperplanes().len();
    (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .filter(|&(a, b)| strongly_parallel_unchecked(x, a, b))
        .collect()
}

/// Halfspaces grouped into classes of mutually strongly parallel ones.
#[derive(Clone, Debug)]
pub struct ParaPartition {
    /// Each class ordered by inclusion, smallest first.
    pub classes: Vec<Vec<Halfspace>>,
    /// Class of each halfspace, by dense halfspace index.
    pub class_of: Vec<usize>,
    /// Pocset element (`2q` or `2q + 1`) of each class.
    pub element_of_class: Vec<usize>,
    pub pocset: Pocset,
}

impl ParaPartition {
    pub fn element_of(&self, h: Halfspace) -> usize {
        self.element_of_class[self.class_of[h.index()]]
    }

    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }
}

pub fn para_classes(x: &CubeComplex) -> Result<ParaPartition> {
    let m = x.hyperplanes().len();
    let mut links = Vec::new();
    for (w1, w2) in strongly_parallel_pairs(x) {
        let (outer, inner) = outer_and_inner(x, w1, w2);
        links.push((outer.index(), inner.index()));
        links.push((outer.complement().index(), inner.complement().index()));
    }
    let roots = union_find(2 * m, links);
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<Halfspace>> = Vec::new();
    let mut class_of = vec![0; 2 * m];
    for (i, &r) in roots.iter().enumerate() {
        let c = *class_index.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(Halfspace::from_index(i));
        class_of[i] = c;
    }
    let name = |h: Halfspace| halfspace_label(x, h);
    for class in &mut classes {
        for (i, &a) in class.iter().enumerate() {
            if class_of[a.complement().index()] == class_of[a.index()] {
                return Err(Error::NonChainClass(name(a), name(a.complement())));
            }
            for &b in &class[i + 1..] {
                let (sa, sb) = (x.halfspace(a), x.halfspace(b));
                if !sa.is_subset(sb) && !sb.is_subset(sa) {
                    return Err(Error::NonChainClass(name(a), name(b)));
                }
            }
        }
        class.sort_by_key(|&h| (x.halfspace(h).count_ones(..), h));
    }
    for class in &classes {
        let members: Vec<usize> = class.iter().map(|h| h.hyperplane).collect();
        for u in (0..m).filter(|u| !members.contains(u)) {
            let crossings = members.iter().filter(|&&w| transverse(x, u, w)).count();
            let carrier = x.hyperplane(u).carrier();
            let ok = crossings == members.len()
                || (crossings == 0
                    && (class.iter().all(|&h| carrier.is_subset(x.halfspace(h)))
                        || class.iter().all(|&h| carrier.is_subset(x.halfspace(h.complement())))));
            if !ok {
                return Err(Error::OutsiderMixed(x.hyperplane(u).label.clone(), name(class[0])));
            }
        }
    }

    // Pair classes in hyperplane order; the minus side names the first element.
    let mut element_of_class = vec![usize::MAX; classes.len()];
    let mut labels = Vec::new();
    for w in 0..m {
        let minus = Halfspace::new(w, Side::Minus);
        let c = class_of[minus.index()];
        if element_of_class[c] == usize::MAX {
            element_of_class[c] = labels.len();
            element_of_class[class_of[minus.complement().index()]] = labels.len() + 1;
            labels.push(name(minus));
            labels.push(name(minus.complement()));
        }
    }
    let mut order = Vec::new();
    for a in 0..2 * m {
        for b in 0..2 * m {
            let (ha, hb) = (Halfspace::from_index(a), Halfspace::from_index(b));
            let (ca, cb) = (class_of[a], class_of[b]);
            if ca != cb && x.halfspace(ha).is_subset(x.halfspace(hb)) {
                order.push((element_of_class[ca], element_of_class[cb]));
            }
        }
    }
    order.sort_unstable();
    order.dedup();
    let pocset = Pocset::new(labels, &order).map_err(|e| Error::Internal(format!("class pocset: {e}")))?;
    Ok(ParaPartition { classes, class_of, element_of_class, pocset })
}

/// The compression: dual of the class pocset.
#[derive(Clone, Debug)]
pub struct Compression {
    pub complex: CubeComplex,
    pub classes: ParaPartition,
    /// Hyperplane of `complex` for each class pair.
    pub pair_hyperplane: Vec<usize>,
}

pub fn compress(x: &CubeComplex) -> Result<Compression> {
    let classes = para_classes(x)?;
    let d = dual(&classes.pocset, DEFAULT_ULTRAFILTER_CAP)?;
    if let Some(&(a, b)) = strongly_parallel_pairs(&d.complex).first() {
        return Err(Error::Internal(format!(
            "compression still has strongly parallel `{}` and `{}`",
            d.complex.hyperplane(a).label,
            d.complex.hyperplane(b).label
        )));
    }
    Ok(Compression { complex: d.complex, classes, pair_hyperplane: d.pair_hyperplane })
}

/// The canonical product decomposition.
#[derive(Clone, Debug)]
pub struct DeRhamDecomposition {
    /// Components of the non-transversality graph on hyperplanes.
    pub classes: Vec<Vec<usize>>,
    pub factors: Vec<Quotient>,
    /// The product of the factors, vertices named `a/b/…`.
    pub product: CubeComplex,
    /// `X → product`.
    pub witness: Isomorphism,
}

pub fn derham(x: &CubeComplex) -> Result<DeRhamDecomposition> {
    let fail = |why: String| Error::ProductReconstructionFailed(why);
    let classes = non_transversality_components(x);
    let factors = classes.iter().map(|c| restriction_quotient(x, c)).collect::<Result<Vec<_>>>()?;
    for (f, class) in factors.iter().zip(&classes) {
        if non_transversality_components(&f.complex).len() > 1 {
            return Err(fail(format!("factor of `{}` is reducible", x.hyperplane(class[0]).label)));
        }
    }
    let tuple_name = |v: Vertex| -> String {
        let parts: Vec<&str> = factors.iter().map(|f| f.complex.name(f.map[v])).collect();
        parts.join("/")
    };
    let (product, witness) = if factors.is_empty() {
        (x.clone(), Isomorphism { map: x.vertices().collect() })
    } else {
        let expected: usize = factors.iter().map(|f| f.complex.len()).product();
        if expected != x.len() {
            return Err(fail(format!("factor sizes multiply to {expected}, not {}", x.len())));
        }
        let mut product_names = vec![String::new()];
        for f in &factors {
            product_names = product_names
                .iter()
                .flat_map(|p| {
                    f.complex.names().iter().map(move |n| if p.is_empty() { n.clone() } else { format!("{p}/{n}") })
                })
                .collect();
        }
        let mut product_edges = Vec::new();
        for tuple in 0..expected {
            let mut rest = tuple;
            let mut coords = Vec::with_capacity(factors.len());
            for f in factors.iter().rev() {
                coords.push(rest % f.complex.len());
                rest /= f.complex.len();
            }
            coords.reverse();
            for (i, f) in factors.iter().enumerate() {
                for &u in f.complex.neighbors(coords[i]) {
                    if u > coords[i] {
                        let name = |c: &[usize]| {
                            c.iter().zip(&factors).map(|(&v, g)| g.complex.name(v)).collect::<Vec<_>>().join("/")
                        };
                        let mut other = coords.clone();
                        other[i] = u;
                        product_edges.push((name(&coords), name(&other)));
                    }
                }
            }
        }
        let product = build_trusted(&product_names, &product_edges)?;
        let map = x
            .vertices()
            .map(|v| product.index_of(&tuple_name(v)).ok_or_else(|| fail(format!("no tuple for `{}`", x.name(v)))))
            .collect::<Result<Vec<_>>>()?;
        let witness = Isomorphism { map };
        if !witness.verify(x, &product) {
            return Err(fail("coordinate map does not preserve adjacency".into()));
        }
        (product, witness)
    };
    Ok(DeRhamDecomposition { classes, factors, product, witness })
}

/// Result of repeatedly collapsing hyperplanes with a shallow halfspace.
#[derive(Clone, Debug)]
pub struct Trim {
    pub complex: CubeComplex,
    /// Labels in `X` of the collapsed hyperplanes, in collapse order.
    pub removed: Vec<String>,
    /// Image of each vertex of `X`.
    pub map: Vec<Vertex>,
}

/// Halfspaces all of whose vertices lie within `r` of the carrier.
pub fn shallow_hyperplanes(x: &CubeComplex, r: u32) -> Vec<usize> {
    (0..x.hyperplanes().len())
        .filter(|&w| {
            let carrier = x.hyperplane(w).carrier();
            let near = |v: Vertex| carrier.ones().any(|c| x.dist(v, c) <= r);
            [Side::Minus, Side::Plus].iter().any(|&s| x.halfspace(Halfspace::new(w, s)).ones().all(near))
        })
        .collect()
}

pub fn trim_shallow(x: &CubeComplex, r: u32) -> Result<Trim> {
    let mut current = x.clone();
    let mut original: Vec<usize> = (0..x.hyperplanes().len()).collect();
    let mut map: Vec<Vertex> = x.vertices().collect();
    let mut removed = Vec::new();
    loop {
        let shallow = shallow_hyperplanes(&current, r);
        if shallow.is_empty() {
            break;
        }
        removed.extend(shallow.iter().map(|&w| x.hyperplane(original[w]).label.clone()));
        let keep: Vec<usize> = (0..current.hyperplanes().len()).filter(|w| !shallow.contains(w)).collect();
        let q = restriction_quotient(&current, &keep)?;
        let mut next_original = vec![0; keep.len()];
        for (i, &w) in q.kept.iter().enumerate() {
            next_original[q.image[i]] = original[w];
        }
        map = map.into_iter().map(|v| q.map[v]).collect();
        original = next_original;
        current = q.complex;
    }
    Ok(Trim { complex: current, removed, map })
}
