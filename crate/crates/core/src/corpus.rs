//! Small named complexes and a seeded generator of random median graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{validate_complex, validate_complex_with, CubeComplex, MedianCheck, ValidateOptions, VertexSet};

fn build(names: &[String], edges: &[(String, String)]) -> CubeComplex {
    validate_complex(names, edges).expect("corpus complexes are median")
}

/// Builds without the cubic median scan; hyperplane extraction still
/// cross-checks the result.
pub(crate) fn build_trusted(names: &[String], edges: &[(String, String)]) -> crate::Result<CubeComplex> {
    let options = ValidateOptions { median_check: MedianCheck::Sampled { triples: 0, seed: 0 } };
    validate_complex_with(names, edges, options)
}

/// Path on `n` vertices, named so that lexicographic order is path order.
pub fn path(n: usize) -> CubeComplex {
    let width = n.saturating_sub(1).to_string().len();
    let names: Vec<String> = (0..n).map(|i| format!("p{i:0width$}")).collect();
    let edges: Vec<_> = names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    build(&names, &edges)
}

pub fn square() -> CubeComplex {
    hypercube(2)
}

/// The `d`-cube with vertices named by bit strings.
pub fn hypercube(d: usize) -> CubeComplex {
    let name = |v: usize| if d == 0 { "o".to_owned() } else { format!("{v:0d$b}") };
    let names: Vec<String> = (0..1usize << d).map(name).collect();
    let mut edges = Vec::new();
    for v in 0..1usize << d {
        for bit in 0..d {
            if v >> bit & 1 == 0 {
                edges.push((name(v), name(v | 1 << bit)));
            }
        }
    }
    build(&names, &edges)
}

/// The `columns × rows` grid with vertices `x.y`.
pub fn grid(columns: usize, rows: usize) -> CubeComplex {
    let name = |x: usize, y: usize| format!("{x}.{y}");
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for x in 0..columns {
        for y in 0..rows {
            names.push(name(x, y));
            if x + 1 < columns {
                edges.push((name(x, y), name(x + 1, y)));
            }
            if y + 1 < rows {
                edges.push((name(x, y), name(x, y + 1)));
            }
        }
    }
    build(&names, &edges)
}

/// The ladder `P_length × P_2`.
pub fn ladder(length: usize) -> CubeComplex {
    grid(length, 2)
}

/// Centre `c` with leaves `l1..lk`.
pub fn star(k: usize) -> CubeComplex {
    spider(k, 1)
}

/// `legs` paths of `length` edges glued at a centre `c`; leg `i` has vertices `l{i}` then `l{i}_{j}`.
pub fn spider(legs: usize, length: usize) -> CubeComplex {
    let mut names = vec!["c".to_owned()];
    let mut edges = Vec::new();
    for i in 1..=legs {
        let mut previous = "c".to_owned();
        for j in 0..length {
            let v = if j == 0 { format!("l{i}") } else { format!("l{i}_{j}") };
            names.push(v.clone());
            edges.push((previous, v.clone()));
            previous = v;
        }
    }
    build(&names, &edges)
}

/// A square `00 01 10 11` with a pendant vertex `t` attached at `11`.
pub fn square_with_pendant() -> CubeComplex {
    let names: Vec<String> = ["00", "01", "10", "11", "t"].map(String::from).into();
    let edges: Vec<(String, String)> = [("00", "01"), ("00", "10"), ("01", "11"), ("10", "11"), ("11", "t")]
        .map(|(a, b)| (a.to_owned(), b.to_owned()))
        .into();
    build(&names, &edges)
}

/// Cartesian product with vertices named `a/b`.
pub fn product(x: &CubeComplex, y: &CubeComplex) -> CubeComplex {
    let name = |a: usize, b: usize| format!("{}/{}", x.name(a), y.name(b));
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for a in x.vertices() {
        for b in y.vertices() {
            names.push(name(a, b));
        }
        for &(b, c) in y.edges() {
            edges.push((name(a, b), name(a, c)));
        }
    }
    for &(a, c) in x.edges() {
        for b in y.vertices() {
            edges.push((name(a, b), name(c, b)));
        }
    }
    build_trusted(&names, &edges).expect("products of median graphs are median")
}

/// A random median graph grown by `steps` convex expansions from one vertex.
///
/// Each step picks the convex hull of one or two random vertices and glues a
/// copy of it alongside, joined by a new hyperplane.
pub fn random_median(seed: u64, steps: usize) -> CubeComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = |i: usize| format!("r{i:04}");
    let mut names = vec![name(0)];
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut x = build_trusted(&names, &edges).expect("a point is median");
    for _ in 0..steps {
        let picks = rng.gen_range(1..=2);
        let seeds: Vec<usize> = (0..picks).map(|_| rng.gen_range(0..x.len())).collect();
        let hull = x.convex_hull(&VertexSet::from_vertices(&x, seeds)).expect("nonempty");
        let members = hull.to_vec();
        let copy: Vec<String> = (0..members.len()).map(|i| name(names.len() + i)).collect();
        for (i, &v) in members.iter().enumerate() {
            edges.push((x.name(v).to_owned(), copy[i].clone()));
        }
        for &(u, v) in x.edges() {
            if let (Ok(i), Ok(j)) = (members.binary_search(&u), members.binary_search(&v)) {
                edges.push((copy[i].clone(), copy[j].clone()));
            }
        }
        names.extend(copy);
        x = build_trusted(&names, &edges).expect("convex expansions stay median");
    }
    x
}

/// A random subset of the vertices of `x`, of size in `1..=max`.
pub fn random_subset(x: &CubeComplex, rng: &mut impl Rng, max: usize) -> VertexSet {
    let mut all: Vec<usize> = x.vertices().collect();
    all.shuffle(rng);
    let k = rng.gen_range(1..=max.min(x.len()).max(1));
    VertexSet::from_vertices(x, all[..k].iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(path(5).len(), 5);
        assert_eq!(hypercube(3).dimension(), 3);
        assert_eq!(grid(4, 3).len(), 12);
        assert_eq!(star(3).hyperplanes().len(), 3);
        assert_eq!(spider(3, 2).len(), 7);
        assert_eq!(product(&path(3), &star(3)).hyperplanes().len(), 5);
        assert_eq!(square_with_pendant().hyperplanes().len(), 3);
    }

    #[test]
    fn random_growth_is_median_and_seeded() {
        for seed in 0..10 {
            let x = random_median(seed, 12);
            assert_eq!(x.hyperplanes().len(), 12);
            let names: Vec<String> = x.names().to_vec();
            let edges = x.edge_names();
            assert!(validate_complex(&names, &edges).is_ok());
            assert_eq!(random_median(seed, 12).edges(), x.edges());
        }
    }
}
