//! Constructors for small named graphs used throughout the examples and tests.

use super::{circulant, Graph};

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::new(n, edges).expect("named graph is valid")
}

fn lettered(pairs: &str) -> Vec<(usize, usize)> {
    pairs
        .split_whitespace()
        .map(|p| {
            let b = p.as_bytes();
            (usize::from(b[0] - b'a'), usize::from(b[1] - b'a'))
        })
        .collect()
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// Cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    build(n, (0..n - 1).map(|i| (i, i + 1)))
}

/// Two triangles `abc` and `def` joined by the bridge `cd`; vertices `a..f`
/// are numbered `0..5`.
pub fn barbell() -> Graph {
    build(6, lettered("ab ac bc cd de df ef"))
}

/// Normalized reweighting of [`barbell`] that removes `ab` and `ef` and puts
/// weight 3 on the bridge.
pub fn barbell_reweighting() -> Vec<f64> {
    vec![0.0, 1.0, 1.0, 3.0, 1.0, 1.0, 0.0]
}

/// Friendship graph `F_k`: `k` triangles sharing vertex 0. The rim edges are
/// `(2i+1, 2i+2)`.
pub fn friendship(k: usize) -> Graph {
    let spokes = (1..=2 * k).map(|v| (0, v));
    let rims = (0..k).map(|i| (2 * i + 1, 2 * i + 2));
    build(2 * k + 1, spokes.chain(rims))
}

/// Normalized reweighting of [`friendship`] with spoke weight `1/2` and rim
/// weight 2.
pub fn friendship_reweighting(k: usize) -> Vec<f64> {
    let g = friendship(k);
    g.edges()
        .iter()
        .map(|&(u, _)| if u == 0 { 0.5 } else { 2.0 })
        .collect()
}

/// Generalized Petersen graph `GP(n, k)`: outer cycle `0..n`, spokes
/// `i ~ n+i`, inner edges `n+i ~ n+(i+k mod n)`.
pub fn generalized_petersen(n: usize, k: usize) -> Graph {
    let outer = (0..n).map(|i| (i, (i + 1) % n));
    let spokes = (0..n).map(|i| (i, n + i));
    let inner = (0..n).map(|i| (n + i, n + (i + k) % n));
    build(2 * n, outer.chain(spokes).chain(inner))
}

pub fn petersen() -> Graph {
    generalized_petersen(5, 2)
}

/// Desargues graph `GP(10, 3)`: cubic, bipartite, 20 vertices.
pub fn desargues() -> Graph {
    generalized_petersen(10, 3)
}

/// Hypercube `Q_d` on bit strings of length `d`.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    build(
        n,
        (0..n)
            .flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b))))
            .filter(|&(u, v)| u < v),
    )
}

/// Cay(Z_n, S) as a circulant.
pub fn cayley_cyclic(n: usize, jumps: &[usize]) -> Graph {
    circulant(n, jumps).expect("connected circulant")
}

/// Cubic graph with crossing number 6 (House of Graphs 1004), vertices
/// `a..t` numbered `0..19`. The edges are listed orbit by orbit under its
/// automorphism group: twelve, twelve, then six.
pub fn crossing_number_6b() -> Graph {
    build(20, lettered(CN6B_EDGES))
}

const CN6B_EDGES: &str = "rk rd lf mo np ql dp qc kg co mg fn \
                          qj io ad sl gh ac tm tn jr ip sk fh \
                          ab bs bt je ie eh";

/// Basis of the eigenspace of [`crossing_number_6b`] for eigenvalue 1, as
/// exact rational vectors written in floating point.
pub fn crossing_number_6b_basis() -> [[f64; 20]; 3] {
    [
        [
            1., 0., 1., 1., 0., -1., -1., -1., 0., 1., 0., 0., -1., -1., 0., 0., 1., 1., 0., -1.,
        ],
        [
            0., 1., -0.5, -0.5, -1., 0.5, 0.5, 0., 0., -2., -0.5, -0.5, 1.5, 1.5, 0.5, 0.5, -1.5,
            -1.5, 0., 2.,
        ],
        [
            0., 0., 0., 0., 0., 0., 0., 0., 1., -1., -1., -1., 1., 1., 1., 1., -1., -1., -1., 1.,
        ],
    ]
}

/// 5-regular graph on 20 vertices with 50 edges (House of Graphs 56676).
/// The first forty edges form one orbit of its automorphism group and the
/// last ten another.
pub fn hog_56676() -> Graph {
    build(20, HOG_56676_EDGES.chunks(2).map(|p| (p[0], p[1])))
}

const HOG_56676_EDGES: [usize; 100] = [
    7, 17, 7, 15, 8, 18, 4, 5, 8, 16, 3, 5, 6, 8, 2, 19, 6, 7, 0, 2, 6, 10, 1, 19, 9, 12, 5, 10, 0,
    1, 1, 12, 6, 9, 10, 14, 9, 11, 13, 16, 5, 9, 2, 14, 1, 11, 11, 16, 10, 13, 14, 18, 13, 15, 2,
    13, 12, 18, 11, 15, 14, 17, 3, 17, 12, 17, 3, 15, 4, 18, 0, 4, 4, 16, 0, 3, 8, 19, 7, 19, 3, 7,
    4, 8, 0, 5, 6, 19, 1, 2, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18,
];
