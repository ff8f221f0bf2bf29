//! Permutation groups acting on a graph: generators, closure, edge and vertex
//! orbits, symmetrization of weights and embeddings, and orbit energies.

mod search;

pub use search::{automorphism_generators, DEFAULT_NODE_BUDGET};

use std::collections::HashSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{edge_energy, subgraph_laplacian, Graph, WeightVector};
use crate::spectra::EigenspaceCluster;

/// Default bound on the number of elements enumerated by [`close_group`].
pub const DEFAULT_GROUP_CAP: usize = 200_000;

/// A bijection of `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// Validates that `image` is a bijection.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{image:?} is not a bijection of 0..{n}"
                )));
            }
        }
        Ok(Permutation { image })
    }

    /// The rotation `i -> i + k mod n`.
    pub fn rotation(n: usize, k: usize) -> Self {
        Permutation {
            image: (0..n).map(|i| (i + k) % n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// `self ∘ other`, i.e. `v -> self(other(v))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (v, &x) in self.image.iter().enumerate() {
            inv[x] = v;
        }
        Permutation { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// True iff `sigma` maps the edge set onto itself.
pub fn verify_automorphism(g: &Graph, sigma: &Permutation) -> bool {
    sigma.len() == g.n()
        && g.edges()
            .iter()
            .all(|&(u, v)| g.has_edge(sigma.apply(u), sigma.apply(v)))
}

/// Image of every edge index under the induced edge action.
pub fn edge_permutation(g: &Graph, sigma: &Permutation) -> Vec<usize> {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            g.edge_index(sigma.apply(u), sigma.apply(v))
                .expect("sigma is an automorphism")
        })
        .collect()
}

/// Automorphisms of a fixed graph, each checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupGenerators {
    n: usize,
    gens: Vec<Permutation>,
}

impl GroupGenerators {
    pub fn new(g: &Graph, gens: Vec<Permutation>) -> Result<Self> {
        for (i, s) in gens.iter().enumerate() {
            if s.len() != g.n() {
                return Err(Error::DimensionMismatch {
                    expected: g.n(),
                    found: s.len(),
                });
            }
            if !verify_automorphism(g, s) {
                return Err(Error::NotAnAutomorphism(i));
            }
        }
        Ok(GroupGenerators { n: g.n(), gens })
    }

    pub fn trivial(g: &Graph) -> Self {
        GroupGenerators {
            n: g.n(),
            gens: Vec::new(),
        }
    }

    /// Parses a JSON array of permutation images, e.g. `[[1,2,0],[0,2,1]]`.
    pub fn from_json(g: &Graph, text: &str) -> Result<Self> {
        let images: Vec<Vec<usize>> = serde_json::from_str(text)?;
        let gens = images
            .into_iter()
            .map(Permutation::from_image)
            .collect::<Result<Vec<_>>>()?;
        GroupGenerators::new(g, gens)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.gens).expect("permutations serialize")
    }

    pub fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Every element of the group generated by some [`GroupGenerators`], in
/// breadth-first order starting from the identity.
#[derive(Debug, Clone)]
pub struct GroupClosure {
    elements: Vec<Permutation>,
}

impl GroupClosure {
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Breadth-first closure under composition with the generators.
pub fn close_group(gens: &GroupGenerators, cap: usize) -> Result<GroupClosure> {
    let id = Permutation::identity(gens.n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head].clone();
        head += 1;
        for s in &gens.gens {
            let y = s.compose(&x);
            if seen.insert(y.clone()) {
                elements.push(y);
                if elements.len() > cap {
                    return Err(Error::CapExceeded {
                        cap,
                        partial: elements.len(),
                    });
                }
            }
        }
    }
    Ok(GroupClosure { elements })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Class ids numbered in order of each class's smallest member.
    fn labels(&mut self) -> Vec<usize> {
        let n = self.0.len();
        let mut id_of_root = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|x| {
                let r = self.find(x);
                if id_of_root[r] == usize::MAX {
                    id_of_root[r] = next;
                    next += 1;
                }
                id_of_root[r]
            })
            .collect()
    }
}

/// Partition of the edge set into orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrbitPartition {
    pub orbit_of: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl EdgeOrbitPartition {
    /// Every edge in its own orbit.
    pub fn per_edge(g: &Graph) -> Self {
        EdgeOrbitPartition {
            orbit_of: (0..g.m()).collect(),
            sizes: vec![1; g.m()],
        }
    }

    pub fn from_labels(orbit_of: Vec<usize>) -> Self {
        let s = orbit_of.iter().max().map_or(0, |x| x + 1);
        let mut sizes = vec![0; s];
        for &o in &orbit_of {
            sizes[o] += 1;
        }
        EdgeOrbitPartition { orbit_of, sizes }
    }

    /// Number of orbits.
    pub fn s(&self) -> usize {
        self.sizes.len()
    }

    /// Orbit sizes as floats, the target vector of orbit-isometry.
    pub fn sizes_f64(&self) -> Vec<f64> {
        self.sizes.iter().map(|&x| x as f64).collect()
    }

    pub fn members(&self, orbit: usize) -> impl Iterator<Item = usize> + '_ {
        self.orbit_of
            .iter()
            .enumerate()
            .filter(move |(_, &o)| o == orbit)
            .map(|(e, _)| e)
    }
}

/// Edge orbits under the group generated by `gens`.
pub fn edge_orbits(g: &Graph, gens: &GroupGenerators) -> EdgeOrbitPartition {
    let mut uf = UnionFind::new(g.m());
    for s in gens.gens() {
        for (e, img) in edge_permutation(g, s).into_iter().enumerate() {
            uf.union(e, img);
        }
    }
    EdgeOrbitPartition::from_labels(uf.labels())
}

/// Vertex orbit label of every vertex.
pub fn vertex_orbits(g: &Graph, gens: &GroupGenerators) -> Vec<usize> {
    let mut uf = UnionFind::new(g.n());
    for s in gens.gens() {
        for v in 0..g.n() {
            uf.union(v, s.apply(v));
        }
    }
    uf.labels()
}

pub fn is_vertex_transitive(g: &Graph, gens: &GroupGenerators) -> bool {
    vertex_orbits(g, gens).iter().all(|&o| o == 0)
}

/// Edge energies summed over each orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitEnergyVector {
    pub values: Vec<f64>,
}

pub fn orbit_energy(
    g: &Graph,
    part: &EdgeOrbitPartition,
    phi: &[f64],
) -> Result<OrbitEnergyVector> {
    let e = edge_energy(g, phi)?;
    let mut values = vec![0.0; part.s()];
    for (x, &o) in e.values.iter().zip(&part.orbit_of) {
        values[o] += x;
    }
    Ok(OrbitEnergyVector { values })
}

/// Laplacians `L^i` of the spanning subgraphs formed by each orbit.
pub fn orbit_laplacians(g: &Graph, part: &EdgeOrbitPartition) -> Vec<DMatrix<f64>> {
    (0..part.s())
        .map(|i| subgraph_laplacian(g, part.members(i)))
        .collect()
}

/// Group average of a normalized weight vector.
pub fn symmetrize_weights(
    g: &Graph,
    w: &WeightVector,
    closure: &GroupClosure,
) -> Result<WeightVector> {
    if w.len() != g.m() {
        return Err(Error::DimensionMismatch {
            expected: g.m(),
            found: w.len(),
        });
    }
    if !w.is_normalized() {
        return Err(Error::InvalidWeights(
            "symmetrization expects normalized weights".into(),
        ));
    }
    let mut acc = vec![0.0; g.m()];
    for tau in closure.elements() {
        for (e, img) in edge_permutation(g, tau).into_iter().enumerate() {
            acc[img] += w.values()[e];
        }
    }
    let k = closure.size() as f64;
    WeightVector::new(acc.into_iter().map(|x| x / k).collect())
}

/// `(sigma . phi)(u) = phi(sigma^{-1}(u))`.
pub fn permute_vector(sigma: &Permutation, phi: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; phi.len()];
    for (v, &x) in phi.iter().enumerate() {
        out[sigma.apply(v)] = x;
    }
    out
}

/// Permutation matrix `P` with `P phi = sigma . phi`.
pub fn permutation_matrix(sigma: &Permutation) -> DMatrix<f64> {
    let n = sigma.len();
    let mut p = DMatrix::zeros(n, n);
    for v in 0..n {
        p[(sigma.apply(v), v)] = 1.0;
    }
    p
}

/// Columns `sigma . p_i` for every group element `sigma` (outer loop) and
/// column `p_i` of `p` (inner loop).
pub fn symmetrized_embedding(
    p: &DMatrix<f64>,
    cluster: &EigenspaceCluster,
    closure: &GroupClosure,
) -> Result<DMatrix<f64>> {
    let b = &cluster.basis;
    if p.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: b.nrows(),
            found: p.nrows(),
        });
    }
    let off = (p - b * (b.transpose() * p)).norm();
    if off > 1e-8 * p.norm().max(1.0) {
        return Err(Error::ResidualTooLarge(off));
    }
    let r = p.ncols();
    let mut out = DMatrix::zeros(p.nrows(), r * closure.size());
    for (k, sigma) in closure.elements().iter().enumerate() {
        for i in 0..r {
            let col: Vec<f64> = p.column(i).iter().copied().collect();
            let moved = permute_vector(sigma, &col);
            out.column_mut(k * r + i).copy_from_slice(&moved);
        }
    }
    Ok(out)
}
