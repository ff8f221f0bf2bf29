//! Simple connected graphs, edge weights, weighted Laplacians and edge energies.
//!
//! Every per-edge vector in the crate is indexed by the position of the edge
//! in [`Graph::edges`], which lists pairs `(u, v)` with `u < v` in
//! lexicographic order.

mod graph6;
pub mod named;

pub use graph6::{parse_graph6, to_graph6};

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Immutable simple connected undirected graph with canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Pairs may be given in either
    /// orientation; loops, duplicates and disconnected inputs are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n < 2 {
            return Err(Error::InvalidGraph(format!(
                "need at least 2 vertices, got {n}"
            )));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(list.len());
        for (i, &(u, v)) in list.iter().enumerate() {
            adjacency[u].push(v);
            adjacency[v].push(u);
            index.insert((u, v), i);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        let g = Graph {
            n,
            edges: list,
            adjacency,
            index,
        };
        if !g.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Position of the edge `{u, v}` in the canonical order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Proper 2-coloring by breadth-first search, if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        color[0] = Some(false);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &v in &self.adjacency[u] {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}

/// Parses the plain edge-list format: one `u v` pair per line, 0-indexed.
/// Blank lines and lines starting with `#` are ignored. The vertex count is
/// one more than the largest label.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::MalformedEdgeList(format!(
                "line {}: expected two vertices",
                lineno + 1
            )));
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| {
                Error::MalformedEdgeList(format!("line {}: bad vertex {s:?}", lineno + 1))
            })
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    Graph::new(n, edges)
}

/// Serializes the graph in the edge-list format.
pub fn to_edge_list(g: &Graph) -> String {
    g.edges()
        .iter()
        .map(|(u, v)| format!("{u} {v}\n"))
        .collect()
}

/// Per-edge nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    normalized: bool,
}

impl WeightVector {
    /// The uniform weighting `w = 1`.
    pub fn uniform(m: usize) -> Self {
        WeightVector {
            values: vec![1.0; m],
            normalized: true,
        }
    }

    /// Wraps raw weights. The normalized flag is set when they sum to the
    /// number of edges within `1e-12 * |E|`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(x) = values.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight {x} is negative or not finite"
            )));
        }
        let m = values.len() as f64;
        let sum: f64 = values.iter().sum();
        let normalized = (sum - m).abs() <= 1e-12 * m.max(1.0);
        Ok(WeightVector { values, normalized })
    }

    /// Rescales nonnegative weights so that they sum to the number of edges.
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let raw = WeightVector::new(values)?;
        let sum: f64 = raw.values.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        let scale = raw.values.len() as f64 / sum;
        Ok(WeightVector {
            values: raw.values.iter().map(|x| x * scale).collect(),
            normalized: true,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
}

/// Squared differences `(phi(u) - phi(v))^2` in canonical edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeEnergyVector {
    pub values: Vec<f64>,
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Weighted Laplacian `L(w) = D(w) - A(w)`.
pub fn laplacian(g: &Graph, w: &WeightVector) -> Result<DMatrix<f64>> {
    check_len(g.m(), w.len())?;
    let mut l = DMatrix::zeros(g.n(), g.n());
    for (&(u, v), &x) in g.edges().iter().zip(w.values()) {
        l[(u, v)] -= x;
        l[(v, u)] -= x;
    }
    for u in 0..g.n() {
        let s: f64 = g.neighbors(u).iter().map(|&v| l[(u, v)]).sum();
        l[(u, u)] = -s;
    }
    Ok(l)
}

/// Unweighted Laplacian `D - A`.
pub fn unit_laplacian(g: &Graph) -> DMatrix<f64> {
    laplacian(g, &WeightVector::uniform(g.m())).expect("uniform weights have the right length")
}

/// Laplacian of the spanning subgraph formed by the given edge indices.
pub fn subgraph_laplacian<I: IntoIterator<Item = usize>>(g: &Graph, edge_ids: I) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(g.n(), g.n());
    for e in edge_ids {
        let (u, v) = g.edges()[e];
        l[(u, u)] += 1.0;
        l[(v, v)] += 1.0;
        l[(u, v)] -= 1.0;
        l[(v, u)] -= 1.0;
    }
    l
}

/// Edge-energy vector of a vertex function.
pub fn edge_energy(g: &Graph, phi: &[f64]) -> Result<EdgeEnergyVector> {
    check_len(g.n(), phi.len())?;
    let values = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let d = phi[u] - phi[v];
            d * d
        })
        .collect();
    Ok(EdgeEnergyVector { values })
}

/// Checks `edge_energy(c * phi) == c^2 * edge_energy(phi)` to `1e-12` relative
/// to the largest entry.
pub fn scale_energy_identity_check(g: &Graph, phi: &[f64], c: f64) -> bool {
    let scaled: Vec<f64> = phi.iter().map(|x| c * x).collect();
    let (Ok(a), Ok(b)) = (edge_energy(g, phi), edge_energy(g, &scaled)) else {
        return false;
    };
    let scale = c * c * a.values.iter().fold(0.0, |m: f64, x| m.max(*x));
    a.values
        .iter()
        .zip(&b.values)
        .all(|(x, y)| (y - c * c * x).abs() <= 1e-12 * scale)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Circulant graph on `Z_n` in which `i` is adjacent to `i ± s` for `s` in `jumps`.
pub fn circulant(n: usize, jumps: &[usize]) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidGraph(format!(
            "circulant needs n >= 3, got {n}"
        )));
    }
    if jumps.is_empty() {
        return Err(Error::InvalidGraph(
            "circulant needs a nonempty jump set".into(),
        ));
    }
    if let Some(s) = jumps.iter().find(|&&s| s == 0 || s > n / 2) {
        return Err(Error::InvalidGraph(format!(
            "jump {s} outside 1..={}",
            n / 2
        )));
    }
    if jumps.iter().fold(n, |acc, &s| gcd(acc, s)) != 1 {
        return Err(Error::DisconnectedGraph);
    }
    let mut edges = Vec::new();
    for &s in jumps {
        for i in 0..n {
            let j = (i + s) % n;
            edges.push((i.min(j), i.max(j)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(n, edges)
}

/// Cartesian product. Vertex `(a, b)` is numbered `a * |V2| + b`.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Result<Graph> {
    let (n1, n2) = (g1.n(), g2.n());
    let mut edges = Vec::with_capacity(n1 * g2.m() + n2 * g1.m());
    for a in 0..n1 {
        for &(b, c) in g2.edges() {
            edges.push((a * n2 + b, a * n2 + c));
        }
    }
    for b in 0..n2 {
        for &(a, c) in g1.edges() {
            edges.push((a * n2 + b, c * n2 + b));
        }
    }
    Graph::new(n1 * n2, edges)
}
