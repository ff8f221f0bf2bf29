//! Automorphism generators by equitable partition refinement with
//! individualization-refinement backtracking.
//!
//! The search walks the leftmost path of the search tree to a discrete
//! partition (the first leaf). Then, from the deepest level upward, it tries
//! every vertex of the target cell that is not yet known to share an orbit
//! with the first-path choice, looking for a leaf whose matching with the
//! first leaf is an automorphism. Generators found at deeper levels fix the
//! earlier choices, so the collected set generates the whole group.

use super::{verify_automorphism, GroupGenerators, Permutation, UnionFind};
use crate::error::{Error, Result};
use crate::graphcore::Graph;

/// Default bound on the number of search-tree nodes visited.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

type Partition = Vec<Vec<usize>>;

/// Refines an ordered partition until it is equitable. Cells split by the
/// number of neighbours in a splitter cell; fragments are ordered by that
/// count, so the result is independent of vertex labels.
fn refine(g: &Graph, mut cells: Partition) -> Partition {
    let n = g.n();
    let mut count = vec![0usize; n];
    'restart: loop {
        for si in 0..cells.len() {
            count.iter_mut().for_each(|c| *c = 0);
            for &x in &cells[si] {
                for &y in g.neighbors(x) {
                    count[y] += 1;
                }
            }
            let mut next = Vec::with_capacity(cells.len() + 1);
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut sorted = cell.clone();
                sorted.sort_by_key(|&v| (count[v], v));
                let mut start = 0;
                for k in 1..=sorted.len() {
                    if k == sorted.len() || count[sorted[k]] != count[sorted[start]] {
                        next.push(sorted[start..k].to_vec());
                        start = k;
                    }
                }
            }
            if next.len() != cells.len() {
                cells = next;
                continue 'restart;
            }
        }
        return cells;
    }
}

fn individualize(cells: &Partition, cell: usize, v: usize) -> Partition {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for (i, c) in cells.iter().enumerate() {
        if i == cell {
            out.push(vec![v]);
            out.push(c.iter().copied().filter(|&x| x != v).collect());
        } else {
            out.push(c.clone());
        }
    }
    out
}

/// Smallest non-singleton cell, lowest position on ties.
fn target_cell(cells: &Partition) -> Option<usize> {
    cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i)
}

/// Label-invariant fingerprint: cell sizes plus the quotient matrix of
/// neighbour counts between cells.
fn fingerprint(g: &Graph, cells: &Partition) -> Vec<usize> {
    let mut cell_of = vec![0; g.n()];
    for (i, c) in cells.iter().enumerate() {
        for &v in c {
            cell_of[v] = i;
        }
    }
    let k = cells.len();
    let mut out: Vec<usize> = cells.iter().map(Vec::len).collect();
    for c in cells {
        let mut row = vec![0; k];
        for &y in g.neighbors(c[0]) {
            row[cell_of[y]] += 1;
        }
        out.extend(row);
    }
    out
}

struct Search<'a> {
    g: &'a Graph,
    budget: usize,
    nodes: usize,
    prints: Vec<Vec<usize>>,
    first_leaf: Vec<usize>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::SearchBudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// Depth-first search below `cells` (at tree depth `depth`) for a leaf
    /// that matches the first leaf through an automorphism.
    fn find(&mut self, cells: Partition, depth: usize) -> Result<Option<Permutation>> {
        self.tick()?;
        if self.prints.get(depth) != Some(&fingerprint(self.g, &cells)) {
            return Ok(None);
        }
        match target_cell(&cells) {
            None => {
                let mut image = vec![0; self.g.n()];
                for (a, c) in self.first_leaf.iter().zip(&cells) {
                    image[*a] = c[0];
                }
                let p = Permutation { image };
                Ok(verify_automorphism(self.g, &p).then_some(p))
            }
            Some(t) => {
                for &u in &cells[t].clone() {
                    let child = refine(self.g, individualize(&cells, t, u));
                    if let Some(p) = self.find(child, depth + 1)? {
                        return Ok(Some(p));
                    }
                }
                Ok(None)
            }
        }
    }
}

/// Generators of the subgroup of `Aut(g)` fixing every vertex of `fixed`.
pub fn automorphism_generators(
    g: &Graph,
    fixed: &[usize],
    budget: usize,
) -> Result<GroupGenerators> {
    let n = g.n();
    let mut initial: Partition = Vec::new();
    let mut is_fixed = vec![false; n];
    for &v in fixed {
        if v >= n || std::mem::replace(&mut is_fixed[v], true) {
            return Err(Error::InvalidGroupSpec(format!(
                "bad or repeated fixed vertex {v}"
            )));
        }
        initial.push(vec![v]);
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !is_fixed[v]).collect();
    if !rest.is_empty() {
        initial.push(rest);
    }
    let root = refine(g, initial);

    let mut path = vec![root];
    let mut choices = Vec::new();
    while let Some(t) = target_cell(path.last().unwrap()) {
        let node = path.last().unwrap();
        let v = *node[t].iter().min().unwrap();
        choices.push((t, v));
        let child = refine(g, individualize(node, t, v));
        path.push(child);
    }
    let first_leaf: Vec<usize> = path.last().unwrap().iter().map(|c| c[0]).collect();
    let prints = path.iter().map(|c| fingerprint(g, c)).collect();
    let mut search = Search {
        g,
        budget,
        nodes: path.len(),
        prints,
        first_leaf,
    };

    let mut gens: Vec<Permutation> = Vec::new();
    for level in (0..choices.len()).rev() {
        let (t, v) = choices[level];
        let mut candidates = path[level][t].clone();
        candidates.sort_unstable();
        for w in candidates {
            if w == v {
                continue;
            }
            let mut uf = UnionFind::new(n);
            for s in &gens {
                for x in 0..n {
                    uf.union(x, s.apply(x));
                }
            }
            if uf.find(w) == uf.find(v) {
                continue;
            }
            let child = refine(g, individualize(&path[level], t, w));
            if let Some(p) = search.find(child, level + 1)? {
                gens.push(p);
            }
        }
    }
    GroupGenerators::new(g, gens)
}
