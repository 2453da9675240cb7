//! Higher-block recoding of a subshift into a vertex-weighted digraph.
//!
//! Vertices are the allowed words of length `k` (the potential depth) that
//! have an infinite forward continuation; `w -> w'` is an edge when `w'`
//! continues `w` by one symbol. A point corresponds to the walk of its
//! `k`-windows, so `S_nφ(x)` is the weight of the first `n` vertices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{EventuallyPeriodicPoint, SubshiftSystem, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph<T> {
    symbols: Vec<String>,
    depth: usize,
    vertices: Vec<Word>,
    successors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    weights: Vec<T>,
    index: BTreeMap<Word, usize>,
}

impl<T: Scalar> WeightedDigraph<T> {
    fn assemble(symbols: Vec<String>, depth: usize, vertices: Vec<Word>, successors: Vec<Vec<usize>>, weights: Vec<T>) -> Self {
        let edges = successors.iter().enumerate().flat_map(|(u, s)| s.iter().map(move |&v| (u, v))).collect();
        let index = vertices.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Self { symbols, depth, vertices, successors, edges, weights, index }
    }

    /// Builds a depth-one graph directly from an edge list. Vertex `i` gets
    /// the label `"i"`. Every vertex needs an outgoing edge.
    pub fn from_edges(weights: Vec<T>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::EmptySubshift);
        }
        let mut successors = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            successors[u].push(v);
        }
        for (u, s) in successors.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::DeadVertex(u));
            }
        }
        let symbols = (0..n).map(|i| i.to_string()).collect();
        let vertices = (0..n).map(|i| vec![i]).collect();
        Ok(Self::assemble(symbols, 1, vertices, successors, weights))
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> T {
        self.weights[v]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }

    /// Edges in lexicographic `(source, target)` order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u, v)).ok()
    }

    pub fn vertex_of(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Human-readable vertex label: the symbol labels of its word, joined.
    pub fn vertex_label(&self, v: usize) -> String {
        self.vertices[v].iter().map(|&s| self.symbols[s].as_str()).collect::<Vec<_>>().join("")
    }

    pub fn max_weight(&self) -> T {
        self.weights.iter().copied().fold(self.weights[0], T::max_of)
    }

    /// Same graph with different vertex weights.
    pub fn with_weights<U: Scalar>(&self, weights: Vec<U>) -> Result<WeightedDigraph<U>> {
        if weights.len() != self.len() {
            return Err(Error::Dimension { expected: self.len(), got: weights.len() });
        }
        Ok(WeightedDigraph::assemble(
            self.symbols.clone(),
            self.depth,
            self.vertices.clone(),
            self.successors.clone(),
            weights,
        ))
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(T) -> U) -> WeightedDigraph<U> {
        let weights = self.weights.iter().map(|&w| f(w)).collect();
        self.with_weights(weights).expect("same length")
    }

    /// Graph whose vertices are the edges of `self`, weighted by
    /// `edge_weights` (indexed like [`Self::edges`]). This is the recoding
    /// one level deeper, so cycle means of edge potentials become cycle
    /// means of vertex potentials.
    pub fn line_graph(&self, edge_weights: &[T]) -> Result<WeightedDigraph<T>> {
        if edge_weights.len() != self.edges.len() {
            return Err(Error::Dimension { expected: self.edges.len(), got: edge_weights.len() });
        }
        let vertices: Vec<Word> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let mut w = self.vertices[u].clone();
                w.push(*self.vertices[v].last().expect("nonempty word"));
                w
            })
            .collect();
        let successors = self
            .edges
            .iter()
            .map(|&(_, v)| self.successors[v].iter().map(|&w| self.edge_index(v, w).expect("edge")).collect())
            .collect();
        Ok(WeightedDigraph::assemble(self.symbols.clone(), self.depth + 1, vertices, successors, edge_weights.to_vec()))
    }

    /// The vertices visited by the first `n` windows of `point`.
    pub fn walk_of(&self, point: &EventuallyPeriodicPoint, n: usize) -> Result<Vec<usize>> {
        (0..n)
            .map(|i| {
                let w = point.window(i, self.depth);
                self.vertex_of(&w).ok_or_else(|| Error::InvalidPoint(format!("window {w:?} is not a vertex")))
            })
            .collect()
    }

    /// Periodic point whose walk is the given closed walk.
    pub fn point_of_cycle(&self, cycle: &[usize]) -> EventuallyPeriodicPoint {
        EventuallyPeriodicPoint::periodic(cycle.iter().map(|&v| self.vertices[v][0]).collect())
    }

    /// `true` when the graph is a single strongly connected component.
    pub fn is_irreducible(&self) -> bool {
        self.strongly_connected_components().len() == 1
    }

    /// Strongly connected components, each sorted, listed by smallest vertex.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let mut g = petgraph::graph::DiGraph::<(), ()>::with_capacity(self.len(), self.edges.len());
        let nodes: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for &(u, v) in &self.edges {
            g.add_edge(nodes[u], nodes[v], ());
        }
        let mut comps: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        comps.sort();
        comps
    }

    /// `true` if the component contains at least one edge (and so a cycle).
    pub fn component_has_cycle(&self, component: &[usize]) -> bool {
        if component.len() > 1 {
            return true;
        }
        let v = component[0];
        self.successors[v].contains(&v)
    }
}

/// Recodes a system into its trimmed vertex-weighted graph.
pub fn trim_and_recode<T: Scalar>(system: &SubshiftSystem<T>) -> Result<WeightedDigraph<T>> {
    let k = system.potential.depth;
    let n = system.n_symbols();

    // all allowed k-words, lexicographic
    let mut words: Vec<Word> = (0..n).map(|s| vec![s]).collect();
    for _ in 1..k {
        words = words
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().expect("nonempty");
                (0..n).filter(move |&s| system.allowed(last, s)).map(move |s| {
                    let mut w2 = w.clone();
                    w2.push(s);
                    w2
                })
            })
            .collect();
    }
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut successors: Vec<Vec<usize>> = words
        .iter()
        .map(|w| {
            let last = *w.last().expect("nonempty");
            (0..n)
                .filter(|&s| system.allowed(last, s))
                .filter_map(|s| {
                    let mut next: Word = w[1..].to_vec();
                    next.push(s);
                    index.get(&next).copied()
                })
                .collect()
        })
        .collect();

    let mut alive = vec![true; words.len()];
    loop {
        let mut changed = false;
        for v in 0..words.len() {
            if alive[v] && !successors[v].iter().any(|&u| alive[u]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<usize> = (0..words.len()).filter(|&v| alive[v]).collect();
    if kept.is_empty() {
        return Err(Error::EmptySubshift);
    }
    let mut renumber = vec![usize::MAX; words.len()];
    for (new, &old) in kept.iter().enumerate() {
        renumber[old] = new;
    }
    let vertices: Vec<Word> = kept.iter().map(|&v| words[v].clone()).collect();
    let succ = kept
        .iter()
        .map(|&v| {
            let mut s: Vec<usize> = successors[v].iter().filter(|&&u| alive[u]).map(|&u| renumber[u]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    successors.clear();
    let weights = vertices.iter().map(|w| system.potential.value(w)).collect();
    Ok(WeightedDigraph::assemble(system.symbols.clone(), k, vertices, succ, weights))
}

/// A simple cycle, listed from its smallest vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle<T> {
    pub vertices: Vec<usize>,
    pub mean: T,
}

impl<T: Scalar> Cycle<T> {
    pub fn from_vertices(graph: &WeightedDigraph<T>, vertices: Vec<usize>) -> Self {
        let mean = cycle_mean(graph, &vertices);
        Self { vertices, mean }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// All rotations, starting with the cycle itself.
    pub fn rotations(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.vertices.len()).map(move |r| {
            let mut v = self.vertices.clone();
            v.rotate_left(r);
            v
        })
    }
}

pub fn cycle_mean<T: Scalar>(graph: &WeightedDigraph<T>, cycle: &[usize]) -> T {
    let total = cycle.iter().fold(T::zero(), |acc, &v| acc + graph.weight(v));
    total / T::of_count(cycle.len())
}

/// Rotates a closed walk so it starts at its smallest vertex.
pub fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
    let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    let mut v = cycle.to_vec();
    v.rotate_left(start);
    v
}

/// All simple cycles with at most `max_len` vertices, lexicographically
/// ordered by vertex sequence.
pub fn enumerate_simple_cycles<T: Scalar>(graph: &WeightedDigraph<T>, max_len: usize) -> Vec<Cycle<T>> {
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; graph.len()];
    for start in 0..graph.len() {
        path.push(start);
        on_path[start] = true;
        extend_cycles(graph, start, max_len, &mut path, &mut on_path, &mut cycles);
        on_path[start] = false;
        path.pop();
    }
    cycles.sort();
    cycles.into_iter().map(|c| Cycle::from_vertices(graph, c)).collect()
}

fn extend_cycles<T: Scalar>(
    graph: &WeightedDigraph<T>,
    start: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let u = *path.last().expect("nonempty path");
    for &v in graph.successors(u) {
        if v == start {
            out.push(path.clone());
        } else if v > start && !on_path[v] && path.len() < max_len {
            path.push(v);
            on_path[v] = true;
            extend_cycles(graph, start, max_len, path, on_path, out);
            on_path[v] = false;
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn three_point_graph() {
        let g = trim_and_recode(&fixtures::three_point_system(0.25)).unwrap();
        assert_eq!(g.vertices(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(g.edges(), &[(0, 1), (1, 0), (2, 1)]);
        assert_eq!(g.weights(), &[0.0, 1.0, 0.25]);
        assert!(!g.is_irreducible());
        assert_eq!(g.strongly_connected_components(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn full_two_shift_graph() {
        let g = trim_and_recode(&fixtures::full_shift(2, 0.0)).unwrap();
        assert_eq!(g.edges(), &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(g.weights(), &[0.0, 0.0]);
    }

    #[test]
    fn golden_mean_depth_two() {
        let g = trim_and_recode(&fixtures::golden_mean_depth2(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(g.vertices(), &[vec![0, 0], vec![0, 1], vec![1, 0]]);
        // brute force: 3-words of the golden mean shift are 000 001 010 100 101
        assert_eq!(g.edges(), &[(0, 0), (0, 1), (1, 2), (2, 0), (2, 1)]);
        assert_eq!(g.weights(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn trims_dead_ends_and_reports_empty() {
        // 0 -> 1 -> 2 -> (nothing), 3 <-> 3
        let sys = crate::symbolic::SubshiftSystem::new(
            vec!["0".into(), "1".into(), "2".into(), "3".into()],
            vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 1]],
            crate::symbolic::LocallyConstantPotential::constant(1, 0.0),
        )
        .unwrap();
        let g = trim_and_recode(&sys).unwrap();
        assert_eq!(g.vertices(), &[vec![3]]);
        let dead = crate::symbolic::SubshiftSystem::new(
            vec!["0".into(), "1".into()],
            vec![vec![0, 1], vec![0, 0]],
            crate::symbolic::LocallyConstantPotential::constant(1, 0.0),
        )
        .unwrap();
        assert_eq!(trim_and_recode(&dead), Err(Error::EmptySubshift));
    }

    #[test]
    fn three_point_cycles() {
        let g = trim_and_recode(&fixtures::three_point_system(0.25)).unwrap();
        let cycles = enumerate_simple_cycles(&g, 10);
        assert_eq!(cycles, vec![Cycle { vertices: vec![0, 1], mean: 0.5 }]);
    }

    #[test]
    fn complete_graph_cycles() {
        let g = trim_and_recode(&fixtures::full_shift(2, 0.0)).unwrap();
        let cycles: Vec<_> = enumerate_simple_cycles(&g, 5).into_iter().map(|c| (c.vertices, c.mean)).collect();
        assert_eq!(cycles, vec![(vec![0], 0.0), (vec![0, 1], 0.0), (vec![1], 0.0)]);
        assert_eq!(enumerate_simple_cycles(&g, 1).len(), 2);
    }

    #[test]
    fn line_graph_of_golden_mean() {
        let g = trim_and_recode(&fixtures::golden_mean([0.0, 0.0])).unwrap();
        let lg = g.line_graph(&[1.0, 2.0, 3.0]).unwrap();
        let direct = trim_and_recode(&fixtures::golden_mean_depth2(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(lg.vertices(), direct.vertices());
        assert_eq!(lg.edges(), direct.edges());
        assert_eq!(lg.weights(), direct.weights());
    }

    #[test]
    fn from_edges_requires_out_degree() {
        assert_eq!(WeightedDigraph::from_edges(vec![0.0, 1.0], &[(0, 1)]), Err(Error::DeadVertex(1)));
        let g = WeightedDigraph::from_edges(vec![2.0], &[(0, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 0)]);
    }
}
