//! Balanced `r`-partite graphs stored as the complete host minus missing edges.

mod admissibility;
mod generate;
mod io;
mod threshold;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use admissibility::{check_admissible, AdmissibilityReport, PairViolation};
pub use generate::{generate_admissible_instance, DefectPlan};
pub use io::GraphFile;
pub use threshold::{partite_defect, threshold_c, ThresholdConstants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub part: usize,
    pub index: usize,
}

impl Vertex {
    pub const fn new(part: usize, index: usize) -> Self {
        Self { part, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.part, self.index)
    }
}

/// An edge of the host graph, normalised so that `lo.part < hi.part`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    lo: Vertex,
    hi: Vertex,
}

impl EdgeKey {
    /// Builds the edge between `a` and `b` in either order. Same-part pairs
    /// are rejected.
    pub fn new(a: Vertex, b: Vertex) -> Result<Self> {
        match a.part.cmp(&b.part) {
            std::cmp::Ordering::Less => Ok(Self { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Self { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(Error::InvalidParameters(format!(
                "{a} and {b} lie in the same part"
            ))),
        }
    }

    pub fn lo(&self) -> Vertex {
        self.lo
    }

    pub fn hi(&self) -> Vertex {
        self.hi
    }

    pub fn parts(&self) -> (usize, usize) {
        (self.lo.part, self.hi.part)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// Shape of the host graph `Γ` together with the clique order `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartiteStructure {
    pub r: usize,
    pub s: usize,
    pub n: usize,
}

impl PartiteStructure {
    pub fn new(r: usize, s: usize, n: usize) -> Result<Self> {
        if s < 3 {
            return Err(Error::InvalidParameters(format!("clique order s = {s} must be at least 3")));
        }
        if r < s {
            return Err(Error::InvalidParameters(format!("part count r = {r} is smaller than s = {s}")));
        }
        if n == 0 {
            return Err(Error::InvalidParameters("part size n must be at least 1".into()));
        }
        Ok(Self { r, s, n })
    }

    pub fn num_vertices(&self) -> usize {
        self.r * self.n
    }

    pub fn num_part_pairs(&self) -> usize {
        self.r * (self.r - 1) / 2
    }

    /// `|E(Γ)| = C(r,2)·n²`.
    pub fn num_edges(&self) -> usize {
        self.num_part_pairs() * self.n * self.n
    }

    pub fn layout(&self) -> EdgeLayout {
        EdgeLayout::new(self.r, self.n)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.r).flat_map(move |p| (0..self.n).map(move |i| Vertex::new(p, i)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.part < self.r && v.index < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }
}

/// Lexicographic indexing of `E(Γ)`: by part pair `(p₁, p₂)`, then by
/// `(i₁, i₂)`. Depends only on `r` and `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeLayout {
    pub r: usize,
    pub n: usize,
}

impl EdgeLayout {
    pub fn new(r: usize, n: usize) -> Self {
        Self { r, n }
    }

    pub fn num_edges(&self) -> usize {
        self.r * (self.r - 1) / 2 * self.n * self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.r * self.n
    }

    pub fn pair_index(&self, p1: usize, p2: usize) -> usize {
        debug_assert!(p1 < p2 && p2 < self.r);
        p1 * (2 * self.r - p1 - 1) / 2 + (p2 - p1 - 1)
    }

    pub fn vertex_id(&self, v: Vertex) -> usize {
        v.part * self.n + v.index
    }

    pub fn vertex_at(&self, id: usize) -> Vertex {
        Vertex::new(id / self.n, id % self.n)
    }

    pub fn index_of(&self, e: &EdgeKey) -> usize {
        let nn = self.n * self.n;
        self.pair_index(e.lo.part, e.hi.part) * nn + e.lo.index * self.n + e.hi.index
    }

    pub fn edge_at(&self, idx: usize) -> EdgeKey {
        let nn = self.n * self.n;
        let (pair, within) = (idx / nn, idx % nn);
        let (p1, p2) = self.pair_at(pair);
        EdgeKey {
            lo: Vertex::new(p1, within / self.n),
            hi: Vertex::new(p2, within % self.n),
        }
    }

    pub fn pair_at(&self, mut pair: usize) -> (usize, usize) {
        for p1 in 0..self.r {
            let row = self.r - p1 - 1;
            if pair < row {
                return (p1, p1 + 1 + pair);
            }
            pair -= row;
        }
        panic!("part-pair index out of range");
    }

    /// All part pairs `(p₁, p₂)`, `p₁ < p₂`, in index order.
    pub fn part_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.r).flat_map(move |p1| (p1 + 1..self.r).map(move |p2| (p1, p2)))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        (0..self.num_edges()).map(move |i| self.edge_at(i))
    }
}

/// Permutation of the lexicographic edge indices that lists every edge of
/// `G` before every missing edge, each block in lexicographic order.
#[derive(Clone, Debug)]
pub struct EdgeOrdering {
    /// position → lexicographic index
    pub order: Vec<usize>,
    /// lexicographic index → position
    pub position: Vec<usize>,
    pub graph_edges: usize,
}

#[derive(Clone, Debug)]
pub struct MultipartiteGraph {
    structure: PartiteStructure,
    layout: EdgeLayout,
    missing: BTreeSet<EdgeKey>,
    present: Vec<bool>,
    /// `degree[vertex_id * r + k] = d(v, V_k)`; zero on the vertex's own part.
    degree: Vec<usize>,
    pair_missing: Vec<usize>,
}

impl MultipartiteGraph {
    pub fn complete(r: usize, s: usize, n: usize) -> Result<Self> {
        Ok(Self::complete_from(PartiteStructure::new(r, s, n)?))
    }

    pub fn complete_from(structure: PartiteStructure) -> Self {
        let layout = structure.layout();
        let r = structure.r;
        let mut degree = vec![structure.n; structure.num_vertices() * r];
        for v in structure.vertices() {
            degree[layout.vertex_id(v) * r + v.part] = 0;
        }
        Self {
            structure,
            layout,
            missing: BTreeSet::new(),
            present: vec![true; structure.num_edges()],
            degree,
            pair_missing: vec![0; structure.num_part_pairs()],
        }
    }

    pub fn structure(&self) -> PartiteStructure {
        self.structure
    }

    pub fn layout(&self) -> EdgeLayout {
        self.layout
    }

    pub fn missing(&self) -> &BTreeSet<EdgeKey> {
        &self.missing
    }

    /// Lexicographically indexed presence mask of `E(G)` inside `E(Γ)`.
    pub fn present_mask(&self) -> &[bool] {
        &self.present
    }

    pub fn is_complete(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn has_edge(&self, e: &EdgeKey) -> bool {
        self.present[self.layout.index_of(e)]
    }

    pub fn has_edge_between(&self, a: Vertex, b: Vertex) -> bool {
        a.part != b.part && self.has_edge(&EdgeKey::new(a, b).expect("distinct parts"))
    }

    pub fn edge_count(&self) -> usize {
        self.structure.num_edges() - self.missing.len()
    }

    /// `d(v, V_k)`.
    pub fn degree_to_part(&self, v: Vertex, k: usize) -> usize {
        self.degree[self.layout.vertex_id(v) * self.structure.r + k]
    }

    /// `d(v)`.
    pub fn degree(&self, v: Vertex) -> usize {
        let r = self.structure.r;
        let base = self.layout.vertex_id(v) * r;
        self.degree[base..base + r].iter().sum()
    }

    /// Partite minimum degree `δ̂(G) = min d(v, V_k)` over `k ≠ part(v)`.
    pub fn partite_min_degree(&self) -> usize {
        self.structure
            .vertices()
            .flat_map(|v| {
                (0..self.structure.r)
                    .filter(move |&k| k != v.part)
                    .map(move |k| self.degree_to_part(v, k))
            })
            .min()
            .unwrap_or(self.structure.n)
    }

    /// `|E(V_i, V_j)|`.
    pub fn pair_count(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let nn = self.structure.n * self.structure.n;
        nn - self.pair_missing[self.layout.pair_index(a, b)]
    }

    fn validate_edge(&self, e: &EdgeKey) -> Result<()> {
        self.structure.check_vertex(e.lo)?;
        self.structure.check_vertex(e.hi)?;
        Ok(())
    }

    /// Removes every listed edge. The call is atomic: nothing changes if any
    /// edge is invalid, already missing or listed twice.
    pub fn delete_edges(&mut self, edges: &[EdgeKey]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for e in edges {
            self.validate_edge(e).map_err(|_| Error::InvalidEdge(*e))?;
            if !self.has_edge(e) {
                return Err(Error::AlreadyMissing(*e));
            }
            if !seen.insert(*e) {
                return Err(Error::DuplicateEdge(*e));
            }
        }
        for e in edges {
            self.remove_unchecked(*e);
        }
        Ok(())
    }

    /// Removes the `C(r,2)` edges of the transversal clique spanned by one
    /// vertex from each part.
    pub fn delete_transversal_clique(&mut self, vertices: &[Vertex]) -> Result<()> {
        let r = self.structure.r;
        if vertices.len() != r {
            return Err(Error::TransversalLength { expected: r, got: vertices.len() });
        }
        let mut by_part = vec![None; r];
        for &v in vertices {
            self.structure.check_vertex(v)?;
            if by_part[v.part].replace(v).is_some() {
                return Err(Error::InvalidParameters(format!(
                    "transversal picks two vertices from part {}",
                    v.part
                )));
            }
        }
        let chosen: Vec<Vertex> = by_part.into_iter().map(|v| v.expect("all parts covered")).collect();
        let mut edges = Vec::with_capacity(r * (r - 1) / 2);
        for a in 0..r {
            for b in a + 1..r {
                edges.push(EdgeKey::new(chosen[a], chosen[b])?);
            }
        }
        self.delete_edges(&edges)
    }

    fn remove_unchecked(&mut self, e: EdgeKey) {
        let r = self.structure.r;
        let idx = self.layout.index_of(&e);
        self.present[idx] = false;
        self.missing.insert(e);
        self.degree[self.layout.vertex_id(e.lo) * r + e.hi.part] -= 1;
        self.degree[self.layout.vertex_id(e.hi) * r + e.lo.part] -= 1;
        self.pair_missing[self.layout.pair_index(e.lo.part, e.hi.part)] += 1;
    }

    /// Degree table rebuilt from the missing set alone.
    pub fn recomputed_degree_table(&self) -> Vec<usize> {
        let r = self.structure.r;
        let mut table = vec![0; self.structure.num_vertices() * r];
        for v in self.structure.vertices() {
            for k in (0..r).filter(|&k| k != v.part) {
                let lost = self
                    .missing
                    .iter()
                    .filter(|e| e.contains(v) && (e.lo.part == k || e.hi.part == k))
                    .count();
                table[self.layout.vertex_id(v) * r + k] = self.structure.n - lost;
            }
        }
        table
    }

    pub fn degree_table(&self) -> &[usize] {
        &self.degree
    }

    /// G-first permutation of `E(Γ)`.
    pub fn edge_ordering(&self) -> EdgeOrdering {
        let m = self.structure.num_edges();
        let mut order: Vec<usize> = (0..m).filter(|&i| self.present[i]).collect();
        let graph_edges = order.len();
        order.extend((0..m).filter(|&i| !self.present[i]));
        let mut position = vec![0; m];
        for (pos, &idx) in order.iter().enumerate() {
            position[idx] = pos;
        }
        EdgeOrdering { order, position, graph_edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p1: usize, i1: usize, p2: usize, i2: usize) -> EdgeKey {
        EdgeKey::new(Vertex::new(p1, i1), Vertex::new(p2, i2)).unwrap()
    }

    #[test]
    fn complete_graph_sizes() {
        let g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        assert_eq!(g.edge_count(), 24);
        assert_eq!(g.partite_min_degree(), 2);
        assert_eq!(MultipartiteGraph::complete(5, 3, 2).unwrap().edge_count(), 40);
        let k4 = MultipartiteGraph::complete(4, 3, 1).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.partite_min_degree(), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MultipartiteGraph::complete(3, 4, 2).is_err());
        assert!(MultipartiteGraph::complete(4, 2, 2).is_err());
        assert!(MultipartiteGraph::complete(4, 3, 0).is_err());
    }

    #[test]
    fn single_deletion_lowers_endpoints() {
        let mut g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        g.delete_edges(&[e(0, 0, 1, 0)]).unwrap();
        assert_eq!(g.partite_min_degree(), 1);
        assert_eq!(g.degree_to_part(Vertex::new(0, 0), 1), 1);
        assert_eq!(g.degree_to_part(Vertex::new(1, 0), 0), 1);
        assert_eq!(g.degree_to_part(Vertex::new(0, 1), 1), 2);
        assert!(matches!(g.delete_edges(&[e(0, 0, 1, 0)]), Err(Error::AlreadyMissing(_))));
    }

    #[test]
    fn duplicate_in_batch_is_atomic() {
        let mut g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        let err = g.delete_edges(&[e(0, 0, 1, 1), e(0, 0, 1, 1)]);
        assert!(matches!(err, Err(Error::DuplicateEdge(_))));
        assert!(g.is_complete());
    }

    #[test]
    fn transversal_deletion_drops_each_pair_by_one() {
        let mut g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        let t: Vec<Vertex> = (0..4).map(|p| Vertex::new(p, p % 2)).collect();
        g.delete_transversal_clique(&t).unwrap();
        for (i, j) in g.layout().part_pairs().collect::<Vec<_>>() {
            assert_eq!(g.pair_count(i, j), 3);
        }
        assert!(matches!(
            g.delete_transversal_clique(&t[..3]),
            Err(Error::TransversalLength { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn two_disjoint_transversals() {
        let mut g = MultipartiteGraph::complete(4, 3, 4).unwrap();
        g.delete_transversal_clique(&(0..4).map(|p| Vertex::new(p, 0)).collect::<Vec<_>>())
            .unwrap();
        g.delete_transversal_clique(&(0..4).map(|p| Vertex::new(p, 1)).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(g.partite_min_degree(), 3);
        assert_eq!(g.degree_table(), g.recomputed_degree_table().as_slice());
    }

    #[test]
    fn layout_is_a_bijection() {
        for (r, n) in [(4, 1), (4, 3), (5, 2), (7, 3)] {
            let layout = EdgeLayout::new(r, n);
            for idx in 0..layout.num_edges() {
                assert_eq!(layout.index_of(&layout.edge_at(idx)), idx);
            }
            let mut prev = None;
            for idx in 0..layout.num_edges() {
                let e = layout.edge_at(idx);
                let key = (e.lo.part, e.hi.part, e.lo.index, e.hi.index);
                if let Some(p) = prev {
                    assert!(key > p);
                }
                prev = Some(key);
            }
        }
    }

    #[test]
    fn g_first_ordering() {
        let mut g = MultipartiteGraph::complete(5, 3, 2).unwrap();
        g.delete_edges(&[e(0, 0, 1, 0), e(2, 1, 4, 0), e(3, 0, 4, 1)]).unwrap();
        let ord = g.edge_ordering();
        assert_eq!(ord.graph_edges, 37);
        for (pos, &idx) in ord.order.iter().enumerate() {
            assert_eq!(ord.position[idx], pos);
            assert_eq!(g.present_mask()[idx], pos < ord.graph_edges);
        }
    }
}
