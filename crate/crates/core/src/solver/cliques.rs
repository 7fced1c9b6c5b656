//! Enumeration of the `K_s` copies of a multipartite graph.

use rayon::prelude::*;

use crate::graph::{EdgeKey, EdgeLayout, MultipartiteGraph, Vertex};

/// Every `K_s` of a graph, with a per-edge incidence index.
///
/// Cliques are stored flat: `s` vertex ids and `C(s,2)` lexicographic edge
/// indices per clique. Vertices within a clique are sorted by part.
#[derive(Clone, Debug)]
pub struct CliqueList {
    s: usize,
    layout: EdgeLayout,
    vertices: Vec<u32>,
    edges: Vec<u32>,
    offsets: Vec<usize>,
    incidence: Vec<u32>,
}

fn part_subsets(r: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn rec(r: usize, s: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for p in start..=r - (s - cur.len()) {
            cur.push(p);
            rec(r, s, p + 1, cur, out);
            cur.pop();
        }
    }
    rec(r, s, 0, &mut cur, &mut out);
    out
}

fn extend(graph: &MultipartiteGraph, parts: &[usize], chosen: &mut Vec<Vertex>, out: &mut Vec<u32>) {
    let depth = chosen.len();
    if depth == parts.len() {
        let layout = graph.layout();
        out.extend(chosen.iter().map(|v| layout.vertex_id(*v) as u32));
        return;
    }
    for i in 0..graph.structure().n {
        let v = Vertex::new(parts[depth], i);
        if chosen.iter().all(|u| graph.has_edge_between(*u, v)) {
            chosen.push(v);
            extend(graph, parts, chosen, out);
            chosen.pop();
        }
    }
}

impl CliqueList {
    /// Backtracking over increasing part subsets, one vertex per part,
    /// pruning as soon as an edge is missing.
    pub fn enumerate(graph: &MultipartiteGraph) -> Self {
        let st = graph.structure();
        let s = st.s;
        let layout = graph.layout();
        let per_subset: Vec<Vec<u32>> = part_subsets(st.r, s)
            .par_iter()
            .map(|parts| {
                let mut out = Vec::new();
                extend(graph, parts, &mut Vec::with_capacity(s), &mut out);
                out
            })
            .collect();
        let vertices: Vec<u32> = per_subset.concat();
        let m = s * (s - 1) / 2;
        let edges: Vec<u32> = vertices
            .par_chunks(s)
            .flat_map_iter(|k| {
                let vs: Vec<Vertex> = k.iter().map(|&id| layout.vertex_at(id as usize)).collect();
                let mut es = Vec::with_capacity(m);
                for a in 0..s {
                    for b in a + 1..s {
                        let e = EdgeKey::new(vs[a], vs[b]).expect("clique vertices lie in distinct parts");
                        es.push(layout.index_of(&e) as u32);
                    }
                }
                es
            })
            .collect();

        let mut offsets = vec![0usize; layout.num_edges() + 1];
        for &e in &edges {
            offsets[e as usize + 1] += 1;
        }
        for i in 0..layout.num_edges() {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![0u32; edges.len()];
        for (k, chunk) in edges.chunks(m).enumerate() {
            for &e in chunk {
                incidence[fill[e as usize]] = k as u32;
                fill[e as usize] += 1;
            }
        }
        Self { s, layout, vertices, edges, offsets, incidence }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn layout(&self) -> EdgeLayout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.vertices.len() / self.s
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges_per_clique(&self) -> usize {
        self.s * (self.s - 1) / 2
    }

    pub fn clique_vertices(&self, k: usize) -> Vec<Vertex> {
        self.vertices[k * self.s..(k + 1) * self.s]
            .iter()
            .map(|&id| self.layout.vertex_at(id as usize))
            .collect()
    }

    /// Lexicographic edge indices of clique `k`.
    pub fn clique_edges(&self, k: usize) -> &[u32] {
        let m = self.edges_per_clique();
        &self.edges[k * m..(k + 1) * m]
    }

    pub(crate) fn flat_edges(&self) -> &[u32] {
        &self.edges
    }

    /// Cliques containing the edge with lexicographic index `e`.
    pub fn cliques_through(&self, e: usize) -> &[u32] {
        &self.incidence[self.offsets[e]..self.offsets[e + 1]]
    }
}
