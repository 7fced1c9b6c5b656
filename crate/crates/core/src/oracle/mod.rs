//! Dense brute-force ground truth at desk scale.
//!
//! Everything here is built by direct enumeration (relation classification
//! of every edge pair, every `K_s` copy listed explicitly) and solved with
//! general dense linear algebra, independent of the scheme tables and the
//! matrix-free operators it is used to check. The one exception is `E_i`,
//! which is assembled from the second eigenmatrix `D` so that the idempotent
//! identities themselves can be tested.

pub mod xval;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, EdgeLayout, EdgeOrdering, MultipartiteGraph, PartiteStructure, Vertex};
use crate::rational::{self, Rational};
use crate::scheme::{classify, intersection_table, EdgeVector, Eigenmatrices, Relation};

pub const DEFAULT_CAP: usize = 2000;

pub type DenseMatrix = DMatrix<f64>;

pub fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::SizeCap { size, cap })
    } else {
        Ok(())
    }
}

/// Calls `f` with the vertex list of every `K_s` of `graph`, found by
/// exhaustive search over part subsets and vertex tuples.
pub fn for_each_clique(graph: &MultipartiteGraph, s: usize, mut f: impl FnMut(&[Vertex])) {
    let st = graph.structure();
    let mut parts = Vec::with_capacity(s);
    let mut verts = Vec::with_capacity(s);
    fn subsets(r: usize, s: usize, start: usize, parts: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
        if parts.len() == s {
            out(parts);
            return;
        }
        for p in start..r {
            parts.push(p);
            subsets(r, s, p + 1, parts, out);
            parts.pop();
        }
    }
    subsets(st.r, s, 0, &mut parts, &mut |ps: &[usize]| {
        let total = st.n.pow(s as u32);
        for mut code in 0..total {
            verts.clear();
            for &p in ps {
                verts.push(Vertex::new(p, code % st.n));
                code /= st.n;
            }
            let complete = (0..s).all(|a| (a + 1..s).all(|b| graph.has_edge_between(verts[a], verts[b])));
            if complete {
                f(&verts);
            }
        }
    });
}

fn clique_edges(layout: &EdgeLayout, verts: &[Vertex]) -> Vec<usize> {
    let mut out = Vec::new();
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            out.push(layout.index_of(&EdgeKey::new(verts[a], verts[b]).expect("distinct parts")));
        }
    }
    out
}

/// Clique-pair counts `W Wᵀ` of `graph` on all of `E(Γ)`, lexicographic
/// order. Rows and columns of missing edges are zero.
fn clique_pair_counts(graph: &MultipartiteGraph, cap: usize) -> Result<DenseMatrix> {
    let st = graph.structure();
    check_cap(st.num_edges(), cap)?;
    let layout = graph.layout();
    let m = st.num_edges();
    let mut mat = DenseMatrix::zeros(m, m);
    for_each_clique(graph, st.s, |verts| {
        let edges = clique_edges(&layout, verts);
        for &a in &edges {
            for &b in &edges {
                mat[(a, b)] += 1.0;
            }
        }
    });
    Ok(mat)
}

/// `M_Γ` in lexicographic order.
pub fn brute_mgamma(r: usize, s: usize, n: usize, cap: usize) -> Result<DenseMatrix> {
    let host = MultipartiteGraph::complete(r, s, n)?;
    clique_pair_counts(&host, cap)
}

/// `M_G` as an `|E(G)| × |E(G)|` matrix in G-first order.
pub fn brute_mg(graph: &MultipartiteGraph, cap: usize) -> Result<DenseMatrix> {
    let full = clique_pair_counts(graph, cap)?;
    let ord = graph.edge_ordering();
    let g = ord.graph_edges;
    Ok(DenseMatrix::from_fn(g, g, |i, j| full[(ord.order[i], ord.order[j])]))
}

/// Re-indexes a lexicographically ordered matrix into G-first order.
pub fn permute(mat: &DenseMatrix, ord: &EdgeOrdering) -> DenseMatrix {
    let m = ord.order.len();
    DenseMatrix::from_fn(m, m, |i, j| mat[(ord.order[i], ord.order[j])])
}

pub fn to_g_first(v: &[f64], ord: &EdgeOrdering) -> DVector<f64> {
    DVector::from_iterator(v.len(), ord.order.iter().map(|&i| v[i]))
}

pub fn from_g_first(v: &DVector<f64>, ord: &EdgeOrdering) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (pos, &idx) in ord.order.iter().enumerate() {
        out[idx] = v[pos];
    }
    out
}

/// Relation class of every ordered edge pair, lexicographic order.
pub fn relation_matrix(r: usize, n: usize, cap: usize) -> Result<Vec<Vec<Relation>>> {
    let layout = EdgeLayout::new(r, n);
    check_cap(layout.num_edges(), cap)?;
    let edges: Vec<EdgeKey> = layout.edges().collect();
    Ok(edges.iter().map(|a| edges.iter().map(|b| classify(a, b)).collect()).collect())
}

/// `A_0..A_5` by classification.
pub fn dense_adjacency(r: usize, n: usize, cap: usize) -> Result<Vec<DenseMatrix>> {
    let rel = relation_matrix(r, n, cap)?;
    let m = rel.len();
    Ok(Relation::ALL
        .iter()
        .map(|&k| DenseMatrix::from_fn(m, m, |i, j| if rel[i][j] == k { 1.0 } else { 0.0 }))
        .collect())
}

pub fn combine(coeffs: &[f64; 6], mats: &[DenseMatrix]) -> DenseMatrix {
    let m = mats[0].nrows();
    let mut out = DenseMatrix::zeros(m, m);
    for (c, a) in coeffs.iter().zip(mats) {
        if *c != 0.0 {
            out += a * *c;
        }
    }
    out
}

/// `E_i = Σ_j D(i,j) A_j` as dense matrices.
pub fn dense_idempotents(r: usize, n: usize, cap: usize) -> Result<Vec<DenseMatrix>> {
    let adj = dense_adjacency(r, n, cap)?;
    let em = Eigenmatrices::new(r, n)?;
    Ok((0..6)
        .map(|i| {
            let d: [f64; 6] = std::array::from_fn(|j| rational::to_f64(&em.d[i][j]));
            combine(&d, &adj)
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusMismatch {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub r: usize,
    pub n: usize,
    pub expected: i64,
    pub found: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub r: usize,
    pub n: usize,
    /// ordered pairs per relation class
    pub class_counts: [u64; 6],
    /// `(i, j, k)` triples compared, 216 when every class is non-empty
    pub entries_checked: usize,
    pub anchor_pairs_checked: u64,
    pub mismatches: Vec<CensusMismatch>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Classifies every pair and, for every anchor pair `(x, y) ∈ R_k`, counts
/// the `z` with `(x,z) ∈ R_i`, `(z,y) ∈ R_j`, comparing against `p_ij^k`.
pub fn brute_relation_census(r: usize, n: usize, cap: usize) -> Result<CensusReport> {
    let rel = relation_matrix(r, n, cap)?;
    let m = rel.len();
    let tables: Vec<[[i64; 6]; 6]> = (0..6).map(|k| intersection_table(k, r, n)).collect::<Result<_>>()?;
    let mut class_counts = [0u64; 6];
    let mut seen = [[[false; 6]; 6]; 6];
    let mut mismatches: Vec<CensusMismatch> = Vec::new();
    let mut anchors = 0u64;
    for x in 0..m {
        for y in 0..m {
            let k = rel[x][y].index();
            class_counts[k] += 1;
            anchors += 1;
            let mut counts = [[0i64; 6]; 6];
            for z in 0..m {
                counts[rel[x][z].index()][rel[z][y].index()] += 1;
            }
            for i in 0..6 {
                for j in 0..6 {
                    let expected = tables[k][i][j];
                    if counts[i][j] != expected
                        && !mismatches.iter().any(|mm| (mm.i, mm.j, mm.k) == (i, j, k))
                    {
                        mismatches.push(CensusMismatch { i, j, k, r, n, expected, found: counts[i][j] });
                    }
                    seen[k][i][j] = true;
                }
            }
        }
    }
    let entries_checked = seen.iter().flatten().flatten().filter(|b| **b).count();
    Ok(CensusReport { r, n, class_counts, entries_checked, anchor_pairs_checked: anchors, mismatches })
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn numeric_spectrum(mat: &DenseMatrix) -> Vec<f64> {
    let eig = SymmetricEigen::new(mat.clone());
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    v
}

/// Groups sorted eigenvalues whose gaps are below `tol` into
/// `(mean, count)` clusters.
pub fn group_eigenvalues(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut groups: Vec<(f64, usize, f64)> = Vec::new();
    for &x in sorted {
        match groups.last_mut() {
            Some((sum, count, last)) if (x - *last).abs() <= tol => {
                *sum += x;
                *count += 1;
                *last = x;
            }
            _ => groups.push((x, 1, x)),
        }
    }
    groups.into_iter().map(|(sum, c, _)| (sum / c as f64, c)).collect()
}

/// Maximum absolute row sum.
pub fn dense_inf_norm(mat: &DenseMatrix) -> f64 {
    mat.row_iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn dense_inverse(mat: &DenseMatrix) -> Result<DenseMatrix> {
    mat.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular("dense matrix is numerically singular".into()))
}

/// Dense pieces of one instance, all in G-first order.
pub struct DenseSystem {
    pub ordering: EdgeOrdering,
    /// `M_Γ` or `M_Γ + ηE₂`
    pub host: DenseMatrix,
    /// `ΔM` or `ΔM^η`
    pub delta: DenseMatrix,
}

impl DenseSystem {
    /// Builds `M` and `ΔM` for `graph`; `eta` selects the shifted variant.
    pub fn build(graph: &MultipartiteGraph, eta: Option<&Rational>, cap: usize) -> Result<Self> {
        let st = graph.structure();
        check_cap(st.num_edges(), cap)?;
        let ord = graph.edge_ordering();
        let g = ord.graph_edges;
        let mgamma = permute(&brute_mgamma(st.r, st.s, st.n, cap)?, &ord);
        let mg = brute_mg(graph, cap)?;
        let mut host = mgamma.clone();
        if let Some(eta) = eta {
            let e2 = permute(&dense_idempotents(st.r, st.n, cap)?[2], &ord);
            host += e2 * rational::to_f64(eta);
        }
        let m = st.num_edges();
        // ΔM^η[G,G] = M_G − M_Γ[G,G]; ΔM^η[G,Ḡ] = −M^η[G,Ḡ]; rows of Ḡ vanish
        let delta = DenseMatrix::from_fn(m, m, |i, j| {
            if i >= g {
                0.0
            } else if j < g {
                mg[(i, j)] - mgamma[(i, j)]
            } else {
                -host[(i, j)]
            }
        });
        Ok(Self { ordering: ord, host, delta })
    }

    pub fn system(&self) -> DenseMatrix {
        &self.host + &self.delta
    }

    /// `‖M⁻¹ ΔM‖∞`.
    pub fn contraction(&self) -> Result<f64> {
        Ok(dense_inf_norm(&(dense_inverse(&self.host)? * &self.delta)))
    }

    /// Solves `(M + ΔM) z = 1` by LU with partial pivoting; result in
    /// lexicographic order.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let m = self.host.nrows();
        let z = self
            .system()
            .lu()
            .solve(&DVector::from_element(m, 1.0))
            .ok_or_else(|| Error::Singular("(M + ΔM) is numerically singular".into()))?;
        Ok(from_g_first(&z, &self.ordering))
    }
}

/// Dense `(M + ΔM) z = 1` solve, shifted by `eta` when given.
pub fn dense_solve(graph: &MultipartiteGraph, eta: Option<&Rational>, cap: usize) -> Result<EdgeVector> {
    let z = DenseSystem::build(graph, eta, cap)?.solve()?;
    Ok(EdgeVector::from_values(graph.layout(), z))
}

pub fn six_class_matrix(r: usize, n: usize, cap: usize) -> Result<DenseMatrix> {
    let adj = dense_adjacency(r, n, cap)?;
    let r2 = (r * r) as f64;
    Ok(combine(&[2.0 * r2, r2, 0.0, 1.0, 0.0, 0.0], &adj))
}

/// The six distinct eigenvalues claimed for `2r²A₀ + r²A₁ + A₃`.
pub fn six_class_eigenvalues(r: usize, n: usize) -> [f64; 6] {
    let (r, n) = (r as f64, n as f64);
    [
        2.0 * n * (r * r + r - 2.0),
        n * (2.0 * r * r + r - 4.0),
        2.0 * n * (r * r - 1.0),
        n * (r * r + r - 2.0),
        n * (r * r - 1.0),
        0.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mgamma_entries() {
        let m = brute_mgamma(4, 3, 2, DEFAULT_CAP).unwrap();
        let layout = EdgeLayout::new(4, 2);
        for i in 0..24 {
            assert_eq!(m[(i, i)], 4.0);
        }
        let a = layout.index_of(&EdgeKey::new(Vertex::new(0, 0), Vertex::new(1, 0)).unwrap());
        let b = layout.index_of(&EdgeKey::new(Vertex::new(2, 0), Vertex::new(3, 0)).unwrap());
        assert_eq!(m[(a, b)], 0.0);
        let m6 = brute_mgamma(6, 4, 2, DEFAULT_CAP).unwrap();
        let l6 = EdgeLayout::new(6, 2);
        let a = l6.index_of(&EdgeKey::new(Vertex::new(0, 0), Vertex::new(1, 0)).unwrap());
        let b = l6.index_of(&EdgeKey::new(Vertex::new(2, 0), Vertex::new(3, 0)).unwrap());
        assert_eq!(m6[(a, b)], 1.0);
    }

    #[test]
    fn census_small() {
        let rep = brute_relation_census(4, 1, DEFAULT_CAP).unwrap();
        assert!(rep.passed(), "{:?}", rep.mismatches);
        assert_eq!(rep.class_counts[1], 0);
        assert_eq!(rep.class_counts[2], 0);
        assert_eq!(rep.class_counts[4], 0);
        let rep = brute_relation_census(5, 2, DEFAULT_CAP).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.class_counts[5], 480);
    }

    #[test]
    fn size_cap_is_enforced() {
        assert!(matches!(brute_mgamma(5, 3, 8, 100), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn dense_solve_complete_eta() {
        let g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        let eta = crate::spectral::eta_star(3, 2);
        let z = dense_solve(&g, Some(&eta), DEFAULT_CAP).unwrap();
        assert!(z.values().iter().all(|x| (x - 1.0 / 12.0).abs() < 1e-12));
    }

    #[test]
    fn grouping() {
        let g = group_eigenvalues(&[1.0, 1.0 + 1e-9, 2.0, 5.0, 5.0], 1e-6);
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].1, 2);
        assert_eq!(g[2].1, 2);
    }
}
