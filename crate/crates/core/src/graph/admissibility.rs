//! Necessary conditions for a fractional `K_s`-decomposition.
//!
//! The degree condition `(s−1)·d(v,V_k) ≤ d(v)` applies for every `r`. When
//! `r = s+1` every part pair must also satisfy
//! `|E(V_i,V_j)| = (d_i + d_j)/(s−1) − |E(G)|/C(s,2)`, which is checked after
//! scaling by `(s−1)·C(s,2)` so that it is an integer identity.

use serde::Serialize;

use super::{MultipartiteGraph, Vertex};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct PairViolation {
    pub i: usize,
    pub j: usize,
    pub pair_count: u64,
    /// `(d_i + d_j)/(s−1) − |E(G)|/C(s,2)`
    #[serde(serialize_with = "rational::ser::one")]
    pub predicted: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub nec1_ok: bool,
    /// `(vertex, part)` pairs violating the degree condition.
    pub nec1_violations: Vec<(Vertex, usize)>,
    /// Always `true` when `r ≠ s+1`.
    pub nec2_ok: bool,
    pub nec2_violations: Vec<PairViolation>,
    /// `x_ℓ = |E(G)|/C(s,2) − d_ℓ/(s−1)` for `r = s+1`.
    #[serde(serialize_with = "rational::ser::many")]
    pub x_values: Vec<Rational>,
    /// `N x = b` holds exactly for the `x_values` above.
    pub system_satisfied: bool,
    pub d_values: Vec<u64>,
    /// `|E(V_i,V_j)|` for all `i < j`.
    pub pair_counts: Vec<((usize, usize), u64)>,
    pub edge_count: u64,
    pub partite_min_degree: usize,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.nec1_ok && self.nec2_ok
    }

    /// Human-readable summary of the first violations.
    pub fn describe_failure(&self) -> Option<String> {
        if let Some((v, k)) = self.nec1_violations.first() {
            return Some(format!(
                "degree condition fails at vertex {v} towards part {k} ({} violation(s))",
                self.nec1_violations.len()
            ));
        }
        self.nec2_violations.first().map(|p| {
            format!(
                "pair-count identity fails for parts ({}, {}): |E(V_i,V_j)| = {} but (d_i+d_j)/(s-1) - |E|/C(s,2) = {} ({} violation(s))",
                p.i,
                p.j,
                p.pair_count,
                p.predicted,
                self.nec2_violations.len()
            )
        })
    }
}

pub fn check_admissible(graph: &MultipartiteGraph) -> AdmissibilityReport {
    let st = graph.structure();
    let (r, s) = (st.r, st.s);
    let layout = graph.layout();

    let mut nec1_violations = Vec::new();
    for v in st.vertices() {
        let dv = graph.degree(v) as u64;
        for k in (0..r).filter(|&k| k != v.part) {
            if (s as u64 - 1) * graph.degree_to_part(v, k) as u64 > dv {
                nec1_violations.push((v, k));
            }
        }
    }

    let pair_counts: Vec<((usize, usize), u64)> = layout
        .part_pairs()
        .map(|(i, j)| ((i, j), graph.pair_count(i, j) as u64))
        .collect();
    let d_values: Vec<u64> = (0..r)
        .map(|l| (0..r).filter(|&k| k != l).map(|k| graph.pair_count(l, k) as u64).sum())
        .collect();
    let edge_count = graph.edge_count() as u64;

    let mut nec2_violations = Vec::new();
    let mut x_values = Vec::new();
    let mut system_satisfied = false;
    if r == s + 1 {
        let s_i = s as i128;
        let c2 = s_i * (s_i - 1) / 2;
        let e_total = edge_count as i128;
        for &((i, j), count) in &pair_counts {
            // (s−1)·C(s,2)·|E(V_i,V_j)| = C(s,2)·(d_i + d_j) − (s−1)·|E|
            let lhs = (s_i - 1) * c2 * count as i128;
            let rhs = c2 * (d_values[i] + d_values[j]) as i128 - (s_i - 1) * e_total;
            if lhs != rhs {
                nec2_violations.push(PairViolation {
                    i,
                    j,
                    pair_count: count,
                    predicted: rational::frac(rhs as i64, ((s_i - 1) * c2) as i64),
                });
            }
        }
        let denom = s_i * (s_i - 1);
        x_values = d_values
            .iter()
            .map(|&d| rational::frac((2 * e_total - s_i * d as i128) as i64, denom as i64))
            .collect();
        // row {V_i, V_j} of N sums x_ℓ over ℓ ∉ {i, j}
        let total: Rational = x_values.iter().cloned().sum();
        system_satisfied = pair_counts.iter().all(|&((i, j), count)| {
            total.clone() - &x_values[i] - &x_values[j] == rational::int(count as i64)
        });
    }

    AdmissibilityReport {
        r,
        s,
        n: st.n,
        nec1_ok: nec1_violations.is_empty(),
        nec1_violations,
        nec2_ok: nec2_violations.is_empty(),
        nec2_violations,
        x_values,
        system_satisfied,
        d_values,
        pair_counts,
        edge_count,
        partite_min_degree: graph.partite_min_degree(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeKey;
    use num_traits::Signed;

    #[test]
    fn complete_is_admissible_with_uniform_x() {
        let g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        let rep = check_admissible(&g);
        assert!(rep.nec1_ok && rep.nec2_ok && rep.system_satisfied);
        // x_ℓ = n²/(s−1) = 2
        assert!(rep.x_values.iter().all(|x| *x == rational::int(2)));
        assert_eq!(rep.d_values, vec![12; 4]);
    }

    #[test]
    fn transversal_deletion_keeps_pair_identity() {
        let mut g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        g.delete_transversal_clique(&(0..4).map(|p| Vertex::new(p, 0)).collect::<Vec<_>>())
            .unwrap();
        let rep = check_admissible(&g);
        assert!(rep.is_admissible(), "{:?}", rep.describe_failure());
        assert!(rep.system_satisfied);
        assert!(rep.x_values.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn single_edge_breaks_pair_identity() {
        let mut g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        g.delete_edges(&[EdgeKey::new(Vertex::new(0, 0), Vertex::new(1, 0)).unwrap()])
            .unwrap();
        let rep = check_admissible(&g);
        assert!(rep.nec1_ok);
        assert!(!rep.nec2_ok);
        assert!(!rep.system_satisfied);
        // deleted pair: left side 3, right side 22/2 − 23/3 = 10/3
        let v = rep.nec2_violations.iter().find(|p| (p.i, p.j) == (0, 1)).unwrap();
        assert_eq!(v.pair_count, 3);
        assert_eq!(v.predicted, rational::frac(10, 3));
        assert!(rep.describe_failure().unwrap().contains("(0, 1)"));
    }

    #[test]
    fn degree_condition_violation_is_reported() {
        // s = 4, r = 5, n = 2: strip vertex (0,0) of all but part 1 edges.
        let mut g = MultipartiteGraph::complete(5, 4, 2).unwrap();
        let v = Vertex::new(0, 0);
        let edges: Vec<EdgeKey> = (2..5)
            .flat_map(|p| (0..2).map(move |i| EdgeKey::new(v, Vertex::new(p, i)).unwrap()))
            .collect();
        g.delete_edges(&edges).unwrap();
        let rep = check_admissible(&g);
        assert!(!rep.nec1_ok);
        assert_eq!(rep.nec1_violations, vec![(v, 1)]);
    }

    #[test]
    fn larger_r_skips_pair_identity() {
        let mut g = MultipartiteGraph::complete(5, 3, 2).unwrap();
        g.delete_edges(&[EdgeKey::new(Vertex::new(0, 0), Vertex::new(1, 0)).unwrap()])
            .unwrap();
        let rep = check_admissible(&g);
        assert!(rep.is_admissible());
        assert!(rep.x_values.is_empty());
    }
}
